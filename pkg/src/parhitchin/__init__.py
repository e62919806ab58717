"""Exact arithmetic for local and global invariants of parabolic Hitchin systems."""
__version__ = "0.1.0"

from .combinatorics import (LeviType, LevelFunction, Partition, compositions, conjugate,  # noqa: E402
                            flag_dimension, level_function, min_pair_sum, partitions,
                            sort_to_partition, weyl_coset_count)
from .field import GF, FieldSpec  # noqa: E402
from .series import SeriesPolynomial, TruncatedSeries  # noqa: E402

__all__ = [
    "__version__", "LeviType", "LevelFunction", "Partition", "compositions", "conjugate",
    "flag_dimension", "level_function", "min_pair_sum", "partitions", "sort_to_partition",
    "weyl_coset_count", "GF", "FieldSpec", "SeriesPolynomial", "TruncatedSeries",
]
