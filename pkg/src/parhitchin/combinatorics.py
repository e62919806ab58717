"""Partitions, Levi types and level functions.

A Levi type is the ordered list of jump dimensions of a flag at a marked
point.  Sorting it gives a partition ``n``; the conjugate partition ``mu``
and the level function ``gamma`` are read off the Young diagram of ``n``
filled column by column.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from math import factorial
from typing import Iterator, Sequence

from .errors import CountOverflow


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("a partition needs at least one part")
        if any(x < 1 for x in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be nonincreasing: {parts}")

    @property
    def rank(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]


@dataclass(frozen=True)
class LeviType:
    """Ordered flag multiplicities ``(m^1, ..., m^sigma)``; not sorted."""

    multiplicities: tuple[int, ...]

    def __post_init__(self):
        ms = tuple(int(x) for x in self.multiplicities)
        object.__setattr__(self, "multiplicities", ms)
        if not ms:
            raise ValueError("a Levi type needs at least one block")
        if any(x < 1 for x in ms):
            raise ValueError(f"multiplicities must be positive: {ms}")

    @property
    def rank(self) -> int:
        return sum(self.multiplicities)

    @property
    def length(self) -> int:
        return len(self.multiplicities)

    def offsets(self) -> tuple[int, ...]:
        """Start index of each graded block in the adapted basis."""
        return (0,) + tuple(accumulate(self.multiplicities))[:-1]

    def __iter__(self):
        return iter(self.multiplicities)


@dataclass(frozen=True)
class LevelFunction:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(x) for x in self.values)
        object.__setattr__(self, "values", vals)
        if not vals or vals[0] != 1:
            raise ValueError("a level function starts at 1")
        for j, (a, b) in enumerate(zip(vals, vals[1:])):
            if b < a or b > a + 1:
                raise ValueError(f"level function must climb by 0 or 1: {vals}")
        if any(v > j + 1 for j, v in enumerate(vals)):
            raise ValueError(f"gamma_j <= j violated: {vals}")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


def _as_partition(p) -> Partition:
    return p if isinstance(p, Partition) else Partition(tuple(p))


def _as_levi(lt) -> LeviType:
    return lt if isinstance(lt, LeviType) else LeviType(tuple(lt))


def conjugate(p: Partition | Sequence[int]) -> Partition:
    """Column lengths of the Young diagram: ``mu_j = #{l : n_l >= j}``."""
    p = _as_partition(p)
    return Partition(tuple(sum(1 for n in p.parts if n >= j)
                           for j in range(1, p.parts[0] + 1)))


def level_function(p: Partition | Sequence[int]) -> LevelFunction:
    """Column index of box ``j`` when the diagram is numbered column-wise."""
    mu = conjugate(p)
    return LevelFunction(tuple(col for col, length in enumerate(mu.parts, 1)
                               for _ in range(length)))


def sort_to_partition(lt: LeviType | Sequence[int]) -> Partition:
    lt = _as_levi(lt)
    return Partition(tuple(sorted(lt.multiplicities, reverse=True)))


def flag_dimension(lt: LeviType | Sequence[int]) -> int:
    """``dim G/P = (r^2 - sum m_j^2) / 2`` for the parabolic of type ``lt``."""
    lt = _as_levi(lt)
    r = lt.rank
    return (r * r - sum(m * m for m in lt.multiplicities)) // 2


def weyl_coset_count(lt: LeviType | Sequence[int], limit: int | None = None) -> int:
    """Number of cosets ``W / W_P``, i.e. the multinomial ``r! / prod m_j!``.

    Exact for any rank.  When ``limit`` is given, a larger count raises
    :class:`CountOverflow` instead of being returned.
    """
    lt = _as_levi(lt)
    count = factorial(lt.rank)
    for m in lt.multiplicities:
        count //= factorial(m)
    if limit is not None and count > limit:
        raise CountOverflow(f"coset count {count} exceeds limit {limit}")
    return count


def min_pair_sum(mu: Partition | Sequence[int]) -> int:
    mu = _as_partition(mu)
    ps = mu.parts
    return sum(min(ps[i], ps[j]) for i in range(len(ps)) for j in range(i + 1, len(ps)))


def partitions(r: int) -> Iterator[Partition]:
    """All partitions of ``r`` in reverse lexicographic order."""
    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest
    for parts in rec(r, r):
        yield Partition(parts)


def compositions(r: int) -> Iterator[LeviType]:
    """All ordered Levi types of rank ``r`` (``2^(r-1)`` of them)."""
    def rec(remaining):
        if remaining == 0:
            yield ()
            return
        for first in range(1, remaining + 1):
            for rest in rec(remaining - first):
                yield (first,) + rest
    for ms in rec(r):
        yield LeviType(ms)


def branch_steps(lt: LeviType | Sequence[int]) -> list[list[int]]:
    """Exponent table ``c[i][j]`` of the unique flag on a sum of DVR branches.

    Branch ``i`` (sorted by degree ``mu_i`` descending) contributes
    ``lambda^c A_i`` to the ``j``-th flag step, with
    ``c[i][j] = #{j' <= j : m_j' > i}``.  Step ``j`` drops exactly ``m_j``
    dimensions and the last step equals ``t`` times the lattice.
    """
    lt = _as_levi(lt)
    n1 = max(lt.multiplicities)
    table = []
    for i in range(n1):
        row = [0]
        for m in lt.multiplicities:
            row.append(row[-1] + (1 if m > i else 0))
        table.append(row)
    return table
