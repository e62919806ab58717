"""Configured campaigns: run registered experiments and report the results.

A config is JSON with a ``schema_version`` field; unknown keys are
rejected.  Trial ``i`` of an experiment with base seed ``s`` uses the seed
``mix_seed(s, i)`` (a SplitMix64 step), so any trial can be replayed on its
own and the report does not depend on how trials are scheduled.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import jsonschema

from . import __version__
from .census import CENSUS_FIELDS, MarkedPoint, ParabolicData, census
from .combinatorics import LeviType
from .errors import ConfigError
from .experiments import FAIL, NOT_APPLICABLE, PASS, REGISTRY, TrialContext
from .field import GF, FieldSpec
from .spectral import DEFAULT_EXTENSION_CAP

SCHEMA_VERSION = 1
_MASK = (1 << 64) - 1

_WEIGHT = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "campaign config",
    "description": ("Per-trial seed: mix_seed(base, i) = splitmix64(base + (i + 1) * 0x9E3779B97F4A7C15), "
                    "all arithmetic mod 2^64."),
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "field", "parabolic"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "field": {
            "type": "object", "additionalProperties": False, "required": ["p"],
            "properties": {"p": {"type": "integer", "minimum": 2},
                           "m": {"type": "integer", "minimum": 1}},
        },
        "precision": {"type": "integer", "minimum": 1},
        "extension_cap": {"type": "integer", "minimum": 1},
        "parabolic": {
            "type": "object", "additionalProperties": False, "required": ["genus", "rank"],
            "properties": {
                "genus": {"type": "integer"},
                "rank": {"type": "integer"},
                "degree": {"type": "integer"},
                "points": {"type": "array", "items": {
                    "type": "object", "additionalProperties": False, "required": ["levi"],
                    "properties": {
                        "levi": {"type": "array", "minItems": 1,
                                 "items": {"type": "integer", "minimum": 1}},
                        "weights": {"type": "array", "items": _WEIGHT},
                    },
                }},
            },
        },
        "experiments": {"type": "array", "items": {
            "type": "object", "additionalProperties": False, "required": ["name", "trials"],
            "properties": {
                "name": {"enum": sorted(REGISTRY)},
                "trials": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
        }},
        "output": {"type": "string"},
    },
}

_FRACTION = {"type": "object", "additionalProperties": False, "required": ["num", "den"],
             "properties": {"num": {"type": "integer"}, "den": {"type": "integer", "minimum": 1}}}

_TRIAL_RECORD = {
    "type": "object",
    "required": ["trial", "seed", "levi", "status", "expected", "actual"],
    "properties": {
        "trial": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0, "maximum": _MASK},
        "levi": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "status": {"enum": [PASS, FAIL, NOT_APPLICABLE]},
        "theta": {"type": "array"},
        "char_poly": {"type": "array"},
        "error": {"type": "string"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "campaign report",
    "type": "object",
    "additionalProperties": False,
    "required": ["tool_version", "schema_version", "config", "census", "experiments", "all_passed"],
    "properties": {
        "tool_version": {"type": "string"},
        "schema_version": {"const": SCHEMA_VERSION},
        "config": CONFIG_SCHEMA,
        "census": {
            "type": "object",
            "required": list(CENSUS_FIELDS),
            "properties": {
                "par_degree": _FRACTION,
                "par_slope": _FRACTION,
                "extensions": {"type": "array", "items": {"type": "string"}},
                "violations": {"type": "array", "items": {"type": "string"}},
            },
            "additionalProperties": {"type": ["integer", "null"]},
        },
        "experiments": {"type": "array", "items": {
            "type": "object", "additionalProperties": False,
            "required": ["name", "trials", "base_seed", "passes", "failures", "not_applicable",
                         "failure_records"],
            "properties": {
                "name": {"enum": sorted(REGISTRY)},
                "trials": {"type": "integer", "minimum": 1},
                "base_seed": {"type": "integer", "minimum": 0},
                "passes": {"type": "integer", "minimum": 0},
                "failures": {"type": "integer", "minimum": 0},
                "not_applicable": {"type": "integer", "minimum": 0},
                "failure_records": {"type": "array", "items": _TRIAL_RECORD},
            },
        }},
        "all_passed": {"type": "boolean"},
    },
}


def mix_seed(base: int, index: int) -> int:
    """SplitMix64 of ``base`` advanced ``index + 1`` steps."""
    z = (base + (index + 1) * 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    trials: int
    seed: int = 0


@dataclass(frozen=True)
class CampaignConfig:
    field: FieldSpec
    parabolic: ParabolicData
    experiments: tuple[ExperimentSpec, ...] = ()
    precision: int | None = None
    extension_cap: int = DEFAULT_EXTENSION_CAP
    output: str | None = None
    raw: dict = field(default_factory=dict, compare=False)

    @property
    def working_precision(self) -> int:
        return self.precision if self.precision is not None else 2 * self.parabolic.rank + 2

    def levi_for_trial(self, index: int) -> LeviType:
        pts = self.parabolic.points
        if not pts:
            return LeviType((self.parabolic.rank,))
        return pts[index % len(pts)].levi

    def with_seed(self, seed: int) -> "CampaignConfig":
        exps = tuple(ExperimentSpec(e.name, e.trials, seed) for e in self.experiments)
        raw = dict(self.raw)
        if "experiments" in raw:
            raw["experiments"] = [dict(e, seed=seed) for e in raw["experiments"]]
        return CampaignConfig(self.field, self.parabolic, exps, self.precision,
                              self.extension_cap, self.output, raw)


def parse_config(data: dict) -> CampaignConfig:
    """Validate against :data:`CONFIG_SCHEMA` and build the typed config."""
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from None
    try:
        fs = FieldSpec(data["field"]["p"], data["field"].get("m", 1))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    par = data["parabolic"]
    try:
        points = tuple(
            MarkedPoint(LeviType(tuple(pt["levi"])),
                        None if "weights" not in pt else tuple(Fraction(w) for w in pt["weights"]))
            for pt in par.get("points", []))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    pd = ParabolicData(par["genus"], par["rank"], par.get("degree", 0), points, fs.p)
    exps = tuple(ExperimentSpec(e["name"], e["trials"], e.get("seed", 0))
                 for e in data.get("experiments", []))
    return CampaignConfig(fs, pd, exps, data.get("precision"),
                          data.get("extension_cap", DEFAULT_EXTENSION_CAP), data.get("output"), data)


def load_config(path) -> CampaignConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return parse_config(data)


# -- running -----------------------------------------------------------------

def _context(cfg: CampaignConfig, index: int) -> TrialContext:
    return TrialContext(GF.get(cfg.field.p, cfg.field.m), cfg.working_precision,
                        cfg.levi_for_trial(index), cfg.parabolic, cfg.extension_cap)


def run_trial(cfg: CampaignConfig, name: str, base_seed: int, index: int) -> dict:
    """One trial as a JSON-ready record; replayable from its fields alone."""
    seed = mix_seed(base_seed, index)
    ctx = _context(cfg, index)
    out = REGISTRY[name](ctx, seed)
    rec = {"trial": index, "seed": seed, "levi": list(ctx.levi.multiplicities)}
    rec.update(out.record())
    return rec


def _run_chunk(args):
    cfg, name, base_seed, indices = args
    return [run_trial(cfg, name, base_seed, i) for i in indices]


def _run_experiment(cfg: CampaignConfig, exp: ExperimentSpec, pool) -> dict:
    indices = list(range(exp.trials))
    if pool is None:
        records = _run_chunk((cfg, exp.name, exp.seed, indices))
    else:
        size = max(1, len(indices) // (4 * pool._max_workers))
        chunks = [indices[k:k + size] for k in range(0, len(indices), size)]
        records = [r for part in pool.map(_run_chunk, [(cfg, exp.name, exp.seed, c) for c in chunks])
                   for r in part]
    records.sort(key=lambda r: r["trial"])
    failures = [r for r in records if r["status"] == FAIL]
    return {
        "name": exp.name,
        "trials": exp.trials,
        "base_seed": exp.seed,
        "passes": exp.trials - len(failures),
        "failures": len(failures),
        "not_applicable": sum(r["status"] == NOT_APPLICABLE for r in records),
        "failure_records": failures,
    }


@dataclass
class CampaignReport:
    data: dict

    @property
    def all_passed(self) -> bool:
        return self.data["all_passed"]

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2) + "\n"


def run(cfg: CampaignConfig, jobs: int = 1) -> CampaignReport:
    """Run every configured experiment; the report is independent of ``jobs``."""
    results = []
    pool = ProcessPoolExecutor(jobs) if jobs > 1 and cfg.experiments else None
    try:
        for exp in cfg.experiments:
            results.append(_run_experiment(cfg, exp, pool))
    finally:
        if pool is not None:
            pool.shutdown()
    data = {
        "tool_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "config": cfg.raw,
        "census": census(cfg.parabolic).to_json(),
        "experiments": results,
        "all_passed": all(r["failures"] == 0 for r in results),
    }
    return CampaignReport(data)


# -- human-readable output ---------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return f"{v['num']}/{v['den']}" if v["den"] != 1 else str(v["num"])
    return str(v)


def report_human(report: CampaignReport | dict) -> str:
    data = report.data if isinstance(report, CampaignReport) else report
    lines = ["census"]
    cen = data["census"]
    keys = [k for k in CENSUS_FIELDS if k in cen]
    width = max(len(k) for k in keys)
    for k in keys:
        lines.append(f"  {k.ljust(width)}  {_fmt(cen[k])}")
    for note in cen.get("extensions", []):
        lines.append(f"  note: {note}")
    if cen.get("violations"):
        lines.append(f"  identity violations: {', '.join(cen['violations'])}")
    exps = data.get("experiments", [])
    if exps:
        lines.append("")
        head = f"{'experiment':<20} {'trials':>7} {'pass':>7} {'fail':>7} {'n/a':>7}"
        lines.append(head)
        lines.append("-" * len(head))
        for e in exps:
            lines.append(f"{e['name']:<20} {e['trials']:>7} {e['passes']:>7} {e['failures']:>7} "
                         f"{e['not_applicable']:>7}")
        for e in exps:
            for rec in e["failure_records"]:
                lines.append(f"FAIL {e['name']} trial {rec['trial']} seed {rec['seed']} "
                             f"levi {tuple(rec['levi'])}: expected {rec.get('expected')} "
                             f"got {rec.get('actual')}" + (f" ({rec['error']})" if "error" in rec else ""))
    lines.append("")
    lines.append("ALL PASSED" if data["all_passed"] else "FAILURES PRESENT")
    return "\n".join(lines) + "\n"


DEFAULT_EXPERIMENTS: Sequence[str] = tuple(REGISTRY)


def default_config(p: int = 101, genus: int = 2, levi: Sequence[int] = (2, 1), trials: int = 20,
                   seed: int = 0) -> dict:
    """A config dict running every registered experiment once per trial."""
    return {
        "schema_version": SCHEMA_VERSION,
        "field": {"p": p, "m": 1},
        "parabolic": {"genus": genus, "rank": sum(levi), "degree": 0,
                      "points": [{"levi": list(levi)}]},
        "experiments": [{"name": n, "trials": trials, "seed": seed} for n in DEFAULT_EXPERIMENTS],
    }
