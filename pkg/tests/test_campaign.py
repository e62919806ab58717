import copy
import json
from pathlib import Path

import jsonschema
import pytest

from parhitchin.campaign import (CONFIG_SCHEMA, DEFAULT_EXPERIMENTS, REPORT_SCHEMA, CampaignReport, _context,
                                 default_config, load_config, mix_seed, parse_config, report_human, run, run_trial)
from parhitchin.census import ParabolicData, census
from parhitchin.errors import ConfigError
from parhitchin.experiments import FAIL, NOT_APPLICABLE, PASS, REGISTRY, TrialContext
from parhitchin.field import GF
from parhitchin.combinatorics import LeviType


def census_only(genus=2, rank=3, levi=(2, 1)):
    return {"schema_version": 1, "field": {"p": 101},
            "parabolic": {"genus": genus, "rank": rank, "points": [{"levi": list(levi)}]}}


# -- seeds ---------------------------------------------------------------------

def test_mix_seed_reference_values():
    # SplitMix64 from state 0: the first outputs of the reference generator
    assert mix_seed(0, 0) == 0xE220A8397B1DCDAF
    assert mix_seed(0, 1) == 0x6E789E6AA1B965F4
    assert mix_seed(0, 2) == 0x06C45D188009454F


def test_mix_seed_spreads():
    seeds = {mix_seed(7, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert all(0 <= s < 2 ** 64 for s in seeds)
    assert mix_seed(7, 3) != mix_seed(8, 3)


# -- config --------------------------------------------------------------------

def test_parse_census_only():
    cfg = parse_config(census_only())
    assert cfg.experiments == ()
    assert cfg.working_precision == 2 * 3 + 2
    assert cfg.levi_for_trial(5) == LeviType((2, 1))


def test_levi_cycles_over_points():
    data = census_only(rank=2, levi=(1, 1))
    data["parabolic"]["points"].append({"levi": [2]})
    cfg = parse_config(data)
    assert [cfg.levi_for_trial(i).multiplicities for i in range(3)] == [(1, 1), (2,), (1, 1)]
    data["parabolic"]["points"] = []
    assert parse_config(data).levi_for_trial(0) == LeviType((2,))


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(extra=1),
    lambda d: d["field"].update(q=5),
    lambda d: d["parabolic"]["points"][0].update(colour="red"),
    lambda d: d.update(schema_version=2),
    lambda d: d.update(experiments=[{"name": "nope", "trials": 1}]),
    lambda d: d.update(experiments=[{"name": "valuation_bounds", "trials": 0}]),
    lambda d: d.update(experiments=[{"name": "valuation_bounds", "trials": 1, "seed": -1}]),
    lambda d: d["field"].update(p=6),
    lambda d: d["parabolic"].update(genus=1),
    lambda d: d["parabolic"]["points"][0].update(levi=[1, 1]),
    lambda d: d["parabolic"]["points"][0].update(weights=["0", "1/2"]),
    lambda d: d["parabolic"]["points"][0].update(weights=["0", "x", "1"]),
    lambda d: d.pop("field"),
])
def test_invalid_configs_rejected(mutate):
    data = census_only()
    mutate(data)
    with pytest.raises(ConfigError):
        parse_config(data)


def test_weights_parsed_as_fractions():
    data = census_only()
    data["parabolic"]["points"][0]["weights"] = [0, "1/4", 1]
    cfg = parse_config(data)
    assert str(cfg.parabolic.points[0].weights[1]) == "1/4"


def test_default_config_is_valid():
    data = default_config()
    jsonschema.validate(data, CONFIG_SCHEMA)
    cfg = parse_config(data)
    assert [e.name for e in cfg.experiments] == list(REGISTRY)


# -- running -------------------------------------------------------------------

def test_census_only_report():
    cfg = parse_config(census_only())
    rep = run(cfg)
    assert rep.data["experiments"] == []
    assert rep.data["census"] == census(cfg.parabolic).to_json()
    assert rep.all_passed
    assert set(rep.data) == {"tool_version", "schema_version", "config", "census", "experiments",
                             "all_passed"}


def test_pinned_valuation_bounds_campaign():
    data = census_only()
    data["experiments"] = [{"name": "valuation_bounds", "trials": 100, "seed": 7}]
    rep = run(parse_config(data))
    (exp,) = rep.data["experiments"]
    assert (exp["passes"], exp["failures"], exp["trials"]) == (100, 0, 100)
    assert rep.all_passed


@pytest.mark.parametrize("precision", [None, 2])
def test_reports_match_published_schema(precision):
    data = default_config(trials=2)
    if precision:
        data["precision"] = precision
    rep = run(parse_config(data))
    jsonschema.validate(json.loads(rep.to_json()), REPORT_SCHEMA)
    jsonschema.validate(json.loads(run(parse_config(census_only())).to_json()), REPORT_SCHEMA)


def test_byte_identical_reruns():
    data = default_config(trials=4, seed=3)
    a = run(parse_config(copy.deepcopy(data))).to_json()
    b = run(parse_config(copy.deepcopy(data))).to_json()
    assert a == b


def test_parallel_matches_serial():
    data = default_config(trials=6, seed=11)
    serial = run(parse_config(data), jobs=1).to_json()
    parallel = run(parse_config(data), jobs=2).to_json()
    assert serial == parallel


@pytest.mark.parametrize("p, levi", [(101, (2, 1)), (7, (1, 2)), (5, (1, 1, 1)), (101, (3,))])
def test_default_campaign_passes(p, levi):
    rep = run(parse_config(default_config(p=p, levi=levi, trials=5, seed=1)))
    for e in rep.data["experiments"]:
        assert e["failures"] == 0, e
        assert e["passes"] + e["failures"] == e["trials"]
    assert rep.all_passed


def test_failures_are_structured_and_replayable():
    data = default_config(trials=3)
    data["precision"] = 2
    cfg = parse_config(data)
    rep = run(cfg)
    assert not rep.all_passed
    failing = [e for e in rep.data["experiments"] if e["failures"]]
    assert failing
    for e in failing:
        assert e["passes"] + e["failures"] == e["trials"]
        for rec in e["failure_records"]:
            assert rec["status"] == FAIL
            assert "error" in rec
            ctx = _context(cfg, rec["trial"])
            again = REGISTRY[e["name"]](ctx, rec["seed"])
            assert again.status == FAIL
            assert run_trial(cfg, e["name"], e["base_seed"], rec["trial"]) == rec


def test_not_applicable_counted_as_pass():
    # the trivial flag has no parabolic-generic theta over F_5 at rank 3 for some seeds
    rep = run(parse_config(default_config(p=5, levi=(1, 1, 1), trials=10, seed=0)))
    for e in rep.data["experiments"]:
        assert e["passes"] + e["failures"] == e["trials"]
        assert 0 <= e["not_applicable"] <= e["passes"]


def test_trial_records_carry_replay_data():
    cfg = parse_config(default_config(trials=1))
    rec = run_trial(cfg, "valuation_bounds", 0, 0)
    assert rec["seed"] == mix_seed(0, 0)
    assert rec["levi"] == [2, 1]
    assert rec["status"] == PASS
    assert "theta" in rec and "char_poly" in rec
    json.dumps(rec)


def test_census_identities_without_parabolic_data():
    ctx = TrialContext(GF.get(5), 4, LeviType((1, 1)))
    assert REGISTRY["census_identities"](ctx, 0).status == NOT_APPLICABLE


# -- human output ----------------------------------------------------------------

def test_table_census_only():
    text = report_human(run(parse_config(census_only())))
    assert text.startswith("census\n")
    assert "experiment" not in text
    assert text.rstrip().endswith("ALL PASSED")


def test_table_default_campaign_has_seven_rows():
    rep = run(parse_config(default_config(trials=2)))
    text = report_human(rep)
    rows = [ln for ln in text.splitlines() if ln.split(" ")[0] in DEFAULT_EXPERIMENTS]
    assert len(rows) == 7 == len(DEFAULT_EXPERIMENTS)


def test_table_failure_row_prints_seed():
    data = default_config(trials=1)
    data["precision"] = 2
    rep = run(parse_config(data))
    text = report_human(rep)
    fails = [ln for ln in text.splitlines() if ln.startswith("FAIL ")]
    assert fails
    assert all(" seed " in ln for ln in fails)
    assert text.rstrip().endswith("FAILURES PRESENT")


def test_table_column_order_stable():
    rep = run(parse_config(census_only()))
    again = CampaignReport(json.loads(rep.to_json()))
    assert report_human(rep) == report_human(again)


# -- published files -------------------------------------------------------------

ROOT = Path(__file__).resolve().parent.parent


@pytest.mark.parametrize("name, schema", [("config.schema.json", CONFIG_SCHEMA),
                                          ("report.schema.json", REPORT_SCHEMA)])
def test_docs_schemas_in_sync(name, schema):
    # regenerate with scripts/export_schemas.py
    assert json.loads((ROOT / "docs" / name).read_text()) == json.loads(json.dumps(schema))


@pytest.mark.parametrize("path", sorted((ROOT / "scripts" / "configs").glob("*.json")), ids=lambda p: p.stem)
def test_example_configs_parse(path):
    load_config(path)
