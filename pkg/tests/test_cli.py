import json
import subprocess
import sys

import pytest

from parhitchin.campaign import default_config
from parhitchin.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main


def write(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def census_only():
    return {"schema_version": 1, "field": {"p": 7},
            "parabolic": {"genus": 2, "rank": 2, "points": [{"levi": [1, 1]}]}}


def test_census_only_json(tmp_path, capsys):
    assert main(["--config", write(tmp_path, census_only())]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["experiments"] == []
    assert out["census"]["dim_parabolic_base"] == 6


def test_out_file_and_table(tmp_path):
    out = tmp_path / "report.txt"
    assert main(["--config", write(tmp_path, census_only()), "--format", "table", "--out", str(out)]) == EXIT_OK
    assert out.read_text().startswith("census")


def test_output_key_in_config(tmp_path):
    data = census_only()
    data["output"] = str(tmp_path / "from_config.json")
    assert main(["--config", write(tmp_path, data)]) == EXIT_OK
    assert json.loads((tmp_path / "from_config.json").read_text())["all_passed"]


def test_unknown_key_exit_code(tmp_path, capsys):
    data = census_only()
    data["bogus"] = True
    assert main(["--config", write(tmp_path, data)]) == EXIT_CONFIG
    assert "bogus" in capsys.readouterr().err


def test_missing_and_malformed_config(tmp_path):
    assert main(["--config", str(tmp_path / "absent.json")]) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--config", str(bad)]) == EXIT_CONFIG


def test_bad_flags(tmp_path):
    cfg = write(tmp_path, census_only())
    assert main(["--config", cfg, "--jobs", "0"]) == EXIT_CONFIG
    assert main(["--config", cfg, "--seed", "-3"]) == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        main(["--config", cfg, "--format", "xml"])
    assert exc.value.code == 2


def test_failing_campaign_exit_code(tmp_path, capsys):
    data = default_config(trials=1)
    data["precision"] = 2
    assert main(["--config", write(tmp_path, data)]) == EXIT_FAIL
    assert not json.loads(capsys.readouterr().out)["all_passed"]


def test_seed_override(tmp_path, capsys):
    data = default_config(trials=2, seed=0)
    data["experiments"] = data["experiments"][:1]
    cfg = write(tmp_path, data)
    assert main(["--config", cfg, "--seed", "9"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["experiments"][0]["base_seed"] == 9
    assert out["config"]["experiments"][0]["seed"] == 9


def test_jobs_do_not_change_report(tmp_path):
    data = default_config(trials=4, seed=5)
    cfg = write(tmp_path, data)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["--config", cfg, "--out", str(a)]) == EXIT_OK
    assert main(["--config", cfg, "--out", str(b), "--jobs", "2"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point(tmp_path):
    cfg = write(tmp_path, census_only())
    proc = subprocess.run([sys.executable, "-m", "parhitchin", "--config", cfg, "--format", "table"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "ALL PASSED" in proc.stdout
