from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from nonsalem import io as aio
from nonsalem.cli import main

QUICK_BATTERY = {"battery": {"seeds": [0], "profiles": ["rough-density"], "Qs": [2, 5]}}


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(tmp_path, *args, out="out"):
    return main([*args, "--out", str(tmp_path / out)])


def tree_bytes(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_transform_uniform(tmp_path):
    cfg = write_config(tmp_path, {"measure": {"kind": "uniform", "d": 1, "N": 64}, "box": 16})
    assert run(tmp_path, "transform", "--config", cfg) == 0
    table = aio.load_table(tmp_path / "out" / "table.json")
    aio.validate_table(table)
    mags = np.abs(table.coeffs)
    assert mags[16] == pytest.approx(1.0)
    assert np.max(np.delete(mags, 16)) < 1e-12


def test_transform_point_mass(tmp_path):
    cfg = write_config(tmp_path, {"measure": {"kind": "point", "point": [0.3, 0.6]}, "box": 4})
    assert run(tmp_path, "transform", "--config", cfg) == 0
    table = aio.load_table(tmp_path / "out" / "table.json")
    np.testing.assert_allclose(np.abs(table.coeffs), 1.0, atol=1e-12)
    assert aio.read_json(tmp_path / "out" / "decay.json")["fitted_s"] == pytest.approx(0.0, abs=1e-9)


def test_transform_random_is_byte_identical(tmp_path):
    cfg = write_config(tmp_path, {"measure": {"kind": "random", "d": 2, "N": 32, "profile": "smooth-density"}})
    assert run(tmp_path, "transform", "--config", cfg, "--seed", "11", "--box", "12", out="a") == 0
    assert run(tmp_path, "transform", "--config", cfg, "--seed", "11", "--box", "12", out="b") == 0
    assert tree_bytes(tmp_path / "a") == tree_bytes(tmp_path / "b")
    assert run(tmp_path, "transform", "--config", cfg, "--seed", "12", "--box", "12", out="c") == 0
    assert tree_bytes(tmp_path / "a") != tree_bytes(tmp_path / "c")


def test_transform_alias_is_usage_error(tmp_path, capsys):
    cfg = write_config(tmp_path, {"measure": {"kind": "uniform", "d": 1, "N": 64}})
    assert run(tmp_path, "transform", "--config", cfg, "--box", "40") == 2
    assert "alias" in capsys.readouterr().err


def test_verify_ok_and_reloadable(tmp_path):
    cfg = write_config(tmp_path, QUICK_BATTERY)
    assert run(tmp_path, "verify", "--config", cfg) == 0
    out = tmp_path / "out"
    from_json = aio.load_reports_json(out / "reports.json")
    from_csv = aio.load_reports_csv(out / "reports.csv")
    assert len(from_json) == len(from_csv) > 0
    assert [r.key for r in from_json] == [r.key for r in from_csv]
    summary = aio.read_json(out / "summary.json")
    assert summary["theorem3_upper"]["violated"] == 0


def test_verify_forced_violation(tmp_path):
    cfg = write_config(tmp_path, QUICK_BATTERY)
    assert run(tmp_path, "verify", "--config", cfg, "--budget", "0.01") == 1


def test_verify_strict_names_missing_frequency(tmp_path, capsys):
    cfg = write_config(tmp_path, QUICK_BATTERY)
    assert run(tmp_path, "verify", "--config", cfg, "--box", "8", "--strict") == 2
    err = capsys.readouterr().err
    assert "not covered" in err and "(" in err
    assert run(tmp_path, "verify", "--config", cfg, "--box", "8") == 0
    assert "warning" in capsys.readouterr().err


def test_verify_is_byte_identical(tmp_path):
    cfg = write_config(tmp_path, QUICK_BATTERY)
    run(tmp_path, "verify", "--config", cfg, out="a")
    run(tmp_path, "verify", "--config", cfg, out="b")
    assert tree_bytes(tmp_path / "a") == tree_bytes(tmp_path / "b")


def test_parseval_command(tmp_path):
    cfg = write_config(tmp_path, {"parseval": {"folds": [1]}})
    assert run(tmp_path, "parseval", "--config", cfg, "--seed", "4") == 0
    reports = aio.load_reports_json(tmp_path / "out" / "reports.json")
    assert len(reports) == 9 and all(r.ratio < 1e-6 for r in reports)


def test_borel_cantelli_command(tmp_path, capsys):
    cfg = write_config(tmp_path, {"tau_prime": 2.0, "Q_max": 2000})
    assert run(tmp_path, "borel-cantelli", "--config", cfg) == 0
    assert capsys.readouterr().out.startswith("converging")
    doc = aio.read_json(tmp_path / "out" / "series.json")
    assert doc["partial_sums"][-1][0] == 2000


def test_badness_command(tmp_path):
    cfg = write_config(tmp_path, {"Q_max": 10_000, "points": ["golden", [0.5, 0.25]]})
    assert run(tmp_path, "badness", "--config", cfg) == 0
    rows = aio.read_csv(tmp_path / "out" / "badness.csv")
    assert [r["Q_max"] for r in rows] == ["10000", "10000"]
    assert float(rows[0]["score"]) == pytest.approx(0.4472, abs=0.005)
    assert float(rows[1]["score"]) == 0.0


def test_witness_command(tmp_path):
    cfg = write_config(tmp_path, {"configs": [{"q_range": [3, 8], "N": 256}]})
    assert run(tmp_path, "witness", "--config", cfg) == 0
    (rep,) = aio.load_reports_json(tmp_path / "out" / "reports.json")
    assert rep.params["ceiling"] == 1.0 and rep.params["q_set"] == [3, 4, 5, 6, 7, 8]


@pytest.mark.parametrize("doc", [
    [1, 2],
    {"measure": {"kind": "moebius"}},
    {"battery": {"colour": "red"}},
])
def test_bad_configs_exit_two(tmp_path, doc):
    cmd = "verify" if "battery" in doc else "transform"
    assert run(tmp_path, cmd, "--config", write_config(tmp_path, doc)) == 2


def test_missing_config_file(tmp_path):
    assert run(tmp_path, "badness", "--config", str(tmp_path / "nope.json")) == 2


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "nonsalem.cli", "badness", "--out", str(tmp_path)],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "badness.csv").exists()
