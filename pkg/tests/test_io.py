from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonsalem import io as aio
from nonsalem.bounds import BoundReport, borel_cantelli_scan
from nonsalem.fourier import FourierTable, decay_profile, lebesgue_table, transform
from nonsalem.measures import make_atomic, random_measure


@given(st.integers(0, 10_000), st.sampled_from(["sparse-atoms", "rough-density", "smooth-density"]))
def test_grid_measure_round_trip_is_exact(seed, profile):
    mu = random_measure(2, 8, seed, profile)
    back = aio.measure_from_dict(json.loads(aio.dumps(aio.measure_to_dict(mu))))
    np.testing.assert_array_equal(back.mass, mu.mass)
    assert back.meta == mu.meta


def test_atomic_measure_round_trip(tmp_path):
    mu = make_atomic([[0.1, 0.2], [0.7, 0.30000000000000004]], [1, 2])
    back = aio.load_measure(aio.save_measure(mu, tmp_path / "m.json"))
    np.testing.assert_array_equal(back.points, mu.points)
    np.testing.assert_array_equal(back.weights, mu.weights)


def test_measure_document_layout():
    doc = aio.measure_to_dict(random_measure(2, 3, 0, "rough-density"))
    assert set(doc) == {"dim", "resolution", "mass", "meta"}
    assert len(doc["mass"]) == 9
    with pytest.raises(ValueError):
        aio.measure_from_dict({"dim": 1})


def test_table_round_trip(tmp_path):
    table = transform(random_measure(2, 16, 1, "smooth-density"), 4)
    back = aio.load_table(aio.save_table(table, tmp_path / "t.json"))
    np.testing.assert_array_equal(back.coeffs, table.coeffs)
    aio.validate_table(back)
    doc = aio.read_json(tmp_path / "t.json")
    assert doc["entries"][0] == [[-4, -4], table[(-4, -4)].real, table[(-4, -4)].imag]


def test_function_table_serializes_densely():
    doc = aio.table_to_dict(lebesgue_table(1, 3))
    assert [e[0] for e in doc["entries"]] == [[-3], [-2], [-1], [0], [1], [2], [3]]


def test_incomplete_table_document():
    with pytest.raises(ValueError):
        aio.table_from_dict({"dim": 1, "box_radius": 1, "entries": [[[0], 1.0, 0.0]]})


@pytest.mark.parametrize("coeffs", [
    [0.5, 0.9, 0.5],
    [0.5 + 0.1j, 1.0, 0.5 + 0.1j],
    [1.5, 1.0, 1.5],
])
def test_validate_table_rejects(coeffs):
    with pytest.raises(ValueError):
        aio.validate_table(FourierTable(np.array(coeffs)))


def test_validate_table_accepts_hermitian():
    aio.validate_table(FourierTable(np.array([0.5 - 0.1j, 1.0, 0.5 + 0.1j])))


def test_reports_round_trip(tmp_path):
    reports = [
        BoundReport("theorem3_upper", 0.2, 0.1, 0.0, 2.0, {"delta": 0.1, "Q": 3, "complete": True}, "consistent"),
        BoundReport("theorem3_lower", math.nan, math.nan, math.nan, math.nan, {"q": [1, -2]}, "skipped"),
    ]
    for save, load, name in [(aio.save_reports_json, aio.load_reports_json, "r.json"),
                             (aio.save_reports_csv, aio.load_reports_csv, "r.csv")]:
        back = load(save(reports, tmp_path / name))
        assert back[0] == reports[0]
        assert back[1].verdict == "skipped" and math.isnan(back[1].lhs)
        assert back[1].params == {"q": [1, -2]}


def test_csv_is_rfc4180(tmp_path):
    path = aio.write_csv(["a", "b"], [[1, 'say "hi", ok'], [math.nan, 2.5]], tmp_path / "x.csv")
    assert path.read_bytes() == b'a,b\r\n1,"say ""hi"", ok"\r\n,2.5\r\n'


def test_json_is_canonical():
    assert aio.dumps({"b": np.float64(0.1), "a": [np.int64(3), math.inf]}) == \
        '{\n  "a": [\n    3,\n    null\n  ],\n  "b": 0.1\n}\n'


def test_series_and_decay_artifacts(tmp_path):
    rep = borel_cantelli_scan(lebesgue_table(1, 1 << 40), 2.0, 100)
    aio.save_series(rep, tmp_path / "s.json", tmp_path / "s.csv")
    doc = aio.read_json(tmp_path / "s.json")
    assert doc["classified"] == "converging"
    rows = aio.read_csv(tmp_path / "s.csv")
    assert int(rows[-1]["Q_max"]) == 100
    assert float(rows[-1]["partial_sum"]) == rep.partial_sums[-1][1]
    prof = decay_profile(transform(random_measure(1, 256, 0, "smooth-density"), 128))
    rows = aio.read_csv(aio.save_decay_csv(prof, tmp_path / "d.csv"))
    assert list(rows[0]) == ["radius", "peak"]
    assert all(0 <= float(r["peak"]) <= 1 + 1e-12 for r in rows)
