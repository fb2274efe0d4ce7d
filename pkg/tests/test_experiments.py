import json
import math

import numpy as np
import pytest

from spherelab.experiments import (
    AVERAGE_L4_COLUMNS,
    ENVELOPE_COLUMNS,
    IDENTITY_CHECKS,
    SUPERLEVEL_COLUMNS,
    TUBE_RATIO_COLUMNS,
    ExperimentRecord,
    average_l4_experiment,
    exact_identity_suite,
    fit_power_law,
    pointwise_envelope_experiment,
    scaling_experiment,
    scaling_target,
    superlevel_experiment,
    timed,
    tube_ratio_experiment,
    write_csv,
    write_json,
)


def test_fit_power_law_exact_recovery():
    ks = np.array([4, 8, 16, 32, 64])
    values = 3.0 * ks**0.7
    fit = fit_power_law(ks, values, q=4.0, target=0.7)
    assert fit.exponent == pytest.approx(0.7, abs=1e-12)
    assert math.exp(fit.intercept) == pytest.approx(3.0, rel=1e-12)
    assert fit.residual_rms < 1e-12
    assert fit.k_range == (4, 64)
    assert fit.target == 0.7
    # the lambda = sqrt(k(k+1)) refit shifts the exponent a little at low k
    assert fit.exponent_lambda == pytest.approx(0.7, abs=0.05)
    assert fit.residual_rms_lambda < 0.01
    d = fit.to_dict()
    assert d["exponent"] == fit.exponent
    with pytest.raises(ValueError):
        fit_power_law([4], [1.0])


def test_scaling_target_values():
    assert scaling_target("highest_weight", 4) == pytest.approx(1 / 8)
    assert scaling_target("highest_weight", 8) == pytest.approx(3 / 16)
    assert scaling_target("zonal", 8) == pytest.approx(1 / 4)
    assert scaling_target("zonal", math.inf) == pytest.approx(1 / 2)
    with pytest.raises(ValueError):
        scaling_target("random", 4)


def test_scaling_experiment_validation():
    ks = (8, 16, 32, 64)
    with pytest.raises(ValueError):
        scaling_experiment("zonal", 4, ks)
    with pytest.raises(ValueError):
        scaling_experiment("highest_weight", 4, (8, 16))
    with pytest.raises(ValueError):
        scaling_experiment("highest_weight", 1.5, ks)
    with pytest.raises(ValueError):
        scaling_experiment("unknown", 4, ks)


def test_scaling_experiment_small_sweep():
    fit = scaling_experiment("highest_weight", 4, (8, 16, 32, 64))
    assert abs(fit.exponent - 1 / 8) < 0.04
    assert fit.certificate["bands"] == {8: 8, 16: 16, 32: 32, 64: 64}
    assert len(fit.certificate["norms"]) == 4


def test_average_l4_degree_one_closed_form():
    res = average_l4_experiment([1])
    # (||Y_10||_4^4 + 2 ||Y_11||_4^4) / 3 with the elementary degree-1 values
    expect = (9 / (20 * math.pi) + 2 * 3 / (10 * math.pi)) / 3
    assert res.rows[0]["a_k"] == pytest.approx(expect, rel=1e-12)
    assert expect == pytest.approx(7 / (20 * math.pi), rel=1e-15)
    assert math.isnan(res.rows[0]["a_k_over_log_k"])


def test_average_l4_growth():
    res = average_l4_experiment([8, 16, 32])
    assert [row["k"] for row in res.rows] == [8, 16, 32]
    assert tuple(res.rows[0].keys()) == AVERAGE_L4_COLUMNS
    assert res.strictly_increasing
    assert res.band_spread >= 1.0
    low, high = res.ratio_band
    assert 0 < low <= high


def test_envelope_experiment_rows():
    res = pointwise_envelope_experiment([8, 32])
    assert tuple(res.rows[0].keys()) == ENVELOPE_COLUMNS
    assert res.band_spread >= 1.0
    for row in res.rows:
        assert 0 < row["sup_ratio"] < 1.0
        assert 0 <= row["argmax_r"] <= math.pi / 2
        expect_pole = math.sqrt((2 * row["k"] + 1) / (4 * math.pi)) / math.sqrt(row["k"])
        assert row["pole_ratio"] == pytest.approx(expect_pole, rel=1e-12)
        assert row["sup_ratio"] >= row["pole_ratio"] - 1e-12


def test_tube_ratio_experiment_rows():
    res = tube_ratio_experiment([8], oversample=2.0, n_axes=64)
    labels = [row["label"] for row in res.rows]
    assert labels.count("beam_tilted") == 1
    assert len(labels) == 8 + 2  # orders m = 0..k plus the tilted beam
    assert tuple(res.rows[0].keys()) == TUBE_RATIO_COLUMNS
    for row in res.rows:
        assert row["lam"] == pytest.approx(math.sqrt(8 * 9), rel=1e-12)
        assert row["l4"] > 0
        assert row["sup_arc_mass"] > 0
        assert 0 < row["ratio"] < 1.0
    assert res.max_ratio == pytest.approx(max(row["ratio"] for row in res.rows))


def test_superlevel_experiment_limits():
    res = superlevel_experiment([16], c_grid=(1e-6, 50.0))
    rows = {row["c"]: row for row in res.rows}
    assert tuple(res.rows[0].keys()) == SUPERLEVEL_COLUMNS
    # a tiny threshold captures the whole sphere
    assert rows[1e-6]["measure"] == pytest.approx(4 * math.pi, rel=1e-12)
    # a huge threshold captures nothing
    assert rows[50.0]["measure"] == 0.0
    lam = math.sqrt(16 * 17)
    assert rows[1e-6]["threshold"] == pytest.approx(1e-6 * math.sqrt(lam), rel=1e-12)
    assert rows[1e-6]["scaled_measure"] == pytest.approx(
        math.sqrt(lam) * 4 * math.pi, rel=1e-12
    )


def test_exact_identity_suite_small():
    report = exact_identity_suite(k_max=8, points=40, seed=1)
    assert report["passed"]
    assert set(report["checks"]) == set(IDENTITY_CHECKS)
    for name, entry in report["checks"].items():
        assert entry["passed"], name
        assert entry["max_error"] <= entry["tolerance"]
        assert 0 <= entry["worst_k"] <= 8


def test_write_csv_deterministic(tmp_path):
    rows = [
        {"k": 4, "value": 0.1 + 0.2, "flag": True},
        {"k": np.int64(8), "value": np.float64(1.5), "flag": False},
    ]
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_csv(p1, ("k", "value", "flag"), rows)
    write_csv(p2, ("k", "value", "flag"), rows)
    b1 = p1.read_bytes()
    assert b1 == p2.read_bytes()
    lines = b1.decode().splitlines()
    assert lines[0] == "k,value,flag"
    assert lines[1] == "4,0.30000000000000004,true"
    assert lines[2] == "8,1.5,false"


def test_write_json_round_trip(tmp_path):
    record = ExperimentRecord(
        name="demo",
        params={"k": np.int64(4), "q": 4.0},
        grid={"band": 4},
        seed=0,
        outputs={"value": np.float64(2.5), "flags": np.array([1, 2])},
        wall_clock_s=0.5,
    )
    path = tmp_path / "out.json"
    write_json(path, record, ("k", "value"), [{"k": 4, "value": 1.25}])
    loaded = json.loads(path.read_text())
    assert loaded["record"]["name"] == "demo"
    assert loaded["record"]["params"]["k"] == 4
    assert loaded["record"]["outputs"]["value"] == 2.5
    assert loaded["record"]["outputs"]["flags"] == [1, 2]
    assert loaded["columns"] == ["k", "value"]
    assert loaded["rows"] == [{"k": 4, "value": 1.25}]
    # serialization is stable
    text1 = record.to_json()
    text2 = record.to_json()
    assert text1 == text2
    assert json.loads(text1)["version"]


def test_timed_returns_result_and_duration():
    result, seconds = timed(sum, [1, 2, 3])
    assert result == 6
    assert seconds >= 0.0
