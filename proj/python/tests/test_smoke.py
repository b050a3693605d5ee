import json

import numpy as np
import pytest

import turbda


@pytest.fixture(scope="module")
def small():
    grid = turbda.GridSpec()
    grid.nx = grid.ny = 16
    grid.lx = grid.ly = 2 * np.pi * 10 / 4
    params = turbda.SqgParams()
    return grid, params


def test_budget_values():
    assert turbda.format_sig(turbda.vit_param_count(24, 2048, 4.0)) == "1.208e9"
    flops = turbda.estimate_training_flops([256, 256], [4, 4], 100.0, 2.5e9, 1e6)
    assert flops == pytest.approx(6.144e21)


def test_nature_run_shapes_and_determinism(small):
    grid, params = small
    a = turbda.nature_run(grid, params, spinup=12.0, duration=24.0, interval=12.0, seed=3)
    b = turbda.nature_run(grid, params, spinup=12.0, duration=24.0, interval=12.0, seed=3)
    assert len(a) == 3
    assert a[0].shape == (2, 16, 16)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    assert np.isfinite(a[-1]).all()


def test_advance_composition(small):
    grid, params = small
    state = turbda.nature_run(grid, params, 12.0, 0.0, 12.0, seed=5)[0]
    one = turbda.advance(grid, params, state, 12.0)
    two = turbda.advance(grid, params, turbda.advance(grid, params, state, 6.0), 6.0)
    assert np.allclose(one, two, rtol=0, atol=1e-10)


def test_spectrum_slope_callable(small):
    grid, params = small
    state = turbda.nature_run(grid, params, 240.0, 0.0, 12.0, seed=1)[0]
    kappa, energy = turbda.ke_spectrum(grid, params, state)
    assert kappa.shape == energy.shape
    assert energy.sum() > 0
    slope = turbda.fit_loglog_slope(kappa, energy, 2, 5)
    assert np.isfinite(slope)


def test_filters_reduce_error(small):
    grid, params = small
    rng = np.random.default_rng(0)
    truth = turbda.nature_run(grid, params, 240.0, 0.0, 12.0, seed=2)[0].ravel()
    members = truth[None, :] + rng.standard_normal((8, truth.size))
    y = truth + rng.standard_normal(truth.size)

    prior_rmse = np.sqrt(((members.mean(0) - truth) ** 2).mean())
    for post in (
        turbda.ensf_analyze(members, grid, y, r=1.0, seed=9, cycle=1),
        turbda.letkf_analyze(members, grid, y, r=1.0),
    ):
        assert post.shape == members.shape
        post_rmse = np.sqrt(((post.mean(0) - truth) ** 2).mean())
        assert post_rmse < prior_rmse


def test_run_experiment_from_json():
    cfg = json.loads(turbda.default_config_json())
    cfg["grid"]["nx"] = cfg["grid"]["ny"] = 16
    cfg["grid"]["lx"] = cfg["grid"]["ly"] = 2 * np.pi * 10 / 4
    cfg["cycles"] = 2
    cfg["ensemble_size"] = 4
    cfg["spinup_hours"] = 24.0
    cfg["clim_hours"] = 48.0
    cfg["variant"] = "ensf"
    cfg["ensf"]["n_steps"] = 20
    records = turbda.run_experiment(json.dumps(cfg))
    assert len(records) == 2
    assert records[0]["cycle"] == 1
    assert records[1]["time"] == pytest.approx(24.0)
    assert turbda.config_hash(json.dumps(cfg)) == turbda.config_hash(json.dumps(cfg))
