import dataclasses

import numpy as np
import pytest

from vdspec import (
    GaussianParams,
    ScenarioConfig,
    ScenarioError,
    TapConfig,
    build_scenario,
    centered_grid,
    initial_state,
    run_scenario,
    scenario_catalog,
    scenario_names,
    validate_config,
)

CATALOG = ["co_propagating", "counter_antisymmetric", "counter_symmetric", "single_gaussian"]


def small_config(packets=None, n_points=8192, n_steps=300, **overrides):
    grid = centered_grid(n_points, 0.1)
    if packets is None:
        packets = ((GaussianParams(x0=-140.0, sigma_x=25.0, k0=1.0), 1.0),)
    base = dict(
        name="small",
        grid=grid,
        packets=packets,
        dt=1.0,
        n_steps=n_steps,
        tap=TapConfig(x_detector=0.0, dx_sep=0.1),
    )
    base.update(overrides)
    return ScenarioConfig(**base)


def test_catalog_names_sorted():
    assert scenario_names() == CATALOG
    catalog = scenario_catalog()
    assert [name for name, _ in catalog] == CATALOG
    assert all(desc for _, desc in catalog)


def test_build_scenario_unknown_name_lists_catalog():
    with pytest.raises(ValueError) as err:
        build_scenario("nope")
    for name in CATALOG:
        assert name in str(err.value)


def test_build_scenario_shared_numerics():
    for name in CATALOG:
        cfg = build_scenario(name)
        assert cfg.grid.n_points == 32768
        assert cfg.grid.dx == 0.1
        assert cfg.grid.index_of(0.0) == 16384
        assert cfg.dt == 1.0
        assert cfg.n_steps == 1000
        assert cfg.tap == TapConfig(0.0, 0.1)
        assert cfg.potential.kind == "zero"
        assert cfg.zero_pad_factor == 4
        assert cfg.cvd_bin_width == 0.005
        assert cfg.rho_floor == 1e-12


def test_build_scenario_packets():
    single = build_scenario("single_gaussian")
    assert single.packets == ((GaussianParams(-250.0, 50.0, 1.0, 0.0), 1.0),)
    anti = build_scenario("counter_antisymmetric")
    (pa, ca), (pb, cb) = anti.packets
    assert (pa.x0, pa.k0) == (-250.0, 0.5)
    assert (pb.x0, pb.k0) == (250.0, -0.5)
    assert ca == -cb == pytest.approx(1 / np.sqrt(2), abs=0)
    co = build_scenario("co_propagating")
    (p1, _), (p2, _) = co.packets
    # both centroids reach the detector at t = |x0| / k0 = 250
    assert p1.x0 / p1.k0 == p2.x0 / p2.k0 == -250.0


def test_initial_states_are_unit_norm():
    for name in CATALOG:
        cfg = build_scenario(name)
        assert abs(initial_state(cfg).norm_squared() - 1.0) < 1e-9


def test_antisymmetric_state_vanishes_at_detector_exactly():
    cfg = build_scenario("counter_antisymmetric")
    wf = initial_state(cfg)
    assert wf.amplitudes[cfg.grid.index_of(0.0)] == 0.0


def test_symmetric_state_is_even():
    cfg = build_scenario("counter_symmetric")
    amp = initial_state(cfg).amplitudes
    mirrored = np.roll(amp[::-1], 1)
    assert np.max(np.abs(amp - mirrored)) < 1e-12


def test_co_propagating_transit_peak(scenario_result):
    # both centroids meet at the detector at t = 250
    res = scenario_result("co_propagating")
    assert abs(res.diagnostics["tap_peak_time"] - 250.0) <= 10.0


def test_single_gaussian_transit_peak(scenario_result):
    res = scenario_result("single_gaussian")
    assert abs(res.diagnostics["tap_peak_time"] - 250.0) <= 2.0


def test_counter_symmetric_parity_preserved_all_times():
    # needs the raw record, so re-derive from a short run at catalog scale
    cfg = build_scenario("counter_symmetric")
    from vdspec import EvolutionConfig, propagate

    rec = propagate(
        initial_state(cfg),
        EvolutionConfig(dt=1.0, n_steps=200),
        [cfg.tap],
    )[0]
    assert np.max(np.abs(rec.psi_plus - rec.psi_minus)) < 1e-10


def test_antisymmetric_detector_silent(scenario_result):
    res = scenario_result("counter_antisymmetric")
    assert res.diagnostics["tap_max_abs_psi0"] < 1e-10


def test_window_diagnostics_reported(scenario_result):
    for name in CATALOG:
        d = scenario_result(name).diagnostics
        assert d["window_complete"]
        assert 0.0 <= d["tap_residual_tT"] < 1e-2
        assert d["tap_residual_t0"] >= 0.0
        assert d["fft_threads"] == 1


def test_scenario_rerun_is_bit_identical():
    cfg = small_config()
    a = run_scenario(cfg)
    b = run_scenario(cfg)
    for key in a.spectra:
        assert np.array_equal(a.spectra[key].k, b.spectra[key].k)
        assert np.array_equal(a.spectra[key].density, b.spectra[key].density)
    assert a.reports == b.reports
    assert a.diagnostics == b.diagnostics


def test_grid_doubling_leaves_spectra_unchanged():
    a = run_scenario(small_config(n_points=8192))
    b = run_scenario(small_config(n_points=16384))
    for key in a.spectra:
        da, db = a.spectra[key].density, b.spectra[key].density
        if key == "cvd":
            # bin grids can differ in extent; compare on the common bins
            ka, kb = a.spectra[key].k, b.spectra[key].k
            common = np.intersect1d(np.round(ka / 0.005), np.round(kb / 0.005))
            da = da[np.isin(np.round(ka / 0.005), common)]
            db = db[np.isin(np.round(kb / 0.005), common)]
        assert np.max(np.abs(da - db)) < 1e-10 * max(a.spectra[key].density.max(), 1.0)


def test_co_propagating_spectra_insensitive_to_relative_phase(scenario_result):
    base = scenario_result("co_propagating")
    cfg = build_scenario("co_propagating")
    p2, c2 = cfg.packets[1]
    shifted_cfg = dataclasses.replace(
        cfg,
        packets=(cfg.packets[0], (dataclasses.replace(p2, global_phase=1.3), c2)),
    )
    shifted = run_scenario(shifted_cfg)
    for key in ("qvd", "bqvd_discrete"):
        d0 = base.spectra[key].density
        d1 = shifted.spectra[key].density
        support = np.maximum(d0, d1) >= 1e-3 * d0.max()
        rel = np.linalg.norm((d0 - d1)[support]) / np.linalg.norm(d0[support])
        # fringes move in time, spectra stay put up to window-truncation
        # cross-talk between the two packets (measured ~5e-3)
        assert rel < 1e-2


def test_run_scenario_window_violation_raises():
    cfg = small_config(n_steps=150)  # packet centered at the tap when recording stops
    with pytest.raises(ScenarioError) as err:
        run_scenario(cfg)
    assert err.value.diagnostics["tap_residual_tT"] > 1e-2
    assert not err.value.diagnostics["window_complete"]


def test_validate_config_names_offending_key():
    good = small_config()
    cases = [
        (dataclasses.replace(good, dt=0.0), "dt"),
        (dataclasses.replace(good, n_steps=0), "n_steps"),
        (dataclasses.replace(good, zero_pad_factor=0), "zero_pad_factor"),
        (dataclasses.replace(good, cvd_bin_width=0.0), "cvd_bin_width"),
        (dataclasses.replace(good, rho_floor=-1.0), "rho_floor"),
        (dataclasses.replace(good, packets=()), "packets"),
        (
            dataclasses.replace(
                good,
                packets=((GaussianParams(x0=0.0, sigma_x=0.2, k0=1.0), 1.0),),
            ),
            "packets[0].sigma_x",
        ),
        (
            dataclasses.replace(
                good,
                packets=((GaussianParams(x0=-400.0, sigma_x=25.0, k0=1.0), 1.0),),
            ),
            "packets[0].x0",
        ),
        (
            dataclasses.replace(good, tap=TapConfig(x_detector=good.grid.x_min, dx_sep=0.1)),
            "tap.x_detector",
        ),
        (dataclasses.replace(good, tap=TapConfig(0.0, 0.13)), "tap.dx_sep"),
    ]
    for bad, key in cases:
        with pytest.raises(ValueError) as err:
            validate_config(bad)
        assert key in str(err.value)
