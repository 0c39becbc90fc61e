"""Simulation harness: sampling, exact enumeration, Monte Carlo, threshold fits."""
from __future__ import annotations

import numpy as np
import pytest

from qtrellis import code as code_mod
from qtrellis.sim import (
    ChannelSpec,
    DataPoint,
    SimError,
    build_trellises,
    exact_rate,
    fit_threshold,
    run_montecarlo,
    sample_error,
)


def test_channel_spec_validation():
    assert np.isclose(ChannelSpec("depolarizing", 0.3).site_probs().sum(), 1.0)
    probs = ChannelSpec("depolarizing", 0.3).site_probs()
    assert np.isclose(probs[0, 0], 0.7)
    assert np.isclose(probs[1, 1], 0.1)
    z_probs = ChannelSpec("dephasing_z", 0.2).site_probs()
    assert np.isclose(z_probs[0, 1], 0.2) and z_probs[1, 0] == 0.0
    assert ChannelSpec("dephasing_z", 0.2).single_axis
    assert not ChannelSpec("depolarizing", 0.2).single_axis
    with pytest.raises(SimError):
        ChannelSpec("depolarizing", 1.5)
    with pytest.raises(SimError):
        ChannelSpec("unknown_kind", 0.1)


def test_sample_error_statistics():
    rng = np.random.default_rng(17)
    channel = ChannelSpec("depolarizing", 0.3)
    counts = np.zeros((2, 2))
    draws = 30000
    for _ in range(draws):
        e = sample_error(channel, 1, rng)
        counts[e.x[0], e.z[0]] += 1
    freq = counts / draws
    assert abs(freq[0, 0] - 0.7) < 0.01
    for cell in (freq[1, 0], freq[1, 1], freq[0, 1]):
        assert abs(cell - 0.1) < 0.01
    # conditioning removes the identity outcome
    for _ in range(100):
        assert not sample_error(channel, 3, rng, condition_nontrivial=True).is_identity()
    with pytest.raises(SimError):
        sample_error(ChannelSpec("depolarizing", 0.0), 1, rng, condition_nontrivial=True)


def test_exact_rate_five_one_three_quadratic():
    """The distance-3 code has no O(p) failure term; the leading term is p^2."""
    code = code_mod.builtin("five_one_three")
    trellises = build_trellises(code, "full")
    rates = {}
    for p_phys in (1e-3, 2e-3):
        rates[p_phys] = exact_rate(
            code, ChannelSpec("depolarizing", p_phys), "full", trellises=trellises
        )
    # quadratic scaling: doubling p multiplies the rate by ~4
    assert 3.7 < rates[2e-3] / rates[1e-3] < 4.3
    assert rates[1e-3] < 1e-4  # far below any linear term


def test_exact_rate_matches_montecarlo_d3():
    code = code_mod.builtin("rotated_surface", 3)
    trellises = build_trellises(code, "css")
    channel = ChannelSpec("dephasing_z", 0.1)
    exact = exact_rate(code, channel, "css", trellises=trellises)
    pts = run_montecarlo(
        code, trellises, "dephasing_z", np.array([0.1]), 200000, 23, decoder="css"
    )
    pt = pts[0]
    sigma = np.sqrt(exact * (1 - exact) / pt.samples)
    assert abs(pt.rate_uncond - exact) < 3 * sigma


def test_montecarlo_reproducible_and_batch_invariant():
    code = code_mod.builtin("rotated_surface", 3)
    trellises = build_trellises(code, "css")
    grid = np.array([0.08, 0.10])
    a = run_montecarlo(code, trellises, "dephasing_z", grid, 40000, 11, decoder="css")
    b = run_montecarlo(code, trellises, "dephasing_z", grid, 40000, 11, decoder="css")
    c = run_montecarlo(
        code, trellises, "dephasing_z", grid, 40000, 11, workers=4, decoder="css", batch=977
    )
    assert a == b == c
    d = run_montecarlo(code, trellises, "dephasing_z", grid, 40000, 12, decoder="css")
    assert a != d


def test_montecarlo_datapoint_fields():
    code = code_mod.builtin("steane")
    trellises = build_trellises(code, "css")
    (pt,) = run_montecarlo(
        code, trellises, "dephasing_z", np.array([0.1]), 20000, 3, decoder="css"
    )
    assert pt.samples == 20000
    assert 0 <= pt.failures <= pt.samples
    assert 0.0 <= pt.ci_lo <= pt.rate_cond <= pt.ci_hi <= 1.0
    assert pt.conditioning == "nontrivial"
    assert pt.rate_uncond <= pt.rate_cond


def test_fit_threshold_roundtrip():
    p_th, nu = 0.10, 1.5
    datasets = {}
    for d in (9, 11, 13):
        pts = []
        for i in range(9):
            p = 0.085 + 0.00375 * i
            x = (p - p_th) * d ** (1 / nu)
            y = 0.30 + 1.8 * x + 4.0 * x * x
            pts.append(DataPoint(p, 100000, int(y * 100000), y, y, y - 0.003, y + 0.003))
        datasets[d] = pts
    fit = fit_threshold(datasets, dmin=9)
    assert abs(fit.p_th - p_th) < 1e-3
    assert abs(fit.nu - nu) < 1e-2
    assert not fit.small_distance_caveat


def test_fit_threshold_small_distance_caveat():
    rngs = np.random.default_rng(2)
    datasets = {}
    for d in (3, 5, 7):
        pts = []
        for i in range(9):
            p = 0.085 + 0.00375 * i
            x = (p - 0.10) * d ** (1 / 1.5)
            y = 0.30 + 1.8 * x + 4.0 * x * x + rngs.normal(0, 1e-4)
            pts.append(DataPoint(p, 100000, int(y * 100000), y, y, y - 0.003, y + 0.003))
        datasets[d] = pts
    fit = fit_threshold(datasets, dmin=9)
    assert fit.small_distance_caveat


def test_fit_threshold_degenerate_raises():
    flat = {
        d: [DataPoint(0.08 + 0.01 * i, 1000, 100, 0.1, 0.1, 0.09, 0.11) for i in range(5)]
        for d in (9, 11, 13)
    }
    with pytest.raises(SimError):
        fit_threshold(flat, dmin=9)


def test_build_trellises_modes():
    code = code_mod.builtin("steane")
    assert set(build_trellises(code, "full")) == {"full"}
    assert set(build_trellises(code, "css")) == {"x", "z"}
    level2 = code_mod.builtin("steane_level2")
    assert set(build_trellises(level2, "block")) == {"inner"}
    with pytest.raises(SimError):
        build_trellises(code, "nonsense")
