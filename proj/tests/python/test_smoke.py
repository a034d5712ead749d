import math

import pytest

import tcomb


def test_presets():
    f2 = tcomb.fig2_system()
    assert f2.f0_hz == 1e5
    assert f2.mass_g == 2.3e-16
    f3 = tcomb.fig3_system()
    assert f3.quality_factor == 1e9
    assert f3.qubit_t1_s == 7e-3


def test_closed_form_matches_piecewise():
    spec = tcomb.fig2_system()
    n, t = 10, 3.21e-5
    times = [(2 * j - 1) * t / (2 * n) for j in range(1, n + 1)]
    assert tcomb.chi_cpmg_closed(n, spec, t) == pytest.approx(tcomb.chi_piecewise(times, t, spec), rel=1e-9)


def test_time_comb_peaks():
    spec = tcomb.fig2_system()
    t0 = spec.period
    trace = tcomb.coherence_trace(spec, 100, [40 * t0, 40.5 * t0, 49 * t0])
    assert trace["L_ideal"][0] == pytest.approx(1.0, abs=1e-12)
    assert trace["L_ideal"][1] < 1e-3
    cat = tcomb.peak_catalog(spec, 100)
    assert cat.q_star == 49
    assert cat.missing == [50]
    assert cat.width_closed_form == pytest.approx(4.9e-8, rel=0.01)


def test_lorentzian_and_optimum():
    spec = tcomb.fig3_system()
    spec.temperature_k = 300.0
    n = tcomb.optimal_N_analytic(spec)
    assert n == 126
    chi, err = tcomb.chi_lorentzian(n, spec, (n // 2 - 1) * spec.period)
    assert 0.3 <= chi <= 3.0
    assert err < 1e-6 * chi
    res = tcomb.optimize(spec, list(range(2, 1001, 2)), t1=False, t2=False)
    assert res["n_opt"] == 126
    assert res["eta_universal"] == pytest.approx(2.3e-23)
    assert tcomb.sensitivity_full(spec, 126) >= tcomb.sensitivity_ideal(spec, 126)


def test_estimator_is_deterministic():
    spec = tcomb.fig2_system()
    a = tcomb.estimate_mass_shift(spec, runs=100000, seed=3)
    b = tcomb.estimate_mass_shift(spec, runs=100000, seed=3, workers=2)
    assert a == b
    assert math.isfinite(a["dm_over_m"])
    assert abs(a["dm_over_m"] - 1e-6) < 5 * a["sigma_dm_over_m"]


def test_errors_map_to_python():
    spec = tcomb.fig2_system()
    with pytest.raises(ValueError):
        tcomb.peak_catalog(spec, 7)
    with pytest.raises(tcomb.NoBracketError):
        tcomb.optimize(tcomb.fig3_system(), [2, 4, 6], t1=False, t2=False)
