import numpy as np
import pytest

from conehelix.curves import preset_profile, preset_trajectory
from conehelix.errors import ConeError, DegenerateArcError, VanishingDenominatorError
from conehelix.frenet import resample, synthesize
from conehelix.lorentz import CausalClass, lorentz_inner
from conehelix.profiles import constant_profile
from conehelix.slant import (
    HarmonicSeries,
    axis_from_harmonics,
    definition_h1,
    detect_slant_axis,
    direction_error,
    eta2_drift,
    eta_from_axis,
    eta_integral_residual,
    eta_ode_residual,
    eta_ode_series,
    g_consistency_residual,
    g_functions,
    harmonic_ode_integrate,
    harmonic_ode_residual,
    harmonic_recursion_residual,
    harmonic_recursion_series,
    harmonics_from_eta,
    reconstruction_residual,
    unit_axis_identity_residual,
)

AXIS = np.array([0.0, 0.0, 1.0])


@pytest.fixture(scope="module")
def spiral_eta(spiral):
    return eta_from_axis(spiral, AXIS)


@pytest.fixture(scope="module")
def spiral_H(spiral_eta):
    return harmonics_from_eta(spiral_eta)


def random_axis(n, seed):
    return np.random.default_rng(seed).uniform(-1, 1, n + 2)


# ------------------------------------------------------------------ eta


def test_eta_log_spiral(spiral, spiral_eta):
    s = spiral.s
    np.testing.assert_allclose(spiral_eta[1], 1 / s, atol=1e-9)
    np.testing.assert_allclose(spiral_eta[2], -1.0, atol=1e-9)
    np.testing.assert_allclose(spiral_eta[3], -s, atol=1e-9)
    k = int(np.argmin(np.abs(s - 2)))
    np.testing.assert_allclose(spiral_eta.eta[k], [0.5, -1, -2], atol=1e-9)
    assert spiral_eta.axis_norm == -1.0


def test_eta_against_position_at_start(spiral):
    e = eta_from_axis(spiral, spiral.x[0])
    np.testing.assert_allclose(e.eta[0], [1, 0, 0], atol=1e-12)


def test_eta_zero_axis(spiral):
    e = eta_from_axis(spiral, np.zeros(3))
    assert not np.any(e.eta)
    assert e.axis_norm == 0.0


def test_eta_dimension_mismatch(spiral):
    with pytest.raises(ConeError):
        eta_from_axis(spiral, np.zeros(4))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_reconstruction(smooth_trajectories, n):
    t, _ = smooth_trajectories[n]
    e = eta_from_axis(t, random_axis(n, n))
    assert reconstruction_residual(e, t) < 1e-8


def test_eta_ode_log_spiral(spiral_eta, spiral_profile):
    assert max(eta_ode_residual(spiral_eta, spiral_profile, "derived").values()) < 1e-6


@pytest.mark.parametrize("n", [1, 2, 3])
def test_eta_ode_constant_axis(smooth_trajectories, n):
    t, p = smooth_trajectories[n]
    for seed in range(3):
        e = eta_from_axis(t, random_axis(n, 10 * n + seed))
        assert max(eta_ode_residual(e, p, "derived").values()) < 1e-6
        assert max(eta_integral_residual(e, p, "derived").values()) < 1e-5


@pytest.mark.parametrize("seed", range(4))
def test_literal_variant_exceeds_derived(smooth_trajectories, seed):
    t, p = smooth_trajectories[3]
    e = eta_from_axis(t, random_axis(3, 100 + seed))
    s_in, derived = eta_ode_series(e, p, "derived")
    _, literal = eta_ode_series(e, p, "paper_literal")
    tau = np.array([f(s_in) for f in p.tau])
    eta1 = e[1][2:-2]
    # first row: literal form drops -eta_1 and adds tau_1 eta_1
    gap1 = np.abs((1 + tau[0]) * eta1)
    np.testing.assert_allclose(literal[:, 1], gap1, atol=1e-6)
    # middle row i = 2 differs by exactly |tau_2 eta_1|
    gap2 = np.abs(tau[1] * eta1)
    np.testing.assert_allclose(literal[:, 2], gap2, atol=1e-6)
    mask = gap2 > 1e-5
    assert mask.any()
    assert np.all(literal[mask, 2] > derived[mask, 2])
    assert eta_ode_residual(e, p, "paper_literal")["middle"] > eta_ode_residual(e, p, "derived")["middle"]


def test_unknown_variant(spiral_eta, spiral_profile):
    with pytest.raises(ConeError):
        eta_ode_residual(spiral_eta, spiral_profile, "other")


# ------------------------------------------------------------- harmonics


def test_harmonics_log_spiral(spiral, spiral_H):
    s = spiral.s
    np.testing.assert_allclose(spiral_H.H, np.stack([s, np.ones_like(s), -1 / s], -1), atol=1e-6)
    k = int(np.argmin(np.abs(s - 2)))
    np.testing.assert_allclose(spiral_H.H[k], [2, 1, -0.5], atol=1e-9)


def test_harmonics_scale_invariant(spiral, spiral_H):
    H = harmonics_from_eta(eta_from_axis(spiral, -3.5 * AXIS))
    np.testing.assert_allclose(H.H, spiral_H.H, atol=1e-12)


def test_harmonics_vanishing_eta2(spiral):
    e = eta_from_axis(spiral, spiral.x[0])
    with pytest.raises(VanishingDenominatorError) as info:
        harmonics_from_eta(e)
    assert info.value.s == 1.0


def test_harmonic_ode_log_spiral(spiral_profile, spiral_H):
    out = harmonic_ode_integrate(spiral_profile, [1, 1, -1], (1, 3), 1e-3)
    s = out.s
    np.testing.assert_allclose(out.H, np.stack([s, np.ones_like(s), -1 / s], -1), atol=1e-6)
    assert np.max(np.abs(out.H - spiral_H.H)) < 1e-5


def test_harmonic_ode_zero_profile():
    p = constant_profile([0.0, 0.0], [0.0], domain=(0, 2))
    H0 = np.array([0.3, -1.2, 0.7, 0.5])
    out = harmonic_ode_integrate(p, H0, (0, 2), 1e-2)
    s = out.s
    c = H0[3]
    np.testing.assert_allclose(out[4], c, atol=1e-13)
    np.testing.assert_allclose(out[2], H0[1] - c * s, atol=1e-12)
    np.testing.assert_allclose(out[1], H0[0] + H0[1] * s - 0.5 * c * s**2, atol=1e-12)
    np.testing.assert_allclose(out[3], H0[2], atol=1e-13)


def test_harmonic_ode_matches_ratios_n2(slant_n2, slant_n2_profile):
    traj, W = slant_n2
    e = eta_from_axis(traj, W)
    assert eta2_drift(e) < 1e-8
    H = harmonics_from_eta(e)
    out = harmonic_ode_integrate(slant_n2_profile, H.H[0], (1, 3), 1e-3)
    assert np.max(np.abs(out.H - H.H)) < 1e-5
    assert max(harmonic_ode_residual(H, slant_n2_profile, "standard").values()) < 1e-6


def test_diagonal_variant_differs_n3(smooth_trajectories):
    t, p = smooth_trajectories[3]
    H0 = np.array([0.2, 1.0, -0.4, 0.3, 0.5])
    a = harmonic_ode_integrate(p, H0, (0, 2), 1e-3, "standard")
    assert max(harmonic_ode_residual(a, p, "standard").values()) < 1e-6
    assert max(harmonic_ode_residual(a, p, "diagonal").values()) > 1e-3


@pytest.mark.parametrize("seed", range(3))
def test_recursion_corrected_n4(smooth_trajectories, seed):
    t, p = smooth_trajectories[4]
    H = harmonics_from_eta(eta_from_axis(t, random_axis(4, 200 + seed) + np.array([0, 3, 0, 0, 0, 0])))
    report = harmonic_recursion_residual(H, p)
    assert set(report["corrected"]) == {3, 4}
    assert max(report["corrected"].values()) < 1e-4
    assert max(report["literal"].values()) > max(report["corrected"].values())


def test_recursion_zero_series(smooth_trajectories):
    t, p = smooth_trajectories[4]
    H = HarmonicSeries(t.s, np.zeros((len(t), 6)))
    report = harmonic_recursion_residual(H, p)
    assert max(report["corrected"].values()) == 0.0


def test_recursion_sensitivity(smooth_trajectories):
    t, p = smooth_trajectories[4]
    H = harmonics_from_eta(eta_from_axis(t, random_axis(4, 7) + np.array([0, 3, 0, 0, 0, 0])))
    delta = 1e-3
    bumped = H.H.copy()
    bumped[:, 3] += delta  # H_4
    s_in, base = harmonic_recursion_series(H, p)
    _, moved = harmonic_recursion_series(HarmonicSeries(H.s, bumped), p)
    kap = p.kappa[0](s_in)
    tau = [f(s_in) for f in p.tau]
    Hs = H.H[2:-2]
    bracket = Hs[:, 5] - tau[0] * Hs[:, 2] - kap * Hs[:, 0]
    np.testing.assert_allclose(moved[3] - base[3], -delta * bracket / tau[1], atol=1e-9)


def test_recursion_needs_n3(spiral_H, spiral_profile):
    with pytest.raises(ConeError):
        harmonic_recursion_residual(spiral_H, spiral_profile)


def test_definition_h1(slant_n2_profile):
    np.testing.assert_allclose(definition_h1(slant_n2_profile, 2.0), 2.0)


# -------------------------------------------------------------- axis rebuild


def test_axis_from_harmonics_log_spiral(spiral, spiral_H):
    W, drift = axis_from_harmonics(spiral, spiral_H, -1.0)
    assert drift < 1e-6
    np.testing.assert_allclose(W[0], AXIS, atol=1e-6)
    W2, drift2 = axis_from_harmonics(spiral, spiral_H, -2.0)
    np.testing.assert_allclose(W2, 2 * W, atol=1e-12)
    assert drift2 == pytest.approx(2 * drift, abs=1e-12)


def test_axis_from_harmonics_non_slant(smooth_trajectories):
    t, _ = smooth_trajectories[2]
    e = eta_from_axis(t, np.array([0.3, 1.0, -0.2, 0.1]))
    assert eta2_drift(e) > 1e-2
    _, drift = axis_from_harmonics(t, harmonics_from_eta(e), float(e[2][0]))
    assert drift > 1e-2


# ---------------------------------------------------------- unit-axis identity


def test_identity_log_spiral(spiral_H):
    assert np.max(unit_axis_identity_residual(spiral_H, -1.0, -1.0)) < 1e-12


def test_identity_scaling_invariant(spiral):
    lam = 2.5
    H = harmonics_from_eta(eta_from_axis(spiral, lam * AXIS))
    assert np.max(unit_axis_identity_residual(H, -lam, -(lam**2))) < 1e-12


def test_identity_spacelike_no_null_part():
    # H_1 = H_{n+2} = 0, unit spacelike axis
    s = np.linspace(0, 1, 11)
    H = HarmonicSeries(s, np.tile([0.0, 1.0, 2.0, 0.0], (11, 1)))
    eta3 = 2.0 / np.sqrt(5.0)
    assert np.max(unit_axis_identity_residual(H, eta3, 1.0)) < 1e-15


def test_identity_rejects_zero_eta(spiral_H):
    with pytest.raises(ConeError):
        unit_axis_identity_residual(spiral_H, 0.0, 1.0)


# -------------------------------------------------------------- G functions


def test_g_log_spiral(spiral, spiral_H, spiral_profile):
    G = g_functions(spiral_H)
    s = spiral.s
    np.testing.assert_allclose(G.G, np.stack([s, np.ones_like(s), -1 / s], -1), atol=1e-6)
    res = g_consistency_residual(G, spiral_profile)
    assert res["case1"] < 1e-6
    assert res["case5"] < 1e-6
    assert abs(res["c"]) < 1e-9
    assert res["case2"] < 1e-12


def test_g_scale_invariant(spiral_H):
    scaled = HarmonicSeries(spiral_H.s, 4.0 * spiral_H.H)
    np.testing.assert_allclose(g_functions(scaled).G, g_functions(spiral_H).G, atol=1e-14)


def test_g_cases_n2(slant_n2, slant_n2_profile):
    traj, W = slant_n2
    G = g_functions(harmonics_from_eta(eta_from_axis(traj, W)))
    res = g_consistency_residual(G, slant_n2_profile)
    for key in ("case1", "case2", "case3", "case4", "case5"):
        assert res[key] < 1e-6, key


def test_g_nonconstant_h2_reported(smooth_trajectories):
    t, p = smooth_trajectories[2]
    H = harmonic_ode_integrate(p, [0.2, 1.0, -0.3, 0.6], (0, 2), 1e-3)
    assert np.ptp(H[2]) > 1e-2
    res = g_consistency_residual(g_functions(H), p)
    assert res["case1"] > 1e-3


# ---------------------------------------------------------------- detection


def test_detect_log_spiral(spiral):
    d = detect_slant_axis(spiral)
    assert d.is_slant
    cand = d.candidate
    assert direction_error(cand.axis, AXIS) < 1e-6
    assert cand.eta_np1 == pytest.approx(-1.0, abs=1e-9)
    assert d.sigma_min < 1e-8
    assert cand.causal is CausalClass.TIMELIKE


def test_detect_circle_degenerate():
    d = detect_slant_axis(preset_trajectory("circle", (0.0, 2.0), 1e-3))
    assert d.verdict == "degenerate"
    assert d.candidate is None
    assert direction_error(d.null_axis, AXIS) < 1e-9


def test_detect_n2_round_trip(slant_n2):
    traj, W = slant_n2
    d = detect_slant_axis(traj)
    assert d.is_slant
    assert direction_error(d.candidate.axis, W) < 1e-6
    assert lorentz_inner(d.candidate.axis, d.candidate.axis) == pytest.approx(1.0, abs=1e-9)
    assert d.candidate.eta_np1 == pytest.approx(1 / np.sqrt(2), abs=1e-8)
    H = harmonics_from_eta(eta_from_axis(traj, d.candidate.axis))
    assert np.max(unit_axis_identity_residual(H, d.candidate.eta_np1, 1.0)) < 1e-8


def test_detect_none_on_generic_curve(smooth_trajectories):
    t, _ = smooth_trajectories[2]
    assert detect_slant_axis(t).verdict == "none"


def test_detect_invariant_under_resampling(spiral):
    a = detect_slant_axis(spiral)
    b = detect_slant_axis(resample(spiral, spiral.h / 2))
    assert b.verdict == a.verdict
    assert np.max(np.abs(a.candidate.axis - b.candidate.axis)) < 1e-6


def test_detect_short_arc_errors():
    t = preset_trajectory("circle", (0.0, 1e-4), 1e-5)
    with pytest.raises(DegenerateArcError, match="longer span"):
        detect_slant_axis(t)
