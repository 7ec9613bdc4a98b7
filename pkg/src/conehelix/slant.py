"""V_n-slant helices: axis coefficients, detection, harmonic curvatures, G-functions.

Indexing follows the usual labels. For a fixed vector W along a trajectory

    eta_1 = <W, y>,   eta_{i+1} = <W, V_i> (i = 1..n),   eta_{n+2} = <W, x>

so that W = eta_1 x + eta_{n+2} y + sum_i eta_{i+1} V_i. Harmonic curvatures
are the ratios H = (eta_{n+2}, eta_2, ..., eta_{n+1}, eta_1) / eta_2, which
places H_1 on x, H_{i+1} on V_i and H_{n+2} on y. Column ``j`` of every series
array holds the quantity with label ``j + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import _numerics as num
from .errors import ConeError, DegenerateArcError, VanishingDenominatorError
from .frenet import Trajectory
from .lorentz import EPS_CAUSAL, CausalClass, causal_class, inner_rows, lorentz_inner
from .profiles import CurvatureProfile, eval_profile

ETA_VARIANTS = ("derived", "paper_literal")
HARMONIC_VARIANTS = ("standard", "diagonal")
EPS_ZERO = 1e-6


@dataclass(frozen=True)
class EtaSeries:
    s: np.ndarray
    eta: np.ndarray  # (N, n+2), column j is eta_{j+1}
    axis: np.ndarray
    axis_norm: float

    @property
    def n(self) -> int:
        return self.eta.shape[1] - 2

    def __getitem__(self, label: int) -> np.ndarray:
        return self.eta[:, label - 1]


@dataclass(frozen=True)
class HarmonicSeries:
    s: np.ndarray
    H: np.ndarray  # (N, n+2), column j is H_{j+1}
    eta2: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.H.shape[1] - 2

    def __getitem__(self, label: int) -> np.ndarray:
        return self.H[:, label - 1]


@dataclass(frozen=True)
class AxisCandidate:
    axis: np.ndarray
    eta_np1: float
    constancy_residual: float
    sigma_min: float
    causal: CausalClass


@dataclass(frozen=True)
class Detection:
    """Outcome of :func:`detect_slant_axis`.

    ``verdict`` is ``"slant"`` (candidate set), ``"degenerate"`` (a fixed
    vector exists but its constant pairing with V_n is zero) or ``"none"``.
    """

    verdict: str
    sigma_min: float
    tol: float
    candidate: AxisCandidate | None = None
    null_axis: np.ndarray | None = None

    @property
    def is_slant(self) -> bool:
        return self.verdict == "slant"


def _frame_to_labels(n: int) -> np.ndarray:
    """Permutation taking frame-ordered pairings (x, V_1..V_n, y) to eta labels 1..n+2."""
    m = n + 2
    return np.array([m - 1] + list(range(1, n + 1)) + [0])


def _check_grid(a, b):
    if a.shape != b.shape or not np.allclose(a, b, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(a)))):
        raise ConeError("series grids do not align")


# ---------------------------------------------------------------- eta series


def eta_from_axis(t: Trajectory, W) -> EtaSeries:
    W = np.asarray(W, dtype=float)
    if W.shape != (t.n + 2,):
        raise ConeError(f"axis must have {t.n + 2} components, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise ConeError("axis has non-finite components")
    pairings = inner_rows(t.frames, W)  # (N, m) in frame order
    eta = pairings[:, _frame_to_labels(t.n)]
    return EtaSeries(t.s, eta, W, lorentz_inner(W, W) if np.any(W) else 0.0)


def reconstruction_residual(e: EtaSeries, t: Trajectory) -> float:
    """max_s || W - (eta_1 x + eta_{n+2} y + sum eta_{i+1} V_i) ||_inf."""
    _check_grid(e.s, t.s)
    # label order already matches the frame rows: x takes eta_1, y takes eta_{n+2}
    rebuilt = np.einsum("ki,kil->kl", e.eta, t.frames)
    return float(np.max(np.abs(rebuilt - e.axis)))


def eta_rhs(e: EtaSeries, p: CurvatureProfile, variant: str = "derived", s=None, eta=None) -> np.ndarray:
    """Right-hand side of the eta system at the grid (or the given subset)."""
    if variant not in ETA_VARIANTS:
        raise ConeError(f"unknown variant {variant!r}; choose from {ETA_VARIANTS}")
    s = e.s if s is None else s
    eta = e.eta if eta is None else eta
    n = e.n
    kap, tau = eval_profile(p, s)
    if kap.shape[0] != n:
        raise ConeError(f"profile has n={kap.shape[0]} but series has n={n}")
    tau_ext = np.zeros((n + 1,) + np.shape(s))  # tau_0 = tau_n = 0
    tau_ext[1:n] = tau

    def lab(j):
        return eta[:, j - 1]

    out = np.empty_like(eta)
    out[:, 0] = -np.einsum("ik,ki->k", kap, eta[:, 1 : n + 1])
    for i in range(1, n + 1):
        nxt = lab(i + 2) if i < n else 0.0
        if variant == "derived":
            row = kap[i - 1] * lab(n + 2) - tau_ext[i - 1] * lab(i) + tau_ext[i] * nxt
            if i == 1:
                row = kap[0] * lab(n + 2) - lab(1) + tau_ext[1] * nxt
        else:
            row = kap[i - 1] * lab(n + 2) - tau_ext[i - 1] * lab(i) + tau_ext[i] * (nxt + lab(1))
        out[:, i] = row
    out[:, n + 1] = lab(2)
    return out


def eta_ode_series(e: EtaSeries, p: CurvatureProfile, variant: str = "derived") -> tuple[np.ndarray, np.ndarray]:
    """Pointwise |eta' - rhs| on interior samples; returns (s_interior, residuals (N-4, n+2))."""
    if e.s.size < 7:
        raise ConeError("eta ODE residual needs at least 7 samples")
    h = num.grid_step(e.s)
    deriv = num.central_d1(e.eta, h)
    s_in = e.s[2:-2]
    rhs = eta_rhs(e, p, variant, s_in, e.eta[2:-2])
    return s_in, np.abs(deriv - rhs)


def eta_ode_residual(e: EtaSeries, p: CurvatureProfile, variant: str = "derived") -> dict[str, float]:
    _, res = eta_ode_series(e, p, variant)
    out = {f"eta_{j + 1}": float(v) for j, v in enumerate(res.max(axis=0))}
    out["middle"] = float(res[:, 1 : e.n + 1].max())
    return out


def eta_integral_residual(e: EtaSeries, p: CurvatureProfile, variant: str = "derived") -> dict[str, float]:
    """Trapezoid-integrated right-hand sides against eta(s) - eta(s_0)."""
    rhs = eta_rhs(e, p, variant)
    integ = cumulative_trapezoid(rhs, e.s, axis=0, initial=0.0)
    err = np.abs(integ - (e.eta - e.eta[0])).max(axis=0)
    return {f"eta_{j + 1}": float(v) for j, v in enumerate(err)}


# ------------------------------------------------------- harmonic curvatures


def harmonics_from_eta(e: EtaSeries, eps0: float = EPS_ZERO) -> HarmonicSeries:
    eta2 = e[2]
    small = np.flatnonzero(np.abs(eta2) <= eps0)
    if small.size:
        raise VanishingDenominatorError("<V_1, W>", float(e.s[small[0]]))
    n = e.n
    order = [n + 1] + list(range(1, n + 1)) + [0]  # columns eta_{n+2}, eta_2..eta_{n+1}, eta_1
    H = e.eta[:, order] / eta2[:, None]
    H[:, 1] = 1.0
    return HarmonicSeries(e.s, H, eta2.copy())


def harmonic_matrix(kappas, taus, variant: str = "standard") -> np.ndarray:
    """Coefficient matrix B of H' = B H for the harmonic ODE system.

    standard: H_{i+1}' = kappa_i H_1 - tau_{i-1} H_i + tau_i H_{i+2}
    diagonal: H_{i+1}' = kappa_i H_1 - tau_{i-1} H_{i+1} + tau_i H_{i+2}
    for 2 <= i <= n; the H_1, H_2 and H_{n+2} rows are shared.
    """
    if variant not in HARMONIC_VARIANTS:
        raise ConeError(f"unknown variant {variant!r}; choose from {HARMONIC_VARIANTS}")
    kappas = np.asarray(kappas, dtype=float)
    taus = np.asarray(taus, dtype=float)
    n = kappas.shape[0]
    m = n + 2
    b = np.zeros((m, m) + kappas.shape[1:])
    b[0, 1] = 1.0
    b[1, m - 1] = -1.0
    b[1, 0] = kappas[0]
    if n >= 2:
        b[1, 2] = taus[0]
    for i in range(2, n + 1):
        b[i, 0] = kappas[i - 1]
        if variant == "standard":
            b[i, i - 1] = -taus[i - 2]
        else:
            b[i, i] -= taus[i - 2]
        if i <= n - 1:
            b[i, i + 1] = taus[i - 1]
    for i in range(1, n + 1):
        b[m - 1, i] = -kappas[i - 1]
    return b


def harmonic_ode_integrate(
    p: CurvatureProfile, H0, span, h: float = 1e-3, variant: str = "standard"
) -> HarmonicSeries:
    """RK4 integration of the harmonic ODE system; H_2 is not pinned to 1."""
    H0 = np.asarray(H0, dtype=float)
    if H0.shape != (p.n + 2,):
        raise ConeError(f"initial values need {p.n + 2} entries")
    s0, s1 = map(float, span)
    if not p.contains(s0, s1):
        raise ConeError(f"span [{s0}, {s1}] not inside profile domain {p.domain}")
    grid = num.uniform_grid(s0, s1, h)

    def rhs(s, H):
        kap, tau = p.coefficients(s)
        return harmonic_matrix(kap, tau, variant) @ H

    out = np.empty((grid.size, H0.size))
    out[0] = H0
    for k in range(1, grid.size):
        out[k] = num.rk4_step(rhs, grid[k - 1], out[k - 1], h)
    return HarmonicSeries(grid, out)


def harmonic_ode_residual(H: HarmonicSeries, p: CurvatureProfile, variant: str = "standard") -> dict[str, float]:
    """max |H_j' - (B H)_j| on interior samples, per label."""
    h = num.grid_step(H.s)
    deriv = num.central_d1(H.H, h)
    kap, tau = eval_profile(p, H.s[2:-2])
    b = harmonic_matrix(kap, tau, variant)
    rhs = np.einsum("ijk,kj->ki", b, H.H[2:-2])
    err = np.abs(deriv - rhs).max(axis=0)
    return {f"H_{j + 1}": float(v) for j, v in enumerate(err)}


def harmonic_recursion_series(H: HarmonicSeries, p: CurvatureProfile, form: str = "corrected", eps0: float = EPS_ZERO):
    """Signed recursion defects for i = 3..n on interior samples.

    defect_i = H_i - (tau_i H_{i+2} + kappa_i H_1 - H_{i+1}'
                      + H_{i+1} (H_c - tau_1 H_3 - kappa_1 H_1)) / tau_{i-1}

    with H_c = H_{n+2} for ``form="corrected"`` and H_{n-2} for ``"literal"``.
    Returns ``(s_interior, {i: defect})``.
    """
    n = H.n
    if n < 3:
        raise ConeError("harmonic recursion needs n >= 3")
    if form not in ("corrected", "literal"):
        raise ConeError(f"unknown form {form!r}")
    h = num.grid_step(H.s)
    s_in = H.s[2:-2]
    kap, tau = eval_profile(p, s_in)
    Hs = H.H[2:-2]
    dH = num.central_d1(H.H, h)

    def lab(j):
        return Hs[:, j - 1]

    hc = lab(n + 2) if form == "corrected" else lab(n - 2)
    bracket = hc - tau[0] * lab(3) - kap[0] * lab(1)
    out = {}
    for i in range(3, n + 1):
        t_prev = tau[i - 2]
        k = np.flatnonzero(np.abs(t_prev) <= eps0)
        if k.size:
            raise VanishingDenominatorError(f"tau_{i - 1}", float(s_in[k[0]]))
        t_i = tau[i - 1] if i <= n - 1 else 0.0
        value = (t_i * lab(i + 2) + kap[i - 1] * lab(1) - dH[:, i] + lab(i + 1) * bracket) / t_prev
        out[i] = lab(i) - value
    return s_in, out


def harmonic_recursion_residual(H: HarmonicSeries, p: CurvatureProfile, eps0: float = EPS_ZERO) -> dict[str, dict[int, float]]:
    """Max-abs recursion defects for both the corrected and the literal form."""
    report = {}
    for form in ("corrected", "literal"):
        _, series = harmonic_recursion_series(H, p, form, eps0)
        report[form] = {i: float(np.max(np.abs(v))) for i, v in series.items()}
    return report


def definition_h1(p: CurvatureProfile, s) -> np.ndarray:
    """tau_1 / kappa_2, the n = 2 special value; diagnostic only."""
    if p.n < 2:
        raise ConeError("tau_1 / kappa_2 needs n >= 2")
    kap, tau = eval_profile(p, s)
    return tau[0] / kap[1]


def axis_from_harmonics(t: Trajectory, H: HarmonicSeries, eta2: float) -> tuple[np.ndarray, float]:
    """W(s) = eta_2 (H_{n+2} x + H_1 y + sum H_{i+1} V_i) and its drift from W(s_0)."""
    _check_grid(t.s, H.s)
    if t.n != H.n:
        raise ConeError("trajectory and harmonic series disagree on n")
    coeff = np.concatenate([H.H[:, -1:], H.H[:, 1:-1], H.H[:, :1]], axis=1)  # frame order
    W = eta2 * np.einsum("ki,kil->kl", coeff, t.frames)
    drift = float(np.max(np.abs(W - W[0])))
    return W, drift


def unit_axis_identity_residual(H: HarmonicSeries, eta_np1: float, axis_norm: float) -> np.ndarray:
    """|<W,W> H_{n+1}^2 / eta_{n+1}^2 - 2 H_1 H_{n+2} - sum_i H_{i+1}^2| pointwise.

    ``eta_np1`` may be the constant of a slant helix or a per-sample series.
    """
    if np.any(np.abs(eta_np1) <= EPS_CAUSAL):
        raise ConeError("eta_{n+1} must be nonzero")
    n = H.n
    lhs = axis_norm * H[n + 1] ** 2 / eta_np1**2
    return np.abs(lhs - 2.0 * H[1] * H[n + 2] - np.sum(H.H[:, 1 : n + 1] ** 2, axis=1))


# ------------------------------------------------------------------- G-functions


@dataclass(frozen=True)
class GSeries:
    s: np.ndarray
    G: np.ndarray  # (N, n+2), column j is G_{j+1}

    @property
    def n(self) -> int:
        return self.G.shape[1] - 2

    def __getitem__(self, label: int) -> np.ndarray:
        return self.G[:, label - 1]


def g_functions(H: HarmonicSeries, eps0: float = EPS_ZERO) -> GSeries:
    h2 = H[2]
    k = np.flatnonzero(np.abs(h2) <= eps0)
    if k.size:
        raise VanishingDenominatorError("H_2", float(H.s[k[0]]))
    return GSeries(H.s, H.H / h2[:, None])


def g_consistency_residual(G: GSeries, p: CurvatureProfile) -> dict[str, float]:
    """Residuals of the G-function cases on interior samples.

    case1  |G_1' - 1| (needs constant H_2), also fits c in G_1 = s + c
    case2  |G_2 - 1|
    case3  |tau_1 G_3 - G_{n+2} + kappa_1 G_1|
    case4  |G_{i+1}' - (kappa_i G_1 - tau_{i-1} G_i + tau_i G_{i+2})|, 2 <= i <= n
    case5  |G_{n+2}' + sum_i kappa_i G_{i+1}|; ``case5_literal`` pairs kappa_i with G_i
    """
    n = G.n
    h = num.grid_step(G.s)
    s_in = G.s[2:-2]
    kap, tau = eval_profile(p, s_in)
    Gi = G.G[2:-2]
    dG = num.central_d1(G.G, h)
    tau_ext = np.zeros((n + 1, s_in.size))
    tau_ext[1:n] = tau

    def lab(j):
        return Gi[:, j - 1]

    out = {
        "case1": float(np.max(np.abs(dG[:, 0] - 1.0))),
        "c": float(np.mean(G[1] - G.s)),
        "case2": float(np.max(np.abs(G[2] - 1.0))),
        "case3": float(np.max(np.abs(tau_ext[1] * lab(3) - lab(n + 2) + kap[0] * lab(1)))),
    }
    if n >= 2:
        worst = 0.0
        for i in range(2, n + 1):
            nxt = lab(i + 2) if i < n else 0.0
            rhs = kap[i - 1] * lab(1) - tau_ext[i - 1] * lab(i) + tau_ext[i] * nxt
            worst = max(worst, float(np.max(np.abs(dG[:, i] - rhs))))
        out["case4"] = worst
    derived = sum(kap[i - 1] * lab(i + 1) for i in range(1, n + 1))
    literal = kap[0] + sum(kap[i - 1] * lab(i) for i in range(2, n + 1))
    out["case5"] = float(np.max(np.abs(dG[:, n + 1] + derived)))
    out["case5_literal"] = float(np.max(np.abs(dG[:, n + 1] + literal)))
    return out


# ------------------------------------------------------------------ detection


def default_detection_tol(rows: int) -> float:
    return 1e-8 * np.sqrt(rows)


def _normalize_axis(w: np.ndarray, c: float, eps_c: float):
    scale = float(np.max(np.abs(w)))
    q = lorentz_inner(w, w)
    factor = np.sqrt(abs(q)) if abs(q) > eps_c * scale**2 else scale
    w, c = w / factor, c / factor
    lead = np.flatnonzero(np.abs(w) > 1e-12)[0]
    if w[lead] < 0:
        w, c = -w, -c
    return w, c


def detect_slant_axis(t: Trajectory, tol: float | None = None, eps_c: float = EPS_CAUSAL) -> Detection:
    """Search for W, c with <V_n(s_k), W> = c at every sample.

    The homogeneous system [J V_n(s_k), -1] (W, c) = 0 is solved by SVD; the
    right singular vector of the smallest singular value is the candidate.
    """
    n = t.n
    m = n + 2
    if len(t) < n + 4:
        raise ConeError(f"detection needs at least {n + 4} samples")
    vn = t.v(n)
    rows = np.hstack([vn[:, :-1], -vn[:, -1:], -np.ones((len(t), 1))])
    tol = default_detection_tol(len(t)) if tol is None else tol
    _, sv, vt = np.linalg.svd(rows, full_matrices=False)
    sigma_min = float(sv[-1])
    null_dim = int(np.sum(sv < tol))
    if null_dim >= 2:
        raise DegenerateArcError(
            f"{null_dim} independent axis candidates (singular values {sv[-null_dim:]}); "
            "the arc is too short to determine an axis, use a longer span"
        )
    if null_dim == 0:
        return Detection("none", sigma_min, tol)
    z = vt[-1]
    w, c = _normalize_axis(z[:m], float(z[m]), eps_c)
    pairing = inner_rows(vn, w)
    if abs(c) <= eps_c:
        return Detection("degenerate", sigma_min, tol, null_axis=w)
    cand = AxisCandidate(
        axis=w,
        eta_np1=float(np.mean(pairing)),
        constancy_residual=float(np.std(pairing)),
        sigma_min=sigma_min,
        causal=causal_class(w, eps_c),
    )
    return Detection("slant", sigma_min, tol, candidate=cand)


def direction_error(a, b) -> float:
    """Distance between the unit directions of a and b, up to sign."""
    a = np.asarray(a, dtype=float) / np.linalg.norm(a)
    b = np.asarray(b, dtype=float) / np.linalg.norm(b)
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


def eta2_drift(e: EtaSeries) -> float:
    return float(np.max(e[2]) - np.min(e[2]))
