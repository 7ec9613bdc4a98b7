"""Frenet system of the asymptotic frame: synthesis, residuals, interpolation.

Along an arclength-parametrized cone curve the frame X(s), rows
(x, V_1..V_n, y), satisfies X' = A(s) X with

    x'   = V_1
    V_1' = kappa_1 x - y + tau_1 V_2
    V_i' = kappa_i x - tau_{i-1} V_{i-1} + tau_i V_{i+1}     (tau_n = 0)
    y'   = -sum_i kappa_i V_i
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from . import _numerics as num
from .errors import ConeError, DomainError, NonFiniteStateError, ReprojectionError
from .lorentz import (
    AsymptoticFrame,
    PROJECTION_TOL,
    _project_matrix,
    gram_residual,
    gram_target,
    gram_matrix,
    inner_rows,
    metric,
    reproject_frame,
)
from .profiles import CurvatureProfile, eval_profile

DEFAULT_STEP = 1e-3
PROVENANCES = ("synthesized", "preset", "ingested")


def frenet_matrix(kappas, taus) -> np.ndarray:
    """Coefficient matrix A with X' = A X in the row ordering (x, V_1..V_n, y)."""
    kappas = np.asarray(kappas, dtype=float)
    taus = np.asarray(taus, dtype=float)
    n = kappas.shape[0]
    m = n + 2
    a = np.zeros((m, m) + kappas.shape[1:])
    a[0, 1] = 1.0
    a[1, m - 1] = -1.0
    for i in range(1, n + 1):
        a[i, 0] = kappas[i - 1]
        if i >= 2:
            a[i, i - 1] = -taus[i - 2]
        if i <= n - 1:
            a[i, i + 1] = taus[i - 1]
        a[m - 1, i] = -kappas[i - 1]
    return a


def _frenet_rhs(kappas, taus, frames):
    """Right-hand side of the Frenet system evaluated on a stack of frames (N, m, m)."""
    a = frenet_matrix(kappas, taus)
    return np.einsum("ijk,kjl->kil", a, frames) if a.ndim == 3 else a @ frames


@dataclass(frozen=True)
class Trajectory:
    """Ordered frames on a uniform arclength grid.

    ``frames[k]`` holds the rows (x, V_1..V_n, y) at ``s[k]``.
    """

    s: np.ndarray
    frames: np.ndarray
    provenance: str = "synthesized"
    pre_projection_drift: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        frames = np.array(self.frames, dtype=float)
        if frames.ndim != 3 or frames.shape[1] != frames.shape[2] or frames.shape[0] != s.size:
            raise ConeError(f"frames must have shape (N, m, m) matching s, got {frames.shape}")
        if self.provenance not in PROVENANCES:
            raise ConeError(f"unknown provenance {self.provenance!r}")
        num.grid_step(s)
        s.setflags(write=False)
        frames.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "frames", frames)

    @property
    def n(self) -> int:
        return self.frames.shape[1] - 2

    @property
    def h(self) -> float:
        return num.grid_step(self.s)

    def __len__(self):
        return self.s.size

    @property
    def x(self) -> np.ndarray:
        return self.frames[:, 0, :]

    @property
    def y(self) -> np.ndarray:
        return self.frames[:, -1, :]

    def v(self, i: int) -> np.ndarray:
        """Samples of V_i, 1-based like the frame labels."""
        if not 1 <= i <= self.n:
            raise IndexError(f"V_{i} does not exist for n={self.n}")
        return self.frames[:, i, :]

    def frame(self, k: int) -> AsymptoticFrame:
        return AsymptoticFrame(self.frames[k])

    def max_gram_residual(self) -> float:
        g = np.einsum("kil,l,kjl->kij", self.frames, metric(self.frames.shape[1]), self.frames)
        return float(np.max(np.abs(g - gram_target(self.n))))

    def max_on_cone_residual(self) -> float:
        return float(np.max(np.abs(inner_rows(self.x, self.x))))

    def unit_speed_residual(self) -> float:
        """max |<x',x'> - 1| with x' from 4th-order central differences."""
        dx = num.central_d1(self.x, self.h)
        return float(np.max(np.abs(inner_rows(dx, dx) - 1.0)))

    def check_invariants(self, tol: float = 1e-8) -> None:
        if self.max_gram_residual() >= tol:
            raise ConeError(f"trajectory frames violate the Gram conditions ({self.max_gram_residual():.3e})")
        if self.max_on_cone_residual() >= tol:
            raise ConeError("trajectory leaves the lightlike cone")

    @cached_property
    def _spline(self) -> CubicSpline:
        return CubicSpline(self.s, self.frames, axis=0)


def synthesize(
    p: CurvatureProfile,
    f0: AsymptoticFrame,
    span: tuple[float, float],
    h: float = DEFAULT_STEP,
    *,
    project: bool = True,
) -> Trajectory:
    """Integrate the Frenet system with RK4 and per-step frame reprojection."""
    s0, s1 = map(float, span)
    if f0.n != p.n:
        raise ConeError(f"frame has n={f0.n} but profile has n={p.n}")
    if gram_residual(f0)[1] >= 1e-10:
        raise ConeError("initial frame violates the Gram conditions")
    if not p.contains(s0, s1):
        raise DomainError(f"span [{s0}, {s1}] not inside profile domain {p.domain}")
    grid = num.uniform_grid(s0, s1, h)

    def rhs(s, frame):
        kap, tau = p.coefficients(s)
        if not (np.all(np.isfinite(kap)) and np.all(np.isfinite(tau))):
            raise NonFiniteStateError(float(s))
        return frenet_matrix(kap, tau) @ frame

    target = gram_target(p.n)
    frames = np.empty((grid.size,) + f0.matrix.shape)
    drift = np.zeros(grid.size)
    frames[0] = f0.matrix
    state = f0.matrix
    for k in range(1, grid.size):
        state = num.rk4_step(rhs, grid[k - 1], state, h)
        if not np.all(np.isfinite(state)):
            raise NonFiniteStateError(float(grid[k]))
        drift[k] = float(np.max(np.abs(gram_matrix(state) - target)))
        if project:
            if drift[k] >= 0.1:
                raise ReprojectionError(f"frame drifted too far at s={grid[k]!r}", drift[k])
            state = _project_matrix(state, PROJECTION_TOL, 20)
        frames[k] = state
    traj = Trajectory(grid, frames, "synthesized", pre_projection_drift=drift)
    if project:
        traj.check_invariants(1e-8)
    return traj


def frenet_residual(t: Trajectory, p: CurvatureProfile) -> dict[str, float]:
    """Max-abs deviation of finite-difference frame derivatives from the Frenet rows."""
    if len(t) < 7:
        raise ConeError("frenet_residual needs at least 7 samples")
    if t.n != p.n:
        raise ConeError(f"trajectory has n={t.n} but profile has n={p.n}")
    s_in = t.s[2:-2]
    kap, tau = eval_profile(p, s_in)
    deriv = num.central_d1(t.frames, t.h)
    expected = _frenet_rhs(kap, tau, t.frames[2:-2])
    err = np.max(np.abs(deriv - expected), axis=(0, 2))
    names = ["x"] + [f"V_{i}" for i in range(1, t.n + 1)] + ["y"]
    return dict(zip(names, map(float, err)))


def sample_at(t: Trajectory, s: float) -> AsymptoticFrame:
    """Frame at ``s`` by cubic interpolation plus reprojection; exact on the grid."""
    s = float(s)
    slack = 1e-12 * max(1.0, abs(t.s[0]), abs(t.s[-1]))
    if not t.s[0] - slack <= s <= t.s[-1] + slack:
        raise DomainError(f"s={s} outside trajectory span [{t.s[0]}, {t.s[-1]}]")
    k = int(np.searchsorted(t.s, s))
    for j in (k - 1, k):
        if 0 <= j < len(t) and t.s[j] == s:
            return t.frame(j)
    return reproject_frame(AsymptoticFrame(t._spline(s)))


def resample(t: Trajectory, h: float) -> Trajectory:
    """Trajectory on a new uniform grid over the same span via :func:`sample_at`."""
    grid = num.uniform_grid(t.s[0], t.s[-1], h)
    frames = np.array([sample_at(t, si).matrix for si in grid])
    return Trajectory(grid, frames, t.provenance)
