"""Cone curves given as point samples: presets, arclength, frame recovery (n = 1)."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from . import _numerics as num
from .errors import ConeError, DomainError
from .frenet import Trajectory
from .lorentz import AsymptoticFrame, inner_rows, project_frames
from .profiles import CurvatureProfile, make_profile

ON_CONE_TOL = 1e-6
PRESETS = ("circle", "log_spiral")


@dataclass(frozen=True)
class CurveSamples:
    """Ordered points ``points[k]`` at parameter ``t[k]``.

    When ``arclength`` is set, ``t`` is the induced arclength and is uniform.
    ``source_param`` keeps the original parameter of each sample after
    reparametrization.
    """

    t: np.ndarray
    points: np.ndarray
    arclength: bool = False
    source_param: np.ndarray | None = None

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        pts = np.array(self.points, dtype=float)
        if t.ndim != 1 or pts.ndim != 2 or pts.shape[0] != t.size:
            raise ConeError("points must have shape (N, dim) matching t")
        if pts.shape[1] < 3:
            raise ConeError("points must live in dimension >= 3")
        if t.size < 2 or np.any(np.diff(t) <= 0):
            raise ConeError("parameter samples must be strictly increasing")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(pts))):
            raise ConeError("curve samples contain non-finite values")
        if self.arclength:
            h = num.grid_step(t)
            chord = np.diff(pts, axis=0) / h
            speed = inner_rows(chord, chord)
            bad = np.flatnonzero(np.abs(speed - 1.0) > 1e-4)
            if bad.size:
                raise ConeError(f"samples flagged as arclength are not unit speed near t={t[bad[0]]!r}")
        for arr in (t, pts):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def h(self) -> float:
        return num.grid_step(self.t)


def _check_preset(name, span, params):
    if name not in PRESETS:
        raise ConeError(f"unknown preset {name!r}; choose from {PRESETS}")
    if name == "circle" and not params.get("r", 1.0) > 0:
        raise ConeError("circle radius must be positive")
    if name == "log_spiral" and span[0] <= 0:
        raise DomainError("log spiral is defined for s > 0 only")


def preset_frames(name: str, s, r: float = 1.0) -> np.ndarray:
    """Analytic frames (x, V_1, y) of a preset at arclength values ``s``, shape (N, 3, 3)."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if name == "circle":
        c, sn = np.cos(s / r), np.sin(s / r)
        one, zero = np.ones_like(s), np.zeros_like(s)
        x = np.stack([r * c, r * sn, r * one], -1)
        v1 = np.stack([-sn, c, zero], -1)
        y = np.stack([c, sn, -one], -1) / (2.0 * r)
    elif name == "log_spiral":
        if np.any(s <= 0):
            raise DomainError("log spiral is defined for s > 0 only")
        c, sn = np.cos(np.log(s)), np.sin(np.log(s))
        x = np.stack([s * c, s * sn, s], -1)
        v1 = np.stack([c - sn, sn + c, np.ones_like(s)], -1)
        y = np.stack([sn, -c, -np.ones_like(s)], -1) / s[:, None]
    else:
        raise ConeError(f"unknown preset {name!r}")
    return np.stack([x, v1, y], axis=1)


def preset_frame(name: str, s: float, r: float = 1.0) -> AsymptoticFrame:
    return AsymptoticFrame(preset_frames(name, [s], r)[0])


def preset_kappa(name: str, s, r: float = 1.0) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if name == "circle":
        return np.full(s.shape, -1.0 / (2.0 * r * r))
    if name == "log_spiral":
        return -1.0 / s**2
    raise ConeError(f"unknown preset {name!r}")


def preset_profile(name: str, span, r: float = 1.0) -> CurvatureProfile:
    """Curvature profile of a preset over ``span``."""
    _check_preset(name, span, {"r": r})
    if name == "circle":
        spec = {"kind": "constant", "kappa": [-1.0 / (2.0 * r * r)]}
    else:
        spec = {"kind": "power_law", "kappa": [[-1.0, -2.0]]}
    return make_profile({**spec, "n": 1, "domain": tuple(span), "tau": []})


def preset_curve(name: str, span, h: float, r: float = 1.0) -> CurveSamples:
    """Arclength-parametrized samples of the circle or log-spiral on the cone Q^2."""
    _check_preset(name, span, {"r": r})
    s = num.uniform_grid(*span, h)
    return CurveSamples(s, preset_frames(name, s, r)[:, 0, :], arclength=True)


def preset_trajectory(name: str, span, h: float, r: float = 1.0) -> Trajectory:
    _check_preset(name, span, {"r": r})
    s = num.uniform_grid(*span, h)
    return Trajectory(s, preset_frames(name, s, r), "preset")


def on_cone_residual(c: CurveSamples) -> float:
    return float(np.max(np.abs(inner_rows(c.points, c.points))))


def arclength_reparametrize(
    c: CurveSamples, h: float | None = None, s_start: float = 0.0, regular_tol: float = 1e-12
) -> CurveSamples:
    """Resample ``c`` uniformly in the induced arclength ds^2 = <dx, dx>.

    Arclength is counted from ``s_start`` at the first sample.
    Speeds come from a cubic spline of the points, cumulative arclength from
    composite Simpson, and the inverse map s -> t from cubic interpolation.
    """
    t = c.t
    pts = CubicSpline(t, c.points, axis=0)
    vel = pts(t, 1)
    speed2 = inner_rows(vel, vel)
    bad = np.flatnonzero(speed2 <= regular_tol)
    if bad.size:
        raise ConeError(f"curve is not regular (dx spacelike) at t={t[bad[0]]!r}")
    # Simpson on a half-step grid so every sample interval carries a midpoint
    fine = np.empty(2 * t.size - 1)
    fine[0::2] = t
    fine[1::2] = 0.5 * (t[:-1] + t[1:])
    fvel = pts(fine, 1)
    fspeed2 = inner_rows(fvel, fvel)
    if np.any(fspeed2 <= regular_tol):
        k = int(np.flatnonzero(fspeed2 <= regular_tol)[0])
        raise ConeError(f"curve is not regular (dx spacelike) near t={fine[k]!r}")
    s_fine = cumulative_simpson(np.sqrt(fspeed2), x=fine, initial=0.0)
    s_nodes = s_fine[0::2]
    length = float(s_nodes[-1])
    if h is None:
        count = t.size
        h = length / (count - 1)
    else:
        count = int(math.floor(length / h + 1e-9)) + 1
    s_new = h * np.arange(count)
    t_of_s = CubicSpline(s_nodes, t)
    t_new = np.clip(t_of_s(s_new), t[0], t[-1])
    return CurveSamples(s_start + s_new, pts(t_new), arclength=True, source_param=t_new)


def _recover_raw_n1(c: CurveSamples):
    if c.dim != 3:
        raise ConeError("frame recovery is implemented for curves in E_1^3 (n = 1) only")
    if not c.arclength:
        raise ConeError("frame recovery needs arclength-parametrized samples")
    if c.t.size < 7:
        raise ConeError("frame recovery needs at least 7 samples")
    h = c.h
    x = c.points[2:-2]
    v1 = num.central_d1(c.points, h)
    acc = num.central_d2(c.points, h)
    kappa = -0.5 * inner_rows(acc, acc)
    y = kappa[:, None] * x - acc
    return c.t[2:-2], np.stack([x, v1, y], axis=1), kappa


def recover_frame_n1(c: CurveSamples, reproject: bool = True):
    """Recover (x, V_1, y) and kappa from arclength samples of a curve in Q^2.

    V_1 = x', kappa = -<x'', x''>/2 and y = kappa x - x'' with 4th-order
    central differences; the two samples at each end are dropped.
    Returns ``(Trajectory, kappa)``.
    """
    s, frames, kappa = _recover_raw_n1(c)
    if reproject:
        frames = project_frames(frames)
    traj = Trajectory(s, frames, "ingested")
    if reproject:
        traj.check_invariants(1e-8)
    return traj, kappa


def read_curve_csv(path) -> CurveSamples:
    """Read ``t`` (or ``s``) followed by x_1..x_{n+2} columns.

    A header whose first column is ``s`` marks arclength samples. Lines
    starting with ``#`` are ignored.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if len(rows) < 2:
        raise ConeError(f"{path}: no data rows")
    header, body = rows[0], rows[1:]
    first = header[0].strip().lower()
    if first not in ("t", "s"):
        raise ConeError(f"{path}: first column must be 't' or 's', got {header[0]!r}")
    try:
        data = np.array([[float(v) for v in r] for r in body])
    except ValueError as exc:
        raise ConeError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ConeError(f"{path}: ragged rows")
    return CurveSamples(data[:, 0], data[:, 1:], arclength=first == "s")


def write_curve_csv(path, c: CurveSamples) -> None:
    header = ["s" if c.arclength else "t"] + [f"x_{i}" for i in range(1, c.dim + 1)]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for ti, p in zip(c.t, c.points):
            w.writerow([repr(float(ti))] + [repr(float(v)) for v in p])
