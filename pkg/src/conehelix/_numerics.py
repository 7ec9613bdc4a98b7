"""Finite-difference stencils and a fixed-step RK4 driver."""

import numpy as np

from .errors import ConeError


def central_d1(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative along axis 0 at samples 2..N-3."""
    f = np.asarray(f, dtype=float)
    if f.shape[0] < 5:
        raise ConeError("need at least 5 samples for a 4th-order stencil")
    return (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)


def central_d2(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order second derivative along axis 0 at samples 2..N-3."""
    f = np.asarray(f, dtype=float)
    if f.shape[0] < 5:
        raise ConeError("need at least 5 samples for a 4th-order stencil")
    return (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / (12.0 * h * h)


def uniform_grid(s0: float, s1: float, h: float) -> np.ndarray:
    if not h > 0:
        raise ConeError(f"step must be positive, got {h}")
    if not s1 > s0:
        raise ConeError(f"span must be positive, got [{s0}, {s1}]")
    steps = round((s1 - s0) / h)
    if steps < 1 or abs(steps * h - (s1 - s0)) > 1e-9 * (s1 - s0):
        raise ConeError(f"span [{s0}, {s1}] is not a whole number of steps h={h}")
    return s0 + h * np.arange(steps + 1)


def grid_step(s: np.ndarray) -> float:
    """Spacing of a uniform grid; raises if the grid is not uniform."""
    s = np.asarray(s, dtype=float)
    if s.size < 2:
        raise ConeError("grid needs at least two samples")
    d = np.diff(s)
    h = (s[-1] - s[0]) / (s.size - 1)
    if h <= 0 or np.max(np.abs(d - h)) > 1e-9 * h:
        raise ConeError("grid is not uniform and increasing")
    return float(h)


def rk4_step(rhs, s: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(s, y)
    k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(s + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
