"""Indefinite inner product on E_1^{n+2} and asymptotic frames.

Signature convention is (+, ..., +, -): the single negative direction is the
last coordinate. A frame is stored as an (n+2) x (n+2) array whose rows are,
in order, x, V_1, ..., V_n, y.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConeError, ReprojectionError

EPS_CAUSAL = 1e-9
EPS_GRAM = 1e-9
PROJECTION_TOL = 1e-13


def metric(dim: int) -> np.ndarray:
    """Diagonal of the metric, ``(1, ..., 1, -1)``."""
    sig = np.ones(dim)
    sig[-1] = -1.0
    return sig


def _as_vector(v, name="vector") -> np.ndarray:
    arr = np.asarray(getattr(v, "components", v), dtype=float)
    if arr.ndim != 1:
        raise ConeError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 3:
        raise ConeError(f"{name} must have at least 3 components, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ConeError(f"{name} has non-finite components")
    return arr


@dataclass(frozen=True)
class LorentzVector:
    """A point or direction in E_1^{n+2}."""

    components: np.ndarray

    def __post_init__(self):
        arr = _as_vector(self.components, "LorentzVector")
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)

    @property
    def dim(self) -> int:
        return self.components.size

    def inner(self, other) -> float:
        return lorentz_inner(self, other)

    def causal_class(self, eps: float = EPS_CAUSAL) -> "CausalClass":
        return causal_class(self, eps)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)


def lorentz_inner(u, v) -> float:
    """Return sum_{i<=n+1} u_i v_i - u_{n+2} v_{n+2}."""
    a = _as_vector(u, "u")
    b = _as_vector(v, "v")
    if a.size != b.size:
        raise ConeError(f"dimension mismatch: {a.size} vs {b.size}")
    return float(np.dot(a[:-1], b[:-1]) - a[-1] * b[-1])


def inner_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise inner products of two (..., dim) arrays, no validation."""
    return np.einsum("...i,...i->...", a[..., :-1], b[..., :-1]) - a[..., -1] * b[..., -1]


class CausalClass(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    NULL = "null"
    ZERO = "zero"


def causal_class(v, eps: float = EPS_CAUSAL) -> CausalClass:
    """Classify ``v``; the threshold on <v,v> is relative to max|v_i|^2."""
    if eps <= 0:
        raise ConeError("classification tolerance must be positive")
    arr = _as_vector(v)
    scale = float(np.max(np.abs(arr)))
    if scale < eps:
        return CausalClass.ZERO
    q = lorentz_inner(arr, arr)
    if abs(q) < eps * scale**2:
        return CausalClass.NULL
    return CausalClass.SPACELIKE if q > 0 else CausalClass.TIMELIKE


def gram_target(n: int) -> np.ndarray:
    """Target Gram matrix in the ordering (x, V_1..V_n, y)."""
    m = n + 2
    target = np.zeros((m, m))
    target[0, m - 1] = target[m - 1, 0] = 1.0
    for i in range(1, n + 1):
        target[i, i] = 1.0
    return target


@dataclass(frozen=True)
class AsymptoticFrame:
    """Frame {x, V_1..V_n, y} at one parameter value.

    ``matrix`` holds the frame vectors as rows. Validity against the Gram
    conditions is checked by :func:`gram_residual`, not on construction, so
    that drifted frames can be represented and repaired.
    """

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 3:
            raise ConeError(f"frame matrix must be square with size >= 3, got {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ConeError("frame has non-finite components")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_vectors(cls, x, v, y) -> "AsymptoticFrame":
        rows = [_as_vector(x, "x"), *[_as_vector(vi, "V") for vi in v], _as_vector(y, "y")]
        if len({r.size for r in rows}) != 1:
            raise ConeError("frame vectors have different dimensions")
        if len(rows) != rows[0].size:
            raise ConeError(
                f"a frame in dimension {rows[0].size} needs {rows[0].size - 2} spacelike vectors"
            )
        return cls(np.vstack(rows))

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 2

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def x(self) -> np.ndarray:
        return self.matrix[0]

    @property
    def v(self) -> list[np.ndarray]:
        return [self.matrix[i] for i in range(1, self.n + 1)]

    @property
    def y(self) -> np.ndarray:
        return self.matrix[-1]

    def transformed(self, linear_map: np.ndarray) -> "AsymptoticFrame":
        """Apply a linear map to every frame vector."""
        return AsymptoticFrame(self.matrix @ np.asarray(linear_map, dtype=float).T)


def canonical_frame(n: int) -> AsymptoticFrame:
    if n < 1:
        raise ConeError(f"n must be >= 1, got {n}")
    m = n + 2
    mat = np.zeros((m, m))
    mat[0, 0] = mat[0, -1] = 1.0
    for i in range(1, n + 1):
        mat[i, i] = 1.0
    mat[-1, 0] = 0.5
    mat[-1, -1] = -0.5
    return AsymptoticFrame(mat)


def gram_matrix(mat: np.ndarray) -> np.ndarray:
    return (mat * metric(mat.shape[-1])) @ mat.T


def gram_residual(frame: AsymptoticFrame) -> tuple[np.ndarray, float]:
    """Entrywise ``G_actual - G_target`` and its max-abs entry."""
    mat = frame.matrix if isinstance(frame, AsymptoticFrame) else np.asarray(frame, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ConeError(f"frame vectors have mismatched dimensions: {mat.shape}")
    resid = gram_matrix(mat) - gram_target(mat.shape[0] - 2)
    return resid, float(np.max(np.abs(resid)))


def is_valid_frame(frame: AsymptoticFrame, tol: float = EPS_GRAM) -> bool:
    if gram_residual(frame)[1] >= tol:
        return False
    # Gram conditions with a nondegenerate target already force independence,
    # the explicit rank test guards against tolerance-sized coincidences.
    return np.linalg.matrix_rank(frame.matrix) == frame.dim


def _project_matrix(mat: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    m = mat.shape[0]
    sig = metric(m)
    target = gram_target(m - 2)
    x = mat
    for it in range(max_iter + 1):
        xj = x * sig
        resid = xj @ x.T - target
        err = float(np.max(np.abs(resid)))
        # aim below tol so that a recomputed residual with different rounding
        # still passes; floor at what double precision can resolve
        floor = 4.0 * np.finfo(float).eps * m * float(np.max(np.abs(x))) ** 2
        if err < max(0.25 * tol, floor):
            return x
        if it == max_iter:
            break
        # Minimum-norm Gauss-Newton step: dX = L X J with L symmetric solving
        # L (X X^T) + (X X^T) L = -resid.
        w, u = np.linalg.eigh(x @ x.T)
        lam = -(u.T @ resid @ u) / (w[:, None] + w[None, :])
        x = x + (u @ lam @ u.T) @ xj
    raise ReprojectionError(f"frame projection did not converge in {max_iter} iterations", err)


def reproject_frame(
    frame: AsymptoticFrame, tol: float = PROJECTION_TOL, max_iter: int = 20
) -> AsymptoticFrame:
    """Pull a slightly drifted frame back onto the Gram-constraint manifold.

    Each Newton iteration takes the minimum Frobenius-norm correction of all
    frame vectors jointly that zeroes the linearized Gram residual. An exact
    frame is returned unchanged.
    """
    _, err = gram_residual(frame)
    if err >= 0.1:
        raise ReprojectionError("frame too far from the constraint manifold to project", err)
    out = _project_matrix(frame.matrix, tol, max_iter)
    if out is frame.matrix:
        return frame
    return AsymptoticFrame(out)


def project_frames(frames: np.ndarray, tol: float = PROJECTION_TOL, max_iter: int = 20) -> np.ndarray:
    """Reproject a stack of frame matrices of shape (N, m, m)."""
    out = np.empty_like(frames)
    for k, mat in enumerate(frames):
        out[k] = _project_matrix(mat, tol, max_iter)
    return out


def lorentz_boost(dim: int, rapidity: float, axis: int = 0) -> np.ndarray:
    """Boost mixing spatial coordinate ``axis`` with the time coordinate."""
    if not 0 <= axis < dim - 1:
        raise ConeError("boost axis must be a spatial coordinate")
    mat = np.eye(dim)
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    mat[axis, axis] = mat[-1, -1] = ch
    mat[axis, -1] = mat[-1, axis] = sh
    return mat
