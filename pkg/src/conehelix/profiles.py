"""Cone curvature functions kappa_1..kappa_n, tau_1..tau_{n-1} of arclength."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConeError, DomainError


class ProfileKind(enum.Enum):
    CONSTANT = "constant"
    POLYNOMIAL = "polynomial"
    SINUSOID = "sinusoid"
    POWER_LAW = "power_law"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class CurvatureProfile:
    n: int
    kappa: tuple[Callable[[np.ndarray], np.ndarray], ...]
    tau: tuple[Callable[[np.ndarray], np.ndarray], ...]
    domain: tuple[float, float]
    kind: ProfileKind
    params: Mapping = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ConeError(f"n must be >= 1, got {self.n}")
        if len(self.kappa) != self.n or len(self.tau) != self.n - 1:
            raise ConeError(
                f"profile with n={self.n} needs {self.n} kappa and {self.n - 1} tau functions"
            )
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConeError(f"empty or invalid domain {self.domain}")

    def contains(self, s0: float, s1: float | None = None) -> bool:
        lo, hi = self.domain
        s1 = s0 if s1 is None else s1
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        return lo - slack <= s0 and s1 <= hi + slack

    def coefficients(self, s):
        """Unchecked evaluation; returns (kappas, taus) arrays stacked on axis 0."""
        s = np.asarray(s, dtype=float)
        kap = np.array([np.broadcast_to(f(s), s.shape) for f in self.kappa], dtype=float)
        tau = np.array([np.broadcast_to(f(s), s.shape) for f in self.tau], dtype=float).reshape(
            (self.n - 1,) + s.shape
        )
        return kap, tau


def eval_profile(p: CurvatureProfile, s):
    """Evaluate all curvature functions at ``s`` (scalar or array).

    Raises DomainError outside the profile domain; no extrapolation.
    """
    arr = np.asarray(s, dtype=float)
    if arr.size and not p.contains(float(np.min(arr)), float(np.max(arr))):
        raise DomainError(f"s outside profile domain {p.domain}")
    kap, tau = p.coefficients(arr)
    if not (np.all(np.isfinite(kap)) and np.all(np.isfinite(tau))):
        raise DomainError("profile evaluates to a non-finite value")
    return kap, tau


def _constant(c):
    c = float(c)
    return lambda s: np.full(np.shape(s), c)


def _polynomial(coeffs):
    # ascending order: c0 + c1 s + c2 s^2 + ...
    poly = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    return lambda s: poly(np.asarray(s, dtype=float))


def _sinusoid(amplitude, frequency=1.0, phase=0.0, offset=0.0):
    a, w, ph, b = map(float, (amplitude, frequency, phase, offset))
    return lambda s: a * np.sin(w * np.asarray(s, dtype=float) + ph) + b


def _power_law(coefficient, exponent):
    a, p = float(coefficient), float(exponent)
    return lambda s: a * np.power(np.asarray(s, dtype=float), p)


def _check_power_law(params, domain):
    a, p = params
    lo, _ = domain
    if p < 0 and lo <= 0:
        raise DomainError(f"power law s^{p} blows up on a domain reaching s={lo}")
    if float(p) != int(p) and lo < 0:
        raise DomainError(f"fractional power s^{p} undefined for negative s")


def _as_list(v):
    if isinstance(v, (int, float)):
        return [v]
    return list(v)


def make_profile(spec: Mapping) -> CurvatureProfile:
    """Build a profile from a structured description.

    ``spec`` keys: ``kind``, ``n``, ``domain`` (pair), ``kappa`` and ``tau``
    (lists with one parameter entry per function). Entry format by kind:

    constant     a number
    polynomial   ascending coefficients ``[c0, c1, ...]``
    sinusoid     ``[amplitude, frequency, phase, offset]`` (trailing ones optional)
    power_law    ``[a, p]`` meaning ``a * s**p``
    sampled      value array on the shared ``grid`` key
    """
    try:
        kind = ProfileKind(str(spec["kind"]).lower().replace("-", "_"))
        n = int(spec["n"])
        lo, hi = (float(v) for v in spec["domain"])
    except KeyError as exc:
        raise ConeError(f"profile spec missing key {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ConeError(f"bad profile spec: {exc}") from None
    if n < 1:
        raise ConeError(f"n must be >= 1, got {n}")
    if not lo < hi:
        raise ConeError(f"empty domain [{lo}, {hi}]")
    kappa_params = list(spec.get("kappa", []))
    tau_params = list(spec.get("tau", []))
    if len(kappa_params) != n or len(tau_params) != n - 1:
        raise ConeError(f"n={n} needs {n} kappa entries and {n - 1} tau entries")

    if kind is ProfileKind.SAMPLED:
        grid = np.asarray(spec["grid"], dtype=float)
        if grid.ndim != 1 or grid.size < 3 or np.any(np.diff(grid) <= 0):
            raise ConeError("sample grid must be strictly increasing with >= 3 points")
        if grid[0] > lo or grid[-1] < hi:
            raise ConeError("sample grid does not cover the domain")

        def build(values):
            vals = np.asarray(values, dtype=float)
            if vals.shape != grid.shape or not np.all(np.isfinite(vals)):
                raise ConeError("sampled values must be finite and match the grid")
            return CubicSpline(grid, vals, bc_type="natural", extrapolate=False)

    elif kind is ProfileKind.CONSTANT:
        def build(c):
            return _constant(c)

    elif kind is ProfileKind.POLYNOMIAL:
        def build(coeffs):
            return _polynomial(_as_list(coeffs))

    elif kind is ProfileKind.SINUSOID:
        def build(params):
            return _sinusoid(*_as_list(params))

    else:
        def build(params):
            params = _as_list(params)
            if len(params) != 2:
                raise ConeError("power law needs [coefficient, exponent]")
            _check_power_law(params, (lo, hi))
            return _power_law(*params)

    profile = CurvatureProfile(
        n=n,
        kappa=tuple(build(k) for k in kappa_params),
        tau=tuple(build(t) for t in tau_params),
        domain=(lo, hi),
        kind=kind,
        params=dict(spec),
    )
    probe = np.linspace(lo, hi, 257)
    kap, tau = profile.coefficients(probe)
    if not (np.all(np.isfinite(kap)) and np.all(np.isfinite(tau))):
        raise DomainError(f"profile is not finite on its domain [{lo}, {hi}]")
    return profile


def constant_profile(kappa: Sequence[float], tau: Sequence[float] = (), domain=(-1e6, 1e6)):
    return make_profile(
        {"kind": "constant", "n": len(kappa), "domain": domain, "kappa": list(kappa), "tau": list(tau)}
    )


def sampled_profile(grid, kappa: Sequence, tau: Sequence = ()):
    grid = np.asarray(grid, dtype=float)
    return make_profile(
        {
            "kind": "sampled",
            "n": len(kappa),
            "domain": (grid[0], grid[-1]),
            "grid": grid,
            "kappa": list(kappa),
            "tau": list(tau),
        }
    )
