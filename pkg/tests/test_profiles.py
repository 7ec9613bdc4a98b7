import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conehelix.errors import ConeError, DomainError
from conehelix.profiles import (
    ProfileKind,
    constant_profile,
    eval_profile,
    make_profile,
    sampled_profile,
)


def test_constant_n1():
    p = make_profile({"kind": "constant", "n": 1, "domain": (0, 5), "kappa": [-0.5], "tau": []})
    kap, tau = eval_profile(p, 3.7)
    assert kap.tolist() == [-0.5]
    assert tau.shape == (0,)


def test_constant_n3():
    p = constant_profile([1, 2, 3], [0.5, 0.7])
    kap, tau = eval_profile(p, 10.0)
    assert kap.tolist() == [1, 2, 3]
    assert tau.tolist() == [0.5, 0.7]


@pytest.mark.parametrize("s, expected", [(1.0, -1.0), (2.0, -0.25)])
def test_power_law(s, expected):
    p = make_profile({"kind": "power_law", "n": 1, "domain": (0.5, 4), "kappa": [[-1, -2]], "tau": []})
    assert eval_profile(p, s)[0][0] == expected
    assert p.kind is ProfileKind.POWER_LAW


def test_sinusoid_peak():
    p = make_profile({"kind": "sinusoid", "n": 1, "domain": (0, 4), "kappa": [[1, 1, 0, 0]], "tau": []})
    assert abs(eval_profile(p, math.pi / 2)[0][0] - 1.0) < 1e-15


def test_polynomial_ascending():
    p = make_profile({"kind": "polynomial", "n": 2, "domain": (-1, 1), "kappa": [[1, 2, 3], [0]], "tau": [[0, 1]]})
    kap, tau = eval_profile(p, 0.5)
    assert kap[0] == 1 + 2 * 0.5 + 3 * 0.25
    assert tau[0] == 0.5


@given(st.floats(0.5, 4.0), st.floats(-3, 3), st.floats(0.1, 3), st.floats(-3, 3), st.floats(-2, 2))
def test_closed_form_agreement(s, a, w, ph, b):
    p = make_profile(
        {
            "kind": "sinusoid",
            "n": 2,
            "domain": (0.5, 4),
            "kappa": [[a, w, ph, b], [1]],
            "tau": [[b, w]],
        }
    )
    kap, tau = eval_profile(p, s)
    ref = a * math.sin(w * s + ph) + b
    assert kap[0] == pytest.approx(ref, rel=1e-15, abs=1e-15)
    assert tau[0] == pytest.approx(b * math.sin(w * s), rel=1e-15, abs=1e-15)


def test_sampled_reproduces_grid():
    grid = [1.0, 1.5, 2.0]
    vals = [-1.0, -4 / 9, -0.25]
    p = sampled_profile(grid, [vals])
    for g, v in zip(grid, vals):
        assert eval_profile(p, g)[0][0] == v


def _sampled_error(h):
    grid = np.arange(0.0, 2.0 + h / 2, h)
    p = sampled_profile(grid, [np.sin(3 * grid)])
    fine = np.linspace(0.25, 1.75, 2001)
    return np.max(np.abs(eval_profile(p, fine)[0][0] - np.sin(3 * fine)))


def test_sampled_fourth_order():
    # interior error, away from the natural end conditions
    e1, e2 = _sampled_error(0.1), _sampled_error(0.05)
    assert e1 / e2 >= 8.0


def test_outside_domain():
    p = constant_profile([1.0], domain=(0, 1))
    with pytest.raises(DomainError):
        eval_profile(p, 1.5)
    with pytest.raises(DomainError):
        eval_profile(p, np.array([0.5, -0.1]))


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "constant", "n": 0, "domain": (0, 1), "kappa": [], "tau": []},
        {"kind": "constant", "n": 1, "domain": (1, 1), "kappa": [1], "tau": []},
        {"kind": "constant", "n": 2, "domain": (0, 1), "kappa": [1], "tau": []},
        {"kind": "sampled", "n": 1, "domain": (0, 1), "grid": [0, 0.5, 0.4, 1], "kappa": [[1, 1, 1, 1]], "tau": []},
        {"kind": "sampled", "n": 1, "domain": (0, 2), "grid": [0, 0.5, 1], "kappa": [[1, 1, 1]], "tau": []},
        {"kind": "bogus", "n": 1, "domain": (0, 1), "kappa": [1], "tau": []},
    ],
)
def test_bad_specs(spec):
    with pytest.raises(ConeError):
        make_profile(spec)


def test_power_law_blowup_rejected():
    with pytest.raises(DomainError):
        make_profile({"kind": "power_law", "n": 1, "domain": (0, 3), "kappa": [[-1, -2]], "tau": []})


def test_profile_is_immutable():
    p = constant_profile([1.0])
    with pytest.raises(AttributeError):
        p.n = 2
