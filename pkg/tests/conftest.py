import numpy as np
import pytest

from conehelix.curves import preset_profile, preset_trajectory
from conehelix.frenet import synthesize
from conehelix.lorentz import canonical_frame
from conehelix.profiles import make_profile


def log_spiral_frame(s):
    """Closed-form frame of x(s) = (s cos ln s, s sin ln s, s), differentiated by hand."""
    s = np.asarray(s, dtype=float)
    c, sn = np.cos(np.log(s)), np.sin(np.log(s))
    x = np.stack([s * c, s * sn, s], -1)
    v1 = np.stack([c - sn, sn + c, np.ones_like(s)], -1)
    y = np.stack([sn, -c, -np.ones_like(s)], -1) / s[..., None]
    return x, v1, y


@pytest.fixture(scope="session")
def spiral():
    return preset_trajectory("log_spiral", (1.0, 3.0), 1e-3)


@pytest.fixture(scope="session")
def spiral_profile():
    return preset_profile("log_spiral", (1.0, 3.0))


@pytest.fixture(scope="session")
def slant_n2_profile():
    # kappa_1 = -1/s, kappa_2 = 1/s, tau_1 = 1: <V_2, W> is constant for
    # W = y(1) + V_1(1) + V_2(1), with eta = (0, 1, 1, s)
    return make_profile(
        {"kind": "power_law", "n": 2, "domain": (1, 3), "kappa": [[-1, -1], [1, -1]], "tau": [[1, 0]]}
    )


@pytest.fixture(scope="session")
def slant_n2(slant_n2_profile):
    f0 = canonical_frame(2)
    traj = synthesize(slant_n2_profile, f0, (1.0, 3.0), 1e-3)
    axis = f0.y + f0.v[0] + f0.v[1]
    return traj, axis


def smooth_profile(n):
    """Non-constant profile with tau bounded away from zero."""
    kappa = [[0.3 * (-1) ** i, 0.5, 1.0 + 0.2 * i, 0.1 * i] for i in range(n)]
    tau = [[0.4, 0.7, 0.0, 0.8 + 0.1 * i] for i in range(n - 1)]
    return make_profile({"kind": "sinusoid", "n": n, "domain": (0, 2), "kappa": kappa, "tau": tau})


@pytest.fixture(scope="session")
def smooth_trajectories():
    out = {}
    for n in (1, 2, 3, 4):
        p = smooth_profile(n)
        out[n] = (synthesize(p, canonical_frame(n), (0.0, 2.0), 1e-3), p)
    return out
