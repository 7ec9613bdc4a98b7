"""Compare the alternative printed forms of the axis equations on random axes.

For a smooth n-dimensional profile and several random constant axes this
prints the eta-system residual in derived and literal form, and for n >= 3
the recursion residual with H_{n+2} and with H_{n-2} side by side.
"""

import argparse

import numpy as np

from conehelix.frenet import synthesize
from conehelix.lorentz import canonical_frame
from conehelix.profiles import make_profile
from conehelix.slant import (
    eta_from_axis,
    eta_ode_residual,
    harmonic_recursion_residual,
    harmonics_from_eta,
)


def profile(n):
    kappa = [[0.3 * (-1) ** i, 0.5, 1.0 + 0.2 * i, 0.1 * i] for i in range(n)]
    tau = [[0.4, 0.7, 0.0, 0.8 + 0.1 * i] for i in range(n - 1)]
    return make_profile({"kind": "sinusoid", "n": n, "domain": (0, 2), "kappa": kappa, "tau": tau})


def main(n, count, seed):
    p = profile(n)
    t = synthesize(p, canonical_frame(n), (0.0, 2.0), 1e-3)
    rng = np.random.default_rng(seed)
    print(f"n = {n}, {count} random axes, seed {seed}")
    print(f"{'axis':>4} {'eta derived':>12} {'eta literal':>12} {'rec H_n+2':>12} {'rec H_n-2':>12}")
    for k in range(count):
        W = rng.uniform(-1, 1, n + 2)
        W[1] += 3.0  # keep <V_1, W> away from zero
        e = eta_from_axis(t, W)
        der = eta_ode_residual(e, p, "derived")["middle"]
        lit = eta_ode_residual(e, p, "paper_literal")["middle"]
        rec = ("", "")
        if n >= 3:
            r = harmonic_recursion_residual(harmonics_from_eta(e), p)
            rec = (f"{max(r['corrected'].values()):12.3e}", f"{max(r['literal'].values()):12.3e}")
        print(f"{k:>4} {der:12.3e} {lit:12.3e} {rec[0]:>12} {rec[1]:>12}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    main(a.n, a.count, a.seed)
