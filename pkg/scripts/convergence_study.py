"""Endpoint error of RK4 plus projection on the log-spiral for a ladder of steps.

Prints h, the endpoint position error against the closed form, and the ratio
to the previous row (about 16 for a fourth-order method).
"""

import argparse

import numpy as np

from conehelix.curves import preset_frame, preset_frames, preset_profile
from conehelix.frenet import synthesize


def study(steps, span=(1.0, 3.0)):
    prof = preset_profile("log_spiral", span)
    f0 = preset_frame("log_spiral", span[0])
    exact = preset_frames("log_spiral", [span[1]])[0, 0]
    rows = []
    for h in steps:
        t = synthesize(prof, f0, span, h)
        rows.append((h, float(np.max(np.abs(t.x[-1] - exact))), float(np.max(t.pre_projection_drift))))
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=float, nargs="+", default=[0.1, 0.05, 0.025, 0.0125, 0.00625])
    rows = study(ap.parse_args().steps)
    print(f"{'h':>10} {'endpoint error':>16} {'ratio':>8} {'max drift':>12}")
    prev = None
    for h, err, drift in rows:
        ratio = f"{prev / err:8.2f}" if prev else " " * 8
        print(f"{h:10.5f} {err:16.3e} {ratio} {drift:12.3e}")
        prev = err
