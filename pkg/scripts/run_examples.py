"""Run every bundled scenario and print exit codes plus each report's verdict lines.

    python3 scripts/run_examples.py [--out DIR]
"""

import argparse
import sys
from pathlib import Path

from conehelix.cli import main
from conehelix.config import load_scenario, read_batch

ROOT = Path(__file__).resolve().parent.parent


def run(out_root: Path) -> int:
    worst = 0
    configs = read_batch(ROOT / "configs" / "batch.txt") + [ROOT / "configs" / "powerlaw_zero_domain.ini"]
    for cfg in configs:
        sc = load_scenario(cfg)
        out = out_root / sc.name
        code = main([sc.mode, "--config", str(cfg), "--out", str(out)])
        print(f"{cfg.name:<28} exit {code}")
        report = (out / "report.txt").read_text().splitlines()
        for line in report:
            if line.strip().startswith(("verdict", "axis W", "eta_(n+1)", "INPUT ERROR", "status")):
                print("    " + line.strip())
        if cfg.name != "powerlaw_zero_domain.ini":
            worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "out" / "examples")
    sys.exit(run(ap.parse_args().out))
