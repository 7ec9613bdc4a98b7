"""Command line: ``conehelix {synthesize,analyze,detect,verify,batch} --config PATH``.

Exit codes: 0 every check within tolerance, 1 a check failed, 2 input or
config error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import curves, frenet, slant
from .config import DEFAULT_TOLERANCES, ConfigError, Scenario, load_scenario, read_batch
from .errors import ConeError
from .lorentz import AsymptoticFrame, canonical_frame, gram_residual
from .profiles import make_profile, sampled_profile

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class Outcome:
    checks: list = field(default_factory=list)  # (name, value, tol, passed)
    notes: list = field(default_factory=list)
    tables: list = field(default_factory=list)

    def check(self, name, value, tol):
        self.checks.append((name, float(value), float(tol), bool(value < tol)))

    @property
    def passed(self) -> bool:
        return all(c[3] for c in self.checks)


def _fmt(v) -> str:
    return repr(float(v))


def _fixed(v) -> str:
    # no "-0.000000000" for rounding-level negatives
    return f"{round(float(v), 9) + 0.0:.9f}"


def write_series_csv(path: Path, s, columns: dict) -> None:
    names = list(columns)
    data = np.column_stack([np.asarray(s, dtype=float)] + [np.asarray(columns[k], dtype=float) for k in names])
    with path.open("w", newline="") as fh:
        fh.write(f"# conehelix {__version__}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["s"] + names)
        for row in data:
            w.writerow([_fmt(v) for v in row])


def write_trajectory_csv(path: Path, t: frenet.Trajectory) -> None:
    m = t.n + 2
    cols = {}
    labels = ["x"] + [f"V{i}" for i in range(1, t.n + 1)] + ["y"]
    for r, lab in enumerate(labels):
        for c in range(m):
            cols[f"{lab}_{c + 1}"] = t.frames[:, r, c]
    write_series_csv(path, t.s, cols)


def read_trajectory_csv(path) -> frenet.Trajectory:
    with Path(path).open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    m = int(round(np.sqrt(data.shape[1] - 1)))
    return frenet.Trajectory(data[:, 0], data[:, 1:].reshape(-1, m, m), "ingested")


# ------------------------------------------------------------------ pipeline


def _build(sc: Scenario, out: Outcome):
    tol = sc.tolerances
    if sc.source == "preset":
        traj = curves.preset_trajectory(sc.preset, sc.span, sc.step, r=sc.r)
        prof = curves.preset_profile(sc.preset, sc.span, r=sc.r)
        out.notes.append(f"preset {sc.preset} (r={sc.r!r}) sampled analytically")
        return traj, prof
    if sc.source == "csv":
        samples = curves.read_curve_csv(sc.input)
        resid = curves.on_cone_residual(samples)
        if resid > tol["on_cone_input"]:
            raise ConeError(f"{sc.input}: samples are off the cone by {resid:.3e}")
        if not samples.arclength:
            samples = curves.arclength_reparametrize(samples, h=sc.step)
            out.notes.append("input reparametrized by arclength")
        traj, kappa = curves.recover_frame_n1(samples)
        prof = sampled_profile(traj.s, [kappa])
        out.notes.append(f"frame and kappa recovered from {len(samples.t)} samples")
        return traj, prof
    prof = make_profile(sc.profile)
    s0 = sc.span[0]
    if sc.frame == "canonical":
        f0 = canonical_frame(prof.n)
    elif sc.frame == "preset":
        f0 = curves.preset_frame(sc.frame_preset, s0, r=sc.frame_r)
    else:
        vec = sc.frame_vectors
        f0 = AsymptoticFrame.from_vectors(
            vec["x"], [vec[f"v_{i}"] for i in range(1, prof.n + 1)], vec["y"]
        )
        if gram_residual(f0)[1] >= 1e-8:
            raise ConeError("explicit initial frame violates the Gram conditions")
    traj = frenet.synthesize(prof, f0, sc.span, sc.step)
    out.notes.append(f"synthesized n={prof.n} over [{sc.span[0]!r}, {sc.span[1]!r}] with h={sc.step!r}")
    return traj, prof


def _trajectory_checks(traj, prof, tol, out):
    out.check("gram", traj.max_gram_residual(), tol["gram"])
    out.check("on_cone", traj.max_on_cone_residual(), tol["on_cone"])
    out.check("unit_speed", traj.unit_speed_residual(), tol["unit_speed"])
    for row, value in frenet.frenet_residual(traj, prof).items():
        out.check(f"frenet[{row}]", value, tol["frenet"])


def _axis_analysis(traj, prof, W, sc, out, odir):
    tol = sc.tolerances
    n = traj.n
    e = slant.eta_from_axis(traj, W)
    out.check("eta_reconstruction", slant.reconstruction_residual(e, traj), tol["reconstruction"])
    variants = {v: slant.eta_ode_residual(e, prof, v) for v in slant.ETA_VARIANTS}
    op = variants[sc.variant]
    for key, value in op.items():
        if key != "middle":
            out.check(f"eta_ode[{sc.variant}][{key}]", value, tol["eta_ode"])
    for key, value in slant.eta_integral_residual(e, prof, sc.variant).items():
        out.check(f"eta_integral[{sc.variant}][{key}]", value, tol["eta_integral"])
    table = ["eta system residuals (max over s)", f"  {'row':<10}{'derived':>14}{'paper_literal':>16}"]
    for key in variants["derived"]:
        table.append(f"  {key:<10}{variants['derived'][key]:>14.3e}{variants['paper_literal'][key]:>16.3e}")
    out.tables.append(table)
    write_series_csv(odir / "eta.csv", e.s, {f"eta_{j}": e[j] for j in range(1, n + 3)})

    drift2 = slant.eta2_drift(e)
    eta2_const = drift2 < tol["eta2_constant"]
    out.notes.append(f"<V_1,W> drift over the span: {drift2:.3e} ({'constant' if eta2_const else 'varying'})")
    if np.min(np.abs(e[2])) <= tol["eps_0"]:
        out.notes.append("<V_1,W> vanishes on the span; harmonic curvatures skipped")
        return
    H = slant.harmonics_from_eta(e, tol["eps_0"])
    hcols = {f"H_{j}": H[j] for j in range(1, n + 3)}
    eta_np1 = e[n + 1]
    if np.min(np.abs(eta_np1)) > tol["eps_c"]:
        ident = slant.unit_axis_identity_residual(H, eta_np1, e.axis_norm)
        out.check("unit_axis_identity", float(np.max(ident)), tol["identity"])
        hcols["identity_residual"] = ident
    write_series_csv(odir / "harmonics.csv", H.s, hcols)

    Ws, drift = slant.axis_from_harmonics(traj, H, float(e[2][0]))
    hv = {v: slant.harmonic_ode_residual(H, prof, v) for v in slant.HARMONIC_VARIANTS}
    table = ["harmonic ODE residuals on ratio-built H (max over s)", f"  {'row':<10}{'standard':>14}{'diagonal':>16}"]
    for key in hv["standard"]:
        table.append(f"  {key:<10}{hv['standard'][key]:>14.3e}{hv['diagonal'][key]:>16.3e}")
    out.tables.append(table)
    if eta2_const:
        out.check("axis_drift", drift, tol["axis_drift"])
        for key, value in hv["standard"].items():
            out.check(f"harmonic_ode[standard][{key}]", value, tol["harmonic_ode"])
        Hode = slant.harmonic_ode_integrate(prof, H.H[0], (H.s[0], H.s[-1]), traj.h)
        out.check("ratio_vs_ode", float(np.max(np.abs(Hode.H - H.H))), tol["ratio_ode"])
    else:
        out.notes.append(f"axis drift {drift:.3e}; constant-<V_1,W> checks skipped")

    if n >= 3:
        try:
            rec = slant.harmonic_recursion_residual(H, prof, tol["eps_0"])
        except ConeError as exc:
            out.notes.append(f"harmonic recursion skipped: {exc}")
        else:
            table = ["harmonic recursion defects (max over s)", f"  {'i':<10}{'corrected':>14}{'literal':>16}"]
            for i in rec["corrected"]:
                out.check(f"recursion[corrected][{i}]", rec["corrected"][i], tol["recursion"])
                table.append(f"  {i:<10}{rec['corrected'][i]:>14.3e}{rec['literal'][i]:>16.3e}")
            out.tables.append(table)

    G = slant.g_functions(H, tol["eps_0"])
    write_series_csv(odir / "g.csv", G.s, {f"G_{j}": G[j] for j in range(1, n + 3)})
    gres = slant.g_consistency_residual(G, prof)
    table = ["G-function cases (max over s)"]
    table += [f"  {k:<14}{v:>14.3e}" for k, v in gres.items()]
    out.tables.append(table)
    if eta2_const:
        for key in ("case1", "case2", "case3", "case4", "case5"):
            if key in gres:
                out.check(f"g_{key}", gres[key], tol["g_case"])


def run_scenario(sc: Scenario, out_dir: Path | None = None) -> int:
    odir = Path(out_dir) if out_dir is not None else sc.output
    odir.mkdir(parents=True, exist_ok=True)
    out = Outcome()
    verdict = None
    try:
        traj, prof = _build(sc, out)
        _trajectory_checks(traj, prof, sc.tolerances, out)
        write_trajectory_csv(odir / "trajectory.csv", traj)
        W = None
        if sc.mode in ("detect", "verify", "analyze") and (sc.mode == "detect" or isinstance(sc.axis, str)):
            sigma_tol = sc.tolerances["detect_sigma"] or None
            det = slant.detect_slant_axis(traj, sigma_tol, sc.tolerances["eps_c"])
            verdict = _describe(det)
            if det.is_slant:
                W = det.candidate.axis
        elif sc.mode in ("verify", "analyze") and sc.axis is not None:
            W = np.asarray(sc.axis, dtype=float)
            if W.shape != (traj.n + 2,):
                raise ConeError(f"axis needs {traj.n + 2} components")
        if W is not None:
            _axis_analysis(traj, prof, W, sc, out, odir)
    except ConeError as exc:
        _write_report(odir, sc, out, verdict, error=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write_residuals(odir, out)
    _write_report(odir, sc, out, verdict)
    return EXIT_OK if out.passed else EXIT_FAIL


def _describe(det: slant.Detection) -> list[str]:
    lines = [f"sigma_min = {det.sigma_min:.3e} (tolerance {det.tol:.3e})"]
    if det.verdict == "slant":
        c = det.candidate
        axis = ", ".join(_fixed(v) for v in c.axis)
        lines.insert(0, "verdict: slant helix")
        lines += [
            f"axis W = ({axis}) [{c.causal.value}]",
            f"eta_(n+1) = {c.eta_np1:.9f}",
            f"constancy residual = {c.constancy_residual:.3e}",
        ]
    elif det.verdict == "degenerate":
        axis = ", ".join(_fixed(v) for v in det.null_axis)
        lines.insert(0, "verdict: degenerate: constant pairing is zero")
        lines.append(f"fixed vector with zero pairing = ({axis})")
    else:
        lines.insert(0, "verdict: not a slant helix (no constant pairing)")
    return lines


def _write_residuals(odir, out):
    with (odir / "residuals.csv").open("w", newline="") as fh:
        fh.write(f"# conehelix {__version__}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["check", "value", "tolerance", "passed"])
        for name, value, tol, ok in out.checks:
            w.writerow([name, _fmt(value), _fmt(tol), "yes" if ok else "no"])


def _write_report(odir, sc, out, verdict, error=None):
    lines = [f"conehelix {__version__}", f"scenario: {sc.name}", f"mode: {sc.mode}", f"source: {sc.source}"]
    lines.append(f"operative eta variant: {sc.variant}")
    if error:
        lines += ["", f"INPUT ERROR: {error}"]
    lines += ["", "tolerances in effect:"]
    lines += [f"  {k} = {v!r}" for k, v in sc.tolerances.items()]
    if verdict:
        lines += ["", "slant detection:"] + [f"  {v}" for v in verdict]
    if out.notes:
        lines += ["", "notes:"] + [f"  {v}" for v in out.notes]
    if out.checks:
        lines += ["", "checks:"]
        for name, value, tol, ok in out.checks:
            lines.append(f"  {'PASS' if ok else 'FAIL'}  {name:<36} {value:.3e} < {tol:.1e}")
    if out.tables:
        lines += ["", "variant reconciliation:"]
        for table in out.tables:
            lines += table + [""]
    status = "input error" if error else ("all checks passed" if out.passed else "some checks failed")
    lines += ["", f"status: {status}"]
    (odir / "report.txt").write_text("\n".join(lines) + "\n")


# ----------------------------------------------------------------------- CLI


def _tol_override(text):
    name, sep, value = text.partition("=")
    if not sep or name not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE with NAME in {sorted(DEFAULT_TOLERANCES)}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name} is not a number") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conehelix", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=["synthesize", "analyze", "detect", "verify", "batch"])
    ap.add_argument("--config", required=True, type=Path, help="scenario INI file, or batch list for 'batch'")
    ap.add_argument("--out", type=Path, help="output directory (overrides the config)")
    ap.add_argument("--step", type=float, help="arclength step h")
    ap.add_argument("--tol", action="append", type=_tol_override, default=[], metavar="NAME=VALUE")
    ap.add_argument("--variant", choices=["derived", "paper-literal"])
    ap.add_argument("--workers", type=int, default=None, help="parallel workers for batch")
    return ap


def _run_one(config, mode, args_dict) -> int:
    try:
        sc = load_scenario(config, mode)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args_dict.get("step") is not None:
        sc.step = args_dict["step"]
    if args_dict.get("variant"):
        sc.variant = args_dict["variant"].replace("-", "_")
    for name, value in args_dict.get("tol", []):
        sc.tolerances[name] = value
    out = args_dict.get("out")
    if out is not None and args_dict.get("batch"):
        out = Path(out) / sc.name
    return run_scenario(sc, out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = {"step": args.step, "variant": args.variant, "tol": args.tol, "out": args.out}
    if args.command != "batch":
        return _run_one(args.config, args.command, opts)
    try:
        configs = read_batch(args.config)
    except OSError as exc:
        print(f"error: {args.config}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    opts["batch"] = True
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        codes = list(pool.map(_run_one, configs, [None] * len(configs), [opts] * len(configs)))
    for cfg, code in zip(configs, codes):
        print(f"{cfg}: exit {code}")
    return max(codes, default=EXIT_OK)


if __name__ == "__main__":
    sys.exit(main())
