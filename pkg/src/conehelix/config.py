"""Scenario files: INI sections ``[scenario]``, ``[profile]``, ``[tolerances]``.

Example::

    [scenario]
    name = log-spiral-detect
    mode = detect
    source = preset          ; preset | profile | csv
    preset = log_spiral
    span = 1, 3
    step = 1e-3
    output = out/log_spiral_detect

With ``source = profile`` the ``[profile]`` section describes the curvature
functions (see :func:`conehelix.profiles.make_profile`) and ``frame`` selects
the initial frame: ``canonical``, ``preset`` (with ``frame_preset`` and
optional ``frame_r``; the frame is taken at the span start) or ``explicit``
(with ``x``, ``v_1`` .. ``v_n``, ``y``). ``axis`` is ``detect`` or a
comma-separated vector.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConeError

MODES = ("synthesize", "analyze", "detect", "verify")
SOURCES = ("preset", "profile", "csv")

DEFAULT_TOLERANCES = {
    "gram": 1e-9,
    "on_cone": 1e-9,
    "on_cone_input": 1e-6,
    "unit_speed": 1e-6,
    "frenet": 1e-6,
    "reconstruction": 1e-8,
    "eta_ode": 1e-6,
    "eta_integral": 1e-5,
    "identity": 1e-8,
    "eta2_constant": 1e-8,
    "axis_drift": 1e-6,
    "harmonic_ode": 1e-6,
    "ratio_ode": 1e-5,
    "g_case": 1e-6,
    "recursion": 1e-4,
    "eps_c": 1e-9,
    "eps_0": 1e-6,
    "detect_sigma": 0.0,  # 0 selects 1e-8 * sqrt(rows)
}


class ConfigError(ConeError):
    def __init__(self, path, line, message):
        where = f"{path}:{line}" if line else str(path)
        super().__init__(f"{where}: {message}")
        self.line = line


@dataclass
class Scenario:
    name: str
    mode: str
    source: str
    span: tuple[float, float]
    step: float
    output: Path
    path: Path | None = None
    preset: str | None = None
    r: float = 1.0
    input: Path | None = None
    profile: dict | None = None
    frame: str = "canonical"
    frame_preset: str | None = None
    frame_r: float = 1.0
    frame_vectors: dict | None = None
    axis: str | np.ndarray | None = None
    variant: str = "derived"
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))


def _line_of(lines, section, key=None):
    current = None
    for no, raw in enumerate(lines, start=1):
        text = raw.strip()
        m = re.match(r"\[([^\]]+)\]", text)
        if m:
            current = m.group(1).strip().lower()
            if key is None and current == section:
                return no
            continue
        if current == section and key is not None:
            k = re.split(r"[=:]", text, maxsplit=1)[0].strip().lower()
            if k == key:
                return no
    return None


def _floats(text):
    return [float(v) for v in re.split(r"[,\s]+", text.strip()) if v]


def load_scenario(path, mode: str | None = None) -> Scenario:
    path = Path(path)
    try:
        raw = path.read_text()
    except OSError as exc:
        raise ConfigError(path, None, f"cannot read config: {exc.strerror}") from None
    lines = raw.splitlines()
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(raw, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(path, getattr(exc, "lineno", None), str(exc).splitlines()[0]) from None

    def fail(section, key, message):
        raise ConfigError(path, _line_of(lines, section, key), message)

    if not parser.has_section("scenario"):
        raise ConfigError(path, None, "missing [scenario] section")
    sc = parser["scenario"]

    def get(key, conv=str, default=None, required=False):
        if key not in sc:
            if required:
                fail("scenario", None, f"missing required key {key!r}")
            return default
        try:
            return conv(sc[key])
        except (ValueError, TypeError) as exc:
            fail("scenario", key, f"bad value for {key!r}: {exc}")

    mode = mode or get("mode", required=True)
    if mode not in MODES:
        fail("scenario", "mode", f"mode must be one of {MODES}, got {mode!r}")
    source = get("source", default="profile" if parser.has_section("profile") else "preset")
    if source not in SOURCES:
        fail("scenario", "source", f"source must be one of {SOURCES}, got {source!r}")

    def get_span():
        vals = get("span", _floats, required=source != "csv")
        if vals is None:
            return (float("nan"), float("nan"))
        if len(vals) != 2 or not vals[1] > vals[0]:
            fail("scenario", "span", "span must be two increasing numbers")
        return tuple(vals)

    step = get("step", float, default=1e-3)
    if not step > 0:
        fail("scenario", "step", "step must be positive")
    out = get("output", default=f"out/{get('name', default=path.stem)}")
    scen = Scenario(
        name=get("name", default=path.stem),
        mode=mode,
        source=source,
        span=get_span(),
        step=step,
        output=(path.parent / out),
        path=path,
        variant=get("variant", default="derived").replace("-", "_"),
    )
    if scen.variant not in ("derived", "paper_literal"):
        fail("scenario", "variant", "variant must be derived or paper-literal")

    if source == "preset":
        scen.preset = get("preset", required=True)
        scen.r = get("r", float, default=1.0)
    elif source == "csv":
        scen.input = path.parent / get("input", required=True)
    else:
        if not parser.has_section("profile"):
            raise ConfigError(path, None, "source = profile needs a [profile] section")
        scen.profile = _read_profile(parser["profile"], lambda k, msg: fail("profile", k, msg))
        scen.frame = get("frame", default="canonical")
        if scen.frame == "preset":
            scen.frame_preset = get("frame_preset", required=True)
            scen.frame_r = get("frame_r", float, default=1.0)
        elif scen.frame == "explicit":
            n = scen.profile["n"]
            keys = ["x"] + [f"v_{i}" for i in range(1, n + 1)] + ["y"]
            scen.frame_vectors = {k: get(k, _floats, required=True) for k in keys}
        elif scen.frame != "canonical":
            fail("scenario", "frame", "frame must be canonical, preset or explicit")

    axis = get("axis", default=None)
    if axis is not None and axis.strip() != "detect":
        try:
            scen.axis = np.array(_floats(axis))
        except ValueError:
            fail("scenario", "axis", "axis must be 'detect' or a comma-separated vector")
    elif axis is not None:
        scen.axis = "detect"
    if mode == "verify" and scen.axis is None:
        fail("scenario", None, "verify mode needs an axis (explicit vector or 'detect')")

    if parser.has_section("tolerances"):
        for key, value in parser["tolerances"].items():
            if key not in DEFAULT_TOLERANCES:
                fail("tolerances", key, f"unknown tolerance {key!r}")
            try:
                scen.tolerances[key] = float(value)
            except ValueError:
                fail("tolerances", key, f"tolerance {key!r} is not a number")
    return scen


def _read_profile(sec, fail):
    try:
        n = int(sec["n"])
    except KeyError:
        fail(None, "[profile] needs n")
    except ValueError:
        fail("n", "n must be an integer")
    kind = sec.get("kind", "constant").strip().lower()
    spec = {"kind": kind, "n": n}
    try:
        spec["domain"] = _floats(sec["domain"])
    except KeyError:
        fail(None, "[profile] needs domain")
    except ValueError:
        fail("domain", "domain must be two numbers")
    if len(spec["domain"]) != 2:
        fail("domain", "domain must be two numbers")

    def entry(key):
        if key not in sec:
            fail(None, f"[profile] needs {key}")
        try:
            vals = _floats(sec[key])
        except ValueError:
            fail(key, f"{key} must be numbers")
        return vals[0] if kind == "constant" else vals

    spec["kappa"] = [entry(f"kappa_{i}") for i in range(1, n + 1)]
    spec["tau"] = [entry(f"tau_{i}") for i in range(1, n)]
    if kind == "sampled":
        if "grid" not in sec:
            fail(None, "[profile] of kind sampled needs grid")
        spec["grid"] = _floats(sec["grid"])
    return spec


def read_batch(path) -> list[Path]:
    """One config path per line, relative to the batch file; ``#`` starts a comment."""
    path = Path(path)
    out = []
    for raw in path.read_text().splitlines():
        text = raw.split("#", 1)[0].strip()
        if text:
            out.append(path.parent / text)
    return out
