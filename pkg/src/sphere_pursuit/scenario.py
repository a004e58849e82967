"""Scenario documents: one self-describing YAML file per run.

Parsing fills every default explicitly (dt, n_samples, capture_tol,
tie_break, seed, max_time) so emitted scenarios and the outputs derived
from them are self-describing, and parse(emit(s)) is the identity. Angles
are radians when bare numbers; strings with an explicit unit suffix
("30 deg", "0.5 rad") are accepted anywhere an angle is expected. Unknown
keys and out-of-range values are rejected with the offending key path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import yaml

from .geometry import GameParams
from .sim import DEFAULT_CAPTURE_TOL, default_max_time

__all__ = [
    "Scenario",
    "ScenarioError",
    "TargetSpec",
    "TwoPursuerSpec",
    "emit_scenario",
    "load_scenario",
    "parse_scenario",
]

MODES = ("simulate", "apollonius", "intercept", "two_pursuer", "guard")

DEFAULT_DT = 1e-3
DEFAULT_N_SAMPLES = 721
DEFAULT_TIE_BREAK = 0.0
DEFAULT_SEED = 0


class ScenarioError(ValueError):
    """Scenario document is malformed; message names the key path."""


@dataclass(frozen=True)
class TwoPursuerSpec:
    """Two-pursuer block: offsets plus the second pursuer's speed data.

    Pursuer 1 uses the scenario's common params; both speed ratios must
    describe the same evader top speed.
    """

    alpha_1: float
    alpha_2: float
    lambda_o: float
    speed_ratio_2: float
    pursuer_speed_2: float


@dataclass(frozen=True)
class TargetSpec:
    """Guarded target: spherical cap at (phi, theta) with an angular radius."""

    phi: float
    theta: float
    angular_radius: float


@dataclass(frozen=True)
class Scenario:
    """A validated scenario with all defaults resolved."""

    mode: str
    params: GameParams
    dt: float
    n_samples: int
    capture_tol: float
    tie_break: float
    seed: int
    max_time: float
    pursuer: tuple[float, float] | None = None
    evader: tuple[float, float] | None = None
    alphas: tuple[float, ...] | None = None
    two_pursuer: TwoPursuerSpec | None = None
    target: TargetSpec | None = None


def _fail(path: str, message: str) -> None:
    raise ScenarioError(f"{path}: {message}")


def _check_keys(mapping: dict, path: str, allowed: set[str]) -> None:
    for key in mapping:
        if key not in allowed:
            _fail(f"{path}.{key}" if path else str(key), "unknown key")


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    return float(value)


def _angle(value, path: str) -> float:
    """Radians from a bare number or a '<number> deg|rad' string."""
    if isinstance(value, str):
        parts = value.split()
        if len(parts) != 2 or parts[1] not in ("deg", "rad"):
            _fail(path, f"expected '<number> deg' or '<number> rad', got {value!r}")
        try:
            magnitude = float(parts[0])
        except ValueError:
            _fail(path, f"expected '<number> deg' or '<number> rad', got {value!r}")
        return math.radians(magnitude) if parts[1] == "deg" else magnitude
    return _number(value, path)


def _int_value(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {value!r}")
    return value


def _position(value, path: str) -> tuple[float, float]:
    if not isinstance(value, dict):
        _fail(path, "expected a mapping with phi and theta")
    _check_keys(value, path, {"phi", "theta"})
    if "phi" not in value or "theta" not in value:
        _fail(path, "both phi and theta are required")
    return (_angle(value["phi"], f"{path}.phi"), _angle(value["theta"], f"{path}.theta"))


def _params(value, path: str) -> GameParams:
    if not isinstance(value, dict):
        _fail(path, "expected a mapping with radius, pursuer_speed, speed_ratio")
    _check_keys(value, path, {"radius", "pursuer_speed", "speed_ratio"})
    for key in ("radius", "pursuer_speed", "speed_ratio"):
        if key not in value:
            _fail(f"{path}.{key}", "required")
    try:
        return GameParams(
            radius=_number(value["radius"], f"{path}.radius"),
            pursuer_speed=_number(value["pursuer_speed"], f"{path}.pursuer_speed"),
            speed_ratio=_number(value["speed_ratio"], f"{path}.speed_ratio"),
        )
    except ValueError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


_TOP_KEYS = {
    "mode",
    "params",
    "dt",
    "n_samples",
    "capture_tol",
    "tie_break",
    "seed",
    "max_time",
    "pursuer",
    "evader",
    "alpha",
    "alphas",
    "two_pursuer",
    "target",
}

# Which optional sections each mode accepts beyond the common ones.
_MODE_KEYS = {
    "simulate": {"pursuer", "evader"},
    "apollonius": {"pursuer", "evader", "alpha", "alphas"},
    "intercept": {"pursuer", "evader", "alpha", "alphas"},
    "two_pursuer": {"two_pursuer"},
    "guard": {"pursuer", "evader", "alpha", "alphas", "target"},
}
_COMMON_KEYS = {"mode", "params", "dt", "n_samples", "capture_tol", "tie_break", "seed", "max_time"}


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a mapping of keys to values")
    _check_keys(doc, "", _TOP_KEYS)

    if "mode" not in doc:
        _fail("mode", "required")
    mode = doc["mode"]
    if mode not in MODES:
        _fail("mode", f"must be one of {', '.join(MODES)}, got {mode!r}")
    allowed = _COMMON_KEYS | _MODE_KEYS[mode]
    for key in doc:
        if key not in allowed:
            _fail(key, f"not valid in mode {mode!r}")

    if "params" not in doc:
        _fail("params", "required")
    params = _params(doc["params"], "params")

    dt = _number(doc.get("dt", DEFAULT_DT), "dt")
    if dt <= 0.0:
        _fail("dt", f"must be positive, got {dt}")
    n_samples = _int_value(doc.get("n_samples", DEFAULT_N_SAMPLES), "n_samples")
    if n_samples < 8:
        _fail("n_samples", f"must be at least 8, got {n_samples}")
    capture_tol = _angle(doc.get("capture_tol", DEFAULT_CAPTURE_TOL), "capture_tol")
    if capture_tol <= 0.0:
        _fail("capture_tol", f"must be positive, got {capture_tol}")
    tie_break = _angle(doc.get("tie_break", DEFAULT_TIE_BREAK), "tie_break")
    seed = _int_value(doc.get("seed", DEFAULT_SEED), "seed")
    max_time = _number(doc.get("max_time", default_max_time(params)), "max_time")
    if max_time <= 0.0:
        _fail("max_time", f"must be positive, got {max_time}")

    pursuer = _position(doc["pursuer"], "pursuer") if "pursuer" in doc else None
    evader = _position(doc["evader"], "evader") if "evader" in doc else None

    alphas: tuple[float, ...] | None = None
    if "alpha" in doc and "alphas" in doc:
        _fail("alpha", "give either alpha or alphas, not both")
    if "alpha" in doc:
        alphas = (_angle(doc["alpha"], "alpha"),)
    elif "alphas" in doc:
        raw = doc["alphas"]
        if not isinstance(raw, list) or not raw:
            _fail("alphas", "expected a non-empty list of angles")
        alphas = tuple(_angle(v, f"alphas[{i}]") for i, v in enumerate(raw))
    if alphas is not None:
        for i, a in enumerate(alphas):
            if not 0.0 < a < math.pi:
                _fail(f"alphas[{i}]", f"must lie strictly inside (0, pi), got {a}")

    two_pursuer = None
    if mode == "two_pursuer":
        if "two_pursuer" not in doc:
            _fail("two_pursuer", "required for mode two_pursuer")
        block = doc["two_pursuer"]
        if not isinstance(block, dict):
            _fail("two_pursuer", "expected a mapping")
        keys = {"alpha_1", "alpha_2", "lambda_o", "speed_ratio_2", "pursuer_speed_2"}
        _check_keys(block, "two_pursuer", keys)
        for key in keys:
            if key not in block:
                _fail(f"two_pursuer.{key}", "required")
        ratio2 = _number(block["speed_ratio_2"], "two_pursuer.speed_ratio_2")
        if not 0.0 < ratio2 < 1.0:
            _fail("two_pursuer.speed_ratio_2", f"must lie strictly between 0 and 1, got {ratio2}")
        speed2 = _number(block["pursuer_speed_2"], "two_pursuer.pursuer_speed_2")
        if speed2 <= 0.0:
            _fail("two_pursuer.pursuer_speed_2", f"must be positive, got {speed2}")
        two_pursuer = TwoPursuerSpec(
            alpha_1=_angle(block["alpha_1"], "two_pursuer.alpha_1"),
            alpha_2=_angle(block["alpha_2"], "two_pursuer.alpha_2"),
            lambda_o=_angle(block["lambda_o"], "two_pursuer.lambda_o"),
            speed_ratio_2=ratio2,
            pursuer_speed_2=speed2,
        )

    target = None
    if mode == "guard":
        if "target" not in doc:
            _fail("target", "required for mode guard")
        block = doc["target"]
        if not isinstance(block, dict):
            _fail("target", "expected a mapping")
        _check_keys(block, "target", {"phi", "theta", "angular_radius"})
        for key in ("phi", "theta", "angular_radius"):
            if key not in block:
                _fail(f"target.{key}", "required")
        radius_arc = _angle(block["angular_radius"], "target.angular_radius")
        if not 0.0 < radius_arc < math.pi:
            _fail("target.angular_radius", f"must lie strictly inside (0, pi), got {radius_arc}")
        target = TargetSpec(
            phi=_angle(block["phi"], "target.phi"),
            theta=_angle(block["theta"], "target.theta"),
            angular_radius=radius_arc,
        )

    if mode == "simulate":
        if pursuer is None or evader is None:
            _fail("pursuer", "mode simulate requires both pursuer and evader positions")
    if mode in ("apollonius", "intercept", "guard"):
        have_positions = pursuer is not None and evader is not None
        if have_positions == (alphas is not None):
            _fail("alphas", f"mode {mode} requires either alphas or both positions, not both")
        if (pursuer is None) != (evader is None):
            _fail("pursuer", "positions require both pursuer and evader")
    if mode == "intercept" and alphas is not None and len(alphas) != 1:
        _fail("alphas", "mode intercept takes a single alpha")
    if mode == "guard" and alphas is not None and len(alphas) != 1:
        _fail("alphas", "mode guard takes a single alpha")

    return Scenario(
        mode=mode,
        params=params,
        dt=dt,
        n_samples=n_samples,
        capture_tol=capture_tol,
        tie_break=tie_break,
        seed=seed,
        max_time=max_time,
        pursuer=pursuer,
        evader=evader,
        alphas=alphas,
        two_pursuer=two_pursuer,
        target=target,
    )


def emit_scenario(scenario: Scenario) -> str:
    """Canonical YAML for a scenario; parse(emit(s)) is the identity."""
    doc: dict = {
        "mode": scenario.mode,
        "params": {
            "radius": scenario.params.radius,
            "pursuer_speed": scenario.params.pursuer_speed,
            "speed_ratio": scenario.params.speed_ratio,
        },
        "dt": scenario.dt,
        "n_samples": scenario.n_samples,
        "capture_tol": scenario.capture_tol,
        "tie_break": scenario.tie_break,
        "seed": scenario.seed,
        "max_time": scenario.max_time,
    }
    if scenario.pursuer is not None:
        doc["pursuer"] = {"phi": scenario.pursuer[0], "theta": scenario.pursuer[1]}
    if scenario.evader is not None:
        doc["evader"] = {"phi": scenario.evader[0], "theta": scenario.evader[1]}
    if scenario.alphas is not None:
        doc["alphas"] = list(scenario.alphas)
    if scenario.two_pursuer is not None:
        tp = scenario.two_pursuer
        doc["two_pursuer"] = {
            "alpha_1": tp.alpha_1,
            "alpha_2": tp.alpha_2,
            "lambda_o": tp.lambda_o,
            "speed_ratio_2": tp.speed_ratio_2,
            "pursuer_speed_2": tp.pursuer_speed_2,
        }
    if scenario.target is not None:
        doc["target"] = {
            "phi": scenario.target.phi,
            "theta": scenario.target.theta,
            "angular_radius": scenario.target.angular_radius,
        }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False)


def load_scenario(path: Path | str) -> Scenario:
    """Read and parse a scenario file."""
    return parse_scenario(Path(path).read_text())
