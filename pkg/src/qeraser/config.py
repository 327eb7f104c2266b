"""
Experiment configuration: one JSON document, validated into dataclasses.

Every validation failure raises ConfigError naming the offending field
(dotted path), which the CLI maps to exit code 2.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .erasure import DetectorBasis, basis_computational, basis_custom, basis_eraser, basis_sx3
from .errors import ConfigError, NonUnitary
from .propagation import PropagationParams, a_from_geometry, a_from_time
from .qstate import ScreenGrid, SlitArray

BASES = ("computational", "sx3", "eraser", "custom")
PROPAGATION_FORMS = (("a",), ("lambda", "D"), ("t", "m", "hbar"))


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str = "pattern.csv"
    normalize: bool = False
    figure: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    slits: SlitArray
    propagation: PropagationParams
    detector_enabled: bool
    basis_name: str
    basis: DetectorBasis | None
    grid: ScreenGrid
    output: OutputSpec = field(default_factory=OutputSpec)
    oracle: bool = False
    raw: dict = field(default_factory=dict, compare=False)

    @property
    def a(self) -> float:
        return self.propagation.a

    @property
    def omega(self) -> float:
        return self.propagation.omega(self.slits.width_param)

    def replace(self, **changes) -> "ExperimentConfig":
        """Re-validate with slit/propagation overrides ``d``, ``epsilon`` or ``a``."""
        raw = json.loads(json.dumps(self.raw))
        if "d" in changes:
            raw["slits"]["d"] = changes["d"]
        if "epsilon" in changes:
            raw["slits"]["epsilon"] = changes["epsilon"]
        if "a" in changes:
            raw["propagation"] = {"a": changes["a"]}
        return parse_config(raw)


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"{where}.{key}", "missing")
    return section[key]


def _number(value, where: str, positive=False, nonneg=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(where, f"expected an integer, got {value!r}")
    if not np.isfinite(value):
        raise ConfigError(where, "must be finite")
    if positive and not value > 0:
        raise ConfigError(where, f"must be positive, got {value!r}")
    if nonneg and value < 0:
        raise ConfigError(where, f"must be non-negative, got {value!r}")
    return int(value) if integer else float(value)


def _complex(value, where: str) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(where, "complex numbers are written as [re, im]")
        return complex(_number(value[0], where), _number(value[1], where))
    return complex(_number(value, where))


def _section(raw: dict, key: str) -> dict:
    sec = raw.get(key)
    if not isinstance(sec, dict):
        raise ConfigError(key, "missing or not an object")
    return sec


def _parse_slits(raw: dict) -> SlitArray:
    sec = _section(raw, "slits")
    n = _number(_require(sec, "n", "slits"), "slits.n", integer=True)
    if n < 2:
        raise ConfigError("slits.n", f"need at least 2 slits, got {n}")
    d = _number(_require(sec, "d", "slits"), "slits.d", positive=True)
    eps = _number(_require(sec, "epsilon", "slits"), "slits.epsilon", positive=True)
    amps = sec.get("amplitudes")
    if amps is not None:
        if not isinstance(amps, list) or len(amps) != n:
            raise ConfigError("slits.amplitudes", f"expected a list of {n} entries")
        amps = tuple(_complex(v, f"slits.amplitudes[{i}]") for i, v in enumerate(amps))
        if all(c == 0 for c in amps):
            raise ConfigError("slits.amplitudes", "all zero")
    return SlitArray(n, d, eps, amps)


def _parse_propagation(raw: dict) -> PropagationParams:
    sec = _section(raw, "propagation")
    present = [form for form in PROPAGATION_FORMS if any(k in sec for k in form)]
    if len(present) != 1:
        raise ConfigError(
            "propagation", "give exactly one of {a}, {lambda, D} or {t, m, hbar}"
        )
    form = present[0]
    vals = {k: sec.get(k) for k in form}
    if form == ("a",):
        return PropagationParams(_number(vals["a"], "propagation.a", nonneg=True))
    if form == ("lambda", "D"):
        lam = _number(_require(sec, "lambda", "propagation"), "propagation.lambda", positive=True)
        dist = _number(_require(sec, "D", "propagation"), "propagation.D", nonneg=True)
        return a_from_geometry(lam, dist)
    t = _number(_require(sec, "t", "propagation"), "propagation.t", nonneg=True)
    m = _number(sec.get("m", 1.0), "propagation.m", positive=True)
    hbar = _number(sec.get("hbar", 1.0), "propagation.hbar", positive=True)
    return a_from_time(t, m, hbar)


def _parse_detector(raw: dict, n: int):
    sec = raw.get("detector", {"enabled": False})
    if not isinstance(sec, dict):
        raise ConfigError("detector", "not an object")
    enabled = sec.get("enabled", False)
    if not isinstance(enabled, bool):
        raise ConfigError("detector.enabled", "expected true or false")
    name = sec.get("basis", "computational")
    if name not in BASES:
        raise ConfigError("detector.basis", f"unknown basis {name!r}; choose from {BASES}")
    if not enabled:
        return False, name, None
    if name == "computational":
        return True, name, basis_computational(n)
    if name == "sx3":
        if n != 3:
            raise ConfigError("detector.basis", "sx3 requires n = 3")
        return True, name, basis_sx3()
    if name == "eraser":
        return True, name, basis_eraser(n)
    matrix = sec.get("matrix")
    if not isinstance(matrix, list) or len(matrix) != n or any(
        not isinstance(row, list) or len(row) != n for row in matrix
    ):
        raise ConfigError("detector.matrix", f"custom basis needs an {n}x{n} matrix")
    u = np.array(
        [[_complex(v, f"detector.matrix[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(matrix)]
    )
    try:
        return True, name, basis_custom(u)
    except NonUnitary as exc:
        raise ConfigError("detector.matrix", str(exc)) from exc


def _parse_grid(raw: dict) -> ScreenGrid:
    sec = _section(raw, "grid")
    xmin = _number(_require(sec, "xmin", "grid"), "grid.xmin")
    xmax = _number(_require(sec, "xmax", "grid"), "grid.xmax")
    points = _number(_require(sec, "points", "grid"), "grid.points", integer=True)
    if not xmin < xmax:
        raise ConfigError("grid", "need xmin < xmax")
    if points < 2:
        raise ConfigError("grid.points", "need at least 2 points")
    return ScreenGrid(xmin, xmax, points)


def _parse_output(raw: dict) -> OutputSpec:
    sec = raw.get("output", {})
    if not isinstance(sec, dict):
        raise ConfigError("output", "not an object")
    fmt = sec.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output.format", f"expected 'csv' or 'json', got {fmt!r}")
    normalize = sec.get("normalize", False)
    if not isinstance(normalize, bool):
        raise ConfigError("output.normalize", "expected true or false")
    path = sec.get("path", f"pattern.{fmt}")
    figure = sec.get("figure")
    if not isinstance(path, str) or (figure is not None and not isinstance(figure, str)):
        raise ConfigError("output.path", "paths must be strings")
    return OutputSpec(fmt, path, normalize, figure)


def parse_config(raw) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    slits = _parse_slits(raw)
    propagation = _parse_propagation(raw)
    enabled, name, basis = _parse_detector(raw, slits.n)
    oracle = raw.get("oracle", False)
    if not isinstance(oracle, bool):
        raise ConfigError("oracle", "expected true or false")
    return ExperimentConfig(
        slits=slits,
        propagation=propagation,
        detector_enabled=enabled,
        basis_name=name,
        basis=basis,
        grid=_parse_grid(raw),
        output=_parse_output(raw),
        oracle=oracle,
        raw=raw,
    )


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<json>", f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_config(raw)
