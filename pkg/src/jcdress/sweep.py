"""Deterministic parameter-grid sweeps over the two-site and single-site models.

Each grid point is evaluated independently into a slot indexed by its grid
position, so the serialized output does not depend on scheduling or on the
number of worker processes.

CSV schema: one column per axis (named after the axis), one per requested
observable, then ``error`` (empty on success). Rows run axis1-outer,
axis2-inner. Floats are written with 17 significant digits; a failed
observable is written as ``nan``. The JSON mirror uses the same field names,
with ``null`` for failed values.
"""
from __future__ import annotations

import configparser
import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .kbody import coeff_dispersive, coeff_exact_fraction, coeff_resonant
from .model import ApproachSign, Branch, SystemParams
from .twosite import TwoSiteParams, ground_state, j_eff, outcoupling


@dataclass(frozen=True)
class Axis:
    name: str
    scale: str
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.name not in PARAMETER_NAMES:
            raise DomainError(f"unknown axis parameter {self.name!r}; choose from {sorted(PARAMETER_NAMES)}")
        if self.scale not in ("linear", "log"):
            raise DomainError("axis scale must be 'linear' or 'log'")
        if self.count < 2:
            raise DomainError("axis count must be >= 2")
        if not self.min < self.max:
            raise DomainError("axis min must be < max")
        if self.scale == "log" and not self.min > 0:
            raise DomainError("log axis needs min > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.min), math.log10(self.max), self.count)
        return np.linspace(self.min, self.max, self.count)


PARAMETER_NAMES = {"omega_c", "delta", "lambda", "g", "hop_j", "j_over_g"}


@dataclass(frozen=True)
class GridSpec:
    axis1: Axis
    axis2: Axis
    fixed: dict = field(default_factory=dict)
    outputs: tuple[str, ...] = ("variance",)

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(self.outputs))
        unknown = [o for o in self.outputs if o not in OBSERVABLES]
        if unknown:
            raise DomainError(f"unknown observables {unknown}; choose from {sorted(OBSERVABLES)}")
        if not self.outputs:
            raise DomainError("at least one output is required")
        if self.axis1.name == self.axis2.name:
            raise DomainError("the two axes must vary different parameters")
        for key in self.fixed:
            if key not in PARAMETER_NAMES | {"approach"}:
                raise DomainError(f"unknown fixed parameter {key!r}")

    @property
    def columns(self) -> list[str]:
        return [self.axis1.name, self.axis2.name, *self.outputs, "error"]

    def points(self) -> list[tuple[float, float]]:
        return [(float(x), float(y)) for x in self.axis1.values() for y in self.axis2.values()]


def point_params(values: dict) -> TwoSiteParams:
    """Resolve a flat parameter map into two-site parameters.

    Exactly one of delta / lambda must be present; hop_j may be given
    directly or as j_over_g (J in units of g).
    """
    g = float(values.get("g", 1.0))
    omega_c = float(values.get("omega_c", 1e3))
    approach = ApproachSign.parse(values.get("approach", "above"))
    if ("delta" in values) == ("lambda" in values):
        raise DomainError("give exactly one of delta or lambda")
    if "lambda" in values:
        lam = float(values["lambda"])
        if lam == 0:
            raise DomainError("lambda = 0 is infinite detuning")
        delta = g / lam if g != 0 else math.inf
    else:
        delta = float(values["delta"])
    site = SystemParams(omega_c=omega_c, delta=delta, g=g, zero_detuning_sign=approach)
    if ("hop_j" in values) and ("j_over_g" in values):
        raise DomainError("give at most one of hop_j or j_over_g")
    hop = float(values["j_over_g"]) * g if "j_over_g" in values else float(values.get("hop_j", 0.0))
    return TwoSiteParams(site, hop)


def _ground(p: TwoSiteParams, cache: dict):
    if "gs" not in cache:
        cache["gs"] = ground_state(p)
    return cache["gs"]


def _outc(p: TwoSiteParams, cache: dict):
    if "oc" not in cache:
        cache["oc"] = outcoupling(p)
    return cache["oc"]


def _coeff(k: int, branch: Branch) -> Callable:
    return lambda p, cache: float(coeff_exact_fraction(p.site, k, branch)[0])


OBSERVABLES: dict[str, Callable] = {
    "energy": lambda p, c: _ground(p, c).energy,
    "variance": lambda p, c: _ground(p, c).variance,
    "overlap_dressed_mi": lambda p, c: _ground(p, c).overlap_dressed_mi,
    "overlap_photonic_mi": lambda p, c: _ground(p, c).overlap_photonic_mi,
    "overlap_dressed_sf": lambda p, c: _ground(p, c).overlap_dressed_sf,
    "overlap_photonic_sf": lambda p, c: _ground(p, c).overlap_photonic_sf,
    "effective_ratio": lambda p, c: _ground(p, c).effective_ratio,
    "j_eff1": lambda p, c: j_eff(p, 1),
    "j_eff2": lambda p, c: j_eff(p, 2),
    "u_eff": _coeff(2, Branch.MINUS),
    "c2_minus": _coeff(2, Branch.MINUS),
    "c3_minus": _coeff(3, Branch.MINUS),
    "c2_plus": _coeff(2, Branch.PLUS),
    "m1": lambda p, c: _outc(p, c).m1,
    "m2": lambda p, c: _outc(p, c).m2,
    "m3": lambda p, c: _outc(p, c).m3,
    "k1": lambda p, c: _outc(p, c).k1,
    "k2": lambda p, c: _outc(p, c).k2,
}


def _evaluate(task) -> tuple[tuple[float, ...], str]:
    fixed, names, point, outputs = task
    values = dict(fixed)
    values.update(zip(names, point))
    try:
        p = point_params(values)
    except (DomainError, ValueError, ArithmeticError) as exc:
        return tuple(math.nan for _ in outputs), f"{type(exc).__name__}: {exc}"
    cache: dict = {}
    out, errors = [], []
    for name in outputs:
        try:
            out.append(float(OBSERVABLES[name](p, cache)))
        except (DomainError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            out.append(math.nan)
            errors.append(f"{name}: {type(exc).__name__}: {exc}")
    return tuple(out), "; ".join(errors)


@dataclass(frozen=True)
class SweepResult:
    spec: GridSpec
    points: list[tuple[float, float]]
    values: list[tuple[float, ...]]
    errors: list[str]

    def column(self, name: str) -> np.ndarray:
        if name == self.spec.axis1.name:
            return np.array([p[0] for p in self.points])
        if name == self.spec.axis2.name:
            return np.array([p[1] for p in self.points])
        i = self.spec.outputs.index(name)
        return np.array([v[i] for v in self.values])

    def grid(self, name: str) -> np.ndarray:
        """Observable reshaped to (axis1.count, axis2.count)."""
        return self.column(name).reshape(self.spec.axis1.count, self.spec.axis2.count)

    def rows(self) -> list[dict]:
        names = self.spec.columns
        return [
            dict(zip(names, [*pt, *vals, err]))
            for pt, vals, err in zip(self.points, self.values, self.errors)
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.spec.columns)
        for pt, vals, err in zip(self.points, self.values, self.errors):
            w.writerow([format(x, ".17g") for x in (*pt, *vals)] + [err])
        return buf.getvalue()

    def to_json(self) -> str:
        def clean(x):
            return None if isinstance(x, float) and not math.isfinite(x) else x

        rows = [{k: clean(v) for k, v in row.items()} for row in self.rows()]
        return json.dumps({"columns": self.spec.columns, "rows": rows}, indent=1) + "\n"


def run_sweep(spec: GridSpec, workers: int = 1) -> SweepResult:
    """Evaluate every requested observable at every grid point."""
    if workers < 1:
        raise DomainError("workers must be >= 1")
    points = spec.points()
    names = (spec.axis1.name, spec.axis2.name)
    fixed = tuple(sorted(spec.fixed.items()))
    tasks = [(fixed, names, pt, spec.outputs) for pt in points]
    if workers == 1:
        results = [_evaluate(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map preserves input order, so slot i always holds point i
            results = list(pool.map(_evaluate, tasks, chunksize=chunk))
    return SweepResult(spec, points, [r[0] for r in results], [r[1] for r in results])


PRESETS: dict[str, GridSpec] = {
    "phase_diagram": GridSpec(
        Axis("lambda", "log", 1e-2, 1e2, 50),
        Axis("j_over_g", "log", 1e-3, 1e2, 50),
        fixed={"omega_c": 1e3, "g": 1.0},
        outputs=(
            "variance",
            "effective_ratio",
            "overlap_dressed_mi",
            "overlap_photonic_mi",
            "overlap_dressed_sf",
            "overlap_photonic_sf",
            "energy",
        ),
    ),
    "coupling_map": GridSpec(
        Axis("delta", "linear", -10.0, 10.0, 41),
        Axis("g", "linear", 0.0, 5.0, 21),
        fixed={"omega_c": 1e3, "hop_j": 0.0},
        outputs=("c2_minus", "c3_minus"),
    ),
    "hopping_scan": GridSpec(
        Axis("lambda", "log", 1e-3, 1e3, 61),
        Axis("j_over_g", "log", 0.1, 1.0, 2),
        fixed={"omega_c": 1e3, "g": 1.0},
        outputs=("j_eff1", "j_eff2", "u_eff", "m1", "m2", "m3", "k1", "k2"),
    ),
}


def _parse_number(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise DomainError(f"{key} must be a number, got {raw!r}") from None


def parse_flat_config(text: str, section: str = "config") -> dict[str, str]:
    """Read ``key = value`` lines (``#`` comments allowed) into a dict."""
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str
    parser.read_string(f"[{section}]\n" + text)
    return dict(parser[section])


def gridspec_from_config(text: str) -> GridSpec:
    """Build a GridSpec from a flat config.

    Keys: ``preset`` (optional base), ``axis1.name``/``.scale``/``.min``/
    ``.max``/``.count`` and the same for axis2, ``outputs`` (comma list), and
    ``fixed.<param>`` for held parameters.
    """
    cfg = parse_flat_config(text)
    base = PRESETS.get(cfg.get("preset", "phase_diagram"))
    if base is None:
        raise DomainError(f"unknown preset {cfg['preset']!r}; choose from {sorted(PRESETS)}")

    def axis(prefix: str, default: Axis) -> Axis:
        return Axis(
            name=cfg.get(f"{prefix}.name", default.name),
            scale=cfg.get(f"{prefix}.scale", default.scale),
            min=_parse_number(cfg[f"{prefix}.min"], f"{prefix}.min") if f"{prefix}.min" in cfg else default.min,
            max=_parse_number(cfg[f"{prefix}.max"], f"{prefix}.max") if f"{prefix}.max" in cfg else default.max,
            count=int(cfg.get(f"{prefix}.count", default.count)),
        )

    fixed = dict(base.fixed)
    for key, raw in cfg.items():
        if key.startswith("fixed."):
            name = key[len("fixed."):]
            fixed[name] = raw if name == "approach" else _parse_number(raw, key)
    outputs = base.outputs
    if "outputs" in cfg:
        outputs = tuple(o.strip() for o in cfg["outputs"].split(",") if o.strip())
    known = {"preset", "outputs"}
    for key in cfg:
        if key not in known and not key.startswith(("axis1.", "axis2.", "fixed.")):
            raise DomainError(f"unknown config key {key!r}")
    return GridSpec(axis("axis1", base.axis1), axis("axis2", base.axis2), fixed, outputs)


@dataclass(frozen=True)
class CoefficientScan:
    regime: str
    k: tuple[int, ...]
    values: tuple[float, ...]
    errors: tuple[str, ...]

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(0 if not math.isfinite(v) or v == 0 else (1 if v > 0 else -1) for v in self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "C_k_minus", "sign", "error"])
        for k, v, s, e in zip(self.k, self.values, self.signs, self.errors):
            w.writerow([k, format(v, ".17g"), s, e])
        return buf.getvalue()


def run_coefficient_scan(params: SystemParams, k_max: int, regime: str = "exact", k_min: int = 1) -> CoefficientScan:
    """C_k^- for k_min..k_max in the resonant, dispersive or exact evaluation."""
    if regime not in ("resonant", "dispersive", "exact"):
        raise DomainError("regime must be resonant, dispersive or exact")
    if k_max < k_min:
        raise DomainError("k_max must be >= k_min")
    ks, vals, errs = [], [], []
    for k in range(k_min, k_max + 1):
        try:
            if regime == "resonant":
                v = coeff_resonant(params.g, k, params.zero_detuning_sign)
            elif regime == "dispersive":
                v = coeff_dispersive(params.g, params.lam, k)
            else:
                v = float(coeff_exact_fraction(params, k, Branch.MINUS)[0])
            e = ""
        except (DomainError, ArithmeticError) as exc:
            v, e = math.nan, f"{type(exc).__name__}: {exc}"
        ks.append(k)
        vals.append(v)
        errs.append(e)
    return CoefficientScan(regime, tuple(ks), tuple(vals), tuple(errs))
