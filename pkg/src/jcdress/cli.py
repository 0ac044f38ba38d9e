"""Command-line entry point: ``jcdress {coeffs,spectrum,verify,twosite,sweep}``.

Data goes to stdout (or ``--out``); diagnostics go to stderr. Exit codes:
0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .errors import DomainError
from .kbody import coeff_dispersive, coeff_exact_fraction
from .model import Branch, SystemParams
from .oracle import closed_form_spectrum, residual_report, spectrum
from .sweep import PRESETS, gridspec_from_config, parse_flat_config, point_params, run_sweep
from .twosite import TwoSiteParams, ground_state, j_eff, outcoupling

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2

_CONFIG_KEYS = {"omega_c", "delta", "lambda", "g", "gamma_scale", "approach", "hop_j"}


class UsageError(Exception):
    pass


def _add_system_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega-c", type=float, help="cavity frequency (default 1000)")
    det = p.add_mutually_exclusive_group()
    det.add_argument("--delta", type=float, help="detuning omega_a - omega_c (default 1)")
    det.add_argument("--lambda", dest="lam", type=float, help="g / delta, instead of --delta")
    p.add_argument("--g", type=float, help="light-matter coupling (default 1)")
    p.add_argument("--approach", choices=["above", "below"], help="side from which delta = 0 is approached")
    p.add_argument("--gamma-scale", type=float, help="energy unit used by --units gamma")
    p.add_argument("--config", type=Path, help="flat key = value file; explicit flags take precedence")
    p.add_argument("--out", type=Path, help="write data here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jcdress", description="Dressed Jaynes-Cummings toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="k-body coefficients C_k")
    _add_system_flags(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--resonant", action="store_true", help="evaluate at delta = 0")
    mode.add_argument("--dispersive", action="store_true", help="leading small-lambda form")
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--units", choices=["g", "gamma", "raw"], default="raw")

    p = sub.add_parser("spectrum", help="single-site spectrum, closed form and brute force")
    _add_system_flags(p)
    p.add_argument("--n-max", type=int, default=10)

    p = sub.add_parser("verify", help="exact-oracle residual report")
    _add_system_flags(p)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--report", choices=["text", "json"], default="text")

    p = sub.add_parser("twosite", help="two-site ground-state report")
    _add_system_flags(p)
    p.add_argument("--hop-j", type=float, help="photonic hopping J (default 0)")
    p.add_argument("--report", choices=["json", "csv"], default="json")

    p = sub.add_parser("sweep", help="parameter-grid sweep")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p.add_argument("--config", type=Path, help="flat GridSpec config file")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", type=Path)
    return parser


def _read_config(path: Path | None) -> dict[str, str]:
    if path is None:
        return {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    cfg = parse_flat_config(text)
    unknown = set(cfg) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _system_values(args, force_resonant: bool = False) -> dict:
    """Merge defaults, config file and flags (in increasing priority)."""
    values: dict = {"omega_c": 1e3, "g": 1.0}
    cfg = _read_config(args.config)
    if "delta" in cfg and "lambda" in cfg:
        raise UsageError("config gives both delta and lambda")
    values.update(cfg)
    flags = {
        "omega_c": args.omega_c,
        "g": args.g,
        "gamma_scale": args.gamma_scale,
        "approach": args.approach,
        "hop_j": getattr(args, "hop_j", None),
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    if args.delta is not None or args.lam is not None:
        values.pop("delta", None)
        values.pop("lambda", None)
        values["delta" if args.delta is not None else "lambda"] = args.delta if args.delta is not None else args.lam
    if force_resonant:
        if "lambda" in values or ("delta" in values and float(values["delta"]) != 0):
            raise UsageError("--resonant fixes delta = 0; do not pass a detuning")
        values.pop("lambda", None)
        values["delta"] = 0.0
        values.setdefault("approach", "above")
    elif "delta" not in values and "lambda" not in values:
        values["delta"] = 1.0
    if "delta" in values and float(values["delta"]) == 0 and "approach" not in values:
        raise UsageError("delta = 0 requires --approach above|below")
    return values


def _site_params(values: dict) -> SystemParams:
    site = point_params({k: v for k, v in values.items() if k in _CONFIG_KEYS - {"gamma_scale"}}).site
    gamma = values.get("gamma_scale")
    if gamma is not None:
        site = SystemParams(
            site.omega_c, site.delta, site.g, float(gamma), site.zero_detuning_sign
        )
    return site


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _cmd_coeffs(args) -> str:
    values = _system_values(args, force_resonant=args.resonant)
    params = _site_params(values)
    if args.units == "g":
        if params.g == 0:
            raise DomainError("--units g needs g > 0")
        unit = params.g
    elif args.units == "gamma":
        if params.gamma_scale is None:
            raise UsageError("--units gamma needs --gamma-scale")
        unit = params.gamma_scale
    else:
        unit = 1.0
    if args.k_min < 0 or args.k_max < args.k_min:
        raise UsageError("need 0 <= k-min <= k-max")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "C_k_minus", "C_k_plus", "precision_bits"])
    if args.dispersive:
        lam = params.lam
        for k in range(max(args.k_min, 1), args.k_max + 1):
            c = coeff_dispersive(params.g, lam, k) / unit
            # the plus branch agrees with the minus one up to sign at leading order
            w.writerow([k, _fmt(c), _fmt(-c), 53])
        return buf.getvalue()
    for k in range(args.k_min, args.k_max + 1):
        cm, pm = coeff_exact_fraction(params, k, Branch.MINUS)
        cp, pp = coeff_exact_fraction(params, k, Branch.PLUS)
        w.writerow([k, _fmt(float(cm) / unit), _fmt(float(cp) / unit), max(pm, pp, 53)])
    return buf.getvalue()


def _cmd_spectrum(args) -> str:
    params = _site_params(_system_values(args))
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    oracle = {ln.label: ln.energy for ln in spectrum(params, args.n_max)}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "branch", "bosons", "energy_closed_form", "energy_numerical"])
    for ln in closed_form_spectrum(params, args.n_max):
        lb = ln.label
        w.writerow([lb.n, lb.branch.symbol, lb.bosons, _fmt(ln.energy), _fmt(oracle[lb])])
    return buf.getvalue()


def _cmd_verify(args) -> str:
    params = _site_params(_system_values(args))
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    rep = residual_report(params, args.n_max)
    if args.report == "json":
        return json.dumps(rep, indent=1) + "\n"
    lines = []
    for key, val in rep.items():
        if key == "params":
            val = " ".join(f"{k}={v}" for k, v in val.items())
        elif isinstance(val, float):
            val = f"{val:.3e}"
        lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def _cmd_twosite(args) -> str:
    values = _system_values(args)
    hop = float(values.get("hop_j", 0.0))
    site = _site_params(values)
    p = TwoSiteParams(site, hop)
    rep = ground_state(p)
    oc = outcoupling(p)
    data = rep.as_dict()
    amps = data.pop("amplitudes")
    data.update(j_eff1=j_eff(p, 1), j_eff2=j_eff(p, 2), **oc._asdict())
    if args.report == "json":
        data["amplitudes"] = amps
        data["params"] = {**site.to_config(), "hop_j": hop}
        return json.dumps(data, indent=1) + "\n"
    scal = {k: v for k, v in data.items()}
    scal.update({f"amp{k}": v for k, v in amps.items()})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(scal))
    w.writerow([_fmt(v) if isinstance(v, float) else str(v).lower() if isinstance(v, bool) else v for v in scal.values()])
    return buf.getvalue()


def _cmd_sweep(args) -> str:
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        if args.preset:
            text = f"preset = {args.preset}\n" + text
        spec = gridspec_from_config(text)
    else:
        spec = PRESETS[args.preset or "phase_diagram"]
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    result = run_sweep(spec, workers=args.workers)
    failed = sum(1 for e in result.errors if e)
    if failed:
        print(f"jcdress: {failed} grid points reported errors", file=sys.stderr)
    return result.to_csv() if args.format == "csv" else result.to_json()


_COMMANDS = {
    "coeffs": _cmd_coeffs,
    "spectrum": _cmd_spectrum,
    "verify": _cmd_verify,
    "twosite": _cmd_twosite,
    "sweep": _cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        out = _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"jcdress: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"jcdress: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:  # unparseable values, e.g. in a config file
        print(f"jcdress: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"jcdress: numerical error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.out is not None:
        args.out.write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
