"""Command-line front end.

Subcommands:
  points  enumerate curve points mod p^m ('x,y' lines under a '#' header)
  sum     evaluate sums for a range of levels m (JSON or CSV records)
  verify  fit the decay of |S_m| against the predicted exponent (exit 1 on fail)
  sigma   compute the oscillation exponent certificate (JSON)
  param   branch parametrization at a point, optionally a restricted sum

Every option can also be supplied through --config FILE (key=value lines,
'#' comments); explicit flags win.  Outputs embed the resolved configuration
and use 15 significant digits, so identical configurations produce
byte-identical files.

Exit codes: 0 success / verification passed; 1 verification failed;
2 usage, parse, or budget errors; 3 weight constant on the curve;
4 precision exhausted (inconclusive).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import IO

from .counting import BRUTE_BUDGET, BudgetError, brute_points, lift_points, write_points
from .expsums import (
    PhaseSpec,
    decay_records,
    sum_curve,
    sum_onevar,
    sum_parametric,
    write_records_csv,
    write_records_json,
)
from .invariants import (
    ContactInconclusiveError,
    WeightConstantError,
    contact_exponent,
    contact_exponent_onevar,
    decay_fit,
    write_decay_csv,
    write_decay_json,
)
from .polynomials import PolySyntaxError, parse_poly, parse_univariate
from .series import SeriesPrecisionError, certify_point, hensel_param

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_WEIGHT_CONSTANT = 3
EXIT_INCONCLUSIVE = 4

def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


_CONFIG_CASTS = {
    "p": int,
    "u": int,
    "depth": int,
    "budget": int,
    "order": int,
    "precision": int,
    "l": int,
    "sigma": int,
    "level": int,
    "tolerance": float,
    "m": str,
    "f": str,
    "g": str,
    "onevar": _parse_bool,
    "method": str,
    "format": str,
    "out": str,
    "at": str,
}


def _parse_m_range(text: str) -> list[int]:
    """Either a single level '4' or an inclusive range '3..8'."""
    if ".." in text:
        lo_text, _, hi_text = text.partition("..")
        lo, hi = int(lo_text), int(hi_text)
        if lo < 1 or hi < lo:
            raise ValueError(f"bad level range {text!r}")
        return list(range(lo, hi + 1))
    m = int(text)
    if m < 1:
        raise ValueError(f"level must be >= 1, got {m}")
    return [m]


def _load_config(path: str) -> dict:
    values: dict[str, object] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_CASTS:
                raise ValueError(f"{path}:{lineno}: unknown option {key!r}")
            values[key] = _CONFIG_CASTS[key](value)
    return values


def _resolved_config(args, keys) -> dict:
    out = {"command": args.command}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    return out


class _Output:
    """Write to --out or stdout; a context manager either way."""

    def __init__(self, path: str | None):
        self.path = path
        self.fh: IO[str] | None = None

    def __enter__(self) -> IO[str]:
        if self.path:
            self.fh = open(self.path, "w", encoding="utf-8")
            return self.fh
        return sys.stdout

    def __exit__(self, *exc):
        if self.fh is not None:
            self.fh.close()


def _single_level(args) -> int:
    levels = _parse_m_range(args.m)
    if len(levels) != 1:
        raise ValueError("this command needs a single level m, not a range")
    return levels[0]


def cmd_points(args) -> int:
    f = parse_poly(args.f)
    m = _single_level(args)
    method = args.method
    if method == "auto":
        method = "lift"
    if method == "brute":
        ps = brute_points(f, args.p, m, budget=args.budget)
    elif method == "lift":
        ps = lift_points(f, args.p, m)
    else:
        raise ValueError(f"unknown method {method!r}")
    config = _resolved_config(args, ("p", "m", "f", "method", "budget"))
    config["method"] = method
    with _Output(args.out) as fh:
        write_points(ps, f, fh, extra_header={"config": json.dumps(config, sort_keys=True)})
    return EXIT_OK


def _emit_records(records, args, config) -> None:
    with _Output(args.out) as fh:
        if args.format == "csv":
            write_records_csv(records, fh, config)
        else:
            write_records_json(records, fh, config)


def cmd_sum(args) -> int:
    levels = _parse_m_range(args.m)
    config = _resolved_config(
        args, ("p", "m", "u", "f", "g", "onevar", "method", "format", "sigma")
    )
    if args.onevar:
        if not args.f or args.g:
            raise ValueError("--onevar takes the one-variable polynomial in --f, with no --g")
        f_one = parse_univariate(args.f)
        records = [sum_onevar(f_one, PhaseSpec(args.p, m, args.u)) for m in levels]
    else:
        if not args.f or not args.g:
            raise ValueError("sum needs --f and --g (or --onevar)")
        f, g = parse_poly(args.f), parse_poly(args.g)
        if args.method == "brute":
            records = [
                sum_curve(f, g, PhaseSpec(args.p, m, args.u), brute_points(f, args.p, m, budget=args.budget))
                for m in levels
            ]
        else:
            records = decay_records(f, g, args.p, levels, u=args.u)
    if args.sigma:
        records = [r.with_normalization(args.sigma) for r in records]
    _emit_records(records, args, config)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.onevar:
        if not args.f or args.g:
            raise ValueError("--onevar takes the one-variable polynomial in --f, with no --g")
        f_one = parse_univariate(args.f)
        cert = contact_exponent_onevar(f_one, args.p, depth=args.depth, budget=args.budget)
        records = [sum_onevar(f_one, PhaseSpec(args.p, m, args.u)) for m in _parse_m_range(args.m)]
    else:
        if not args.f or not args.g:
            raise ValueError("verify needs --f and --g (or --onevar)")
        f, g = parse_poly(args.f), parse_poly(args.g)
        cert = contact_exponent(f, g, args.p, depth=args.depth, budget=args.budget)
        records = decay_records(f, g, args.p, _parse_m_range(args.m), u=args.u)
    report = decay_fit(records, cert, tolerance=args.tolerance)
    config = _resolved_config(
        args, ("p", "m", "u", "f", "g", "onevar", "depth", "tolerance", "format")
    )
    config["exponent_confidence"] = cert.confidence
    with _Output(args.out) as fh:
        if args.format == "csv":
            write_decay_csv(report, fh, config)
        else:
            write_decay_json(report, fh, config)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_sigma(args) -> int:
    if args.onevar:
        if not args.f or args.g:
            raise ValueError("--onevar takes the one-variable polynomial in --f, with no --g")
        f_one = parse_univariate(args.f)
        cert = contact_exponent_onevar(f_one, args.p, depth=args.depth, budget=args.budget)
    else:
        if not args.f or not args.g:
            raise ValueError("sigma needs --f and --g (or --onevar)")
        f, g = parse_poly(args.f), parse_poly(args.g)
        cert = contact_exponent(f, g, args.p, depth=args.depth, budget=args.budget)
    config = _resolved_config(args, ("p", "f", "g", "onevar", "depth"))
    payload = {"config": config, "certificate": cert.to_json_dict()}
    with _Output(args.out) as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK


def cmd_param(args) -> int:
    f = parse_poly(args.f)
    try:
        x_text, _, y_text = args.at.partition(",")
        x0, y0 = int(x_text), int(y_text)
    except ValueError as exc:
        raise ValueError(f"--at expects 'x,y' integers, got {args.at!r}") from exc
    pt = certify_point(f, x0, y0, args.p, args.level)
    param = hensel_param(f, pt, order=args.order, precision=args.precision)
    config = _resolved_config(
        args, ("p", "f", "at", "level", "order", "precision", "g", "m", "u", "l")
    )
    payload = {
        "config": config,
        "parametrization": {
            "anchor": [param.anchor.x, param.anchor.y],
            "solve_for": param.solve_for,
            "p": param.p,
            "precision": param.n,
            "coefficients": list(param.series.coeffs),
        },
    }
    if args.g is not None:
        if args.m is None:
            raise ValueError("a restricted sum needs --m")
        g = parse_poly(args.g)
        phase = PhaseSpec(args.p, _single_level(args), args.u)
        record = sum_parametric(param, g, args.l, phase)
        payload["sum"] = record.to_json_dict()
    with _Output(args.out) as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicsums",
        description="Exponential sums along plane curves over the p-adic integers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, *, m=False, fg=False, method=False, depth=False, fmt=False):
        sp.add_argument("--p", type=int, required=False, help="prime p")
        sp.add_argument("--config", help="key=value defaults file")
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--budget", type=int, default=BRUTE_BUDGET, help="work cap")
        if m:
            sp.add_argument("--m", help="level m, or inclusive range a..b")
        if fg:
            sp.add_argument("--f", help="curve polynomial in x, y")
            sp.add_argument("--g", help="weight polynomial in x, y")
            sp.add_argument(
                "--onevar",
                action="store_true",
                help="treat --f as a one-variable polynomial in x, sum over x mod p^m",
            )
            sp.add_argument("--u", type=int, default=1, help="unit numerator of z = u/p^m")
        if method:
            sp.add_argument(
                "--method", choices=("auto", "brute", "lift"), default="auto"
            )
        if depth:
            sp.add_argument("--depth", type=int, default=6, help="critical-locus search depth")
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("points", help="enumerate curve points mod p^m")
    common(sp, m=True, method=True)
    sp.add_argument("--f", help="curve polynomial in x, y")
    sp.set_defaults(func=cmd_points)

    sp = sub.add_parser("sum", help="evaluate sums for levels m")
    common(sp, m=True, fg=True, method=True, fmt=True)
    sp.add_argument("--sigma", type=int, help="normalize magnitudes by p^(m(1-1/sigma))")
    sp.set_defaults(func=cmd_sum)

    sp = sub.add_parser("verify", help="fit |S_m| decay against the predicted exponent")
    common(sp, m=True, fg=True, depth=True, fmt=True)
    sp.add_argument("--tolerance", type=float, default=0.05, help="slope tolerance")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sigma", help="oscillation exponent certificate")
    common(sp, fg=True, depth=True)
    sp.set_defaults(func=cmd_sigma)

    sp = sub.add_parser("param", help="branch parametrization at a point")
    common(sp, m=True, fg=True)
    sp.add_argument("--at", required=False, help="anchor point 'x,y'")
    sp.add_argument("--level", type=int, default=1, help="certification level of the anchor")
    sp.add_argument("--order", type=int, default=16, help="t-order of the series")
    sp.add_argument("--precision", type=int, default=16, help="p-adic digits carried")
    sp.add_argument("--l", type=int, default=0, help="restrict the sum to v(t) >= l")
    sp.set_defaults(func=cmd_param)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Fold --config file values in as defaults; explicit flags still win."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return argv
    values = _load_config(known.config)
    # Insert config-derived options right after the subcommand so that any
    # explicit occurrence later in argv overrides them.
    if not argv:
        return argv
    head, tail = argv[:1], argv[1:]
    injected: list[str] = []
    for key, value in values.items():
        if isinstance(value, bool):
            if value:
                injected.append(f"--{key}")
            continue
        injected.extend([f"--{key}", str(value)])
    return head + injected + tail


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if getattr(args, "p", None) is None:
            parser.error("--p is required (flag or config file)")
        if args.command == "points" and not args.f:
            parser.error("points needs --f")
        if args.command == "param" and not args.at:
            parser.error("param needs --at")
        if args.command in ("points", "sum", "verify", "param") and not getattr(args, "m", None):
            if args.command != "param" or args.g is not None:
                parser.error(f"{args.command} needs --m")
        return args.func(args)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already; normalize None to 0
        return int(exc.code or 0)
    except PolySyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WeightConstantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WEIGHT_CONSTANT
    except (ContactInconclusiveError, SeriesPrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (BudgetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
