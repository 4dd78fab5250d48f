"""Command-line entry point: ``qpointer <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import Observable
from .errors import ConfigError, DimensionOverflow, DomainError
from .fockspace import build_annihilator, build_creation, build_number, build_q_half_number, build_quadratures
from .presets import PRESET_COMMAND, PRESETS, linspace
from .sweeps import RUNNERS, SweepSpec, format_cell, write
from .verify import report_json, run_verify

log = logging.getLogger("qpointer")

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_IO = 3

OPERATORS = ("a", "a_dag", "number", "q_half_number", "x1", "x2", "p")


def parse_key_value(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    key, value = key.strip(), value.strip()
    if not key:
        raise ConfigError(f"empty key in {text!r}")
    return key, value


def read_config_file(path: Path) -> dict:
    """``key = value`` lines; blank lines and ``#`` comments ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                key, value = parse_key_value(line)
            except ConfigError as err:
                raise ConfigError(f"{path}:{lineno}: {err}") from None
            out[key] = value
    return out


def parse_range(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"cannot parse range {text!r}") from None
    if count < 1:
        raise ConfigError("range count must be >= 1")
    if count > 1 and not stop > start:
        raise ConfigError("range stop must exceed start")
    return linspace(start, stop, count)


def parse_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"cannot parse value list {text!r}") from None


def _spec_from_args(args) -> SweepSpec:
    overrides = {}
    if args.config is not None:
        overrides.update(read_config_file(args.config))
    for item in args.set or []:
        key, value = parse_key_value(item)
        overrides[key] = value
    axis_values = None
    if args.range is not None and args.values is not None:
        raise ConfigError("give either --range or --values, not both")
    if args.range is not None:
        axis_values = parse_range(args.range)
    elif args.values is not None:
        axis_values = parse_list(args.values)
    series = None
    if args.series is not None:
        key, values = parse_key_value(args.series)
        series = (key, parse_list(values))
    return SweepSpec(
        preset=args.preset,
        overrides=overrides,
        sweep_axis=args.axis,
        axis_values=axis_values,
        series=series,
        output_path=args.out,
        format=args.format,
    )


def cmd_sweep(args) -> int:
    spec = _spec_from_args(args)
    if spec.preset is not None and PRESET_COMMAND[spec.preset] != args.command:
        log.warning("preset %s is meant for '%s', running '%s'", spec.preset, PRESET_COMMAND[spec.preset], args.command)
    result = RUNNERS[args.command](spec)
    clipped = result.metadata["clipped"]
    if clipped:
        log.warning("%d point(s) outside the series domain were flagged, not computed", len(clipped))
    text = write(result, spec.output_path, spec.format)
    if spec.output_path is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    report = run_verify(args.tol, args.seed, args.count)
    text = report_json(report)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    log.info("verify: %d checks in %.1f s", report["checks"], time.perf_counter() - t0)
    if not report["passed"]:
        log.error("verification failed: %d failing check(s)", report["failure_count"])
        return EXIT_VERIFY
    return EXIT_OK


def _operator_matrix(name: str, q: float, dim: int) -> np.ndarray:
    if name == "a":
        return build_annihilator(q, dim).entries
    if name == "a_dag":
        return build_creation(q, dim).entries
    if name == "number":
        return build_number(q, dim).entries
    if name == "q_half_number":
        return build_q_half_number(q, dim).entries
    x1, x2, p = build_quadratures(q, dim)
    return {"x1": x1, "x2": x2, "p": p}[name].entries


def cmd_dump_operators(args) -> int:
    if args.dim < 2:
        raise ConfigError("--dim must be >= 2")
    if not 0.0 < args.q <= 1.0:
        raise ConfigError("q must satisfy 0 < q <= 1")
    names = OPERATORS if args.operator == "all" else (args.operator,)
    lines = ["# metadata: " + f'{{"dim":{args.dim},"q":{format_cell(float(args.q))},"tool":"qpointer","version":"{__version__}"}}']
    lines.append("operator,row,col,entry_re,entry_im")
    for name in names:
        m = _operator_matrix(name, args.q, args.dim)
        rows, cols = np.nonzero(m)
        for i, j in zip(rows.tolist(), cols.tolist()):
            v = complex(m[i, j])
            lines.append(f"{name},{i},{j},{format_cell(v.real)},{format_cell(v.imag)}")
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpointer", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        "weak-value": "weak value and eigenvalue baseline",
        "photon-dist": "photon-number distribution of the pointer",
        "mandel": "Mandel parameter",
        "g2": "zero-delay second-order correlation",
        "quadrature": "quadrature variances, squeezing and uncertainty product",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a parameter (repeatable)")
        p.add_argument("--config", type=Path, help="file of key=value lines, applied before --set")
        p.add_argument("--axis", help="sweep axis: q, g, z_modulus or n")
        p.add_argument("--range", metavar="START:STOP:COUNT", help="evenly spaced axis values, endpoints included")
        p.add_argument("--values", metavar="V1,V2,...", help="explicit axis values")
        p.add_argument("--series", metavar="KEY=V1,V2,...", help="one curve per value of KEY")
        p.add_argument("--out", type=Path)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="randomized closed-form versus Fock-oracle checks")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump-operators", help="write truncated operator matrices as CSV")
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--operator", choices=OPERATORS + ("all",), default="all")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_dump_operators)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (ConfigError, DomainError, DimensionOverflow, ValueError) as err:
        print(f"qpointer: error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"qpointer: I/O error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
