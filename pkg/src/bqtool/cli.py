"""Command-line surface.

Subcommands: word, palindrome, bq, tree, ps, bip, growth, scan.  Exit
codes: 0 for completed queries (a Fails or Inconclusive outcome is an
answer), 1 for usage errors, 2 for numeric or degenerate inputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional

from . import kernel
from .analysis import angle_decay_scan, bip_scan, palindromic_chain, ps_scan
from .errors import BqToolError
from .farey import (
    BasicPair,
    Fraction,
    mod2_type,
    palindromic_representative,
    standard_word,
)
from .markoff import (
    BqParams,
    MarkoffTriple,
    decide_bq,
    fibonacci_growth_scan,
    validate_certificate,
)
from .scan import ScanConfig, dot_text, render_ppm, scan_grid

__all__ = ["main", "parse_complex", "parse_triple", "parse_fraction"]


# ---------------------------------------------------------------------------
# literal parsing
# ---------------------------------------------------------------------------


def parse_complex(text: str) -> complex:
    """Parse ``re``, ``imi``, or ``re±imi`` (e.g. ``2.5``, ``-i``,
    ``1.5-0.25i``, ``1e-3i``)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if not s.endswith(("i", "I")):
        return complex(float(s), 0.0)
    body = s[:-1]
    split = -1
    for idx in range(len(body) - 1, 0, -1):
        if body[idx] in "+-" and body[idx - 1] not in "eE":
            split = idx
            break
    if split == -1:
        re_part, im_part = "", body
    else:
        re_part, im_part = body[:split], body[split:]
    if im_part in ("", "+"):
        im = 1.0
    elif im_part == "-":
        im = -1.0
    else:
        im = float(im_part)
    re_val = float(re_part) if re_part else 0.0
    return complex(re_val, im)


def parse_triple(text: str) -> MarkoffTriple:
    """Parse ``x,y,z`` where each component is a complex literal."""
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"triple needs three components, got {len(parts)}")
    x, y, z = (parse_complex(p) for p in parts)
    return MarkoffTriple(x, y, z)


def parse_fraction(text: str) -> Fraction:
    """Parse ``p/q`` (or a bare integer p, meaning p/1)."""
    s = text.strip()
    if "/" in s:
        p_str, q_str = s.split("/", 1)
        return Fraction(int(p_str), int(q_str))
    return Fraction(int(s), 1)


def _resolve_threads(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("BQTOOL_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _params_from_args(args: argparse.Namespace) -> BqParams:
    return BqParams(
        tau=args.tol,
        margin=args.margin,
        floor=args.floor,
        budget=int(args.max_nodes),
    )


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write to {path!r}: {exc}") from exc


def _emit_report(args: argparse.Namespace, report) -> None:
    if getattr(args, "json", None):
        _write_text(
            args.json,
            json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n",
        )
    if getattr(args, "csv", None) and hasattr(report, "csv_rows"):
        _write_text(args.csv, "\n".join(report.csv_rows()) + "\n")


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_word(args: argparse.Namespace) -> int:
    f = args.fraction
    w = standard_word(f)
    print(f"fraction: {f}")
    print(f"word: {w}")
    print(f"length: {len(w)}")
    print(f"type: {mod2_type(f)}")
    return 0


def _cmd_palindrome(args: argparse.Namespace) -> int:
    pair = BasicPair.from_cli_name(args.pair)
    w = palindromic_representative(args.fraction, pair)
    print(f"fraction: {args.fraction}")
    print(f"pair: {pair.cli_name}")
    print(f"palindrome: {w}")
    return 0


def _cmd_bq(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    outcome = decide_bq(args.triple, params)
    print(f"status: {outcome.status}")
    if outcome.witness is not None:
        print(f"witness: {outcome.witness} -> {outcome.witness_value}")
    if outcome.reason:
        print(f"reason: {outcome.reason}")
    for key in sorted(outcome.stats):
        print(f"{key}: {outcome.stats[key]}")
    if outcome.certificate is not None:
        if args.json:
            _write_text(args.json, outcome.certificate.to_json() + "\n")
        if args.validate:
            report = validate_certificate(outcome.certificate, args.triple)
            print(report)
    if outcome.status == "reducible":
        return 2
    return 0


def _cmd_tree(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    outcome = decide_bq(args.triple, params)
    if outcome.certificate is None:
        print(
            f"no exploration tree: status {outcome.status} decided at the base",
            file=sys.stderr,
        )
        return 2
    _write_text(args.out, dot_text(outcome.certificate))
    return 0


def _cmd_ps(args: argparse.Namespace) -> int:
    report = ps_scan(
        args.triple,
        args.depth,
        eps=args.eps,
        copies=args.copies,
        workers=_resolve_threads(args.threads),
    )
    k = "inf" if math.isinf(report.k_star) else repr(report.k_star)
    print(f"depth: {report.depth}")
    print(f"classes: {len(report.records)}")
    print(f"k_star: {k}")
    print(f"worst: {report.worst if report.worst is not None else '-'}")
    print(
        "flagged: "
        + (", ".join(str(f) for f in report.flagged) if report.flagged else "-")
    )
    _emit_report(args, report)
    return 0


def _cmd_bip(args: argparse.Namespace) -> int:
    report = bip_scan(args.triple, args.depth)
    print(f"depth: {report.depth}")
    print(f"records: {len(report.records)} (skipped {report.skipped_count})")
    print(f"d_max: {report.d_max!r}")
    for pair, d in sorted(
        report.d_max_by_pair.items(), key=lambda kv: kv[0].cli_name
    ):
        print(f"d_max[{pair.cli_name}]: {d!r}")
    live = [r for r in report.records if not r.skipped]
    if live:
        print(f"max residual_d: {max(r.residual_d for r in live)!r}")
        print(f"max residual_theta: {max(r.residual_theta for r in live)!r}")
    _emit_report(args, report)
    return 0


def _cmd_growth(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    report = fibonacci_growth_scan(args.triple, args.depth, params)
    print(f"depth: {report.depth}")
    print(f"records: {len(report.records)}")
    print(f"c_minus: {report.c_minus!r}")
    print(f"c_plus: {report.c_plus!r}")
    print(f"fibonacci_c: {report.fibonacci_c!r}")
    print(f"wakes_sampled: {report.wakes_sampled}")
    print(f"certified: {report.certified}")
    if report.note:
        print(f"note: {report.note}")
    if report.exceptions:
        print("exceptions: " + ", ".join(str(f) for f in report.exceptions))
    if args.json:
        payload = {
            "kind": "growth-report",
            "depth": report.depth,
            "c_minus": report.c_minus,
            "c_plus": report.c_plus,
            "fibonacci_c": report.fibonacci_c,
            "wakes_sampled": report.wakes_sampled,
            "certified": report.certified,
            "note": report.note,
            "excluded": [str(f) for f in report.excluded],
            "exceptions": [str(f) for f in report.exceptions],
            "records": [
                {"fraction": str(f), "level": lvl, "log_plus": logp}
                for f, lvl, logp in report.records
            ],
        }
        _write_text(args.json, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    if args.csv:
        rows = ["fraction,level,log_plus"]
        rows += [
            f"{f},{lvl},{logp!r}" for f, lvl, logp in report.records
        ]
        _write_text(args.csv, "\n".join(rows) + "\n")
    return 0


def _cmd_scan(args: argparse.Namespace) -> int:
    cfg = ScanConfig(
        kind=args.slice,
        center=args.center,
        width=args.width,
        height=args.height,
        cols=args.cols,
        rows=args.rows,
        x=args.x,
        y=args.y,
        params=_params_from_args(args),
        workers=_resolve_threads(args.threads),
    )
    result = scan_grid(cfg, validate=args.validate)
    counts: dict[str, int] = {}
    for r in result.records:
        counts[r.status] = counts.get(r.status, 0) + 1
    print(f"cells: {len(result.records)} ({cfg.cols}x{cfg.rows})")
    print(f"backend: {kernel.BACKEND}")
    for status in sorted(counts):
        print(f"{status}: {counts[status]}")
    if args.validate:
        bad = [r for r in result.records if r.validated is False]
        print(f"validated: {'all ok' if not bad else f'{len(bad)} FAILED'}")
    if args.out:
        render_ppm(result, args.out)
    if args.csv:
        _write_text(args.csv, result.to_csv_text())
    if args.json:
        _write_text(args.json, result.to_json_text())
    return 0


def _cmd_chain(args: argparse.Namespace) -> int:
    pair = BasicPair.from_cli_name(args.pair)
    report = palindromic_chain(args.fraction, pair, args.triple)
    print(f"pair: {pair.cli_name}")
    print(f"length: {len(report.steps)}")
    for step in report.steps:
        print(f"  {step.fraction}  |value| = {step.value_modulus!r}  {step.word}")
    print(f"terminal: {report.terminal} (core contact {report.core_contact})")
    if args.json:
        _write_text(
            args.json,
            json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n",
        )
    return 0


def _cmd_angles(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    report = angle_decay_scan(args.triple, args.depth, params)
    print(f"depth: {report.depth}")
    print(f"records: {len(report.records)}")
    print(f"fitted_k: {report.fitted_k!r}")
    print(
        "im_band_max: "
        + ", ".join(repr(b) for b in report.im_band_max)
    )
    _emit_report(args, report)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 on usage errors, not 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-9, help="witness tolerance")
    p.add_argument("--margin", type=float, default=1e-6, help="prune margin")
    p.add_argument("--floor", type=float, default=0.0, help="prune floor")
    p.add_argument(
        "--max-nodes", type=float, default=100_000, help="node budget"
    )


def _add_outputs(p: argparse.ArgumentParser, csv: bool = True) -> None:
    p.add_argument("--json", metavar="FILE", help="write JSON report")
    if csv:
        p.add_argument("--csv", metavar="FILE", help="write CSV report")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bqtool", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("word", help="standard word of a fraction")
    p.add_argument("fraction", type=parse_fraction)
    p.set_defaults(handler=_cmd_word)

    p = sub.add_parser("palindrome", help="palindromic representative")
    p.add_argument("fraction", type=parse_fraction)
    p.add_argument(
        "--pair", required=True, choices=["ab", "a-ab", "b-ab"],
    )
    p.set_defaults(handler=_cmd_palindrome)

    p = sub.add_parser("bq", help="run the BQ semi-decision")
    p.add_argument("--triple", type=parse_triple, required=True)
    _add_params(p)
    p.add_argument("--json", metavar="FILE", help="write certificate JSON")
    p.add_argument(
        "--validate", action="store_true", help="validate the certificate"
    )
    p.set_defaults(handler=_cmd_bq)

    p = sub.add_parser("tree", help="DOT export of the explored tree")
    p.add_argument("--triple", type=parse_triple, required=True)
    _add_params(p)
    p.add_argument("--out", metavar="FILE", help="DOT output (default stdout)")
    p.set_defaults(handler=_cmd_tree)

    p = sub.add_parser("ps", help="quasigeodesic constants per class")
    p.add_argument("--triple", type=parse_triple, required=True)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--copies", type=int, default=6)
    p.add_argument("--threads", type=int, default=None)
    _add_outputs(p)
    p.set_defaults(handler=_cmd_ps)

    p = sub.add_parser("bip", help="palindromic axis intersections")
    p.add_argument("--triple", type=parse_triple, required=True)
    p.add_argument("--depth", type=int, default=8)
    _add_outputs(p)
    p.set_defaults(handler=_cmd_bip)

    p = sub.add_parser("growth", help="value growth against word length")
    p.add_argument("--triple", type=parse_triple, required=True)
    p.add_argument("--depth", type=int, default=8)
    _add_params(p)
    _add_outputs(p)
    p.set_defaults(handler=_cmd_growth)

    p = sub.add_parser("angles", help="axis angle decay over neighbour pairs")
    p.add_argument("--triple", type=parse_triple, required=True)
    p.add_argument("--depth", type=int, default=8)
    _add_params(p)
    _add_outputs(p)
    p.set_defaults(handler=_cmd_angles)

    p = sub.add_parser("chain", help="descending palindromic chain")
    p.add_argument("--triple", type=parse_triple, required=True)
    p.add_argument("fraction", type=parse_fraction)
    p.add_argument("--pair", required=True, choices=["ab", "a-ab", "b-ab"])
    p.add_argument("--json", metavar="FILE")
    p.set_defaults(handler=_cmd_chain)

    p = sub.add_parser("scan", help="parameter-plane slice scan")
    p.add_argument(
        "--slice", choices=["diagonal", "fix-xy"], default="diagonal"
    )
    p.add_argument("--center", type=parse_complex, default=2.5 + 0j)
    p.add_argument("--width", type=float, default=3.0)
    p.add_argument("--height", type=float, default=None)
    p.add_argument("--cols", type=int, default=64)
    p.add_argument("--rows", type=int, default=64)
    p.add_argument("--x", type=parse_complex, default=0j)
    p.add_argument("--y", type=parse_complex, default=0j)
    p.add_argument("--threads", type=int, default=None)
    _add_params(p)
    p.add_argument("--out", metavar="FILE", help="PPM image output")
    _add_outputs(p)
    p.add_argument("--validate", action="store_true")
    p.set_defaults(handler=_cmd_scan)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except BqToolError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OverflowError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
