"""Command-line front end and the stable file formats.

Commands: optimize (best exponent for one annotation), search / chart
(result tables over proof lengths), verify (check a certificate file),
recur (branching-recurrence analysis).  Exit codes: 0 success or
verified, 1 verification failure, 2 usage or input error.

Certificates are JSON with rationals serialized as exact "p/q" strings;
search tables are CSV with header ``lines,best_c,annotation`` where
best_c is the bracket midpoint rendered to six fractional digits with
round-half-even.  Identical configurations produce byte-identical
outputs regardless of the worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import kernel, prover, recurrence
from .annotation import AnnotationError, validate
from .kernel import ClassLine, QuantifierBlock, RuleStep
from .lp import build_lp
from .prover import SearchRecord
from .verifier import ProofCertificate, verify

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    tolerance: Fraction
    eps: Fraction
    max_lines: int = 7
    budget: int = 1000
    worker_count: int = 1
    output: str | None = None
    json_output: str | None = None

    def validate(self) -> None:
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        if self.eps <= 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")
        if self.max_lines < 3:
            raise ValueError(f"max-lines must be >= 3, got {self.max_lines}")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.worker_count < 1:
            raise ValueError(f"workers must be >= 1, got {self.worker_count}")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational {text!r}") from exc


def format_decimal(value: Fraction, digits: int = 6) -> str:
    """Fixed-point decimal, round-half-even, exact in rational arithmetic."""
    scale = 10**digits
    scaled = round(value * scale)  # round() on Fraction is banker's rounding
    sign = "-" if scaled < 0 else ""
    whole, part = divmod(abs(scaled), scale)
    return f"{sign}{whole}.{part:0{digits}d}" if digits else f"{sign}{whole}"


# -- certificate JSON -------------------------------------------------------


def certificate_to_json(cert: ProofCertificate) -> dict:
    steps = []
    for step in cert.steps:
        entry: dict = {"rule": step.rule}
        if step.x is not None:
            entry["x"] = str(step.x)
        entry["blocks"] = [
            {"q": b.quantifier, "a": str(b.guess_exp), "b": str(b.feed_exp)}
            for b in step.result.blocks
        ]
        entry["dts"] = str(step.result.dts_exp)
        steps.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "c": str(cert.c),
        "eps": str(cert.eps),
        "a0": str(cert.a0),
        "steps": steps,
        "nu": str(cert.final_ntime_exp),
    }


def certificate_from_json(data: dict) -> ProofCertificate:
    """Structural decoding only; semantic checks belong to the verifier."""
    try:
        if data["schema_version"] != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data['schema_version']!r}")
        steps = []
        for entry in data["steps"]:
            blocks = tuple(
                QuantifierBlock(
                    str(block["q"]),
                    parse_rational(block["a"]),
                    parse_rational(block["b"]),
                )
                for block in entry["blocks"]
            )
            x = parse_rational(entry["x"]) if "x" in entry else None
            steps.append(RuleStep(str(entry["rule"]), x, ClassLine(blocks, parse_rational(entry["dts"]))))
        return ProofCertificate(
            c=parse_rational(data["c"]),
            eps=parse_rational(data["eps"]),
            a0=parse_rational(data["a0"]),
            steps=tuple(steps),
            final_ntime_exp=parse_rational(data["nu"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed certificate: {exc}") from exc


def write_certificate(cert: ProofCertificate, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(certificate_to_json(cert), handle, indent=2)
        handle.write("\n")


def read_certificate(path: str) -> ProofCertificate:
    with open(path, "r", encoding="utf-8") as handle:
        return certificate_from_json(json.load(handle))


def render_derivation(cert: ProofCertificate) -> str:
    """Derivation chain in the style of the seven-line lower-bound proof."""
    lines = [f"assume SAT ∈ DTS[n^{{{cert.c}}}]", f"NTIME[n^{{{cert.a0}}}]"]
    for step in cert.steps:
        label = "Slowdown" if step.rule == kernel.SLOWDOWN else f"Speedup, with x = {step.x}"
        lines.append(f"  ⊆ {kernel.format_class_line(step.result)}   ({label})")
    lines.append(f"  ⊆ NTIME[n^{{{cert.final_ntime_exp}}}]")
    lines.append(
        f"{cert.final_ntime_exp} ≤ {cert.a0} - {cert.eps}: "
        "contradicts the nondeterministic time hierarchy"
    )
    return "\n".join(lines)


# -- search table output ----------------------------------------------------


def records_to_csv(records: list[SearchRecord]) -> str:
    rows = ["lines,best_c,annotation"]
    rows.extend(
        f"{r.lines},{format_decimal(r.midpoint)},{r.annotation}" for r in records
    )
    return "\n".join(rows) + "\n"


def records_to_json(records: list[SearchRecord], config: RunConfig, mode: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": mode,
        "tolerance": str(config.tolerance),
        "eps": str(config.eps),
        "records": [
            {
                "lines": r.lines,
                "annotation": r.annotation.tags,
                "best_c": str(r.best_c),
                "bracket_high": str(r.bracket_high),
                "certificate": certificate_to_json(r.certificate),
            }
            for r in records
        ],
    }


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


# -- commands ---------------------------------------------------------------


def cmd_optimize(args: argparse.Namespace) -> int:
    config = RunConfig(tolerance=args.tol, eps=args.eps)
    config.validate()
    annotation = validate(args.annotation)
    lo, hi, cert = prover.bisect_exponent(annotation.tags, config.tolerance, config.eps)
    print(f"annotation {annotation} ({len(annotation)} lines)")
    print(f"c* ∈ [{lo}, {hi}]")
    print(f"c* ≈ {format_decimal((lo + hi) / 2)}")
    print()
    print(render_derivation(cert))
    cert_path = args.cert or f"cert-{annotation}.json"
    write_certificate(cert, cert_path)
    print(f"\ncertificate written to {cert_path}")
    if args.dump_lp:
        _write_text(args.dump_lp, build_lp(annotation, lo, config.eps).dump())
        print(f"feasibility LP at c = {lo} written to {args.dump_lp}")
    return EXIT_OK


def cmd_search(args: argparse.Namespace, csv_only: bool = False) -> int:
    config = RunConfig(
        tolerance=args.tol,
        eps=args.eps,
        max_lines=args.max_lines,
        budget=args.budget,
        worker_count=args.workers,
        output=args.output,
        json_output=getattr(args, "json", None),
    )
    config.validate()
    records = prover.exhaustive_search(
        config.max_lines,
        config.tolerance,
        eps=config.eps,
        workers=config.worker_count,
    )
    if args.mode == "heuristic":
        records = prover.heuristic_search(
            records,
            config.budget,
            config.tolerance,
            eps=config.eps,
            workers=config.worker_count,
        )
    csv_text = records_to_csv(records)
    if csv_only:
        if config.output:
            _write_text(config.output, csv_text)
        else:
            sys.stdout.write(csv_text)
    else:
        print(f"{'lines':>5}  {'best_c':>10}  annotation")
        for record in records:
            print(
                f"{record.lines:>5}  {format_decimal(record.midpoint):>10}  {record.annotation}"
            )
        if config.output:
            _write_text(config.output, csv_text)
            print(f"CSV written to {config.output}")
    if config.json_output:
        payload = records_to_json(records, config, args.mode)
        _write_text(config.json_output, json.dumps(payload, indent=2) + "\n")
        if not csv_only:
            print(f"JSON written to {config.json_output}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        cert = read_certificate(args.path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = verify(cert)
    print(str(result))
    return EXIT_OK if result.accepted else EXIT_REJECTED


def cmd_recur(args: argparse.Namespace) -> int:
    digits = args.digits
    tol = args.tol
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if args.decrements:
        decrements = [parse_rational(p) for p in args.decrements.split(",")]
        lo, hi = recurrence.growth_root_bracket(decrements, tol)
        print(f"growth root ≈ {format_decimal((lo + hi) / 2, digits)}  (bracket [{lo}, {hi}])")
        return EXIT_OK
    system = recurrence.parse_branches(args.branches)
    if args.optimize:
        if not args.box:
            raise ValueError("--optimize needs --box")
        box = []
        for part in args.box.split(";"):
            lo_text, hi_text = part.split(",")
            box.append((parse_rational(lo_text), parse_rational(hi_text)))
        fixed_sum = parse_rational(args.fixed_sum) if args.fixed_sum else None
        result = recurrence.optimize_weights([system], box, tol, fixed_sum=fixed_sum)
        weights_text = ", ".join(str(w) for w in result.weights)
        print(f"optimal weights ({weights_text})")
        print(f"objective growth root ≈ {format_decimal(result.objective, digits)}")
        print(f"converged: {'yes' if result.converged else 'no'}")
        return EXIT_OK
    if not args.weights:
        raise ValueError("--branches needs --weights or --optimize")
    weights = tuple(parse_rational(p) for p in args.weights.split(","))
    combined = recurrence.combine_weights(system, weights)
    combined_text = ", ".join(str(d) for d in combined)
    lo, hi = recurrence.growth_root_bracket(combined, tol)
    print(f"combined decrements: {combined_text}")
    print(f"growth root ≈ {format_decimal((lo + hi) / 2, digits)}  (bracket [{lo}, {hi}])")
    return EXIT_OK


def _default_workers() -> int:
    env = os.environ.get("ATLP_WORKERS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atlp",
        description="Alternation-trading lower-bound prover for SAT on small-space machines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    opt = sub.add_parser("optimize", help="best provable exponent for one annotation")
    opt.add_argument("--annotation", required=True, help="rule sequence over D/S, e.g. DSSDDSD")
    opt.add_argument("--tol", type=parse_rational, default=Fraction(1, 10**9))
    opt.add_argument("--eps", type=parse_rational, default=prover.EPS_DEFAULT)
    opt.add_argument("--cert", help="certificate output path (default cert-<annotation>.json)")
    opt.add_argument("--dump-lp", help="write the feasibility LP at c* in text form")
    opt.set_defaults(func=cmd_optimize)

    def add_search_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mode", choices=["exhaustive", "heuristic"], default="exhaustive")
        p.add_argument("--max-lines", type=int, default=7)
        p.add_argument("--budget", type=int, default=1000, help="heuristic evaluation budget")
        p.add_argument("--tol", type=parse_rational, default=Fraction(1, 10**6))
        p.add_argument("--eps", type=parse_rational, default=prover.EPS_DEFAULT)
        p.add_argument("--workers", type=int, default=_default_workers())
        p.add_argument("--output", help="CSV output path")
        p.add_argument("--json", help="JSON output path with exact rationals")

    search = sub.add_parser("search", help="search over proof shapes, print the result table")
    add_search_args(search)
    search.set_defaults(func=cmd_search)

    chart = sub.add_parser("chart", help="like search but emits only the CSV")
    add_search_args(chart)
    chart.set_defaults(func=lambda a: cmd_search(a, csv_only=True))

    ver = sub.add_parser("verify", help="check a certificate file")
    ver.add_argument("path")
    ver.set_defaults(func=cmd_verify)

    rec = sub.add_parser("recur", help="branching-recurrence growth roots and weights")
    group = rec.add_mutually_exclusive_group(required=True)
    group.add_argument("--decrements", help="comma list, e.g. 1,4")
    group.add_argument("--branches", help="branch vectors, e.g. \"3,1;5,4\"")
    rec.add_argument("--weights", help="comma list of weights, e.g. 1/2,1")
    rec.add_argument("--optimize", action="store_true", help="optimize weights over --box")
    rec.add_argument("--box", help="per-coordinate intervals, e.g. \"0,1;1,1\"")
    rec.add_argument("--fixed-sum", help="constrain the weights to this total")
    rec.add_argument("--tol", type=parse_rational, default=Fraction(1, 10**6))
    rec.add_argument("--digits", type=int, default=6)
    rec.set_defaults(func=cmd_recur)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ValueError as exc:  # rational parsing inside argparse types
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except AnnotationError as exc:
        print(f"error: invalid annotation: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (prover.AnchorInfeasibleError, prover.CeilingFeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
