"""Command line front end: ``montesinos <subcommand> ...``.

Exit codes for ``classify``: 0 certified, 2 residual family, 3 anomaly,
1 parse or validation error (including links).  ``certify`` and
``gb-verify`` exit 4 when the input is well formed but fails the check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from .classifier import Verdict, classify, cross_check, enumerate_and_classify, summarize
from .feasibility import PRESETS, Certificate, NotAKnotError, fmt, verify_certificate
from .gauss_bonnet import GraphError, InconsistencyError, graph_euler_check, incidence_problems, load_graph, validate_graph
from .tangles import TangleError, parse_knot

log = logging.getLogger("montesinos")

EXIT_OK, EXIT_ERROR, EXIT_FAMILY, EXIT_ANOMALY, EXIT_INVALID = 0, 1, 2, 3, 4
CSV_HEADER = ["knot", "verdict", "family", "certificate_source"]


@dataclass(frozen=True)
class RunConfig:
    q_bound: int = 5
    output_format: str = "json"
    parallelism: int = 1
    include_links: bool = False

    def __post_init__(self):
        if self.q_bound < 2:
            raise ValueError(f"--q-bound must be >= 2, got {self.q_bound}")
        if self.parallelism < 1:
            raise ValueError(f"--jobs must be >= 1, got {self.parallelism}")
        if self.output_format not in ("json", "csv", "table"):
            raise ValueError(f"unknown format {self.output_format!r}")


def pi_str(x: Fraction) -> str:
    """2/3 -> '2π/3', 1 -> 'π'."""
    x = Fraction(x)
    num = "π" if x.numerator == 1 else f"{x.numerator}π"
    return num if x.denominator == 1 else f"{num}/{x.denominator}"


def _angles(xs) -> str:
    return "(" + ", ".join(pi_str(x) for x in xs) + ")"


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _dump(obj, out) -> None:
    out.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _csv_line(fields) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(fields)
    return buf.getvalue()


def cmd_classify(args) -> int:
    try:
        k = parse_knot(args.knot)
        c = classify(k)
    except NotAKnotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except TangleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    with _output(args.output) as out:
        if args.format == "json":
            row = c.to_json()
            if args.cross_check:
                row["cross_check"] = cross_check(k)
            _dump(row, out)
        elif args.format == "csv":
            out.write(_csv_line(CSV_HEADER))
            out.write(_csv_line([k.literal(), c.verdict.value, c.family or "", c.source or ""]))
        else:
            out.write(f"{k.literal()}: {c.verdict.value}\n")
            if c.certificate:
                out.write(f"  source: {c.source}\n")
                out.write(f"  alpha_bar = {_angles(c.certificate.alpha_bar)}\n")
                out.write(f"  beta_bar  = {_angles(c.certificate.beta_bar)}\n")
            if c.family:
                out.write(f"  family {c.family} via {c.representative.literal()}\n")
            if c.report:
                out.write(f"  {c.report}\n")
    return {Verdict.CERTIFIED: EXIT_OK, Verdict.FAMILY: EXIT_FAMILY, Verdict.ANOMALY: EXIT_ANOMALY}[c.verdict]


def cmd_certify(args) -> int:
    try:
        k = parse_knot(args.knot)
        with open(args.certificate) as fh:
            cert = Certificate.from_json(json.load(fh))
    except (TangleError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    bad = verify_certificate(k, cert)
    with _output(args.output) as out:
        _dump({
            "knot": k.literal(),
            "certificate": cert.to_json(),
            "valid": not bad,
            "violations": [{"condition": v.provenance, "slack": fmt(v.slack)} for v in bad],
        }, out)
    return EXIT_INVALID if bad else EXIT_OK


def cmd_enumerate(args) -> int:
    try:
        cfg = RunConfig(args.q_bound, args.format, args.jobs, args.include_links)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    rows = []
    with _output(args.output) as out:
        if cfg.output_format == "csv":
            out.write(_csv_line(CSV_HEADER))
        for row in enumerate_and_classify(cfg.q_bound, cfg.parallelism, cfg.include_links):
            rows.append(row)
            if cfg.output_format == "json":
                _dump(row.to_json(), out)
            elif cfg.output_format == "csv":
                out.write(_csv_line(row.csv_fields()))
            else:
                knot, verdict, family, source = row.csv_fields()
                out.write(f"{knot:<28} {verdict:<10} {family!s:<3} {source}\n")
        summary = summarize(rows)
        if cfg.output_format == "json":
            _dump({"summary": summary}, out)
        elif cfg.output_format == "table":
            out.write(_summary_text(summary))
    if cfg.output_format == "csv":
        sys.stderr.write(_summary_text(summary))
    return EXIT_ANOMALY if summary["anomalies"] else EXIT_OK


def _summary_text(s: dict) -> str:
    fams = ", ".join(f"{k}:{v}" for k, v in s["by_family"].items()) or "-"
    return (
        f"total={s['total']} certified={s['certified']} family={s['family']} "
        f"anomalies={s['anomalies']} links={s['links']} by_family=[{fams}]\n"
    )


def cmd_gb_verify(args) -> int:
    try:
        g = load_graph(args.graph)
    except (GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    problems = validate_graph(g, args.delta)
    report = None
    if not incidence_problems(g):
        try:
            report = graph_euler_check(g)
        except (GraphError, InconsistencyError) as exc:
            problems.append(str(exc))
    with _output(args.output) as out:
        if args.format == "json":
            obj = report.to_json() if report else {}
            obj["violations"] = problems
            _dump(obj, out)
        else:
            if report:
                out.write(report.summary() + "\n")
            for p in problems:
                out.write(f"violation: {p}\n")
    return EXIT_INVALID if problems else EXIT_OK


def cmd_presets(args) -> int:
    with _output(args.output) as out:
        for p in PRESETS:
            verified = not verify_certificate(p.minimal_profile, p.certificate)
            if args.format == "json":
                _dump({"regime": p.regime, "pattern": p.pattern, **p.certificate.to_json(), "verified": verified}, out)
            else:
                out.write(
                    f"{p.regime:<8} {p.pattern:<48} alpha_bar={_angles(p.alpha_bar):<22} "
                    f"beta_bar={_angles(p.beta_bar):<22} verified={str(verified).lower()}\n"
                )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="montesinos",
        description="Angle certificates for length-3 Montesinos knots",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format="json"):
        p.add_argument("--format", choices=("json", "csv", "table"), default=default_format)
        p.add_argument("--output", metavar="PATH", default=None, help="write to PATH instead of stdout")

    p = sub.add_parser("classify", help="classify one knot, e.g. 'K(1/3,1/4,2/5)'")
    p.add_argument("knot")
    p.add_argument("--cross-check", action="store_true", help="also run preset/solver/orbit comparison")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("certify", help="verify a certificate JSON against a knot")
    p.add_argument("knot")
    p.add_argument("certificate", help="path to certificate JSON")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("enumerate", help="classify all canonical knots with q_i <= bound")
    p.add_argument("--q-bound", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--include-links", action="store_true", help="also list links (not classified)")
    common(p, "csv")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("gb-verify", help="check the Euler count of a graph JSON")
    p.add_argument("graph")
    p.add_argument("--delta", type=int, default=None)
    common(p, "table")
    p.set_defaults(func=cmd_gb_verify)

    p = sub.add_parser("presets", help="list the built-in angle presets")
    common(p, "table")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("MONTESINOS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
