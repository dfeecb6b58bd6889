"""Command-line front end.

One binary, subcommand style. JSON is the default output; big integers
are emitted as decimal strings so nothing is lost to double rounding,
and reals are reported to 6 significant digits. CSV is supported for
bound tables only. Exit codes: 0 success or valid certificate, 1 usage
or input error, 2 a verification found a violating pair.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .bounds import bound_report, box_bound, paley_reference, _six_digits
from .certificate import Certificate, verify_certificate
from .modp import ForbiddenBox, power_residues
from .search import (
    DEFAULT_TIME_LIMIT,
    DEFAULT_VERTEX_CAP,
    build_graph,
    max_avoiding_set,
    to_dimacs,
)

_PALEY_NOTE = ("sqrt(p)-1 is known to hold for infinitely many primes only; "
               "an exact clique number may exceed it")


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; this tool reserves 2 for
    verification violations, so usage errors exit 1 instead."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diffavoid",
                     description="difference-avoiding sets in (F_p)^n: "
                                 "residues, bounds, exact search, certificates")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    res = sub.add_parser("residues", help="kth power residues mod p")
    res.add_argument("--p", type=int, required=True)
    res.add_argument("--k", type=int, required=True)
    res.add_argument("--format", choices=["json", "plain"], default="json")

    bnd = sub.add_parser("bound", help="closed-form upper bounds")
    bnd.add_argument("--p", type=int, required=True)
    bnd.add_argument("--n", type=int, required=True)
    bnd.add_argument("--t", type=int, help="forbidden-set size (exclusive with --k)")
    bnd.add_argument("--k", type=int, help="power residue exponent (exclusive with --t)")
    bnd.add_argument("--digit-sum-threshold", action="store_true",
                     dest="digit_threshold",
                     help="include the digit-sum threshold (n=1 only)")
    bnd.add_argument("--paley-ref", action="store_true",
                     help="include the non-binding sqrt(p)-1 reference (n=1 only)")
    bnd.add_argument("--log-base", choices=["e", "2", "q"], default="e",
                     help="log convention inside the digit-sum threshold")
    bnd.add_argument("--format", choices=["json", "csv", "plain"], default="json")

    sea = sub.add_parser("search", help="exact maximum avoiding set")
    sea.add_argument("--p", type=int, required=True)
    sea.add_argument("--n", type=int, required=True)
    sea.add_argument("--k", type=int, help="forbid kth power residue box")
    sea.add_argument("--K", type=str, help="explicit forbidden residues, e.g. 0,1,4")
    sea.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    sea.add_argument("--node-budget", type=int, default=None)
    sea.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    sea.add_argument("--seed", type=int, default=0)
    sea.add_argument("--engine", choices=["auto", "native", "python"], default="auto")
    sea.add_argument("--dimacs", type=str, default=None,
                     help="also write the graph in DIMACS format to this path")
    sea.add_argument("--format", choices=["json", "plain"], default="json")

    ver = sub.add_parser("verify", help="verify a witness file")
    ver.add_argument("file", type=str,
                     help="JSON file with fields p, n, K, A")
    ver.add_argument("--format", choices=["json", "plain"], default="json")

    pal = sub.add_parser("paley", help="clique number of the quadratic-residue graph")
    pal.add_argument("--p", type=int, required=True)
    pal.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    pal.add_argument("--node-budget", type=int, default=None)
    pal.add_argument("--seed", type=int, default=0)
    pal.add_argument("--engine", choices=["auto", "native", "python"], default="auto")
    pal.add_argument("--dimacs", type=str, default=None)
    pal.add_argument("--format", choices=["json", "plain"], default="json")

    return parser


def _threads_from_env() -> int:
    raw = os.environ.get("DIFFAVOID_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"DIFFAVOID_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"DIFFAVOID_THREADS must be >= 1, got {value}")
    return value


def _emit(payload: dict, fmt: str, plain_lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(plain_lines))


def _cmd_residues(args) -> int:
    box = power_residues(args.p, args.k)
    d = math.gcd(args.k, args.p - 1)
    formula = (args.p - 1) // d + 1
    payload = {
        "p": args.p,
        "k": args.k,
        "K": list(box.residues),
        "t": box.t,
        "d": d,
        "formula_size": formula,
    }
    _emit(payload, args.format, [
        f"p = {args.p}, k = {args.k}",
        f"K = {{{', '.join(map(str, box.residues))}}}",
        f"t = |K| = {box.t}; (p-1)/gcd(k,p-1) + 1 = {formula}",
    ])
    return 0


def _cmd_bound(args) -> int:
    log_base: float | None
    if args.log_base == "e":
        log_base = None
    elif args.log_base == "2":
        log_base = 2.0
    else:
        log_base = float(args.p)
    report = bound_report(
        args.p, args.n, t=args.t, k=args.k,
        include_digit_threshold=args.digit_threshold,
        include_paley_reference=args.paley_ref,
        log_base=log_base,
    )
    payload = report.to_json_dict()
    if args.format == "csv":
        cols = ["p", "n", "k", "t", "d", "box_bound", "power_residue_bound",
                "digit_sum_threshold", "digit_sum_log_base", "paley_reference"]
        row = [str(payload.get(c, "")) for c in cols]
        print(",".join(cols))
        print(",".join(row))
        return 0
    lines = [f"p = {report.p}, n = {report.n}, t = {report.t}"]
    lines.append(f"(p-t+1)^n = {report.box_bound}")
    if report.power_residue_bound is not None:
        lines.append(f"power-residue bound ((p-1)(d-1)/d + 1)^n = "
                     f"{report.power_residue_bound} (k = {report.k}, d = {report.d})")
    if report.digit_threshold is not None:
        lines.append(f"digit-sum threshold = {_six_digits(report.digit_threshold)} "
                     f"(log base {report.digit_log_base})")
    if report.paley_ref is not None:
        lines.append(f"sqrt(p)-1 = {_six_digits(report.paley_ref)} (non-binding reference)")
    _emit(payload, args.format, lines)
    return 0


def _parse_forbidden(args) -> ForbiddenBox:
    if (args.k is None) == (args.K is None):
        raise ValueError("exactly one of --k and --K must be given")
    if args.k is not None:
        return power_residues(args.p, args.k)
    try:
        residues = [int(tok) for tok in args.K.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"--K must be a comma-separated list of residues, got {args.K!r}")
    return ForbiddenBox(args.p, residues)


def _certificate_exit(cert: Certificate) -> int:
    return 0 if cert.valid else 2


def _cmd_search(args) -> int:
    threads = _threads_from_env()
    box = _parse_forbidden(args)
    graph = build_graph(box, args.n, vertex_cap=args.vertex_cap)
    result = max_avoiding_set(
        graph,
        time_limit=args.time_limit,
        node_budget=args.node_budget,
        seed=args.seed,
        engine=args.engine,
    )
    bound = box_bound(box.p, box.t, args.n)
    if result.status == "exact" and result.max_size > bound:
        raise AssertionError(
            f"exact result {result.max_size} exceeds the bound {bound}")
    cert = verify_certificate(result.witness, box, args.n)
    payload = {
        "p": args.p,
        "n": args.n,
        "K": list(box.residues),
        "A": [list(v) for v in result.witness],
        "max_size": result.max_size,
        "status": result.status,
        "nodes_explored": result.nodes_explored,
        "elapsed_seconds": _six_digits(result.elapsed_seconds),
        "bound": str(bound),
        "ratio": _six_digits(float(Fraction(result.max_size, bound))),
        "certificate": cert.to_json_dict(),
        "threads": 1,
    }
    if threads > 1:
        payload["threads_requested"] = threads
    if args.dimacs:
        with open(args.dimacs, "w", encoding="utf-8") as fh:
            fh.write(to_dimacs(graph))
        payload["dimacs_path"] = args.dimacs
    _emit(payload, args.format, [
        f"max avoiding set size = {result.max_size} ({result.status})",
        f"witness = {[list(v) for v in result.witness]}",
        f"bound (p-t+1)^n = {bound}",
        f"certificate: {cert.verdict}",
        f"nodes explored = {result.nodes_explored}, "
        f"elapsed = {result.elapsed_seconds:.3f}s",
    ])
    return 0


def _cmd_verify(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {args.file}: {exc}")
    except json.JSONDecodeError as exc:
        raise ValueError(f"{args.file} is not valid JSON: {exc}")
    for key in ("p", "n", "K", "A"):
        if key not in data:
            raise ValueError(f"witness file is missing the {key!r} field")
    box = ForbiddenBox(int(data["p"]), [int(r) for r in data["K"]])
    elements = [tuple(int(c) for c in v) for v in data["A"]]
    cert = verify_certificate(elements, box, int(data["n"]))
    payload = cert.to_json_dict()
    lines = [f"verdict: {cert.verdict}"]
    if cert.valid:
        lines.append(f"|A| = {len(cert.elements)}, rank = {cert.rank}, "
                     f"bound = {cert.bound}")
    else:
        a, b = cert.violating_pair  # type: ignore[misc]
        lines.append(f"violating pair: {list(a)} - {list(b)} lands in K^n")
    _emit(payload, args.format, lines)
    return _certificate_exit(cert)


def _cmd_paley(args) -> int:
    threads = _threads_from_env()
    box = power_residues(args.p, 2)
    if args.p % 4 != 1:
        raise ValueError(f"the quadratic-residue graph needs p = 1 (mod 4), got {args.p}")
    graph = build_graph(box, 1)
    result = max_avoiding_set(
        graph,
        time_limit=args.time_limit,
        node_budget=args.node_budget,
        seed=args.seed,
        engine=args.engine,
    )
    reference = paley_reference(args.p)
    payload = {
        "p": args.p,
        "omega": result.max_size,
        "status": result.status,
        "witness": [list(v) for v in result.witness],
        "nodes_explored": result.nodes_explored,
        "elapsed_seconds": _six_digits(result.elapsed_seconds),
        "reference_sqrt_p_minus_1": _six_digits(reference),
        "reference_binding": False,
        "reference_note": _PALEY_NOTE,
        "threads": 1,
    }
    if threads > 1:
        payload["threads_requested"] = threads
    if args.dimacs:
        with open(args.dimacs, "w", encoding="utf-8") as fh:
            fh.write(to_dimacs(graph))
        payload["dimacs_path"] = args.dimacs
    _emit(payload, args.format, [
        f"omega({args.p}) = {result.max_size} ({result.status})",
        f"witness = {[v[0] for v in result.witness]}",
        f"sqrt(p)-1 = {_six_digits(reference)} (non-binding reference)",
    ])
    return 0


_COMMANDS = {
    "residues": _cmd_residues,
    "bound": _cmd_bound,
    "search": _cmd_search,
    "verify": _cmd_verify,
    "paley": _cmd_paley,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"diffavoid: error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
