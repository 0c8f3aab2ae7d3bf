"""Command-line front end.

Exit codes: 0 success, 1 sequence not complete, 2 infeasible (budget or
limits), 3 parse/usage error, 4 certificate verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__
from .certify import Limits, ProofCertificate, check_certificate, prove_lambda, render_proof
from .complete import is_complete
from .counts import DEFAULT_MEMORY_BUDGET, count_table
from .errors import BudgetExceeded, LimitExceeded, NotComplete, NotEventuallyPositive
from .oracle import rep_count_exact
from .parse import ParseError, parse_poly

EXIT_OK = 0
EXIT_NOT_COMPLETE = 1
EXIT_INFEASIBLE = 2
EXIT_USAGE = 3
EXIT_VERIFY = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class JobConfig:
    poly_text: str
    j0: int = 1
    reps: int = 1
    offset: int = 3
    initial_k: Optional[int] = None
    max_k: int = 2**31
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET
    format: str = "text"
    out_path: Optional[str] = None

    def limits(self) -> Limits:
        if self.reps < 1:
            raise UsageError("--reps must be >= 1")
        if self.j0 < 0:
            raise UsageError("--j0 must be >= 0")
        try:
            return Limits(offset=self.offset, initial_k=self.initial_k, max_k=self.max_k,
                          memory_budget=self.memory_budget_bytes)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def _add_poly(sp, reps=True):
    sp.add_argument("--poly", required=True, help="polynomial in j, e.g. 'binomial(j+4,4)'")
    sp.add_argument("--j0", type=int, default=1, help="first admissible index j (default 1)")
    if reps:
        sp.add_argument("--reps", type=int, default=1, help="required number of representations C (default 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lambdacert", description="Largest integer without C representations as a sum of "
                                                "distinct polynomial values, with proof certificates.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="cmd", parser_class=_Parser)

    sp = sub.add_parser("check", help="completeness report")
    _add_poly(sp, reps=False)
    sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("counts", help="dump the capped count table")
    _add_poly(sp)
    sp.add_argument("--k", type=int, required=True, help="table covers n = 0 .. K")
    sp.add_argument("--out", help="write the table here instead of stdout")
    sp.add_argument("--memory", type=int, default=DEFAULT_MEMORY_BUDGET, help="memory budget in bytes")

    sp = sub.add_parser("lambda", help="compute and certify lambda")
    _add_poly(sp)
    sp.add_argument("--offset", type=int, default=3, help="induction offset t (default 3)")
    sp.add_argument("--initial-k", type=int, help="first exploration table size")
    sp.add_argument("--max-k", type=int, default=2**31, help="largest exploration table size (default 2^31)")
    sp.add_argument("--memory", type=int, default=DEFAULT_MEMORY_BUDGET, help="memory budget in bytes (default 2 GiB)")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--certificate", help="write the certificate (JSON) to this path")

    sp = sub.add_parser("prove", help="verify a certificate file and print the proof")
    sp.add_argument("--certificate", required=True, help="certificate JSON file")
    sp.add_argument("--memory", type=int, default=DEFAULT_MEMORY_BUDGET, help="memory budget in bytes")

    sp = sub.add_parser("oracle", help="exact representation count by brute force")
    _add_poly(sp, reps=False)
    sp.add_argument("--n", type=int, required=True, help="target integer")
    return ap


def _fail(code: int, tag: str, msg: str) -> int:
    print(f"error: {tag}: {msg}", file=sys.stderr)
    return code


def _cmd_check(args) -> int:
    report = is_complete(parse_poly(args.poly), args.j0)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(f"complete: {'yes' if report.verdict else 'no'}")
        print(f"degree: {report.degree}")
        print(f"value gcd: {report.value_gcd}")
        print(f"positive from: {report.positivity_from}")
        print(f"strictly increasing from: {report.strictly_increasing_from}")
        for f in report.failures:
            print(f"failure: {f}")
    if not report.verdict:
        return _fail(EXIT_NOT_COMPLETE, "not-complete", "; ".join(report.failures))
    return EXIT_OK


def _cmd_counts(args) -> int:
    if args.k < 0:
        raise UsageError("--k must be >= 0")
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    table = count_table(parse_poly(args.poly), args.j0, args.reps, args.k, memory_budget=args.memory)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        out.write(f"# cap={table.cap}\n")
        arr = table.to_numpy()
        for n in range(0, len(arr), 1 << 16):
            chunk = arr[n : n + (1 << 16)].tolist()
            out.write("".join(f"{n + i}\t{c}\n" for i, c in enumerate(chunk)))
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _cmd_lambda(args) -> int:
    job = JobConfig(args.poly, args.j0, args.reps, args.offset, args.initial_k, args.max_k, args.memory,
                    args.format, args.certificate)
    cfg = job.limits()
    cert = prove_lambda(parse_poly(job.poly_text), job.j0, job.reps, cfg)
    if job.out_path:
        with open(job.out_path, "w") as fh:
            fh.write(cert.to_json() + "\n")
    if job.format == "json":
        print(cert.to_json())
    else:
        if cert.lam is None:
            print("lambda = none")
            print(f"every nonnegative integer has >= {cert.reps} representation(s)")
        else:
            print(f"lambda = {cert.lam}")
        print(f"n1 = {cert.n1}")
        print(f"base cases up to {cert.base_case_max}")
        print(f"verified = {str(cert.verified).lower()}")
    return EXIT_OK


def _cmd_prove(args) -> int:
    try:
        with open(args.certificate) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    try:
        cert = ProofCertificate.from_json(text)
    except (ValueError, TypeError) as exc:
        return _fail(EXIT_VERIFY, "verification", f"malformed certificate: {exc}")
    if not cert.verified:
        return _fail(EXIT_VERIFY, "verification", "certificate is not marked verified")
    reason = check_certificate(cert, memory_budget=args.memory)
    if reason is not None:
        return _fail(EXIT_VERIFY, "verification", reason)
    sys.stdout.write(render_proof(cert))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    print(rep_count_exact(parse_poly(args.poly), args.j0, args.n))
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "counts": _cmd_counts,
    "lambda": _cmd_lambda,
    "prove": _cmd_prove,
    "oracle": _cmd_oracle,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if args.cmd is None:
            raise UsageError("a subcommand is required")
        if args.verbose:
            logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
        return _COMMANDS[args.cmd](args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except ParseError as exc:
        return _fail(EXIT_USAGE, "parse", str(exc))
    except NotComplete as exc:
        return _fail(EXIT_NOT_COMPLETE, "not-complete", str(exc))
    except (BudgetExceeded, LimitExceeded, NotEventuallyPositive) as exc:
        return _fail(EXIT_INFEASIBLE, "infeasible", str(exc))


def main() -> None:
    sys.exit(run())
