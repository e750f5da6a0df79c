"""Command-line driver: ``wittborel <subcommand> ...``.

Every run prints one JSON report (or JSON Lines with --verbose) and exits
with 0 on success, 1 when a verification contract fails, and 2 on bad input.
Reports carry no timing unless --timing is given, so identical commands
produce identical bytes.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__
from .autgroup import Automorphism, apply, compose_aut
from .borel import (
    classify_borel, encode_subalgebra, find_sl2_triple, is_maximal_solvable,
    is_solvable, parse_subalgebra, sl2_standard, standard_borels,
)
from .errors import BudgetExceeded, ClassificationFailed, NotBorel, NotClosed, UsageError, WittError
from .field import make_prime
from .jacobson_witt import MAX_DIM, explore
from .nilcone import (
    EXHAUSTIVE_MAX_P, METHODS, decode_range, default_jobs, enumerate_cone, is_nilpotent,
    normalize_to_D, sample_cone, sample_elements,
)
from .witt import WittElement, f_det_batch, restriction_scalar

SUBCOMMANDS = ("check", "normalize", "nilcone", "borel", "conjecture")


@dataclass
class Command:
    subcommand: str
    p: int
    options: dict[str, Any] = field(default_factory=dict)
    element: WittElement | None = None
    subalgebra: Any = None
    out: str | None = None
    jobs: int = 1
    timing: bool = False

    def echo(self) -> dict:
        # worker count, output path and timing are deliberately left out
        return {"subcommand": self.subcommand, "p": self.p, **self.options}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="characteristic, a prime > 3")
    common.add_argument("--out", help="write the report here instead of standard output")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: available CPUs)")
    common.add_argument("--timing", action="store_true", help="include wall-clock duration in the report")

    parser = _Parser(prog="wittborel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    check = sub.add_parser("check", parents=[common], help="nilpotency of one element")
    check.add_argument("--element", required=True, help="p comma-separated residues k_-1,...,k_{p-2}")
    check.add_argument("--method", choices=METHODS + ("all",), default="all")

    norm = sub.add_parser("normalize", parents=[common], help="conjugate an element to D + c x^{p-1} D")
    norm.add_argument("--element", required=True)

    cone = sub.add_parser("nilcone", parents=[common], help="census of the nilpotent cone")
    cone.add_argument("--mode", choices=("enumerate", "sample"), required=True)
    cone.add_argument("--n", type=int, default=100_000, help="sample size")
    cone.add_argument("--seed", type=int, default=0)
    cone.add_argument("--verbose", action="store_true", help="JSON Lines: one record per element, then the report")

    borel = sub.add_parser("borel", parents=[common], help="Borel subalgebras of W_1")
    group = borel.add_mutually_exclusive_group(required=True)
    group.add_argument("--classify", metavar="S", help="semicolon-separated basis of a subalgebra")
    group.add_argument("--verify-standard", action="store_true")

    conj = sub.add_parser("conjecture", parents=[common], help="signature census of grown solvable subalgebras of W_n")
    conj.add_argument("--n", type=int, required=True)
    conj.add_argument("--seeds", type=int, required=True, help="use seeds 0..K-1")
    return parser


def parse_args(argv: Sequence[str]) -> Command:
    """Parse and fully validate a command line; raises UsageError."""
    ns = _parser().parse_args(list(argv))
    try:
        p = int(make_prime(ns.p))
    except WittError as exc:
        raise UsageError(str(exc)) from exc
    jobs = ns.jobs if ns.jobs is not None else default_jobs()
    if jobs < 1:
        raise UsageError("--jobs must be positive")
    cmd = Command(ns.subcommand, p, out=ns.out, jobs=jobs, timing=ns.timing)

    if ns.subcommand in ("check", "normalize"):
        cmd.element = _parse_element(ns.element, p)
        cmd.options["element"] = cmd.element.encode()
        if ns.subcommand == "check":
            cmd.options["method"] = ns.method
        elif cmd.element.k(-1) == 0:
            raise UsageError("normalize needs k_-1 != 0; elements of g_0 are not conjugate to D + c x^{p-1} D")
    elif ns.subcommand == "nilcone":
        cmd.options["mode"] = ns.mode
        if ns.mode == "enumerate" and p > EXHAUSTIVE_MAX_P:
            raise UsageError(f"enumerate is limited to p <= {EXHAUSTIVE_MAX_P}; use --mode sample")
        if ns.mode == "sample":
            if ns.n < 1:
                raise UsageError("--n must be positive")
            cmd.options.update(n=ns.n, seed=ns.seed)
        cmd.options["verbose"] = ns.verbose
    elif ns.subcommand == "borel":
        if ns.classify is not None:
            try:
                cmd.subalgebra = parse_subalgebra(ns.classify, p)
            except ValueError as exc:
                raise UsageError(f"bad subalgebra encoding: {exc}") from exc
            cmd.options["classify"] = encode_subalgebra(cmd.subalgebra)
        else:
            cmd.options["verify_standard"] = True
    elif ns.subcommand == "conjecture":
        if ns.n < 1 or ns.seeds < 1:
            raise UsageError("--n and --seeds must be positive")
        if ns.n * p**ns.n > MAX_DIM:
            raise UsageError(f"dim W_{ns.n} = {ns.n * p**ns.n} exceeds the budget of {MAX_DIM}")
        cmd.options.update(n=ns.n, seeds=ns.seeds)
    return cmd


def _parse_element(text: str, p: int) -> WittElement:
    try:
        return WittElement.parse(text, p)
    except ValueError as exc:
        raise UsageError(f"bad element encoding: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, ok)

def _run_check(cmd: Command) -> tuple[dict, bool]:
    X = cmd.element
    methods = METHODS if cmd.options["method"] == "all" else (cmd.options["method"],)
    verdicts = {m: is_nilpotent(X, m) for m in methods}
    psi0 = restriction_scalar(X)
    payload = {"nilpotent": verdicts[methods[0]], "psi0": psi0}
    ok = len(set(verdicts.values())) == 1 and verdicts[methods[0]] == (psi0 == 0)
    if not ok:
        payload["disagreement"] = verdicts
    return payload, ok


def _run_normalize(cmd: Command) -> tuple[dict, bool]:
    X = cmd.element
    lead = X.k(-1)
    scale = Automorphism.scaling(cmd.p, lead)
    form = normalize_to_D(apply(scale, X))
    image = apply(compose_aut(form.sigma, scale), X)
    payload = {
        "scale": lead,
        "sigma": form.sigma.encode(),
        "c": form.c,
        "normal_form": form.target().encode(),
        "nilpotent": form.c == 0,
    }
    return payload, image == form.target() and (form.c == 0) == is_nilpotent(X)


def _run_nilcone(cmd: Command, stream) -> tuple[dict, bool]:
    p = cmd.p
    if cmd.options["mode"] == "enumerate":
        report = enumerate_cone(p, jobs=cmd.jobs)
        chunks = (decode_range(0, p**p, p),) if cmd.options["verbose"] else ()
    else:
        report = sample_cone(p, cmd.options["n"], cmd.options["seed"], jobs=cmd.jobs)
        chunks = sample_elements(p, cmd.options["n"], cmd.options["seed"]) if cmd.options["verbose"] else ()
    for rows in chunks:
        psi0 = -f_det_batch(rows) % p
        for row, s in zip(rows, psi0):
            stream.write(json.dumps({"element": ",".join(map(str, row)), "nilpotent": bool(s == 0), "psi0": int(s)}) + "\n")
    return report.to_dict(), report.ok


def _run_borel(cmd: Command) -> tuple[dict, bool]:
    p = cmd.p
    if cmd.subalgebra is not None:
        try:
            return classify_borel(cmd.subalgebra).to_dict(), True
        except (NotBorel, ClassificationFailed) as exc:
            return {"class": None, "error": f"{type(exc).__name__}: {exc}"}, False
    plus, minus = standard_borels(p)
    method = "exhaustive" if p == 5 else "cosets"
    sl2 = sl2_standard(p)
    triple = find_sl2_triple(sl2)
    payload = {
        "plus": {"basis": encode_subalgebra(plus), "maximal_solvable": is_maximal_solvable(plus, method=method)},
        "minus": {"basis": encode_subalgebra(minus), "maximal_solvable": is_maximal_solvable(minus, method=method)},
        "maximality_method": method,
        "sl2": {
            "basis": encode_subalgebra(sl2),
            "solvable": is_solvable(sl2),
            "triple": [t.encode() for t in triple] if triple else None,
        },
    }
    ok = payload["plus"]["maximal_solvable"] and payload["minus"]["maximal_solvable"]
    return payload, ok and not payload["sl2"]["solvable"] and triple is not None


def _run_conjecture(cmd: Command) -> tuple[dict, bool]:
    n = cmd.options["n"]
    report = explore(n, cmd.p, range(cmd.options["seeds"]), jobs=cmd.jobs)
    ok = n != 1 or report["classes"]["failed"] == 0
    return report, ok


def run(cmd: Command, stream=None) -> tuple[dict, int]:
    """Execute a validated command; returns the report and the exit code."""
    stream = stream if stream is not None else sys.stdout
    start = time.perf_counter()
    try:
        if cmd.subcommand == "check":
            payload, ok = _run_check(cmd)
        elif cmd.subcommand == "normalize":
            payload, ok = _run_normalize(cmd)
        elif cmd.subcommand == "nilcone":
            payload, ok = _run_nilcone(cmd, stream)
        elif cmd.subcommand == "borel":
            payload, ok = _run_borel(cmd)
        else:
            payload, ok = _run_conjecture(cmd)
    except (BudgetExceeded, NotClosed) as exc:
        raise UsageError(str(exc)) from exc
    except WittError as exc:
        payload, ok = {"error": f"{type(exc).__name__}: {exc}"}, False
    report = {"command": cmd.echo(), "result": payload, "ok": ok, "version": __version__}
    if cmd.timing:
        report["duration_ms"] = int((time.perf_counter() - start) * 1000)
    return report, 0 if ok else 1


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_args(argv)
        out = open(cmd.out, "w") if cmd.out else sys.stdout
        try:
            report, code = run(cmd, out)
            out.write(json.dumps(report, sort_keys=True) + "\n")
        finally:
            if out is not sys.stdout:
                out.close()
    except UsageError as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
