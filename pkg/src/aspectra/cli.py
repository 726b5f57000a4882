"""Command-line front end.

Subcommands: ``rewrite`` (normal forms with optional traces), ``probe``
(probe-set enumeration), ``spectrum`` (one pencil divisor), ``compare``
(divisor and character comparison of two representations), and ``verify``
(the consistency batteries).  All structured output is JSON with sorted keys;
identical configuration (including the seed) yields byte-identical output.
Timing data is attached only on request (``--timings``) so that default
reports stay reproducible.

Exit codes: 0 success / no violations, 1 violations found, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict, dataclass

from . import __version__
from .echelon import EchelonError, a_echelon, block_echelon, tilde_echelon
from .lattice import LatticeError
from .poly import MERSENNE_61, PolyError
from .reps import RepError, parse_rep_spec
from .spectra import (
    SpectraError,
    pencil_divisor,
    pencil_matrix,
    probe_set_K,
    probe_set_script_K,
    verify_character_determination,
)
from .suites import (
    determination_suite,
    echelon_suite,
    quotient_suite,
    relation_suite,
    signature_suite,
    trace_sum_suite,
)
from .words import WordError, parse_word, render_word

SYMBOLIC_DIM_LIMIT = 10
SYMBOLIC_VARS_LIMIT = 10

USAGE_ERROR = 2
VIOLATION = 1


@dataclass(frozen=True)
class RunConfig:
    """Echo of every knob that influenced a run, embedded in reports."""

    command: str
    rank: int
    seed: int
    method: str | None = None
    probe_kind: str | None = None
    rep_specs: tuple[str, ...] = ()
    pit_trials: int | None = None
    pit_prime: int | None = None
    char_budget: int | None = None
    threads: int | None = None

    def to_json(self) -> dict:
        data = {k: v for k, v in asdict(self).items() if v is not None}
        data["repSpecs"] = list(data.pop("rep_specs", ()))
        return data


def _threads_cap() -> int | None:
    raw = os.environ.get("ASPECTRA_THREADS")
    return int(raw) if raw else None


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _probe(kind: str, n: int):
    return probe_set_K(n) if kind == "K" else probe_set_script_K(n)


def _report_envelope(config: RunConfig, body: dict) -> dict:
    return {"version": __version__, "config": config.to_json(), **body}


def cmd_rewrite(args: argparse.Namespace) -> int:
    word = parse_word(args.word, args.n)
    if args.form == "tilde":
        form, trace = tilde_echelon(word, with_trace=True)
        result = form.word()
    else:
        echelon = a_echelon(word)
        result = echelon.word() if args.form == "echelon" else block_echelon(echelon).word()
        trace = None
    print(render_word(result))
    if args.trace:
        if trace is None:
            print("(direct construction from the cycle type; no move trace)")
        else:
            for line in trace.render_lines():
                print(line)
    return 0


def cmd_probe(args: argparse.Namespace) -> int:
    probe = _probe(args.kind, args.n)
    config = RunConfig("probe", args.n, args.seed, probe_kind=args.kind, threads=_threads_cap())
    _emit(
        _report_envelope(
            config,
            {"probeSet": {"kind": probe.kind, "rank": probe.rank, "labels": list(probe.labels())},
             "count": probe.size},
        ),
        args.out,
    )
    return 0


def _check_symbolic_feasible(dim: int, variables: int) -> None:
    if dim > SYMBOLIC_DIM_LIMIT or variables > SYMBOLIC_VARS_LIMIT:
        raise SystemExit(
            f"error: symbolic pencil with dimension {dim} and {variables} variables "
            f"exceeds the {SYMBOLIC_DIM_LIMIT}x{SYMBOLIC_VARS_LIMIT} feasibility bound; "
            "rerun with --method pit"
        )


def cmd_spectrum(args: argparse.Namespace) -> int:
    probe = _probe(args.set, args.n)
    rep = parse_rep_spec(args.rep, args.n)
    config = RunConfig(
        "spectrum", args.n, args.seed, method=args.method, probe_kind=args.set,
        rep_specs=(args.rep,), pit_trials=args.pit_trials, pit_prime=args.pit_prime,
        threads=_threads_cap(),
    )
    if args.method == "symbolic":
        _check_symbolic_feasible(rep.dim, probe.size)
        divisor = pencil_divisor(rep, probe)
        _emit(_report_envelope(config, {"spectrum": divisor.to_json()}), args.out)
        return 0
    rng = random.Random(args.seed)
    matrix = pencil_matrix(rep, probe)
    points = [
        [rng.randrange(args.pit_prime) for _ in range(probe.size)]
        for _ in range(args.pit_trials)
    ]
    from .poly import _det_mod

    values = [_det_mod(matrix.eval_mod(point, args.pit_prime), args.pit_prime) for point in points]
    _emit(
        _report_envelope(
            config,
            {"fingerprint": {"prime": args.pit_prime, "points": points, "values": values,
                             "dim": rep.dim}},
        ),
        args.out,
    )
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    probe = _probe(args.set, args.n)
    rep1 = parse_rep_spec(args.rep1, args.n)
    rep2 = parse_rep_spec(args.rep2, args.n)
    if args.method in ("symbolic", "both"):
        _check_symbolic_feasible(max(rep1.dim, rep2.dim), probe.size)
    config = RunConfig(
        "compare", args.n, args.seed, method=args.method, probe_kind=args.set,
        rep_specs=(args.rep1, args.rep2), pit_trials=args.pit_trials,
        pit_prime=args.pit_prime, char_budget=args.char_budget, threads=_threads_cap(),
    )
    report = verify_character_determination(
        rep1, rep2, probe,
        word_budget=args.char_budget, method=args.method,
        pit_trials=args.pit_trials, pit_prime=args.pit_prime,
        rng=random.Random(args.seed),
    )
    _emit(_report_envelope(config, {"report": report.to_json(include_timings=args.timings)}), args.out)
    if report.critical:
        sys.stderr.write(
            "CRITICAL: divisors equal but characters differ; dump follows\n"
            + json.dumps(report.to_json(include_timings=True), sort_keys=True, indent=2)
            + "\n"
        )
        return VIOLATION
    return 0


_SUITES = ("relations", "echelon", "lemma21", "theorem52", "all")


def cmd_verify(args: argparse.Namespace) -> int:
    n = args.n
    violations: list[dict] = []
    ran: list[str] = []
    if args.suite in ("relations", "all"):
        violations += relation_suite(n)
        violations += quotient_suite(n)
        ran.append("relations")
    if args.suite in ("echelon", "all"):
        violations += echelon_suite(n, seed=args.seed, samples=args.samples,
                                    search_validation=(n <= 3))
        ran.append("echelon")
    if args.suite in ("lemma21", "all"):
        violations += trace_sum_suite(seed=args.seed, tuples=args.samples // 5 or 4)
        ran.append("lemma21")
    if args.suite in ("theorem52", "all"):
        for kind in ("K", "scriptK"):
            violations += determination_suite(
                n, seed=args.seed, probe_kind=kind,
                conjugators=2, char_budget=min(args.char_budget, 6), method="both",
            )
        violations += signature_suite(n, seed=args.seed, instances=args.samples)
        ran.append("theorem52")
    config = RunConfig("verify", n, args.seed, char_budget=args.char_budget,
                       threads=_threads_cap())
    _emit(
        _report_envelope(
            config,
            {"suites": ran, "violationCount": len(violations), "violations": violations},
        ),
        args.out,
    )
    return VIOLATION if violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aspectra",
        description="Exact rewriting and joint-spectral comparisons for the affine symmetric group",
    )
    parser.add_argument("--version", action="version", version=f"aspectra {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, seed: bool = True) -> None:
        p.add_argument("--n", type=int, required=True, help="rank (>= 2)")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("rewrite", help="bring a word to a normal form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--form", choices=("echelon", "block", "tilde"), default="tilde")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("probe", help="enumerate a probe set")
    common(p)
    p.add_argument("--kind", choices=("K", "scriptK"), default="K")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("spectrum", help="pencil divisor of one representation")
    common(p)
    p.add_argument("--rep", required=True)
    p.add_argument("--set", choices=("K", "scriptK"), default="K")
    p.add_argument("--method", choices=("symbolic", "pit"), default="symbolic")
    p.add_argument("--pit-trials", type=int, default=4)
    p.add_argument("--pit-prime", type=int, default=MERSENNE_61)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("compare", help="compare two representations")
    common(p)
    p.add_argument("--rep1", required=True)
    p.add_argument("--rep2", required=True)
    p.add_argument("--set", choices=("K", "scriptK"), default="K")
    p.add_argument("--method", choices=("symbolic", "pit", "both"), default="both")
    p.add_argument("--char-budget", type=int, default=6)
    p.add_argument("--pit-trials", type=int, default=4)
    p.add_argument("--pit-prime", type=int, default=MERSENNE_61)
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run a consistency battery")
    common(p)
    p.add_argument("--suite", choices=_SUITES, default="all")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--char-budget", type=int, default=6)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (WordError, EchelonError, LatticeError, RepError, SpectraError, PolyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
