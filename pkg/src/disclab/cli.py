"""Command-line front end.

Subcommands mirror the library: construct {stacked, hadamard, w},
wdisc {exact, heur}, odisc {exact, color}, certify {wdisc-lb, multicolor-lb,
hadamard-lemma}, fd {gen, check, minc, allocate}, and experiment (CSV sweep).

Exit codes: 0 success/pass, 1 certification failure, 2 usage or format
error, 3 budget exceeded. Stdout carries one JSON object (CSV for
experiment); diagnostics go to stderr. All rationals travel as "a/b"
strings; no floats appear unless --float-view asks for a convenience column.
Output bytes depend only on argv and input files: randomness is pinned by
--seed and worker results merge in a fixed order, so --threads never changes
output. The DISCLAB_CAP environment variable overrides the default
enumeration cap wherever --cap is not given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceededError, DisclabError, InputError, VerificationError
from .fairdiv import (
    Allocation,
    FairDivInstance,
    FairnessNotion,
    allocate_prop_via_odisc,
    brute_force_min_c,
    check_fairness,
    gen_cd_instance,
    gen_ef_lb_instance,
    gen_prop_lb_instance,
)
from .lower_bounds import (
    build_stacked,
    certify_multicolor_lb,
    certify_wdisc_lb,
    check_hadamard_lemma,
    lb_value,
)
from .matrices import RatMatrix, hadamard_sylvester, lift_w
from .rational import format_rational, parse_rational
from .recursive_coloring import RecursionConfig, odisc_color, reference_bound
from .solvers import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_EXACT_WIDTH_CAP,
    OracleConfig,
    eval_asymmetric,
    odisc_exact,
    oracle_solve,
    wdisc_exact,
    wdisc_heuristic,
)

EXIT_OK = 0
EXIT_CERT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    stdout: str = ""
    stderr: str = ""


def _default_cap() -> int:
    raw = os.environ.get("DISCLAB_CAP")
    if raw is None:
        return DEFAULT_ENUMERATION_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"DISCLAB_CAP must be an integer, got {raw!r}") from exc


def _dump(payload) -> str:
    return json.dumps(payload) + "\n"


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _write_out(path: str, payload):
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(_dump(payload))


def _load_matrix(path: str) -> RatMatrix:
    return RatMatrix.from_json_dict(_load_json(path))


def _oracle_config(args) -> OracleConfig:
    kwargs = {"kind": args.oracle, "budget": args.iters, "seed": args.seed}
    if getattr(args, "cap", None) is not None:
        kwargs["exact_width_cap"] = args.cap
    return OracleConfig(**kwargs)


def _recursion_config(args) -> RecursionConfig:
    return RecursionConfig(oracle=_oracle_config(args), zeta=parse_rational(args.zeta))


def _add_oracle_flags(parser, default_kind="exact"):
    parser.add_argument("--oracle", choices=["exact", "greedy", "local-search"], default=default_kind)
    parser.add_argument("--iters", type=int, default=2000, help="heuristic move budget")
    parser.add_argument("--seed", type=int, default=0)


def _power_of_two(value: str) -> int:
    n = int(value)
    if n < 1 or n & (n - 1) != 0:
        raise argparse.ArgumentTypeError(f"{value} is not a power of two")
    return n


def _int_list(value: str):
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {value!r}") from exc


def _rat_list(value: str):
    return [parse_rational(v) for v in value.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="disclab")
    top = parser.add_subparsers(dest="command", required=True)

    construct = top.add_parser("construct", help="emit matrices as JSON")
    csub = construct.add_subparsers(dest="what", required=True)
    stacked = csub.add_parser("stacked", help="t copies of W side by side, t = floor(1/(2p))")
    stacked.add_argument("--p", type=parse_rational, required=True)
    stacked.add_argument("--n", type=_power_of_two, required=True)
    stacked.add_argument("--out", default="")
    hadamard = csub.add_parser("hadamard", help="Sylvester sign matrix of the given order")
    hadamard.add_argument("--n", type=_power_of_two, required=True)
    hadamard.add_argument("--out", default="")
    wmat = csub.add_parser("w", help="(1 + H)/2 for the Sylvester H of the given order")
    wmat.add_argument("--n", type=_power_of_two, required=True)
    wmat.add_argument("--out", default="")

    wdisc = top.add_parser("wdisc", help="weighted discrepancy solvers")
    wsub = wdisc.add_subparsers(dest="how", required=True)
    wexact = wsub.add_parser("exact")
    wexact.add_argument("--matrix", required=True)
    wexact.add_argument("--p", type=parse_rational, required=True)
    wexact.add_argument("--cap", type=int, default=None, help="exact width cap")
    wheur = wsub.add_parser("heur")
    wheur.add_argument("--matrix", required=True)
    wheur.add_argument("--p", type=parse_rational, required=True)
    _add_oracle_flags(wheur, default_kind="local-search")

    odisc = top.add_parser("odisc", help="multicolor / asymmetric discrepancy")
    osub = odisc.add_subparsers(dest="how", required=True)
    oexact = osub.add_parser("exact")
    oexact.add_argument("--matrix", action="append", required=True,
                        help="repeat for one block per color")
    oexact.add_argument("--k", type=int, default=0,
                        help="with a single --matrix: use k identical copies")
    oexact.add_argument("--cap", type=int, default=None, help="enumeration cap on k^m")
    oexact.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    ocolor = osub.add_parser("color")
    ocolor.add_argument("--matrix", action="append", required=True)
    ocolor.add_argument("--k", type=int, default=0)
    ocolor.add_argument("--zeta", default="100")
    ocolor.add_argument("--cap", type=int, default=None, help="exact oracle width cap")
    _add_oracle_flags(ocolor)

    certify = top.add_parser("certify", help="exact lower-bound certification")
    certsub = certify.add_subparsers(dest="what", required=True)
    cwd = certsub.add_parser("wdisc-lb")
    cwd.add_argument("--p", type=parse_rational, required=True)
    cwd.add_argument("--n", type=_power_of_two, required=True)
    cwd.add_argument("--cap", type=int, default=None, help="exact width cap")
    cmc = certsub.add_parser("multicolor-lb")
    cmc.add_argument("--k", type=int, required=True)
    cmc.add_argument("--n", type=_power_of_two, required=True)
    cmc.add_argument("--cap", type=int, default=None, help="enumeration cap on k^m")
    cmc.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    clem = certsub.add_parser("hadamard-lemma")
    clem.add_argument("--n", type=_power_of_two, required=True)
    clem.add_argument("--trials", type=int, default=1000)
    clem.add_argument("--seed", type=int, default=0)

    fd = top.add_parser("fd", help="group fair division")
    fdsub = fd.add_subparsers(dest="what", required=True)
    fgen = fdsub.add_parser("gen")
    fgen.add_argument("--kind", choices=["prop", "ef", "cd"], required=True)
    fgen.add_argument("--matrix", required=True)
    fgen.add_argument("--k", type=int, required=True)
    fgen.add_argument("--istar", type=int, default=1)
    fgen.add_argument("--sizes", type=_int_list, default=None,
                      help="comma-separated group sizes, descending")
    fgen.add_argument("--out", default="")
    fcheck = fdsub.add_parser("check")
    fcheck.add_argument("--instance", required=True)
    fcheck.add_argument("--allocation", required=True)
    fcheck.add_argument("--notion", choices=["ef", "prop", "cd"], required=True)
    fcheck.add_argument("--c", type=int, required=True)
    fminc = fdsub.add_parser("minc")
    fminc.add_argument("--instance", required=True)
    fminc.add_argument("--notion", choices=["ef", "prop", "cd"], required=True)
    fminc.add_argument("--cap", type=int, default=None)
    fminc.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    falloc = fdsub.add_parser("allocate")
    falloc.add_argument("--instance", required=True)
    falloc.add_argument("--zeta", default="100")
    _add_oracle_flags(falloc)
    falloc.add_argument("--cap", type=int, default=None, help="exact oracle width cap")

    experiment = top.add_parser("experiment", help="CSV sweep over (n, p, k, solver)")
    experiment.add_argument("--n", type=_int_list, default=[])
    experiment.add_argument("--p", type=_rat_list, default=[])
    experiment.add_argument("--k", type=_int_list, default=[])
    experiment.add_argument("--solver", default="exact",
                            help="comma list of exact, greedy, local-search")
    experiment.add_argument("--seed", type=int, default=0)
    experiment.add_argument("--iters", type=int, default=2000)
    experiment.add_argument("--cap", type=int, default=None)
    experiment.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    experiment.add_argument("--csv", default="", help="also write the CSV here")
    experiment.add_argument("--timings", action="store_true",
                            help="append a wall_ms column (breaks byte determinism)")
    experiment.add_argument("--float-view", action="store_true", dest="float_view",
                            help="append a decimal value column")

    return parser


def _cmd_construct(args) -> CommandOutcome:
    if args.what == "stacked":
        construction = build_stacked(args.p, args.n)
        payload = construction.matrix.to_json_dict()
    elif args.what == "hadamard":
        payload = hadamard_sylvester(args.n.bit_length() - 1).to_json_dict()
    else:
        payload = lift_w(hadamard_sylvester(args.n.bit_length() - 1)).to_json_dict()
    _write_out(args.out, payload)
    return CommandOutcome(EXIT_OK, _dump(payload))


def _cmd_wdisc(args) -> CommandOutcome:
    matrix = _load_matrix(args.matrix)
    if args.how == "exact":
        cap = args.cap if args.cap is not None else DEFAULT_EXACT_WIDTH_CAP
        result = wdisc_exact(matrix, args.p, OracleConfig(exact_width_cap=cap))
    else:
        result = wdisc_heuristic(matrix, args.p, _oracle_config(args))
    return CommandOutcome(EXIT_OK, _dump(result.to_json_dict()))


def _blocks_from_args(args):
    matrices = [_load_matrix(path) for path in args.matrix]
    if args.k and len(matrices) == 1:
        return matrices * args.k
    if args.k and args.k != len(matrices):
        raise InputError("--k disagrees with the number of --matrix blocks")
    return matrices


def _cmd_odisc(args) -> CommandOutcome:
    blocks = _blocks_from_args(args)
    if args.how == "exact":
        cap = args.cap if args.cap is not None else _default_cap()
        result = odisc_exact(blocks, cap=cap, threads=args.threads)
        return CommandOutcome(EXIT_OK, _dump(result.to_json_dict()))
    coloring, certificate = odisc_color(blocks, _recursion_config(args))
    payload = {
        "coloring": list(coloring),
        "value": format_rational(eval_asymmetric(blocks, coloring)),
        "bounds": [format_rational(b) for b in certificate.bounds],
        "certificate": certificate.to_json_dict(),
    }
    return CommandOutcome(EXIT_OK, _dump(payload))


def _cmd_certify(args) -> CommandOutcome:
    if args.what == "wdisc-lb":
        cap = args.cap if args.cap is not None else DEFAULT_EXACT_WIDTH_CAP
        report = certify_wdisc_lb(args.p, args.n, OracleConfig(exact_width_cap=cap))
        payload = report.to_json_dict()
        return CommandOutcome(EXIT_OK if report.passed else EXIT_CERT_FAIL, _dump(payload))
    if args.what == "multicolor-lb":
        report = certify_multicolor_lb(
            args.k, args.n, enumeration_cap=args.cap if args.cap is not None else _default_cap(),
            threads=args.threads,
        )
        payload = report.to_json_dict()
        return CommandOutcome(EXIT_OK if report.passed else EXIT_CERT_FAIL, _dump(payload))
    # hadamard-lemma: seeded random vectors plus all unit vectors.
    w = lift_w(hadamard_sylvester(args.n.bit_length() - 1))
    rng = random.Random(args.seed)
    failures = 0
    for _ in range(args.trials):
        z = [rng.randint(-8, 8) for _ in range(args.n)]
        if not check_hadamard_lemma(w, z)[2]:
            failures += 1
    for i in range(args.n):
        unit = [0] * args.n
        unit[i] = 1
        if not check_hadamard_lemma(w, unit)[2]:
            failures += 1
    payload = {"n": args.n, "trials": args.trials, "failures": failures, "pass": failures == 0}
    return CommandOutcome(EXIT_OK if failures == 0 else EXIT_CERT_FAIL, _dump(payload))


def _cmd_fd(args) -> CommandOutcome:
    if args.what == "gen":
        matrix = _load_matrix(args.matrix)
        if args.kind == "cd":
            instance = gen_cd_instance(matrix, args.k)
        else:
            if args.sizes is None:
                raise InputError("--sizes is required for prop/ef generation")
            if args.kind == "prop":
                instance = gen_prop_lb_instance(matrix, args.k, args.istar, args.sizes)
            else:
                instance = gen_ef_lb_instance(matrix, args.k, args.sizes)
        payload = instance.to_json_dict()
        _write_out(args.out, payload)
        return CommandOutcome(EXIT_OK, _dump(payload))
    if args.what == "check":
        instance = FairDivInstance.from_json_dict(_load_json(args.instance))
        allocation = Allocation.from_json_dict(_load_json(args.allocation), instance.m)
        notion = FairnessNotion(args.notion.upper(), args.c)
        ok = check_fairness(instance, allocation, notion)
        payload = {"notion": notion.tag, "c": notion.c, "pass": ok}
        return CommandOutcome(EXIT_OK if ok else EXIT_CERT_FAIL, _dump(payload))
    if args.what == "minc":
        instance = FairDivInstance.from_json_dict(_load_json(args.instance))
        cap = args.cap if args.cap is not None else _default_cap()
        c_star, witness = brute_force_min_c(
            instance, args.notion.upper(), cap=cap, threads=args.threads
        )
        payload = {"notion": args.notion.upper(), "c_star": c_star,
                   "witness": witness.to_json_dict()}
        return CommandOutcome(EXIT_OK, _dump(payload))
    # allocate
    instance = FairDivInstance.from_json_dict(_load_json(args.instance))
    allocation, c, h = allocate_prop_via_odisc(instance, _recursion_config(args))
    payload = {
        "bundles": [list(b) for b in allocation.bundles],
        "c": c,
        "H": h,
        "dummy_goods": max(0, instance.k * h - instance.m),
        "pass": True,
    }
    return CommandOutcome(EXIT_OK, _dump(payload))


def _experiment_rows(args):
    solvers = [s.strip() for s in args.solver.split(",") if s.strip()]
    cap = args.cap if args.cap is not None else _default_cap()
    rows = []
    for n in args.n:
        for p in args.p:
            for solver in solvers:
                rows.append(("wdisc", n, None, p, solver))
        for k in args.k:
            rows.append(("multicolor", n, k, Fraction(1, k), "exact"))
    if not rows:
        raise InputError("empty sweep grid: provide --n with --p and/or --k")
    return rows, cap


def _cmd_experiment(args) -> CommandOutcome:
    rows, cap = _experiment_rows(args)
    header = ["mode", "n", "k", "p", "solver", "t", "cols", "value", "exact",
              "lb_statement", "lb_proof", "reference_bound", "status", "pass"]
    if args.float_view:
        header.append("value_float")
    if args.timings:
        header.append("wall_ms")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)

    completed = 0
    failed = 0
    for mode, n, k, p, solver in rows:
        started = time.perf_counter()
        record = {
            "mode": mode, "n": n, "k": k if k else "", "p": format_rational(p),
            "solver": solver, "t": "", "cols": "", "value": "", "exact": "",
            "lb_statement": format_rational(lb_value(n, "statement")),
            "lb_proof": format_rational(lb_value(n, "proof")),
            "reference_bound": "", "status": "ok", "pass": "",
        }
        try:
            construction = build_stacked(p, n)
            record["t"] = construction.t
            record["cols"] = construction.matrix.cols
            if mode == "wdisc":
                config = OracleConfig(kind=solver, budget=args.iters, seed=args.seed)
                result = oracle_solve(construction.matrix, construction.p, config)
                record["value"] = format_rational(result.value)
                record["exact"] = result.exact
                if result.exact:
                    record["pass"] = bool(
                        result.value * result.value >= Fraction(n - 1, 64)
                    )
            else:
                record["reference_bound"] = format_rational(reference_bound(k, n))
                if k ** construction.matrix.cols > cap:
                    record["status"] = "skipped:budget"
                else:
                    report = certify_multicolor_lb(
                        k, n, enumeration_cap=cap, threads=args.threads
                    )
                    record["value"] = format_rational(report.exact_value)
                    record["exact"] = True
                    record["pass"] = report.passed
        except CapExceededError:
            record["status"] = "skipped:budget"
        if record["status"] == "ok":
            completed += 1
            if record["pass"] is False:
                failed += 1
        out_row = [record[name] for name in header if name not in ("value_float", "wall_ms")]
        if args.float_view:
            out_row.append(
                repr(float(parse_rational(record["value"]))) if record["value"] else ""
            )
        if args.timings:
            out_row.append(round((time.perf_counter() - started) * 1000, 3))
        writer.writerow(out_row)

    text = buffer.getvalue()
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write(text)
    if completed == 0:
        return CommandOutcome(EXIT_BUDGET, text, "all sweep rows exceeded their budgets\n")
    if failed:
        return CommandOutcome(EXIT_CERT_FAIL, text, f"{failed} sweep rows failed certification\n")
    return CommandOutcome(EXIT_OK, text)


def run(argv) -> CommandOutcome:
    """Execute one CLI invocation and report (exit code, stdout, stderr)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandOutcome(exc.code if exc.code else EXIT_OK)
    try:
        if args.command == "construct":
            return _cmd_construct(args)
        if args.command == "wdisc":
            return _cmd_wdisc(args)
        if args.command == "odisc":
            return _cmd_odisc(args)
        if args.command == "certify":
            return _cmd_certify(args)
        if args.command == "fd":
            return _cmd_fd(args)
        return _cmd_experiment(args)
    except CapExceededError as exc:
        return CommandOutcome(EXIT_BUDGET, "", f"budget exceeded: {exc}\n")
    except VerificationError as exc:
        return CommandOutcome(EXIT_CERT_FAIL, "", f"verification failed: {exc}\n")
    except (InputError, DisclabError) as exc:
        return CommandOutcome(EXIT_USAGE, "", f"error: {exc}\n")


def main() -> None:
    outcome = run(sys.argv[1:])
    if outcome.stdout:
        sys.stdout.write(outcome.stdout)
    if outcome.stderr:
        sys.stderr.write(outcome.stderr)
    sys.exit(outcome.exit_code)


if __name__ == "__main__":
    main()
