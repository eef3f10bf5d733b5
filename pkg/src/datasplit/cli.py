"""Command line entry point.

Exit codes: 0 success, 1 infeasible instance, 2 budget exceeded, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
import time

from .boolean import (
    AlgebraLimits,
    algebraic_search,
    encode_ideal,
    enumerate_roots,
    format_poly,
    var_name,
)
from .errors import BudgetExceeded, InfeasibleInstance, InstanceError, VariableCapExceeded
from .exact import SolveLimits, optimal_cover
from .experiments import GenParams, bench, gen_random_instance, medical_instance, rows_to_csv
from .family import (
    bounds,
    fmt_set,
    first_violation,
    members,
    normalize,
    validate,
)
from .greedy import greedy_cover, heuristic_cover
from .serialize import covering_to_dict, dumps, instance_to_dict, load_instance

EXIT_OK, EXIT_INFEASIBLE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


def _instance(args):
    if args.input:
        inst = load_instance(args.input)
    elif args.n is not None:
        inst = gen_random_instance(GenParams(args.n, args.rho, args.seed))
    else:
        raise InstanceError("no instance given: use --in PATH or --n/--rho/--seed")
    return validate(inst)


def _emit(args, doc, lines):
    if args.json:
        print(dumps(doc))
    else:
        for line in lines:
            print(line)


def cmd_check(args):
    inst = _instance(args)
    bad = first_violation(inst)
    if bad is None:
        _emit(args, {"feasible": True, "n": inst.n, "forbidden": len(inst.forbidden), "required": len(inst.required)},
              [f"valid instance: n={inst.n}, |F|={len(inst.forbidden)}, |A|={len(inst.required)}", "feasible"])
        return EXIT_OK
    msg = f"infeasible: forbidden {fmt_set(bad[0])} ⊆ required {fmt_set(bad[1])}"
    _emit(args, {"feasible": False, "forbidden": members(bad[0]), "required": members(bad[1])}, [msg])
    return EXIT_INFEASIBLE


def cmd_bounds(args):
    rep = bounds(_instance(args))
    doc = rep.as_dict()
    _emit(args, doc, [f"{key:28s} {value}" for key, value in doc.items()])
    return EXIT_OK


def _solve_greedy(args, solver, method):
    inst = normalize(_instance(args))
    start = time.process_time()
    cov, trace = solver(inst)
    elapsed = time.process_time() - start
    doc = covering_to_dict(cov, method, trace if args.trace else None)
    if args.timings:
        doc["cpu_seconds"] = elapsed
    lines = [f"method: {method}", f"size: {len(cov)}"]
    lines += [f"  fragment {j}: {fmt_set(x)}" for j, x in enumerate(cov.fragments)]
    if args.trace:
        lines += [f"  A[{s.required_index}] -> {s.action} {s.fragment}" for s in trace]
    if args.timings:
        lines.append(f"cpu: {elapsed:.6f}s")
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_greedy(args):
    return _solve_greedy(args, greedy_cover, "greedy")


def cmd_heuristic(args):
    return _solve_greedy(args, heuristic_cover, "heuristic")


def cmd_exact(args):
    inst = _instance(args)
    limits = SolveLimits(max_nodes=args.budget) if args.budget else SolveLimits()
    start = time.process_time()
    rep = optimal_cover(inst, limits, enumerate_all=args.enumerate)
    elapsed = time.process_time() - start
    doc = rep.as_dict()
    if args.enumerate:
        doc["canonical_optimal_covers"] = [
            c.as_lists() for c in sorted(rep.canonical_optimal_covers, key=lambda c: c.as_lists())
        ]
    if args.timings:
        doc["cpu_seconds"] = elapsed
    lines = [f"optimal_size: {rep.optimal_size}", f"cover: {rep.one_cover.canonical()}", f"nodes: {rep.nodes_explored}"]
    if args.enumerate:
        lines.append(f"canonical optimal covers: {len(rep.canonical_optimal_covers)}")
    if args.timings:
        lines.append(f"cpu: {elapsed:.6f}s")
    _emit(args, doc, lines)
    return EXIT_OK


def _algebra_limits(args):
    kw = {"max_vars": args.max_vars}
    if args.budget:
        kw["max_nodes"] = args.budget
        kw["max_pairs"] = args.budget
    return AlgebraLimits(**kw)


def cmd_algebraic(args):
    inst = _instance(args)
    k, method = algebraic_search(inst, _algebra_limits(args), args.method)
    _emit(args, {"k": k, "method": method}, [f"k = {k}", f"method: {method}"])
    return EXIT_OK


def cmd_roots(args):
    inst = normalize(_instance(args))
    gens = encode_ideal(inst, args.k)
    doc = {"k": args.k, "n": inst.n}
    lines = []
    if args.dump_ideal:
        doc["generators"] = [format_poly(p, inst.n) for p in gens.polys]
        lines += doc["generators"]
    roots = enumerate_roots(gens, _algebra_limits(args))
    doc["num_roots"] = len(roots)
    doc["roots"] = [
        {
            "ones": [var_name(v, inst.n) for v in members(r.bits)],
            "covering": r.covering().as_lists(),
        }
        for r in roots
    ]
    lines.append(f"{len(roots)} roots")
    lines += [str(r.covering()) for r in roots]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_gen(args):
    if args.n is None:
        raise InstanceError("gen needs --n")
    inst = gen_random_instance(GenParams(args.n, args.rho, args.seed))
    print(dumps(instance_to_dict(inst)))
    return EXIT_OK


def cmd_medical(args):
    print(dumps(instance_to_dict(medical_instance(args.row))))
    return EXIT_OK


def cmd_bench(args):
    methods = tuple(args.methods.split(","))
    limits = SolveLimits(max_nodes=args.budget) if args.budget else SolveLimits(max_nodes=200_000)
    rows = []
    for n in args.sizes:
        for rho in args.rhos:
            rows.append(bench(GenParams(n, rho, args.seed), args.trials, methods, limits, args.jobs))
    sys.stdout.write(rows_to_csv(rows, timings=args.timings))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "bounds": cmd_bounds,
    "greedy": cmd_greedy,
    "heuristic": cmd_heuristic,
    "exact": cmd_exact,
    "algebraic": cmd_algebraic,
    "roots": cmd_roots,
    "gen": cmd_gen,
    "bench": cmd_bench,
    "medical": cmd_medical,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="PATH", help="instance JSON file")
    common.add_argument("--n", type=int, help="generate a random instance with n attributes")
    common.add_argument("--rho", type=float, default=0.5, help="total edge density for generation")
    common.add_argument("--seed", type=int, default=0, help="64-bit generator seed")
    common.add_argument("--budget", type=int, help="node / critical pair budget")
    common.add_argument("--max-vars", type=int, default=24, help="variable cap for root enumeration")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--trace", action="store_true", help="include the greedy trace")
    common.add_argument("--timings", action="store_true", help="report CPU times")

    parser = argparse.ArgumentParser(prog="datasplit", description="Privacy-constrained vertical data splitting.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("check", "bounds", "greedy", "heuristic", "gen"):
        sub.add_parser(name, parents=[common])
    p = sub.add_parser("exact", parents=[common])
    p.add_argument("--enumerate", action="store_true", help="list all canonical optimal covers")
    p = sub.add_parser("algebraic", parents=[common])
    p.add_argument("--method", choices=("auto", "enumerate", "buchberger"), default="auto")
    p = sub.add_parser("roots", parents=[common])
    p.add_argument("--k", type=int, required=True, help="number of colors")
    p.add_argument("--dump-ideal", action="store_true", help="print the generators")
    p = sub.add_parser("medical", parents=[common])
    p.add_argument("--row", type=int, required=True)
    p = sub.add_parser("bench", parents=[common])
    p.add_argument("--sizes", type=int, nargs="+", default=[5, 6, 7, 8, 9, 10])
    p.add_argument("--rhos", type=float, nargs="+", default=[0.1, 0.3, 0.5, 0.7, 0.9, 1.0])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--methods", default="greedy,heuristic,exact")
    p.add_argument("--jobs", type=int, default=1)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InfeasibleInstance as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (BudgetExceeded, VariableCapExceeded) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InstanceError, OSError, ValueError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
