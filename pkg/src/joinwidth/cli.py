"""Command-line front end.

Exit codes: 0 SAT / found / yes, 1 UNSAT / not found / no, 2 width exceeded,
3 a budget or size limit was hit, 64 bad usage or malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from typing import TextIO

from joinwidth import bench, classes, engines, generators, io, oracle
from joinwidth.decomposition import JoinDecomposition, iter_evaluate
from joinwidth.engines import Verdict
from joinwidth.errors import JoinwidthError, LimitExceeded, WidthExceeded
from joinwidth.relational import Hypergraph, hypergraph
from joinwidth.width import as_fraction, count_width, width_base

EXIT_OK = 0
EXIT_NO = 1
EXIT_WIDTH = 2
EXIT_LIMIT = 3
EXIT_USAGE = 64

_VERDICT_EXIT = {Verdict.SAT: EXIT_OK, Verdict.UNSAT: EXIT_NO, Verdict.WIDTH_EXCEEDED: EXIT_WIDTH}
CLASSES = ("functional", "root-set", "constraint-root", "hereditary", "fixing")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _width(text: str):
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a non-negative width: {text!r}") from None


def _fmt(w) -> str:
    return f"{float(w):.3f}"


def _emit_decomposition(dec: JoinDecomposition, out: str | None, stdout: TextIO) -> None:
    if out:
        io.serialize_decomposition(dec, out)
    else:
        stdout.write(io.decomposition_to_text(dec))


def _emit_instance(inst, out: str | None, stdout: TextIO) -> None:
    if out:
        io.serialize_instance(inst, out)
    else:
        stdout.write(io.instance_to_text(inst))


def _cmd_solve(args, out: TextIO) -> int:
    inst = io.parse_instance(args.instance)
    engine_flags = sum(bool(x) for x in (args.decomposition, args.dp_vars, args.dp_cons))
    if engine_flags > 1:
        raise UsageError("solve: choose at most one of --decomposition, --dp-vars, --dp-cons")
    if (args.dp_vars or args.dp_cons) and args.width is None:
        raise UsageError("solve: --dp-vars and --dp-cons need --width")
    if args.dp_vars:
        verdict = engines.solve_variable_dp(inst, args.width).verdict
        print(verdict, file=out)
    else:
        if args.decomposition:
            dec = io.parse_decomposition(args.decomposition)
        elif args.dp_cons:
            found = engines.find_decomposition_dp(inst, args.width)
            if not found.found:
                print(Verdict.WIDTH_EXCEEDED, file=out)
                return EXIT_WIDTH
            dec = found.decomposition
        else:
            dec = engines.exact_joinwidth(inst).decomposition
        res = engines.solve_with_decomposition(inst, dec)
        verdict = res.verdict
        print(f"{verdict} width={_fmt(res.report.width)}", file=out)
    if args.witness and verdict == Verdict.SAT:
        assignment = engines.extract_witness(inst)
        print(json.dumps(assignment), file=out)
    return _VERDICT_EXIT[verdict]


def _cmd_width(args, out: TextIO) -> int:
    inst = io.parse_instance(args.instance)
    dec = io.parse_decomposition(args.decomposition)
    nodes = dec.postorder()
    pos = {id(n): i for i, n in enumerate(nodes)}
    print(f"{'node':>4}  {'kind':<12}  {'tuples':>8}  {'width':>7}  vars", file=out)
    peak = 0
    try:
        for ev in iter_evaluate(dec, inst, args.mode, args.cap):
            node = nodes[ev.node_id]
            if node.is_leaf:
                kind = f"leaf c{node.constraint}"
            else:
                kind = "join " + ",".join(str(pos[id(c)]) for c in node.children)
            scope = ",".join(ev.constraint.scope)
            print(f"{ev.node_id:>4}  {kind:<12}  {ev.count:>8}  {_fmt(ev.width):>7}  {scope}", file=out)
            peak = max(peak, ev.count)
    except WidthExceeded as exc:
        print(f"{Verdict.WIDTH_EXCEEDED} node={exc.node_id} tuples={exc.count} cap={exc.cap}", file=out)
        return EXIT_WIDTH
    print(f"width={_fmt(count_width(peak, width_base(inst)))} peak={peak} mode={args.mode}", file=out)
    return EXIT_OK


def _cmd_search(args, out: TextIO) -> int:
    inst = io.parse_instance(args.instance)
    res = engines.find_decomposition_dp(inst, args.max_width)
    if not res.found:
        print("NOT-FOUND", file=out)
        return EXIT_NO
    print(f"FOUND width={_fmt(res.width)}", file=out)
    _emit_decomposition(res.decomposition, args.out, out)
    return EXIT_OK


def _cmd_exact(args, out: TextIO) -> int:
    inst = io.parse_instance(args.instance)
    res = engines.exact_joinwidth(inst)
    print(f"width={_fmt(res.width)} peak={res.peak_count}", file=out)
    _emit_decomposition(res.decomposition, args.out, out)
    return EXIT_OK


def _int_k(args) -> int:
    if args.k is None:
        raise UsageError(f"detect: --class {args.cls} needs --k")
    if args.k.denominator != 1:
        raise UsageError(f"detect: --class {args.cls} needs an integer --k")
    return int(args.k)


def _witness_data(w: classes.RootSetWitness) -> dict:
    return {"roots": list(w.roots), "order": list(w.order),
            "certificates": {v: w.certificates[v] for v in w.order if v in w.certificates}}


def _cmd_detect(args, out: TextIO) -> int:
    inst = io.parse_instance(args.instance)
    data: dict | None = None
    if args.cls == "functional":
        w = classes.find_root_set_witness(inst, ())
        data = None if w is None else _witness_data(w)
    elif args.cls == "root-set":
        w = classes.find_root_set(inst, _int_k(args))
        data = None if w is None else _witness_data(w)
    elif args.cls == "constraint-root":
        found = classes.find_constraint_root_set(inst, _int_k(args))
        if found is not None:
            data = {"constraints": list(found.constraints), **_witness_data(found.witness),
                    "decomposition": io.decomposition_to_data(found.decomposition)}
    elif args.cls == "hereditary":
        if args.k is None:
            raise UsageError("detect: --class hereditary needs --k")
        if classes.is_hereditarily_k_bounded(inst, args.k):
            data = {}
    else:
        fix = classes.find_fixing_sets(inst, _int_k(args))
        if fix is not None:
            dec = classes.decomposition_from_fixing_sets(inst, fix)
            data = {"fix": {str(c): list(s) for c, s in sorted(fix.fix.items())},
                    "decomposition": io.decomposition_to_data(dec)}
    if data is None:
        print(f"NO class={args.cls}", file=out)
        return EXIT_NO
    print(f"YES class={args.cls}", file=out)
    record = {"class": args.cls, "k": None if args.k is None else str(args.k), **data}
    text = json.dumps(record) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _read_graph(path: str) -> tuple[list[tuple], list]:
    edges, vertices = io.parse_graph(path)
    return [tuple(str(v) for v in e) for e in edges], [str(v) for v in vertices]


def _cmd_gen(args, out: TextIO) -> int:
    fam = args.family
    if fam == "triangle":
        inst = generators.gen_triangle(args.N)
    elif fam == "star":
        inst = generators.gen_star(args.omega)
    elif fam in ("tree-complete", "complete"):
        edges, _ = _read_graph(args.graph)
        fn = generators.gen_tree_complete if fam == "tree-complete" else generators.gen_complete_hypergraph
        inst = fn(edges, args.d)
    elif fam == "bw-reduction":
        edges, vertices = _read_graph(args.graph)
        inst = generators.gen_bw_reduction(edges, args.omega, vertices or None)
    elif fam == "agm":
        inst = generators.gen_agm(args.omega, args.allow_large)
    elif fam == "chain":
        inst = generators.gen_chain(args.omega, args.n, args.allow_large)
    elif fam == "identity":
        inst = generators.gen_identity(args.n)
    elif fam == "functional-chain":
        inst = generators.gen_functional_chain(args.n, args.d, args.seed)
    else:
        inst = generators.gen_random(args.seed, args.vars, args.domain, args.constraints,
                                     (args.min_arity, args.max_arity), args.density)
    _emit_instance(inst, args.out, out)
    return EXIT_OK


def _cmd_oracle(args, out: TextIO) -> int:
    if args.question == "branchwidth":
        if (args.instance is None) == (args.graph is None):
            raise UsageError("oracle branchwidth: give exactly one of --instance, --graph")
        if args.graph:
            edges, vertices = _read_graph(args.graph)
            h = Hypergraph(frozenset(vertices).union(*edges), tuple(frozenset(e) for e in edges))
        else:
            h = hypergraph(io.parse_instance(args.instance))
        bw = oracle.brute_force_branchwidth(h, args.linear, max_edges=args.max_size)
        print(f"branchwidth={bw}", file=out)
        return EXIT_OK
    if args.instance is None:
        raise UsageError(f"oracle {args.question}: --instance is required")
    inst = io.parse_instance(args.instance)
    if args.question == "solve":
        n = oracle.count_solutions(inst)
        print(f"{Verdict.SAT if n else Verdict.UNSAT} solutions={n}", file=out)
        return EXIT_OK if n else EXIT_NO
    res = oracle.brute_force_joinwidth(inst, args.linear, max_constraints=args.max_size)
    print(f"width={_fmt(res.width)} peak={res.peak_count} trees={res.trees_evaluated}", file=out)
    return EXIT_OK


def _cmd_bench(args, out: TextIO) -> int:
    cases = bench.load_suite(args.suite)
    engines_ = tuple(args.engine) if args.engine else bench.ENGINES
    rows = bench.run_suite(cases, engines_, args.workers)
    bench.write_csv(rows, args.out)
    print(f"rows={len(rows)} out={args.out}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="joinwidth", description="Join decompositions and joinwidth for CSP instances.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide satisfiability")
    s.add_argument("--instance", required=True)
    s.add_argument("--decomposition")
    s.add_argument("--dp-vars", action="store_true", help="variable-subset search")
    s.add_argument("--dp-cons", action="store_true", help="constraint-subset search, then solve")
    s.add_argument("--width", type=_width)
    s.add_argument("--witness", action="store_true", help="also print a satisfying assignment")
    s.set_defaults(run=_cmd_solve)

    s = sub.add_parser("width", help="evaluate a decomposition node by node")
    s.add_argument("--instance", required=True)
    s.add_argument("--decomposition", required=True)
    s.add_argument("--mode", choices=("naive", "proj", "pruned"), default="pruned")
    s.add_argument("--cap", type=_width)
    s.set_defaults(run=_cmd_width)

    s = sub.add_parser("search", help="find a decomposition within a width bound")
    s.add_argument("--instance", required=True)
    s.add_argument("--max-width", type=_width, required=True)
    s.add_argument("--out")
    s.set_defaults(run=_cmd_search)

    s = sub.add_parser("exact", help="exact joinwidth with an optimal decomposition")
    s.add_argument("--instance", required=True)
    s.add_argument("--out")
    s.set_defaults(run=_cmd_exact)

    s = sub.add_parser("detect", help="membership in a tractable class")
    s.add_argument("--instance", required=True)
    s.add_argument("--class", dest="cls", choices=CLASSES, required=True)
    s.add_argument("--k", type=_width)
    s.add_argument("--out", help="witness file (default: stdout)")
    s.set_defaults(run=_cmd_detect)

    s = sub.add_parser("gen", help="generate an instance family")
    fams = s.add_subparsers(dest="family", required=True, parser_class=_Parser)
    f = fams.add_parser("triangle")
    f.add_argument("--N", type=int, required=True)
    f = fams.add_parser("star")
    f.add_argument("--omega", type=int, required=True)
    for name in ("tree-complete", "complete"):
        f = fams.add_parser(name)
        f.add_argument("--graph", required=True, help="JSON edge list")
        f.add_argument("--d", type=int, required=True)
    f = fams.add_parser("bw-reduction")
    f.add_argument("--graph", required=True, help="JSON edge list, or {edges, vertices}")
    f.add_argument("--omega", type=int, required=True)
    f = fams.add_parser("agm")
    f.add_argument("--omega", type=int, required=True)
    f.add_argument("--allow-large", action="store_true")
    f = fams.add_parser("chain")
    f.add_argument("--omega", type=int, required=True)
    f.add_argument("--n", type=int)
    f.add_argument("--allow-large", action="store_true")
    f = fams.add_parser("identity")
    f.add_argument("--n", type=int, required=True)
    f = fams.add_parser("functional-chain")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--d", type=int, required=True)
    f.add_argument("--seed", type=int, default=0)
    f = fams.add_parser("random")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--vars", type=int, required=True)
    f.add_argument("--domain", type=int, required=True)
    f.add_argument("--constraints", type=int, required=True)
    f.add_argument("--min-arity", type=int, default=2)
    f.add_argument("--max-arity", type=int, default=2)
    f.add_argument("--density", type=float, default=0.5)
    for f in fams.choices.values():
        f.add_argument("--out")
    s.set_defaults(run=_cmd_gen)

    s = sub.add_parser("oracle", help="brute-force reference answers")
    s.add_argument("question", choices=("solve", "joinwidth", "branchwidth"))
    s.add_argument("--instance")
    s.add_argument("--graph", help="branchwidth only: JSON edge list")
    s.add_argument("--linear", action="store_true")
    s.add_argument("--max-size", type=int, default=8,
                   help="most constraints or edges to enumerate trees over")
    s.set_defaults(run=_cmd_oracle)

    s = sub.add_parser("bench", help="run a benchmark suite to CSV")
    s.add_argument("--suite", choices=sorted(bench.SUITES), required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--engine", action="append", choices=bench.ENGINES)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(run=_cmd_bench)
    return p


def run_cli(argv: Sequence[str] | None = None, stdout: TextIO | None = None,
            stderr: TextIO | None = None) -> int:
    out = sys.stdout if stdout is None else stdout
    err = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        return args.run(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc.limit} ({exc.value} > {exc.maximum})", file=err)
        return EXIT_LIMIT
    except (JoinwidthError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
