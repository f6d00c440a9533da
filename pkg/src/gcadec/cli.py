"""Command line: ``gcadec validate|decompose|decide|oracle <sub> FILE [flags]``.

Exit codes: 0 when the command computed its answer, 2 for input errors
(including exhausted budgets), 3 for internal inconsistencies.
"""

from __future__ import annotations

import argparse
import sys

from .decomposition import decide_transitivity, decompose_tree, report_equivalences
from .errors import BudgetExceeded, GcadecError, InternalInconsistency
from .groups.verbal import characteristic_simple_decomposition
from .oracles import (ReachQuery, cylinder_reach, kernel_finite_search, lemma_harness,
                      local_image_deficiency, verbal_exhaustive, verify_kernel_witness)
from .problem import ProblemError, _Parser, _parse_offset, element_id, load, tokenize

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


def _bool(v):
    return "true" if v else "false"


def _print_tree(node, out, indent=0):
    pad = "  " * indent
    if "leaf" in node:
        print(f"{pad}leaf {node['leaf']}: {node['classification']} (order {node['order']})", file=out)
        return
    v = node["verbal"]
    print(f"{pad}{node['group']} (order {node['order']}): word {v['word']}, "
          f"verbal subgroup of order {v['order']}", file=out)
    print(f"{pad}  quotient:", file=out)
    _print_tree(node["quotient"], out, indent + 2)
    print(f"{pad}  subgroup:", file=out)
    _print_tree(node["subgroup"], out, indent + 2)


def cmd_validate(args, out):
    problem = load(args.file)
    group = problem.build_group()
    print(f"group: {group.name}, order {group.order}: ok", file=out)
    gca = problem.build()
    print(f"homomorphisms: {gca.k} ok", file=out)
    print("images commute pairwise: ok", file=out)
    print(f"valid: {gca.dim}-dimensional GCA with {gca.k} neighbors", file=out)
    return EXIT_OK


def cmd_decompose(args, out):
    gca = load(args.file).build()
    tree, leaves = decompose_tree(gca)
    _print_tree(tree, out)
    print(f"leaves: {len(leaves)}", file=out)
    return EXIT_OK


def cmd_decide(args, out):
    gca = load(args.file).build()
    verdict, cert = decide_transitivity(gca, verify_lemma=args.verify_lemma,
                                        short_circuit=args.short_circuit)
    print(f"transitive: {_bool(verdict)}", file=out)
    for name, value in report_equivalences(verdict):
        print(f"  {name}: {_bool(value)}", file=out)
    surj = cert["surjective"]
    print(f"surjective: {'unknown' if surj is None else _bool(surj)}", file=out)
    for leaf in cert["leaves"]:
        status = "skipped" if leaf.get("skipped") else _bool(leaf["transitive"])
        print(f"leaf {leaf['index']}: {leaf['classification']}: {status}", file=out)
    if args.certificate:
        cert.write(args.certificate)
        print(f"certificate written to {args.certificate}", file=out)
    return EXIT_OK


def _parse_value(text, what):
    p = _Parser(tokenize(text), 1)
    if what == "positions":
        value = p.sequence("[", "]", lambda: _parse_offset(p))
    else:
        value = p.sequence("[", "]", p.element)
    p.done()
    return value


def cmd_reach(args, out):
    gca = load(args.file).build()
    positions = _parse_value(args.positions, "positions")
    source = [element_id(gca.group, v) for v in _parse_value(args.source, "elements")]
    target = [element_id(gca.group, v) for v in _parse_value(args.target, "elements")]
    try:
        query = ReachQuery(gca, positions, source, target, args.max_steps)
    except ValueError as exc:
        raise ProblemError(str(exc)) from exc
    n = cylinder_reach(query)
    if n is None:
        print(f"reach: none within {args.max_steps} steps", file=out)
    else:
        print(f"reach: n = {n}", file=out)
    print("status: exact for each n; a positive answer confirms this cylinder pair only", file=out)
    return EXIT_OK


def cmd_kernel(args, out):
    gca = load(args.file).build()
    w = kernel_finite_search(gca, args.box)
    if w is None:
        print(f"kernel: no finite witness within box {args.box}", file=out)
        print("status: absence of a witness does not prove surjectivity", file=out)
    else:
        ok = verify_kernel_witness(gca, w)
        cells = ", ".join(f"{list(c)}: {gca.group.label(x)}" for c, x in sorted(w.pattern.items()))
        print(f"kernel: witness found within box {args.box}: {{{cells}}}", file=out)
        print(f"re-verified: {_bool(ok)}", file=out)
        print("status: the automaton is not surjective", file=out)
        if not ok:
            raise InternalInconsistency("kernel witness failed re-verification")
    missing = local_image_deficiency(gca)
    if missing is not None:
        print(f"local rule image misses element {gca.group.label(missing)}", file=out)
    return EXIT_OK


def cmd_verbal(args, out):
    group = load(args.file).build_group()
    subs = verbal_exhaustive(group, args.max_len, args.arity)
    orders = sorted(s.order for s in subs)
    print(f"verbal subgroups (words up to length {args.max_len}, arity {args.arity}): "
          f"orders {orders}", file=out)
    return EXIT_OK


def cmd_lemma(args, out):
    gca = load(args.file).build()
    fac = characteristic_simple_decomposition(gca.group)
    if fac is None or fac.abelian or not fac.factors:
        raise ProblemError(f"the lemma oracle needs a power of a non-abelian simple group, got {gca.group.name}")
    try:
        report = lemma_harness(gca, samples=args.samples)
    except ValueError as exc:
        raise ProblemError(str(exc)) from exc
    for entry in report:
        print(f"cycle {entry['cycle']}: F^{entry['exponent']} = shift{tuple(entry['shift'])}: "
              f"rule check {_bool(entry['by_rule'])}, configuration check {_bool(entry['by_configs'])}",
              file=out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="gcadec", description="Decide transitivity of group cellular automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check group, homomorphisms, and commuting images")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="print the verbal decomposition tree")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("decide", help="decide topological transitivity")
    p.add_argument("file")
    p.add_argument("--certificate", metavar="PATH", help="write a JSON certificate")
    p.add_argument("--verify-lemma", action="store_true",
                   help="check the power-equals-shift identity on every simple-power leaf")
    sc = p.add_mutually_exclusive_group()
    sc.add_argument("--short-circuit", dest="short_circuit", action="store_true",
                    help="skip leaves after the first non-transitive one")
    sc.add_argument("--no-short-circuit", dest="short_circuit", action="store_false",
                    help="decide every leaf (default)")
    p.set_defaults(func=cmd_decide, short_circuit=False)

    p = sub.add_parser("oracle", help="brute-force oracles")
    osub = p.add_subparsers(dest="oracle", required=True)
    o = osub.add_parser("reach", help="cylinder reachability")
    o.add_argument("file")
    o.add_argument("--positions", required=True, help="e.g. '[(0), (1)]'")
    o.add_argument("--source", required=True, help="e.g. '[0, 0]'")
    o.add_argument("--target", required=True, help="e.g. '[1, 1]'")
    o.add_argument("--max-steps", type=int, default=12)
    o.set_defaults(func=cmd_reach)
    o = osub.add_parser("kernel", help="finite kernel witness search")
    o.add_argument("file")
    o.add_argument("--box", type=int, default=4)
    o.set_defaults(func=cmd_kernel)
    o = osub.add_parser("verbal", help="enumerate verbal subgroups of the problem's group")
    o.add_argument("file")
    o.add_argument("--max-len", type=int, default=4)
    o.add_argument("--arity", type=int, default=2)
    o.set_defaults(func=cmd_verbal)
    o = osub.add_parser("lemma", help="check the power-equals-shift identity two ways")
    o.add_argument("file")
    o.add_argument("--samples", type=int, default=100)
    o.set_defaults(func=cmd_lemma)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GcadecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
