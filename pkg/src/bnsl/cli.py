"""Command-line front end.

Subcommands: solve, kernelize, params, verify, gen.  Results are printed
as a single machine-parseable stdout line; diagnostics (parameter values
of the chosen tree or decomposition) go to stderr.  Exit codes: 0 for
success (or answer YES), 1 for answer NO / failed verification, 2 for
usage errors and invalid inputs.
"""

from __future__ import annotations

import argparse
import sys

from . import depset, generate, graphs, kernel, lfen_dp, oracle, polytree, tw_dp
from .instances import (
    AdditiveInstance,
    Network,
    NonZeroInstance,
    ParseError,
    parse_additive,
    parse_nonzero,
    parse_solution,
    score_of,
    superstructure,
    validate,
    write_additive,
    write_nonzero,
    write_solution,
)


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _write(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _sniff_rep(text: str) -> str:
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        return "additive" if s.split()[0] == "additive" else "nonzero"
    raise CliError("empty instance file")


def _load_instance(path: str, rep, target=None, max_parents=None):
    text = _read(path)
    rep = rep or _sniff_rep(text)
    if rep == "additive":
        inst = parse_additive(text, target)
        if max_parents is not None:
            inst = AdditiveInstance(
                inst.n, inst.names, inst.arc_scores, target, max_parents
            )
        return inst, "additive"
    if max_parents is not None:
        raise CliError("--max-parents applies to the additive representation only")
    return parse_nonzero(text, target), "nonzero"


def _load_tree(path, g):
    text = _read(path)
    edges = set()
    names = None
    for i, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        tok = s.split()
        if len(tok) != 2:
            raise CliError(f"tree file line {i}: expected '<u> <v>'")
        edges.add(tuple(tok))
    return edges


def _resolve_names(pairs, instance):
    index = {name: i for i, name in enumerate(instance.names)}
    out = set()
    for a, b in pairs:
        if a not in index or b not in index:
            raise CliError(f"unknown vertex in tree file: {a} {b}")
        out.add((min(index[a], index[b]), max(index[a], index[b])))
    return frozenset(out)


def _load_td(path, instance):
    """Raw decomposition file: `b <id> <names...>` bag lines, `e <parent>
    <child>` tree lines; converted to nice form."""
    index = {name: i for i, name in enumerate(instance.names)}
    bags = {}
    parent = {}
    for i, line in enumerate(_read(path).splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        tok = s.split()
        if tok[0] == "b":
            if len(tok) < 2:
                raise CliError(f"td file line {i}: bag id missing")
            try:
                members = frozenset(index[x] for x in tok[2:])
            except KeyError as e:
                raise CliError(f"td file line {i}: unknown vertex {e}") from None
            bags[int(tok[1])] = members
        elif tok[0] == "e":
            if len(tok) != 3:
                raise CliError(f"td file line {i}: expected 'e <parent> <child>'")
            parent[int(tok[2])] = int(tok[1])
        else:
            raise CliError(f"td file line {i}: unknown record {tok[0]!r}")
    if not bags:
        raise CliError("td file has no bags")
    for c, p in parent.items():
        if c not in bags or p not in bags:
            raise CliError("td file: edge references unknown bag")
    td = graphs.nice_from_raw(bags, parent)
    problems = graphs.check_nice(td, superstructure(instance))
    if problems:
        raise CliError("supplied decomposition invalid: " + "; ".join(problems))
    return td


def cmd_solve(args) -> int:
    inst, rep = _load_instance(
        args.instance, args.rep, args.target, args.max_parents
    )
    mode = args.mode
    algo = args.algo
    if algo == "auto":
        if rep == "additive":
            if mode == "polytree":
                algo = "mst" if inst.max_in_degree is None else "matroid"
            else:
                algo = "twdp"
        else:
            algo = "kernel-lfen"

    nz = {"kernel-lfen", "lfen", "depset"}
    ad = {"twdp", "mst", "matroid"}
    if algo in nz and rep != "nonzero":
        raise CliError(f"--algo {algo} needs the explicit (nonzero) representation")
    if algo in ad and rep != "additive":
        raise CliError(f"--algo {algo} needs the additive representation")
    if algo == "depset" and mode == "polytree":
        raise CliError("dependent-vertex branching solves the acyclic mode only")
    if algo == "mst" and inst_q(inst) is not None:
        raise CliError("spanning-forest solver ignores --max-parents; use matroid")
    if algo == "matroid" and inst_q(inst) is None:
        raise CliError("matroid intersection needs --max-parents")
    if algo == "twdp" and mode == "polytree" and inst_q(inst) is None:
        raise CliError("polytree bag DP needs --max-parents; use mst instead")

    g = superstructure(inst)
    forest = None
    td = None
    if args.tree:
        forest = graphs.forest_from_edges(g, _resolve_names(_load_tree(args.tree, g), inst))
    if args.td:
        td = _load_td(args.td, inst)

    info = []
    if algo in ("kernel-lfen", "lfen"):
        score, net = _solve_lfen(inst, mode, algo, forest, info)
    elif algo == "twdp":
        if td is None:
            td = graphs.tree_decomposition(g)
        info.append(f"width={td.width}")
        if mode == "polytree":
            score, net = tw_dp.solve_pl_additive_tw(inst, td)
        else:
            score, net = tw_dp.solve_bnsl_additive(inst, td)
    elif algo == "mst":
        score, net = polytree.solve_pl_additive_mst(inst)
    elif algo == "matroid":
        score, net = polytree.solve_pl_additive_bounded(inst)
    elif algo == "depset":
        score, net = depset.solve_bnsl_depset(inst, args.max_dependent)
    else:  # oracle
        if mode == "polytree":
            score, net = oracle.exact_pl(inst, inst_q(inst))
        else:
            score, net = oracle.exact_bnsl(inst)

    check = validate(net, "polytree" if mode == "polytree" else "dag", inst_q(inst))
    assert check.ok, f"solver returned an invalid network: {check}"
    assert score_of(inst, net) == score

    if info:
        print(" ".join(info), file=sys.stderr)
    if args.out:
        _write(args.out, write_solution(net, inst))
    if args.target is not None:
        answer = "YES" if score >= args.target else "NO"
        print(f"max_score={score} answer={answer}")
        return 0 if answer == "YES" else 1
    print(f"max_score={score}")
    return 0


def inst_q(inst):
    return inst.max_in_degree if isinstance(inst, AdditiveInstance) else None


def _solve_lfen(inst, mode, algo, forest, info):
    work = inst
    result = None
    if algo == "kernel-lfen":
        result = kernel.kernelize_pl(inst) if mode == "polytree" else kernel.kernelize_bnsl(inst)
        work = result.reduced
        info.append(f"kernel_n={work.n}")
        forest = None  # supplied trees refer to the unreduced instance
    g = superstructure(work)
    if forest is None:
        witness = graphs.lfen_search(g)
        forest = witness.forest
        info.append(
            f"fen={len(forest.feedback_edges)} "
            f"lfen<={witness.value}{' exact' if witness.exact else ''}"
        )
    else:
        w = graphs.lfen_of_tree(g, forest)
        info.append(f"fen={len(forest.feedback_edges)} lfen<={w.value}")
    if mode == "polytree":
        score, net = lfen_dp.solve_pl_lfen(work, forest)
    else:
        score, net = lfen_dp.solve_bnsl_lfen(work, forest)
    if result is not None:
        net = result.lift(net)
    return score, net


def cmd_kernelize(args) -> int:
    inst, rep = _load_instance(args.instance, args.rep)
    if rep != "nonzero":
        raise CliError("kernelization works on the explicit representation")
    result = (
        kernel.kernelize_pl(inst) if args.mode == "polytree"
        else kernel.kernelize_bnsl(inst)
    )
    _write(args.out, write_nonzero(result.reduced))
    if args.map:
        _write(args.map, result.to_json())
    print(
        f"n={inst.n} reduced_n={result.reduced.n} steps={len(result.steps)}",
        file=sys.stderr,
    )
    return 0


def cmd_params(args) -> int:
    inst, _ = _load_instance(args.instance, args.rep)
    g = superstructure(inst)
    sf = graphs.feedback_edge_set(g)
    witness = graphs.lfen_search(g, budget=args.budget)
    td = graphs.tree_decomposition(g)
    exact = " exact" if witness.exact else ""
    print(
        f"fen={len(sf.feedback_edges)} lfen<={witness.value}{exact} tw<={td.width}"
    )
    if args.witness:
        for a, b in sorted(witness.forest.tree_edges):
            print(f"{inst.names[a]} {inst.names[b]}")
    return 0


def cmd_verify(args) -> int:
    inst, rep = _load_instance(
        args.instance, args.rep, max_parents=args.max_parents
    )
    if args.lift:
        if not args.reduced_instance:
            raise CliError("--lift needs --reduced-instance")
        red, _ = _load_instance(args.reduced_instance, "nonzero")
        net = parse_solution(_read(args.solution), red)
        result = kernel.KernelResult.from_json(_read(args.lift), red)
        net = result.lift(net)
    else:
        net = parse_solution(_read(args.solution), inst)
    mode = "polytree" if args.mode == "polytree" else "dag"
    check = validate(net, mode, inst_q(inst))
    if not check.ok:
        detail = check.reason or "invalid"
        if check.cycle:
            detail += " [" + " ".join(inst.names[v] for v in check.cycle) + "]"
        if check.vertex is not None:
            detail += f" at {inst.names[check.vertex]}"
        print(f"invalid: {detail}")
        return 1
    print(f"valid score={score_of(inst, net)}")
    return 0


def cmd_gen(args) -> int:
    if args.rep == "additive":
        inst = generate.random_additive(
            args.seed, args.n, args.fen, args.max_score, args.max_parents
        )
        _write(args.out, write_additive(inst))
    else:
        inst = generate.random_nonzero(
            args.seed, args.n, args.fen, args.max_score,
            subdivisions=args.subdivide,
        )
        _write(args.out, write_nonzero(inst))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bnsl",
        description="Exact structure learning for score-based networks and polytrees",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="compute the optimal network")
    ps.add_argument("instance")
    ps.add_argument("--mode", choices=["bnsl", "polytree"], default="bnsl")
    ps.add_argument("--rep", choices=["nonzero", "additive"])
    ps.add_argument(
        "--algo",
        choices=["auto", "kernel-lfen", "lfen", "twdp", "mst", "matroid",
                 "depset", "oracle"],
        default="auto",
    )
    ps.add_argument("--max-parents", type=int, metavar="Q")
    ps.add_argument("--target", type=int, metavar="L")
    ps.add_argument("--out", metavar="FILE", help="write the witness network")
    ps.add_argument("--seed", type=int, default=0, help="reserved; solvers are deterministic")
    ps.add_argument("--tree", metavar="FILE", help="spanning tree edge list to use")
    ps.add_argument("--td", metavar="FILE", help="raw tree decomposition to use")
    ps.add_argument("--threads", type=int, default=1,
                    help="reserved; solvers currently run single-threaded")
    ps.add_argument("--max-dependent", type=int, default=5)
    ps.set_defaults(func=cmd_solve)

    pk = sub.add_parser("kernelize", help="apply the reduction rules")
    pk.add_argument("instance")
    pk.add_argument("--mode", choices=["bnsl", "polytree"], default="bnsl")
    pk.add_argument("--rep", choices=["nonzero", "additive"])
    pk.add_argument("--out", metavar="FILE", default="-")
    pk.add_argument("--map", metavar="FILE", help="write the lift tables")
    pk.set_defaults(func=cmd_kernelize)

    pp = sub.add_parser("params", help="superstructure parameters")
    pp.add_argument("instance")
    pp.add_argument("--rep", choices=["nonzero", "additive"])
    pp.add_argument("--witness", action="store_true", help="print the witness tree")
    pp.add_argument("--budget", type=int, default=graphs.DEFAULT_TREE_BUDGET)
    pp.set_defaults(func=cmd_params)

    pv = sub.add_parser("verify", help="check a solution file")
    pv.add_argument("instance")
    pv.add_argument("solution")
    pv.add_argument("--mode", choices=["dag", "polytree"], default="dag")
    pv.add_argument("--rep", choices=["nonzero", "additive"])
    pv.add_argument("--max-parents", type=int)
    pv.add_argument("--lift", metavar="MAPFILE", help="lift through kernel tables")
    pv.add_argument("--reduced-instance", metavar="FILE")
    pv.set_defaults(func=cmd_verify)

    pg = sub.add_parser("gen", help="generate a random instance")
    pg.add_argument("--rep", choices=["nonzero", "additive"], default="nonzero")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--fen", type=int, default=0)
    pg.add_argument("--seed", type=int, required=True)
    pg.add_argument("--max-score", type=int, default=8)
    pg.add_argument("--max-parents", type=int)
    pg.add_argument("--subdivide", type=int, default=0)
    pg.add_argument("--out", metavar="FILE", default="-")
    pg.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ParseError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
