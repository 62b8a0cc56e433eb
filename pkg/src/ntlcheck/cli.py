"""Command-line front end.

Exit codes: 0 holds/sat/true/valid, 1 violated/unsat/false/invalid,
2 error or resource limit, 3 inconclusive, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from typing import Optional

from .automata import Alphabet, ResourceLimit, npta_membership_regular
from .checker import (DEFAULT_CAP, HOLDS, LIMIT, UNSAT, model_check, satisfiable,
                      universe)
from .constructions import (FormulaError, build_dpn_automaton, build_exec_tree_automaton,
                            build_formula_automaton, build_formula_npta)
from .dpn import INT, RET, SPAWN, Dpn, DpnError, config_steps, parse_dpn
from .execution import (TreeError, enumerate_execution_graphs, graph_from_tree, parse_graph,
                        parse_tree, validate_execution_graph, _finish)
from .formula import (FormulaSyntaxError, WellFormednessError, Formula, negate, parse_formula,
                      require_well_formed, to_pnf, to_text)
from .oracle import dpn_models_oracle

EXIT_OK, EXIT_NO, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Options:
    state_cap: int = DEFAULT_CAP
    props: tuple = ()
    seed: Optional[int] = None
    json: bool = False


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def load_formula(arg: str) -> Formula:
    """A file holding one formula, or the formula text itself."""
    text = _read(arg) if os.path.isfile(arg) else arg
    try:
        phi = parse_formula(text)
        require_well_formed(phi)
    except (FormulaSyntaxError, WellFormednessError) as e:
        raise InputError(f"formula: {e}") from e
    return phi


def load_dpn(path: str) -> Dpn:
    try:
        return parse_dpn(_read(path))
    except DpnError as e:
        raise InputError(f"{path}: {e}") from e


def _write(path: str, text: str) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit(opts: Options, payload: dict, text: str) -> None:
    if opts.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _stats(stats: dict) -> dict:
    return {k: v for k, v in stats.items() if k != "seconds"}


# ---------------------------------------------------------------- subcommands


def cmd_check(a, opts: Options) -> int:
    m, phi = load_dpn(a.dpn), load_formula(a.formula)
    res = model_check(m, phi, opts.state_cap, opts.props)
    payload = {"command": "check", "verdict": res.verdict, "stats": _stats(res.stats)}
    if res.verdict == LIMIT:
        payload["message"] = res.message
        _emit(opts, payload, f"{LIMIT}: {res.message}")
        return EXIT_ERROR
    if res.verdict == HOLDS:
        _emit(opts, payload, HOLDS)
        return EXIT_OK
    t = res.counterexample
    if a.cex:
        _write(a.cex, t.to_text())
    if a.dot:
        _write(a.dot, t.to_dot())
    payload["counterexample"] = t.to_text()
    _emit(opts, payload, f"violated\ncounterexample:\n{t.to_text()}".rstrip())
    return EXIT_NO


def cmd_sat(a, opts: Options) -> int:
    phi = load_formula(a.formula)
    res = satisfiable(phi, opts.state_cap, verify=not a.no_verify, extra_props=opts.props)
    payload = {"command": "sat", "verdict": res.verdict, "stats": _stats(res.stats)}
    if res.verdict == LIMIT:
        payload["message"] = res.message
        _emit(opts, payload, f"{LIMIT}: {res.message}")
        return EXIT_ERROR
    if res.verdict == UNSAT:
        _emit(opts, payload, UNSAT)
        return EXIT_NO
    if a.witness:
        _write(a.witness, res.witness.to_text())
    if a.dpn:
        _write(a.dpn, res.dpn.to_text())
    if a.dot:
        _write(a.dot, res.witness.to_dot())
    payload["witness"] = res.witness.to_text()
    if res.message:
        payload["message"] = res.message
    text = f"sat\nwitness:\n{res.witness.to_text()}".rstrip()
    if res.message:
        text += f"\nwarning: {res.message}"
    _emit(opts, payload, text)
    return EXIT_ERROR if res.message else EXIT_OK


def cmd_eval(a, opts: Options) -> int:
    m, phi = load_dpn(a.dpn), load_formula(a.formula)
    v = dpn_models_oracle(m, phi, a.max_nodes, a.max_graphs)
    payload = {"command": "eval", "verdict": v.verdict, "graphs_checked": v.graphs_checked}
    text = f"{v.verdict} ({v.graphs_checked} graphs checked)"
    if v.counterexample is not None:
        payload["counterexample"] = v.counterexample.to_text()
        text += "\ncounterexample:\n" + v.counterexample.to_text().rstrip()
        if a.dot:
            _write(a.dot, v.counterexample.to_dot())
    _emit(opts, payload, text)
    return {"true": EXIT_OK, "false": EXIT_NO}.get(v.verdict, EXIT_INCONCLUSIVE)


def random_graph(m: Dpn, rng: random.Random, max_nodes: int):
    """One execution graph built by picking a random applicable rule at every node."""
    configs, edges, k = [m.initial], [], 0
    truncated_at = None
    while k < len(configs):
        steps = [s for s in config_steps(m, configs[k])
                 if not (s.kind == RET and len(configs[k].stack) == 1)]
        if steps:
            s = rng.choice(steps)
            new = [s.target] + ([s.spawned] if s.spawned else [])
            if len(configs) + len(new) > max_nodes:
                truncated_at = k
                break
            edges.append((k, INT if s.kind == SPAWN else s.kind, len(configs)))
            if s.spawned:
                edges.append((k, SPAWN, len(configs) + 1))
            configs += new
        elif config_steps(m, configs[k]):
            return None  # only a return from the last frame is possible
        k += 1
    if truncated_at is None:
        return _finish(m, configs, edges, complete=True)
    return _finish(m, configs, edges, complete=False, frontier_from=truncated_at)


def cmd_simulate(a, opts: Options) -> int:
    m = load_dpn(a.dpn)
    if opts.seed is not None:
        rng = random.Random(opts.seed)
        graphs = []
        for _ in range(a.max_graphs):
            g = random_graph(m, rng, a.max_nodes)
            if g is not None:
                graphs.append(g)
        exhaustive = False
    else:
        en = enumerate_execution_graphs(m, a.max_nodes, a.max_graphs)
        graphs, exhaustive = en.graphs, en.exhaustive
    out = []
    for i, g in enumerate(graphs):
        if a.dot:
            _write(os.path.join(a.dot, f"graph{i}.dot"), g.to_dot())
        out.append({"complete": g.complete, "graph": g.to_text()})
    payload = {"command": "simulate", "graphs": out, "exhaustive": exhaustive}
    lines = []
    for i, item in enumerate(out):
        status = "complete" if item["complete"] else "truncated"
        lines.append(f"# graph {i} ({status})\n{item['graph'].rstrip()}")
    lines.append(f"# {len(out)} graphs, {'exhaustive' if exhaustive else 'not exhaustive'}")
    _emit(opts, payload, "\n".join(lines))
    return EXIT_OK


def cmd_validate(a, opts: Options) -> int:
    text = _read(a.file)
    first = next((ln.split("#")[0].strip() for ln in text.splitlines()
                  if ln.split("#")[0].strip()), "")
    problems = []
    if first == "graph":
        try:
            g = parse_graph(text)
        except ValueError as e:
            raise InputError(f"{a.file}: {e}") from e
        problems = [v.message for v in validate_execution_graph(g)]
        kind = "graph"
    else:
        try:
            t = parse_tree(text)
        except ValueError as e:
            raise InputError(f"{a.file}: {e}") from e
        kind = "tree"
        ps = set().union(*(lab.props for lab in t.labels))
        if not npta_membership_regular(build_exec_tree_automaton(Alphabet(ps)), t):
            problems.append("not accepted by the execution-tree automaton")
        elif t.is_finite():
            try:
                graph_from_tree(t.unfold())
            except (TreeError, ValueError) as e:
                problems.append(str(e))
    payload = {"command": "validate", "kind": kind, "valid": not problems, "problems": problems}
    text_out = "valid" if not problems else "invalid\n" + "\n".join(problems)
    _emit(opts, payload, text_out)
    return EXIT_OK if not problems else EXIT_NO


def cmd_automata(a, opts: Options) -> int:
    arg = a.input
    m = None
    if os.path.isfile(arg):
        text = _read(arg)
        if text.lstrip().startswith("dpn"):
            m = load_dpn(arg)
    if m is not None:
        aut = build_dpn_automaton(m, Alphabet(set(m.props) | set(opts.props)))
        states = aut.reachable_states(opts.state_cap)
        info = {"automaton": aut.name, "states": len(states), "max_priority": aut.max_priority}
        dump = aut.dump(opts.state_cap) if a.dump else ""
    else:
        phi = to_pnf(load_formula(arg))
        if a.negate:
            phi = negate(phi)
        alpha = universe(phi, None, opts.props)
        try:
            ata = build_formula_automaton(phi, alpha)
        except FormulaError as e:
            raise InputError(str(e)) from e
        info = {"automaton": ata.name, "formula": to_text(phi),
                "states": len(ata.reachable_states()), "max_priority": ata.max_priority}
        dump = ata.dump() if a.dump else ""
        if a.npta:
            npta = build_formula_npta(phi, alpha, opts.state_cap)
            info["npta_states"] = len(npta.reachable_states(opts.state_cap))
            if a.dump:
                dump += npta.dump(opts.state_cap)
    payload = dict(info, command="automata")
    if a.dump:
        payload["dump"] = dump
    text = " ".join(f"{k}={v}" for k, v in info.items())
    if a.dump:
        text += "\n" + dump.rstrip()
    _emit(opts, payload, text)
    return EXIT_OK


# ---------------------------------------------------------------- entry


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--state-cap", type=int, default=argparse.SUPPRESS,
                        help=f"state budget for automaton constructions (default {DEFAULT_CAP})")
    common.add_argument("--props", default=argparse.SUPPRESS,
                        help="comma-separated propositions added to the label universe")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for random sampling")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print a machine-readable verdict")

    p = _Parser(prog="ntlcheck", parents=[common],
                description="Model checking and satisfiability for nested-trace fixpoint formulas over dynamic pushdown networks.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="model check a DPN against a formula")
    c.add_argument("dpn")
    c.add_argument("formula", help="formula file or formula text")
    c.add_argument("--cex", help="write the counterexample tree here")
    c.add_argument("--dot", help="write the counterexample class graph as DOT here")

    s = sub.add_parser("sat", parents=[common], help="decide satisfiability of a formula")
    s.add_argument("formula")
    s.add_argument("--witness", help="write the witness tree here")
    s.add_argument("--dpn", help="write the synthesized DPN here")
    s.add_argument("--dot", help="write the witness class graph as DOT here")
    s.add_argument("--no-verify", action="store_true", help="skip the round-trip model check")

    e = sub.add_parser("eval", parents=[common], help="evaluate by enumerating execution graphs")
    e.add_argument("dpn")
    e.add_argument("formula")
    e.add_argument("--max-nodes", type=int, default=40)
    e.add_argument("--max-graphs", type=int, default=2000)
    e.add_argument("--dot", help="write a violating graph as DOT here")

    m = sub.add_parser("simulate", parents=[common],
                       help="list execution graphs (random runs with --seed)")
    m.add_argument("dpn")
    m.add_argument("--max-nodes", type=int, default=40)
    m.add_argument("--max-graphs", type=int, default=20)
    m.add_argument("--dot", help="directory for one DOT file per graph")

    v = sub.add_parser("validate", parents=[common], help="validate a graph or tree file")
    v.add_argument("file")

    a = sub.add_parser("automata", parents=[common], help="build and describe the automata")
    a.add_argument("input", help="DPN file, formula file or formula text")
    a.add_argument("--dump", action="store_true", help="print every state and transition")
    a.add_argument("--npta", action="store_true", help="also build the nondeterministic automaton")
    a.add_argument("--negate", action="store_true", help="use the negated formula")
    return p


COMMANDS = {"check": cmd_check, "sat": cmd_sat, "eval": cmd_eval, "simulate": cmd_simulate,
            "validate": cmd_validate, "automata": cmd_automata}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    opts = Options()
    opts.state_cap = getattr(args, "state_cap", DEFAULT_CAP)
    opts.props = tuple(sorted(p for p in getattr(args, "props", "").split(",") if p))
    opts.seed = getattr(args, "seed", None)
    opts.json = getattr(args, "json", False)
    try:
        return COMMANDS[args.command](args, opts)
    except (InputError, FormulaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except ResourceLimit as e:
        print(f"{LIMIT}: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
