"""Command-line entry point: ``workbench <group> <command> ...``.

Exit codes: 0 when the command completed (a timeout is a result), 2 for bad
input, 1 for internal errors.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from pathlib import Path

from . import __version__
from .config import ExperimentConfig, RunReport, coerce, env_overrides, load_config

# built-in defaults; flags default to SUPPRESS so explicit values can be told apart
DEFAULTS = {
    "format": "text", "out": None, "threads": 1, "config": None,
    "table": None, "free_var": "x",
    "steps": 64, "seed": "single", "width": 64, "rng_seed": 0, "space": "finite",
    "trials": 16, "ring_size": 401, "max_steps": 300,
    "bound": 1000, "history_budget": 100_000, "cell": 0, "temporal": None, "spatial": None,
    "engine": "quad", "diff": False,
    "input": "", "rename": True,
    "budget": "2,2", "size": 8, "inverter": None, "candidate": "timeout:10", "mode": "tm",
    "block": 2, "time": 2, "coarse": None, "projection": None, "identity": False,
    "unit": "2048,2048", "sentinel": None, "sampling": "population", "on_range": None, "off_range": None,
    "offset": "0,0", "tiles": None,
}


class InputError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser):
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="key = value file supplying defaults")
    p.add_argument("--format", choices=["json", "csv", "text", "grid"], default=S)
    p.add_argument("--out", default=S, help="directory for artifacts")
    p.add_argument("--threads", type=int, default=S)


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="workbench", description="Computability workbench.")
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name, help_text):
        p = group.add_parser(name, help=help_text)
        _add_common(p)
        p.set_defaults(_parser=p)
        return p

    g = groups.add_parser("goedel", help="Gödel numbering").add_subparsers(dest="cmd", required=True)
    for name, arg in (("encode", "formula"), ("decode", "number"), ("diag", "number")):
        p = command(g, name, f"{name} a {arg}")
        p.add_argument(arg)
        p.add_argument("--table", default=S, help="symbol table file (symbol<TAB>code)")
        if name == "diag":
            p.add_argument("--free-var", dest="free_var", default=S)

    g = groups.add_parser("eca", help="elementary cellular automata").add_subparsers(dest="cmd", required=True)
    p = command(g, "run", "spacetime diagram")
    p.add_argument("code", type=int)
    p.add_argument("--seed", default=S, help="single | random | a 0/1 string")
    p.add_argument("--steps", type=int, default=S)
    p.add_argument("--width", type=int, default=S, help="ring size for random seeds and periodic space")
    p.add_argument("--space", choices=["finite", "periodic"], default=S)
    p.add_argument("--rng-seed", dest="rng_seed", type=int, default=S)
    p = command(g, "classify", "heuristic class")
    p.add_argument("code", type=int)
    p.add_argument("--trials", type=int, default=S)
    p.add_argument("--ring-size", dest="ring_size", type=int, default=S)
    p.add_argument("--max-steps", dest="max_steps", type=int, default=S)
    p.add_argument("--rng-seed", dest="rng_seed", type=int, default=S)
    p = command(g, "detect", "run until a signature appears")
    p.add_argument("code", type=int)
    p.add_argument("--temporal", default=S, help="0/1 sequence produced over time by one cell")
    p.add_argument("--spatial", default=S, help="0/1 pattern appearing in one configuration")
    p.add_argument("--cell", type=int, default=S)
    p.add_argument("--bound", type=int, default=S)
    p.add_argument("--seed", default=S)
    p.add_argument("--width", type=int, default=S)
    p.add_argument("--space", choices=["finite", "periodic"], default=S)
    p.add_argument("--rng-seed", dest="rng_seed", type=int, default=S)
    p.add_argument("--history-budget", dest="history_budget", type=int, default=S)

    g = groups.add_parser("life", help="life-like automata").add_subparsers(dest="cmd", required=True)
    p = command(g, "run", "advance an RLE pattern")
    p.add_argument("pattern")
    p.add_argument("--steps", type=int, default=S)
    p.add_argument("--engine", default=S, help="naive, quad, or both as naive,quad")
    p.add_argument("--diff", action="store_true", default=S, help="compare engines")

    g = groups.add_parser("tm", help="Turing machines").add_subparsers(dest="cmd", required=True)
    p = command(g, "run", "run a machine")
    p.add_argument("machine")
    p.add_argument("--input", default=S)
    p.add_argument("--bound", type=int, default=S)
    p = command(g, "encode", "wire-encode a machine")
    p.add_argument("machine")
    p.add_argument("--input", default=S, help="also append ccc and the encoded input")
    p = command(g, "decode", "decode a wire encoding ('-' reads stdin)")
    p.add_argument("encoding")
    p = command(g, "compile-ca", "compile to a radius-2 CA and dump its rule table")
    p.add_argument("machine")
    p = command(g, "cosim", "co-simulate a machine and its compiled CA")
    p.add_argument("machine")
    p.add_argument("--input", default=S)
    p.add_argument("--steps", type=int, default=S)

    g = groups.add_parser("diag", help="diagonalization").add_subparsers(dest="cmd", required=True)
    p = command(g, "table", "decision table over enumerated machines")
    p.add_argument("--budget", default=S, help="states,symbols")
    p.add_argument("--bound", type=int, default=S)
    p.add_argument("--size", type=int, default=S)
    p.add_argument("--inverter", default=S, help="candidate whose inverter joins the table, e.g. timeout:10")
    p = command(g, "refute", "refutation witness for a candidate decider")
    p.add_argument("--candidate", default=S)
    p.add_argument("--mode", choices=["tm", "ca"], default=S)
    p.add_argument("--bound", type=int, default=S, help="observation bound")

    g = groups.add_parser("coarse", help="coarse-graining").add_subparsers(dest="cmd", required=True)
    p = command(g, "verify", "check one coarse-graining")
    p.add_argument("--fine", type=int, required=True)
    p.add_argument("--coarse", type=int, default=S)
    p.add_argument("--projection", default=S, help="images of 00,01,10,11, e.g. 0110")
    p.add_argument("--block", type=int, default=S)
    p.add_argument("--time", type=int, default=S)
    p.add_argument("--identity", action="store_true", default=S)
    p = command(g, "search", "all block-2, time-2 coarse-grainings of a rule")
    p.add_argument("--fine", required=True, help="a rule number or 'all'")
    p.add_argument("--block", type=int, default=S)
    p.add_argument("--time", type=int, default=S)
    p = command(g, "metaread", "read an RLE pattern as a grid of unit cells")
    p.add_argument("pattern")
    p.add_argument("--unit", default=S, help="width,height")
    p.add_argument("--sentinel", default=S, help="row,col,height,width inside the unit")
    p.add_argument("--on-range", dest="on_range", default=S, help="lo,hi sentinel population for ON")
    p.add_argument("--off-range", dest="off_range", default=S, help="lo,hi sentinel population for OFF")
    p.add_argument("--offset", default=S, help="row,col of the top-left tile")
    p.add_argument("--steps", type=int, default=S)
    return parser


def resolve(ns: argparse.Namespace, environ=None) -> dict:
    given = vars(ns)
    file_values = load_config(given.get("config"))
    env = env_overrides(environ)
    params = dict(DEFAULTS)
    explicit = set(given)
    for layer in (file_values, env):
        for k, v in layer.items():
            if k in DEFAULTS:
                params[k] = coerce(v, DEFAULTS[k])
                explicit.add(k)
    params.update(given)
    params["_explicit"] = explicit
    return params


def _ints(text: str, n: int, what: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in str(text).split(","))
    except ValueError:
        raise InputError(f"{what}: expected {n} comma-separated integers, got {text!r}") from None
    if len(vals) != n:
        raise InputError(f"{what}: expected {n} comma-separated integers, got {text!r}")
    return vals


# -- command implementations ---------------------------------------------------
# each returns (result, text, artifacts) where ``artifacts`` maps file names to contents

def _table(params):
    from .godel import SymbolTable, example_table
    return SymbolTable.load(params["table"]) if params["table"] else example_table()


def _render_formula(f) -> str:
    from .formal import EPSILON
    if not f:
        return EPSILON
    return "".join(f) if all(len(s) == 1 for s in f) else " ".join(f)


def cmd_goedel(params):
    from .godel import diag, goedel_decode, goedel_encode
    table = _table(params)
    cmd = params["cmd"]
    if cmd == "encode":
        n = int(goedel_encode(params["formula"], table))
        return {"formula": params["formula"], "number": str(n)}, str(n), {}
    n = int(params["number"])
    if cmd == "decode":
        f = _render_formula(goedel_decode(n, table))
        return {"number": str(n), "formula": f}, f, {}
    d = int(diag(n, table, params["free_var"]))
    return {"number": str(n), "diag": str(d)}, str(d), {}


def _seed_config(params, default_width):
    import numpy as np
    from .ca.core import FiniteSupport, Periodic
    seed, width = params["seed"], params["width"] or default_width
    if seed == "single":
        bits = "1"
        if params["space"] == "periodic":
            bits = "0" * (width // 2) + "1" + "0" * (width - width // 2 - 1)
    elif seed == "random":
        rng = np.random.default_rng(params["rng_seed"])
        bits = "".join(map(str, rng.integers(0, 2, width)))
    elif seed and set(seed) <= {"0", "1"}:
        bits = seed
    else:
        raise InputError(f"--seed must be single, random or a 0/1 string, got {seed!r}")
    return Periodic.from_bits(bits) if params["space"] == "periodic" else FiniteSupport.from_bits(bits)


def cmd_eca(params):
    from .ca.core import eca_from_wolfram_code, evolve, run_until
    from .ca.render import to_json_trace, to_pbm, to_text
    from .ca.termination import spatial, temporal
    code, cmd = params["code"], params["cmd"]
    if not 0 <= code <= 255:
        raise InputError("rule numbers run from 0 to 255")
    if cmd == "classify":
        from .ca.classify import ClassifierConfig, classify_heuristic
        res = classify_heuristic(code, params["trials"], params["ring_size"], params["max_steps"],
                                 ClassifierConfig(seed=params["rng_seed"]))
        d = res.to_dict()
        text = f"rule {code}: class {res.label} (heuristic)\n" + "\n".join(f"  {k}: {v}" for k, v in d.items())
        return d, text, {}
    require = params["space"] == "finite"
    ca = eca_from_wolfram_code(code, require_quiescent=require)
    c0 = _seed_config(params, 64)
    if cmd == "run":
        steps = params["steps"]
        hist = evolve(ca, c0, steps)
        text = to_text(hist)
        arts = {f"rule{code}.pbm": to_pbm(hist), f"rule{code}.json": to_json_trace(hist, rule=code)}
        return {"rule": code, "rows": len(hist), "diagram": f"rule{code}.pbm"}, text.rstrip("\n"), arts
    conds = []
    if params["temporal"]:
        conds.append(temporal(params["cell"], params["temporal"]))
    if params["spatial"]:
        conds.append(spatial(params["spatial"]))
    if not conds:
        raise InputError("detect needs --temporal and/or --spatial")
    out = run_until(ca, c0, params["bound"], params["history_budget"], conds)
    fired = out.verdict.value != "timeout"
    res = {"rule": code, "fired": fired, "verdict": out.verdict.value, "step": out.steps,
           "condition": None if out.fired is None else ("temporal" if params["temporal"] and out.fired == 0
                                                        else "spatial")}
    text = f"fired at step {out.steps}" if fired else f"timeout after {out.steps} steps"
    return res, text, {}


def cmd_life(params):
    from .ca.core import parse_rule_string
    from .ca.hashlife import quad_advance
    from .ca.life import naive_advance
    from .ca.rle import load_rle, write_rle
    pat = load_rle(params["pattern"])
    ca = parse_rule_string(pat.rule or "B3/S23")
    c = pat.configuration()
    engines = [e.strip() for e in params["engine"].split(",")]
    if params["diff"] and len(engines) < 2:
        engines = ["naive", "quad"]
    results = {}
    for e in engines:
        if e == "naive":
            results[e] = naive_advance(ca, c, params["steps"])
        elif e == "quad":
            results[e] = quad_advance(ca, c, params["steps"])
        else:
            raise InputError(f"unknown engine {e!r}")
    final = results[engines[0]]
    res = {"rule": ca.name, "steps": params["steps"], "population": len(final.cells), "engines": engines}
    text = f"population {len(final.cells)} after {params['steps']} generations"
    if len(results) > 1:
        same = all(r == final for r in results.values())
        res["identical"] = same
        text = ("identical" if same else "DIFFERENT") + f"; {text}"
    return res, text, {"final.rle": write_rle(final, ca.name)}


def _machine(path):
    from .turing import TuringMachine
    return TuringMachine.load(path)


def cmd_tm(params):
    from .turing import decode_tm, encode_pair, encode_tm, run
    cmd = params["cmd"]
    if cmd == "decode":
        enc = sys.stdin.read().strip() if params["encoding"] == "-" else params["encoding"]
        m = decode_tm(enc)
        return {"machine": m.dump()}, m.dump().rstrip("\n"), {}
    m = _machine(params["machine"])
    if cmd == "encode":
        enc = encode_pair(m, params["input"]) if params["input"] else encode_tm(m)
        return {"encoding": enc}, enc, {}
    if cmd == "run":
        out = run(m, params["input"], params["bound"])
        res = {"verdict": out.verdict.value, "steps": out.steps_used, "final": out.final.canonical(m.blank).render(),
               "output": None if out.output is None else "".join(out.output)}
        text = f"{out.verdict.value} after {out.steps_used} steps: {res['final']}"
        return res, text, {}
    from .tm2ca import compile_tm, cosimulate
    if cmd == "compile-ca":
        comp = compile_tm(m, params["rename"])
        table = comp.rule_table()
        return {"alphabet": list(comp.automaton.alphabet), "radius": 2}, table.rstrip("\n"), {"rules.txt": table}
    rep = cosimulate(m, params["input"], params["steps"])
    text = ("agree" if rep.agree else "DIVERGE") + f": tm {rep.tm_verdict}, ca {rep.ca_verdict} " \
           f"after {rep.steps_compared} steps"
    return json.loads(rep.to_json()), text, {"cosim.json": rep.to_json()}


def cmd_diag(params):
    from . import diagonal as dg
    if params["cmd"] == "refute":
        w = dg.refute(dg.parse_candidate(params["candidate"]), params["mode"],
                      params["bound"] if "bound" in params["_explicit"] else None)
        text = (f"{w.verdict}: candidate {w.candidate} answers {w.candidate_answer} on [V,[V]]; "
                f"V is built to {w.constructed_action}; observed {w.observed}")
        if w.counterexample:
            ce = w.counterexample
            text += (f"\ncounterexample: machine halting at step {ce['halt_step']} "
                     f"({ce['actual']}), candidate says {ce['candidate_answer']}")
        return json.loads(w.to_json()), text, {"witness.json": w.to_json()}
    s, g = _ints(params["budget"], 2, "--budget")
    picked = dg.sample_machines(s, g, params["size"])
    subjects = [dg.TmSubject(m, f"#{i}") for i, m in picked]
    inv = dg.construct_inverter(dg.parse_candidate(params["inverter"])) if params["inverter"] else None
    table = dg.build_table(subjects, params["bound"], params["threads"], inv)
    res = {"enumeration_size": dg.enumeration_size(s, g), "indices": [i for i, _ in picked],
           "labels": list(table.labels), "bound": table.bound,
           "entries": [[e.value for e in row] for row in table.entries]}
    fmt = params["format"]
    text = table.to_csv() if fmt == "csv" else table.render_grid()
    return res, text.rstrip("\n"), {"table.csv": table.to_csv(), "table.txt": table.render_grid()}


def cmd_coarse(params):
    from . import coarse as cg
    from .ca.core import eca_from_wolfram_code
    cmd = params["cmd"]
    if cmd == "search":
        if str(params["fine"]) == "all":
            results = cg.search_all(params["block"], params["time"], params["threads"])
        else:
            results = cg.search_coarse_grainings(int(params["fine"]), params["block"], params["time"],
                                                 params["threads"])
        csv_text = cg.to_csv(results)
        res = {"count": len(results), "nontrivial": sum(r.nontrivial for r in results),
               "results": [[r.fine, r.projection, r.coarse] for r in results]}
        return res, csv_text.rstrip("\n"), {"coarse.csv": csv_text}
    if cmd == "verify":
        fine = eca_from_wolfram_code(params["fine"])
        if params["identity"]:
            g = cg.identity(fine)
        else:
            if params["coarse"] is None or params["projection"] is None:
                raise InputError("verify needs --identity or both --coarse and --projection")
            b = params["block"]
            proj_bits = params["projection"]
            blocks = sorted(itertools.product((0, 1), repeat=b))
            if len(proj_bits) != len(blocks) or set(proj_bits) - {"0", "1"}:
                raise InputError(f"--projection needs {len(blocks)} bits")
            g = cg.CoarseGraining(fine, eca_from_wolfram_code(params["coarse"]), b, params["time"],
                                  dict(zip(blocks, map(int, proj_bits))))
        out = cg.verify_coarse_graining(g)
        if out:
            return {"valid": True, "contexts_checked": out.contexts_checked}, f"valid ({out.contexts_checked} contexts)", {}
        res = {"valid": False, "context": list(out.context), "fine_block": list(out.fine_block),
               "expected": out.expected, "coarse_says": out.coarse_says}
        return res, f"counterexample: context {''.join(map(str, out.context))}", {}
    from .ca.hashlife import quad_advance
    from .ca.core import parse_rule_string
    from .ca.rle import load_rle
    pat = load_rle(params["pattern"])
    c = pat.configuration()
    if "steps" in params["_explicit"]:
        c = quad_advance(parse_rule_string(pat.rule or "B3/S23"), c, params["steps"])
    if not (params["sentinel"] and params["on_range"] and params["off_range"]):
        raise InputError("metaread needs --sentinel, --on-range and --off-range")
    lens = cg.MetaLens(_ints(params["unit"], 2, "--unit"),
                       {1: _ints(params["on_range"], 2, "--on-range"), 0: _ints(params["off_range"], 2, "--off-range")},
                       _ints(params["sentinel"], 4, "--sentinel"), cg.Sampling.POPULATION,
                       _ints(params["offset"], 2, "--offset"))
    meta = cg.meta_read(lens, c)
    cells = {f"{r},{col}": v for (r, col), v in sorted(meta.cells.items())}
    text = "\n".join(f"tile {k}: {v}" for k, v in cells.items()) or "all tiles read as background"
    return {"background": meta.background, "tiles": cells}, text, {}


HANDLERS = {"goedel": cmd_goedel, "eca": cmd_eca, "life": cmd_life, "tm": cmd_tm, "diag": cmd_diag,
            "coarse": cmd_coarse}


def _input_errors():
    from .ca.core import CaError
    from .ca.rle import RleError
    from .coarse import CoarseError
    from .diagonal import DiagonalError
    from .formal import FormalSystemError
    from .godel import GoedelError
    from .turing import TuringError
    return (InputError, GoedelError, FormalSystemError, TuringError, CaError, RleError, CoarseError,
            DiagonalError, FileNotFoundError, ValueError)


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        params = resolve(ns, environ)
        started = time.perf_counter()
        result, text, artifacts = HANDLERS[params["group"]](params)
        elapsed = time.perf_counter() - started
    except _input_errors() as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    keys = {a.dest for a in params["_parser"]._actions} - {"help"}
    echo = {k: v for k, v in params.items() if k in keys}
    report = RunReport(ExperimentConfig(f"{params['group']} {params['cmd']}", echo), result,
                       version=__version__, timings={"seconds": round(elapsed, 6)})
    if params["out"]:
        out = Path(params["out"])
        out.mkdir(parents=True, exist_ok=True)
        for name, content in artifacts.items():
            (out / name).write_text(content, encoding="utf-8")
            report.artifacts.append(str(out / name))
        (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    print(report.to_json() if params["format"] == "json" else text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
