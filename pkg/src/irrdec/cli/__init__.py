"""Command line entry point.

Every command produces one JSON record {"manifest": ..., "result": ...};
the human-readable output is a rendering of the same record.  The manifest
carries a sha256 digest of the canonically serialized result (sorted keys,
no whitespace), so identical inputs are byte-checkable; timings live in the
manifest, outside the digest.

Exit codes: 0 success, 2 diagnostic or infeasible, 64 usage, 65 bad data.
"""

from __future__ import annotations

import argparse
import hashlib
import inspect
import json
import platform
import sys
import time

from .. import __version__
from ..decomposer import Diagnostic, PipelineConfig, decompose3
from ..graph_core import (
    GENERATORS,
    Graph,
    generate,
    parse_edge_list,
    recognize_exception,
    serialize_edge_list,
)
from ..labeling import ratio_gate
from ..lll_engine import (
    audit_constants,
    exact_edge_risk_probability,
    risk_bound_holds,
    worst_conditional_risk,
)
from ..oracle import min_parts

EXIT_OK = 0
EXIT_DIAGNOSTIC = 2
EXIT_USAGE = 64
EXIT_DATA = 65

RANDOMIZED_FAMILIES = ("gnp", "random_regular")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract reserves 2 for diagnostics
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def make_record(command: str, parameters: dict, seed, result: dict, seconds: float) -> dict:
    digest = hashlib.sha256(canonical_json(result).encode()).hexdigest()
    return {
        "manifest": {
            "command": command,
            "parameters": parameters,
            "seed": seed,
            "versions": {"irrdec": __version__, "python": platform.python_version()},
            "timing": {"seconds": round(seconds, 6)},
            "result_digest": f"sha256:{digest}",
        },
        "result": result,
    }


def _emit(record: dict, args, human_lines: list) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            json.dump(record, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.json:
        print(json.dumps(record, indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)
        print(f"digest: {record['manifest']['result_digest']}")


def _load_graph(in_path: str) -> Graph:
    with open(in_path) as fh:
        return parse_edge_list(fh.read())


def _number(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def cmd_gen(args) -> int:
    family = args.family
    fn = GENERATORS[family]
    names = [p for p in inspect.signature(fn).parameters if p != "seed"]
    try:
        values = [_number(t) for t in args.params]
    except ValueError:
        raise CommandError(EXIT_USAGE, f"non-numeric parameter in {args.params}")
    if len(values) != len(names):
        raise CommandError(EXIT_USAGE,
                          f"{family} takes {len(names)} parameter(s) {names}, got {len(values)}")
    if family in RANDOMIZED_FAMILIES and args.seed is None:
        raise CommandError(EXIT_USAGE, f"{family} requires --seed")
    t0 = time.perf_counter()
    try:
        g = generate(family, dict(zip(names, values)), seed=args.seed)
    except (ValueError, TypeError) as exc:
        raise CommandError(EXIT_USAGE, str(exc))
    text = serialize_edge_list(g)
    result = {"family": family, "params": values, "n": g.n, "m": g.m, "edge_list": text}
    record = make_record("gen", {"family": family, "params": values}, args.seed,
                         result, time.perf_counter() - t0)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.json:
        print(json.dumps(record, indent=2, sort_keys=True))
    elif not args.out:
        sys.stdout.write(text)
    else:
        print(f"wrote {g.n} vertices / {g.m} edges to {args.out}")
        print(f"digest: {record['manifest']['result_digest']}")
    return EXIT_OK


def _edge_counts(trace) -> dict:
    fields = ("g_prime", "h1", "g1", "overlap_c", "overlap_f", "g_dprime",
              "h2", "h2_prime", "h3_prime")
    return {f: getattr(trace, f).m for f in fields if getattr(trace, f) is not None}


def _exception_components(g: Graph):
    found = []
    for comp in g.components():
        vs = sorted(comp)
        relabel = {v: i for i, v in enumerate(vs)}
        sub = Graph(len(vs), [(relabel[u], relabel[v])
                              for u, v in g.edges if u in comp and v in comp])
        family = recognize_exception(sub)
        if family is not None:
            found.append({"vertices": vs, "family": family.value})
    return found


def cmd_decompose(args) -> int:
    if not args.slack > 0:
        raise CommandError(EXIT_USAGE, "--slack must be positive")
    if args.budget < 0:
        raise CommandError(EXIT_USAGE, "--budget must be >= 0")
    g = _load_graph(args.in_path)
    t0 = time.perf_counter()
    params = {"in_path": args.in_path, "slack": args.slack, "mode": args.mode,
              "budget": args.budget, "strict": args.strict}

    exceptional = _exception_components(g)
    if exceptional:
        diag = Diagnostic("preflight", "ExceptionComponent", {"components": exceptional})
        result = {"valid": False, "diagnostic": diag.to_json(), "stages": []}
        record = make_record("decompose", params, args.seed, result, time.perf_counter() - t0)
        _emit(record, args, [
            "diagnostic: ExceptionComponent at stage preflight",
            f"  components beyond decomposition: {len(exceptional)}",
        ])
        return EXIT_DIAGNOSTIC

    cfg = PipelineConfig(seed=args.seed, slack=args.slack, solver_mode=args.mode,
                         solver_budget=args.budget, strict=args.strict)
    outcome, trace = decompose3(g, cfg)
    seconds = time.perf_counter() - t0
    if isinstance(outcome, Diagnostic):
        result = {"valid": False, "diagnostic": outcome.to_json(),
                  "stages": trace.stage_reports, "edge_counts": _edge_counts(trace)}
        record = make_record("decompose", params, args.seed, result, seconds)
        _emit(record, args, [
            f"diagnostic: {outcome.code} at stage {outcome.stage}",
        ])
        return EXIT_DIAGNOSTIC
    colour = {f"{u}-{v}": c for (u, v), c in sorted(outcome.colour.items())}
    result = {"valid": True, "k": outcome.k, "colour": colour,
              "stages": trace.stage_reports, "edge_counts": _edge_counts(trace)}
    record = make_record("decompose", params, args.seed, result, seconds)
    sizes = [sum(1 for c in outcome.colour.values() if c == i) for i in (1, 2, 3)]
    _emit(record, args, [
        "decomposition: valid, 3 locally irregular parts",
        f"  part sizes: {sizes[0]} / {sizes[1]} / {sizes[2]} edges",
    ])
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _load_graph(args.in_path)
    t0 = time.perf_counter()
    try:
        res = min_parts(g, args.kmax)
    except ValueError as exc:
        raise CommandError(EXIT_USAGE, str(exc))
    result = res.to_json()
    record = make_record("oracle", {"in_path": args.in_path, "kmax": args.kmax},
                         None, result, time.perf_counter() - t0)
    if res.feasible_k is None:
        scope = "any k" if res.exhausted else f"k <= {args.kmax}"
        _emit(record, args, [f"infeasible: no decomposition for {scope}",
                             f"  nodes explored: {res.nodes_explored}"])
        return EXIT_DIAGNOSTIC
    _emit(record, args, [f"least parts: {res.feasible_k}",
                         f"  nodes explored: {res.nodes_explored}"])
    return EXIT_OK


def cmd_audit(args) -> int:
    t0 = time.perf_counter()
    claims = audit_constants()
    if args.claim:
        needle = args.claim.lower()
        claims = [c for c in claims if needle in c["claim_id"].lower()]
        if not claims:
            raise CommandError(EXIT_USAGE, f"no audit claim matches {args.claim!r}")
    all_pass = all(c["pass"] for c in claims)
    result = {"claims": claims, "all_pass": all_pass}
    record = make_record("audit", {"claim": args.claim}, None, result,
                         time.perf_counter() - t0)
    lines = [f"{'PASS' if c['pass'] else 'FAIL'} {c['claim_id']}: "
             f"{c['computed']} (printed {c['printed']})" for c in claims]
    lines.append(f"{sum(c['pass'] for c in claims)}/{len(claims)} claims pass")
    _emit(record, args, lines)
    return EXIT_OK if all_pass else EXIT_DIAGNOSTIC


_RISK_KIND = {
    "1": ("type1_given_c1v", 1, "2 / dv^0.38"),
    "2": ("type2_given_c2v", 2, "2 / dv^0.38"),
    "3": ("type3_given_rest", 3, "4 / dv^0.38"),
    "23": ("both23_given_c1v_c2v", "23", "8 / dv^0.76"),
}


def cmd_riskprob(args) -> int:
    du, dv = args.du, args.dv
    t0 = time.perf_counter()
    params = {"du": du, "dv": dv, "type": args.type}
    if du < 1 or dv < 1 or not ratio_gate(du, dv):
        result = {"gated": False, "du": du, "dv": dv,
                  "note": "degree ratio gate fails; the edge cannot be risky"}
        record = make_record("riskprob", params, None, result, time.perf_counter() - t0)
        _emit(record, args, [f"degrees {du}, {dv} are not within the ratio gate"])
        return EXIT_DIAGNOSTIC
    which, rtype, bound_desc = _RISK_KIND[args.type]
    unconditional = exact_edge_risk_probability(du, dv, rtype)
    worst = worst_conditional_risk(du, dv, which)
    holds = risk_bound_holds(du, dv, which)
    result = {
        "gated": True, "du": du, "dv": dv, "type": args.type,
        "unconditional": str(unconditional),
        "worst_conditional": str(worst),
        "bound": bound_desc, "bound_holds": holds,
    }
    record = make_record("riskprob", params, None, result, time.perf_counter() - t0)
    _emit(record, args, [
        f"type {args.type} risk for degrees ({du}, {dv})",
        f"  unconditional: {unconditional} = {float(unconditional):.6g}",
        f"  worst conditional: {worst} = {float(worst):.6g}",
        f"  bound {bound_desc}: {'holds' if holds else 'VIOLATED'}",
    ])
    return EXIT_OK


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def build_parser() -> _Parser:
    top = _Parser(prog="irrdec", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph and print/write its edge list")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("params", nargs="*", help="positional generator parameters")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None, help="edge-list destination")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("decompose", help="run the three-part pipeline on an edge list")
    p.add_argument("in_path")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--slack", type=float, default=float("inf"))
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    p.add_argument("--budget", type=int, default=10000)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("oracle", help="exact least number of locally irregular parts")
    p.add_argument("in_path")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("audit", help="recompute every printed numeric claim")
    p.add_argument("--claim", default=None, help="substring filter on claim ids")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_audit)

    p = sub.add_parser("riskprob", help="exact risky-edge probability for a degree pair")
    p.add_argument("du", type=int)
    p.add_argument("dv", type=int)
    p.add_argument("--type", choices=tuple(_RISK_KIND), default="1")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_riskprob)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CommandError as exc:
        print(f"irrdec: error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"irrdec: cannot read input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"irrdec: bad data: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
