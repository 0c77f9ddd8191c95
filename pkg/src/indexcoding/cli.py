"""Command-line front end: one subcommand per pipeline stage, JSON report on stdout."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import __version__
from .coloring import PreconditionViolation, color_graph, g_exponent, greedy_coloring
from .gf2 import GF2Error, minrank_oracle, vec_to_str
from .gk import build_gk, class_sizes, degree, kappa, quotient_matrix_closed_form, quotient_spectrum, sigma, theta_gk_complement
from .graph import GraphError, complement, gen_bounded_minrank_instance, load_edge_list, save_edge_list
from .index_code import CodeFormatError, LinearIndexCode, code_from_bi_representation, code_from_coloring, verify_code
from .rounding import find_best_c
from .spectral import spectrum
from .vector_coloring import VectorColoringError, solve_vector_coloring

EXIT_OK, EXIT_CONTRACT, EXIT_PARSE = 0, 1, 2
DEFAULT_DELTA = 0.7426


class ContractError(Exception):
    pass


def _read_graph(path: str):
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh.read())


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_gen_gk(args) -> dict:
    gk = build_gk(args.k)
    out = {"k": args.k, "n": gk.graph.n, "m": gk.graph.num_edges, "degree": degree(args.k)}
    if args.k >= 3:
        out["class_sizes"] = [len(c) for c in gk.classes()]
    if args.edges:
        _write(args.edges, save_edge_list(gk.graph))
        out["edges_file"] = args.edges
    if args.labels:
        lines = [f"{i} {vec_to_str(a, args.k)} {vec_to_str(b, args.k)}" for i, (a, b) in enumerate(gk.labels)]
        _write(args.labels, "\n".join(lines) + "\n")
        out["labels_file"] = args.labels
    return out


def cmd_spectrum(args) -> dict:
    if (args.graph is None) == (args.gk is None):
        raise ContractError("give exactly one of --graph or --gk")
    g = _read_graph(args.graph) if args.graph else build_gk(args.gk).graph
    tol = min(args.tol, 1e-9)
    return {"n": g.n, "spectrum": [{"value": v, "multiplicity": m} for v, m in spectrum(g, tol)]}


def cmd_theta(args) -> dict:
    if args.k < 3:
        raise ContractError("the quotient route needs k >= 3")
    return {"k": args.k, "theta": theta_gk_complement(args.k), "kappa_closed_form": kappa(args.k),
            "quotient": quotient_matrix_closed_form(args.k).tolist(),
            "quotient_eigenvalues": quotient_spectrum(args.k).tolist(), "class_sizes": class_sizes(args.k)}


def cmd_minrank(args) -> dict:
    g = _read_graph(args.graph)
    res = minrank_oracle(g, k_max=args.k_max, budget=args.budget)
    out = {"status": res.status, "value": res.value, "lower": res.lower, "nodes": res.nodes}
    if res.witness is not None:
        k = res.witness.k
        out["witness"] = [[vec_to_str(a, k), vec_to_str(b, k)] for a, b in res.witness.pairs]
    return out


def cmd_vector_color(args) -> dict:
    g = _read_graph(args.graph)
    vc = solve_vector_coloring(g, strict=args.strict, tol=args.tol, seed=args.seed,
                               rank=args.rank, restarts=args.restarts)
    return json.loads(vc.to_json(include_vectors=args.vectors))


def cmd_color(args) -> dict:
    g = _read_graph(args.graph)
    col = color_graph(g, args.k, seed=args.seed, mode=args.mode, tol=max(args.tol, 1e-4),
                      restarts=args.restarts, trials=args.trials, t_grid_size=args.t_grid_size)
    return {"colors": list(col.colors), "count": col.count, "class_sizes": [len(c) for c in col.classes()],
            "greedy_count": greedy_coloring(g).count}


def cmd_index_code(args) -> dict:
    g = _read_graph(args.graph)
    if args.method == "matrix":
        res = minrank_oracle(g, k_max=args.k_max, budget=args.budget)
        if res.status != "exact":
            raise ContractError(f"minrank oracle returned {res.status} (lower bound {res.lower})")
        code = code_from_bi_representation(res.witness, g)
    elif args.method == "greedy":
        code = code_from_coloring(g, greedy_coloring(complement(g)))
    else:
        if args.k is None:
            raise ContractError("--method coloring needs --k (minrank bound of the graph)")
        col = color_graph(complement(g), args.k, seed=args.seed, tol=max(args.tol, 1e-4),
                          restarts=args.restarts)
        code = code_from_coloring(g, col)
    text = code.to_text()
    out = {"method": args.method, "n": code.n, "length": code.length}
    if args.out:
        _write(args.out, text)
        out["code_file"] = args.out
    else:
        out["code"] = text
    return out


def cmd_verify(args) -> dict:
    g = _read_graph(args.graph)
    with open(args.code, encoding="utf-8") as fh:
        code = LinearIndexCode.from_text(fh.read())
    mode = "sampled" if args.sampled else "exhaustive"
    v = verify_code(g, code, mode=mode, trials=args.sampled or 0, seed=args.seed)
    out = {"mode": mode, "ok": v.ok, "words_checked": v.words_checked, "length": code.length}
    if not v.ok:
        out["reason"] = v.reason
        out["counterexample"] = None if v.counterexample is None else {
            "word": vec_to_str(v.counterexample[0], g.n), "receiver": v.counterexample[1]}
    return out


def cmd_constants(args) -> dict:
    k = args.k
    out = {"k": k, "kappa": kappa(k), "g": g_exponent(k)}
    if k >= 2:
        s = sigma(k)
        out["sigma"] = s
        c = find_best_c(s, args.delta) if 0 < s < 1 else None
        out.update(delta=args.delta, c=c, coloring_exponent=1 - args.delta)
        if c is not None:
            shrink = 1 / (1 + c)
            out["one_over_one_plus_c"] = shrink
            out["balanced_exponent"] = 1 - args.delta * shrink * (1 - 2 / kappa(k))
    return out


def cmd_gen_instance(args) -> dict:
    g = gen_bounded_minrank_instance(args.n, args.k, args.p, seed=args.seed)
    if args.side_info:
        g = complement(g)  # minrank of this graph itself is <= k
    text = save_edge_list(g)
    out = {"n": g.n, "m": g.num_edges, "k": args.k, "p": args.p, "side_info": args.side_info,
           "max_degree": g.max_degree()}
    if args.out:
        _write(args.out, text)
        out["edges_file"] = args.out
    else:
        out["edges"] = text
    return out


def build_parser() -> argparse.ArgumentParser:
    def globals_parser(defaults: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global flags without defaults, so values given
        # before the subcommand are not overwritten
        gp = argparse.ArgumentParser(add_help=False)
        keep = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        gp.add_argument("--seed", type=int, default=keep(0))
        gp.add_argument("--tol", type=float, default=keep(1e-6))
        gp.add_argument("--format", choices=("json", "text"), default=keep("json"))
        return gp

    common = globals_parser(False)
    p = argparse.ArgumentParser(prog="indexcoding", parents=[globals_parser(True)],
                                description="Minrank, G_k spectra, vector coloring and linear index codes.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("gen-gk", cmd_gen_gk, "build G_k, optionally dump edges and labels")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--edges")
    sp.add_argument("--labels")

    sp = add("spectrum", cmd_spectrum, "adjacency spectrum with multiplicities")
    sp.add_argument("--graph")
    sp.add_argument("--gk", type=int)

    sp = add("theta", cmd_theta, "theta of complement(G_k) from the quotient spectrum")
    sp.add_argument("--k", type=int, required=True)

    sp = add("minrank", cmd_minrank, "exact minrank over GF(2) by homomorphism search")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--k-max", type=int, default=5)
    sp.add_argument("--budget", type=int, default=10**8)

    sp = add("vector-color", cmd_vector_color, "solve the (strict) vector coloring SDP")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--rank", type=int)
    sp.add_argument("--restarts", type=int, default=5)
    sp.add_argument("--vectors", action="store_true", help="include the vectors in the report")

    sp = add("color", cmd_color, "color a graph whose complement has minrank <= k")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mode", choices=("basic", "minrank3"), default="basic")
    sp.add_argument("--restarts", type=int, default=1)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--t-grid-size", type=int, default=20)

    sp = add("index-code", cmd_index_code, "build a linear index code for a side-information graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--method", choices=("matrix", "coloring", "greedy"), default="matrix")
    sp.add_argument("--k", type=int)
    sp.add_argument("--k-max", type=int, default=5)
    sp.add_argument("--budget", type=int, default=10**8)
    sp.add_argument("--restarts", type=int, default=1)
    sp.add_argument("--out")

    sp = add("verify", cmd_verify, "check that every receiver decodes its bit")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--code", required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--sampled", type=int, metavar="TRIALS")

    sp = add("constants", cmd_constants, "kappa, g(k), sigma and the threshold constants")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--delta", type=float, default=DEFAULT_DELTA)

    sp = add("gen-instance", cmd_gen_instance, "random graph whose complement has minrank <= k")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--side-info", action="store_true",
                    help="write the complement, a side-information graph of minrank <= k")
    sp.add_argument("--out")
    return p


def _json_default(o):
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    return float(o)


def _text(outputs: dict) -> str:
    return "\n".join(f"{k}: {v}" for k, v in outputs.items()) + "\n"


def run(argv=None) -> tuple[int, dict | None]:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad usage
    params = {k: v for k, v in vars(args).items() if k != "func"}
    start = time.perf_counter()
    try:
        outputs = args.func(args)
    except (GraphError, CodeFormatError, json.JSONDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE, None
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE, None
    except (ContractError, PreconditionViolation, VectorColoringError, GF2Error, ValueError) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT, None
    report = {"command": args.command, "parameters": params, "outputs": outputs,
              "wall_clock": round(time.perf_counter() - start, 6)}
    status = EXIT_OK
    if args.command == "verify" and not outputs["ok"]:
        status = EXIT_CONTRACT
    return status, report


def main(argv=None) -> int:
    status, report = run(argv)
    if report is not None:
        if report["parameters"]["format"] == "json":
            sys.stdout.write(json.dumps(report, default=_json_default) + "\n")
        else:
            sys.stdout.write(_text(report["outputs"]))
        summary = {k: v for k, v in report["outputs"].items() if not isinstance(v, (list, dict, str)) or k == "status"}
        print(f"{report['command']}: {summary} ({report['wall_clock']:.2f} s)", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
