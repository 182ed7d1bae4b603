"""Command-line entry point: ``wsatlab <command> [options]``.

Exit codes: 0 success, 2 domain error or malformed input, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

from . import analytics, kernels
from .bootstrap import ks_closure
from .config import Budget, ExperimentConfig, default_budget
from .constructions import build_lemma1, build_theorem4
from .errors import BudgetExhausted, ConstructionInfeasible, DomainError, WsatlabError
from .graph import Graph, complete_graph, format_edge_list, generate_gnp, read_edge_list
from .properties import check_Bs, check_Bstar, check_EXT, check_HAM
from .wsat import decide_As, wsat_exact

EXIT_OK, EXIT_DOMAIN, EXIT_BUDGET = 0, 2, 3
RANDOMIZED = {"gen", "sweep", "threshold"}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_DOMAIN):
        super().__init__(message)
        self.code = code


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _common(p: argparse.ArgumentParser, *, seed: bool = True) -> None:
    if seed:
        p.add_argument("--seed", type=int, default=None, help="master seed (64-bit unsigned)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--config", default=None, help="key=value config file; flags override it")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings in output")


def _graph_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph", help="edge-list file")
    src.add_argument("--complete", type=int, help="use K_N")
    src.add_argument("--gnp", type=int, metavar="N", help="sample G(N, p) with --p and --seed")
    p.add_argument("--p", type=float, default=None)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="wsatlab", description=__doc__.splitlines()[0])
    parser.add_argument("--strict", action="store_true", help="refuse randomized runs without --seed")
    parser.add_argument("--backend", choices=kernels.available(), default=None)
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("gen", help="emit a G(n, p) edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    _common(p)
    subs["gen"] = p

    p = sub.add_parser("closure", help="K_s-bootstrap closure of a subgraph in a host")
    p.add_argument("--host", help="host edge-list file")
    p.add_argument("--host-complete", type=int, default=None, help="use K_N as host")
    p.add_argument("--sub", required=True, help="subgraph edge-list file")
    p.add_argument("--s", type=int, required=True)
    _common(p, seed=False)
    subs["closure"] = p

    p = sub.add_parser("wsat", help="exact weak saturation number")
    _graph_source(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true", help="do not prune with the Lovász bound")
    p.add_argument("--allow-ks", action="store_true", help="drop the K_s-freeness requirement")
    _common(p)
    subs["wsat"] = p

    p = sub.add_parser("construct", help="explicit weakly saturated constructions")
    p.add_argument("kind", choices=["lemma1", "theorem4"])
    _graph_source(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--w", type=float, default=4.0)
    p.add_argument("--verify", action="store_true", help="also run the closure engine on the result")
    _common(p)
    subs["construct"] = p

    p = sub.add_parser("check", help="decide a named graph property")
    p.add_argument("kind", choices=["ext", "ham", "bs", "bstar", "as"])
    _graph_source(p)
    p.add_argument("--s", type=int, required=True)
    _common(p)
    subs["check"] = p

    p = sub.add_parser("formula", help="evaluate a closed-form quantity")
    p.add_argument("kind", choices=["q", "c", "qstar", "lambda", "delta", "en", "lemma2p", "t4bound"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--w", type=float, default=0.0)
    _common(p, seed=False)
    subs["formula"] = p

    p = sub.add_parser("sweep", help="Monte Carlo success rates over an (n, p) grid")
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated vertex counts")
    p.add_argument("--p", type=_float_list, required=True, help="comma-separated probabilities")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--property", choices=sorted(analytics.PROPERTIES), required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--confidence", type=float, default=0.95)
    _common(p)
    subs["sweep"] = p

    p = sub.add_parser("threshold", help="bisect for the p where success crosses 1/2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--property", choices=sorted(analytics.MONOTONE), required=True)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)
    _common(p)
    subs["threshold"] = p
    return parser, subs


def _seed(args) -> int:
    if args.seed is None:
        if args.strict:
            raise CliError(f"--strict: '{args.command}' needs an explicit --seed")
        return 0
    return args.seed


def _load_graph(args) -> Graph:
    if args.graph:
        return read_edge_list(args.graph)
    if args.complete is not None:
        return complete_graph(args.complete)
    if args.gnp is not None:
        if args.p is None:
            raise CliError("--gnp needs --p")
        return generate_gnp(args.gnp, args.p, _seed(args))
    raise CliError("give one of --graph, --complete or --gnp")


def _flatten(obj) -> list[tuple[str, str]]:
    rows = []
    for key, value in obj.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, separators=(",", ":"))
        rows.append((key, value))
    return rows


def _render(payload, fmt: str, csv_text: Optional[str] = None) -> str:
    if fmt == "json":
        if isinstance(payload, str):
            return payload
        return json.dumps(payload) + "\n"
    if csv_text is not None:
        return csv_text
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    writer.writerows(_flatten(payload))
    return buf.getvalue()


def _formula(args) -> dict:
    n, p, s, w = args.n, args.p, args.s, args.w

    def need(*names):
        missing = [x for x in names if getattr(args, x) is None]
        if missing:
            raise CliError(f"formula {args.kind} needs --{' --'.join(missing)}")

    if args.kind == "c":
        value = analytics.c_s(s)
    elif args.kind in ("q", "qstar"):
        need("n")
        value = analytics.q_s(n, s) if args.kind == "q" else analytics.q_star(n, s)
    elif args.kind == "lambda":
        need("n", "p")
        value = analytics.lambda_janson(n, p, s)
    elif args.kind == "delta":
        need("n", "p")
        value = analytics.delta_janson(n, p, s)
    elif args.kind == "en":
        need("n", "p")
        point, (lo, hi) = analytics.expected_Ns(n, p, s)
        return {"formula": "en", "n": n, "p": p, "s": s, "value": point, "lo": lo, "hi": hi}
    elif args.kind == "lemma2p":
        need("n")
        value = analytics.lemma2_p(n, s, w)
    else:
        need("n", "p")
        value = analytics.theorem4_bound(n, p, s, w)
    out = {"formula": args.kind, "s": s, "value": value}
    for key in ("n", "p"):
        if getattr(args, key) is not None:
            out[key] = getattr(args, key)
    if args.kind in ("lemma2p", "t4bound"):
        out["w"] = w
    return out


def run(args, budget: Budget) -> tuple[str, int]:
    cmd = args.command
    code = EXIT_OK
    if cmd == "gen":
        g = generate_gnp(args.n, args.p, _seed(args))
        return format_edge_list(g), code

    if cmd == "closure":
        if args.host_complete is not None:
            host = complete_graph(args.host_complete)
        elif args.host:
            host = read_edge_list(args.host)
        else:
            raise CliError("give --host or --host-complete")
        h = read_edge_list(args.sub)
        res = ks_closure(host, h, args.s)
        payload = {"n": host.n, "s": args.s, "percolated": res.percolated,
                   "closure_edges": res.closure.edge_count, "added": len(res.trace),
                   "trace": res.trace.to_dict()}
        return _render(payload, args.format), code

    if cmd == "wsat":
        g = _load_graph(args)
        res = wsat_exact(g, args.s, budget, require_ks_free=not args.allow_ks,
                         lovasz_bound=not args.exhaustive)
        if not res.exact:
            code = EXIT_BUDGET
        return _render(res.to_dict(args.timing), args.format), code

    if cmd == "construct":
        g = _load_graph(args)
        if args.kind == "lemma1":
            cons = build_lemma1(g, args.s, budget)
        else:
            if args.p is None:
                raise CliError("construct theorem4 needs --p")
            cons = build_theorem4(g, args.s, args.w, args.p, budget)
        payload = cons.to_dict()
        if args.verify:
            payload["percolates"] = ks_closure(g, cons.H, args.s).percolated
        return _render(payload, args.format), code

    if cmd == "check":
        g = _load_graph(args)
        if args.kind == "as":
            verdict = decide_As(g, args.s, budget)
            if verdict.verdict == "unknown":
                code = EXIT_BUDGET
            return _render(verdict.to_dict(), args.format), code
        checker = {"ext": check_EXT, "bs": check_Bs, "bstar": check_Bstar}.get(args.kind)
        report = check_HAM(g, args.s, budget) if args.kind == "ham" else checker(g, args.s)
        if report.undecided and report.failure_witness is None:
            code = EXIT_BUDGET
        return _render(report.to_dict(), args.format), code

    if cmd == "formula":
        return _render(_formula(args), args.format), code

    if cmd == "sweep":
        res = analytics.sweep_property(args.n, args.p, args.s, args.trials, _seed(args), args.property,
                                       budget, args.workers, args.confidence)
        return _render(res.to_dict(), args.format, res.to_csv()), code

    if cmd == "threshold":
        est = analytics.estimate_threshold(args.n, args.s, args.property, args.trials, args.tol,
                                           _seed(args), args.lo, args.hi, budget, args.workers)
        return _render(est.to_dict(), args.format, est.to_csv()), code

    raise CliError(f"unknown command {cmd}")


def _config_path(argv: list[str]) -> Optional[str]:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(parser, subs, argv) -> argparse.Namespace:
    path = _config_path(argv)
    if path:
        with open(path, encoding="utf-8") as fh:
            cfg = ExperimentConfig.from_text(fh.read())
        command = next((tok for tok in argv if tok in subs), None)
        if command is None:
            raise CliError("command missing on the command line")
        if cfg.command and cfg.command != command:
            raise CliError(f"config is for '{cfg.command}', not '{command}'")
        sp = subs[command]
        known = {a.dest for a in sp._actions}
        unknown = set(cfg.params) - known
        if unknown:
            raise CliError(f"unknown config keys: {sorted(unknown)}")
        for action in sp._actions:
            if action.dest in cfg.params:
                action.required = False
                if action.nargs == 0:  # store_true flags
                    cfg.params[action.dest] = cfg.params[action.dest].lower() in ("1", "true", "yes")
        sp.set_defaults(**cfg.params)
    return parser.parse_args(argv)


def main(argv: Optional[list[str]] = None) -> int:
    parser, subs = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, subs, argv)
        if args.backend:
            kernels.set_backend(args.backend)
        text, code = run(args, default_budget())
    except CliError as exc:
        print(f"wsatlab: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExhausted as exc:
        print(f"wsatlab: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConstructionInfeasible as exc:
        print(f"wsatlab: construction infeasible: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (WsatlabError, DomainError, ValueError, OSError) as exc:
        print(f"wsatlab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
