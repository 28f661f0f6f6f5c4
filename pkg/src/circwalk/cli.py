"""
Command-line front end.

    circwalk simulate --preset example1 --out runs/ex1
    circwalk check --graph g.json --coins c.json
    circwalk circuit --preset fig3 --format dot

Log level comes from ``CIRCWALK_LOG_LEVEL`` (default WARNING).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from pathlib import Path

from .blowup import blow_up, compile_circuit, emit_netlist
from .coins import CoinSpec, coin_assignment
from .errors import CircwalkError
from .graph import Labeling, default_labeling, dump_graph, load_graph, validate_labeling
from .presets import NAMES, preset_document
from .stationary import assemble_internal, check_implementation, solve_stationary, stationary_report
from .walk import CirculantWalk, OpticalWalk, SimConfig, run_until_converged, write_mu_csv

log = logging.getLogger("circwalk")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def load_run_inputs(args):
    """Resolve ``--preset`` / ``--graph`` / ``--coins`` / ``--labeling`` into documents."""
    if args.preset:
        doc = preset_document(args.preset)
        graph_doc, coin_doc = doc["graph"], doc["coins"]
    else:
        if not args.graph or not args.coins:
            raise CircwalkError("either --preset or both --graph and --coins are required")
        graph_doc, coin_doc = _read_json(args.graph), _read_json(args.coins)
    graph, labeling = load_graph(graph_doc)
    if args.labeling == "default":
        labeling = default_labeling(graph)
    elif args.labeling:
        labeling = Labeling.from_origins(graph, _read_json(args.labeling))
        validate_labeling(graph, labeling)
    coins = coin_assignment(graph, CoinSpec.from_json(coin_doc))
    canonical = {
        "graph": dump_graph(graph, labeling),
        "coins": CoinSpec.from_json(coin_doc).to_json(),
        "options": {k: getattr(args, k, None) for k in ("walk", "solver", "tol", "max_steps")},
    }
    digest = hashlib.sha256(json.dumps(canonical, sort_keys=True).encode()).hexdigest()
    return graph, labeling, coins, digest


def _walks(kind):
    return ["circulant", "optical"] if kind == "both" else [kind]


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_report(out: Path, name: str, report: dict) -> None:
    (out / name).write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")


def cmd_simulate(args) -> int:
    graph, labeling, coins, digest = load_run_inputs(args)
    out = _out_dir(args)
    report = {"command": "simulate", "spec_hash": digest, "walks": {}}
    ok = True
    B = blow_up(graph, labeling)
    for kind in _walks(args.walk):
        entry = {}
        if args.solver in ("iterate", "both"):
            walk = CirculantWalk(graph, labeling, coins) if kind == "circulant" else OpticalWalk(B, coins)
            config = SimConfig(max_steps=args.max_steps, residual_tol=args.tol, record_every=args.record_every)
            _, rep = run_until_converged(walk, config)
            write_mu_csv(out / f"mu_{kind}.csv", rep, kind)
            entry["iterate"] = rep.to_json()
            ok = ok and rep.converged
            log.info("%s walk: converged=%s after %d steps", kind, rep.converged, rep.steps_used)
        if args.solver in ("direct", "both"):
            sys_ = assemble_internal(kind, graph, labeling, coins)
            entry["direct"] = stationary_report(sys_, solve_stationary(sys_))
        report["walks"][kind] = entry
    report["converged"] = ok
    _write_report(out, "simulate_report.json", report)
    print(json.dumps({k: v.get("iterate", {}).get("converged") for k, v in report["walks"].items()}))
    return EXIT_OK if ok else EXIT_NOT_CONVERGED


def cmd_check(args) -> int:
    graph, labeling, coins, digest = load_run_inputs(args)
    verdict = check_implementation(graph, labeling, coins)
    report = {"command": "check", "spec_hash": digest, **verdict.to_json()}
    if args.out:
        _write_report(_out_dir(args), "check_report.json", report)
    print(json.dumps(report, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_circuit(args) -> int:
    graph, labeling, coins, digest = load_run_inputs(args)
    text = emit_netlist(compile_circuit(blow_up(graph, labeling), labeling), args.format)
    if args.out:
        out = _out_dir(args)
        (out / f"circuit.{args.format}").write_text(text)
        _write_report(out, "circuit_report.json", {"command": "circuit", "spec_hash": digest, "format": args.format})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circwalk", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--preset", choices=NAMES)
        sp.add_argument("--graph", help="graph JSON file")
        sp.add_argument("--coins", help="coin spec JSON file")
        sp.add_argument("--labeling", help="'default' or a labeling JSON file")
        sp.add_argument("--out", help="output directory")

    s = sub.add_parser("simulate", help="iterate and/or solve for the stationary state")
    common(s)
    s.add_argument("--walk", choices=["circulant", "optical", "both"], default="both")
    s.add_argument("--solver", choices=["iterate", "direct", "both"], default="both")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--max-steps", type=int, default=None)
    s.add_argument("--record-every", type=int, default=1)
    s.set_defaults(func=cmd_simulate, out=None)

    c = sub.add_parser("check", help="implementability verdict")
    common(c)
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("circuit", help="emit the optical circuit netlist")
    common(k)
    k.add_argument("--format", choices=["dot", "json"], default="dot")
    k.set_defaults(func=cmd_circuit)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("CIRCWALK_LOG_LEVEL", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.command == "simulate" and args.out is None:
        args.out = "."
    try:
        return args.func(args)
    except (CircwalkError, OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"circwalk: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
