"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 mathematical precondition
failure (broken pseudo-Hermiticity, exhausted generation budget, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import centrality, randnet, spectral, stats, walk
from .errors import GraphFormatError, PreconditionError
from .graphcore import complete_laplacian_direct, hamiltonian, load_graph, weights_from_hermitized

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _matrix_json(m: np.ndarray):
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return {"real": m.real.tolist(), "imag": m.imag.tolist()}
    return m.tolist()


def cmd_check(args) -> int:
    g = load_graph(args.input)
    h = hamiltonian(g)
    c = spectral.classify(h)
    print(c.label)
    print(f"max_abs_imag_eigenvalue: {c.max_imag:.6g}")
    print(f"eigenvector_rcond: {c.rcond:.6g}")
    if not c.ok:
        print(f"reason: {c.reason}", file=sys.stderr)
        return EXIT_MATH
    if args.output:
        ed = spectral.eta_decomposition(h)
        data = {
            "classification": c.label,
            "eigenvalues": ed.spectral.eigenvalues.real.tolist(),
            "eta": _matrix_json(ed.eta),
            "eta_inv": _matrix_json(ed.eta_inv),
            "v": _matrix_json(ed.v),
        }
        Path(args.output).write_text(json.dumps(data, indent=1) + "\n")
    return EXIT_OK


def _methods(text: str) -> list[str]:
    methods = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in methods if m not in centrality.METHODS]
    if not methods or bad:
        raise UsageError(f"--methods must list some of {', '.join(centrality.METHODS)}")
    return methods


def cmd_centrality(args) -> int:
    methods = _methods(args.methods)
    g = load_graph(args.input)
    h = hamiltonian(g)
    if any(m in ("ctqw", "eta_ctqw") for m in methods):
        c = spectral.classify(h)
        if not c.ok:
            print(f"quantum centrality needs a pseudo-Hermitian Hamiltonian: {c.reason}", file=sys.stderr)
            return EXIT_MATH
    results = [centrality.compute(m, g, h) for m in methods]
    for r in results:
        if r.warning:
            print(f"warning ({r.method}): {r.warning}", file=sys.stderr)
    if args.format == "json":
        data = {
            r.method: {"scores": r.scores.tolist(), "rank": r.ranks.tolist(), "warning": r.warning}
            for r in results
        }
        _emit(json.dumps(data, indent=1) + "\n", args.output)
    else:
        _emit(centrality.scores_csv(results), args.output)
    return EXIT_OK


def cmd_walk(args) -> int:
    if not args.dt > 0:
        raise UsageError("--dt must be positive")
    if not args.t_max >= args.dt:
        raise UsageError("--t-max must be at least --dt")
    g = load_graph(args.input)
    h = hamiltonian(g)
    c = spectral.classify(h)
    if not c.ok:
        print(f"walk needs a diagonalizable real-spectrum Hamiltonian: {c.reason}", file=sys.stderr)
        return EXIT_MATH
    traj = walk.trajectory(h, args.mode, walk.uniform_state(g.n), args.t_max, args.dt)
    _emit(traj.to_csv(), args.output)
    return EXIT_OK


def _load_config(path: str) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"config: {exc.msg}", exc.lineno) from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    return cfg


def _ensemble_specs(cfg: dict, seed: int):
    entries = cfg.get("ensembles")
    if entries is None:
        entries = [cfg]
    if not isinstance(entries, list) or not entries:
        raise UsageError('"ensembles" must be a non-empty list')
    out = []
    for k, e in enumerate(entries):
        count = e.get("count", 100)
        if not isinstance(count, int) or count < 1:
            raise UsageError(f"ensemble {k}: count must be a positive integer")
        try:
            spec = randnet.RandomGraphSpec(
                family=e["family"],
                n=e["n"],
                p=e.get("p"),
                m=e.get("m"),
                seed=seed,
                max_attempts=e.get("max_attempts", 10_000),
            )
        except KeyError as exc:
            raise UsageError(f"ensemble {k}: missing key {exc}") from None
        name = e.get("name", f"{spec.family}_n{spec.n}")
        out.append((name, spec, count))
    return out


def cmd_ensemble(args) -> int:
    cfg = _load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise UsageError("seed must be a non-negative integer")
    methods = cfg.get("methods", list(centrality.METHODS))
    if isinstance(methods, str):
        methods = _methods(methods)
    if args.methods:
        methods = _methods(args.methods)
    jobs = _ensemble_specs(cfg, seed)
    outdir = Path(args.output or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    print(f"master seed: {seed}")
    for name, spec, count in jobs:
        report = stats.run_ensemble(
            spec, count, methods, workers=cfg.get("workers", 1), align=cfg.get("align", "own")
        )
        (outdir / f"{name}.json").write_text(report.to_json() + "\n")
        (outdir / f"{name}_positions.csv").write_text(report.positions_csv())
        for a, b in report.agreement:
            (outdir / f"{name}_agreement_{a}_{b}.csv").write_text(report.agreement_csv(a, b))
        print(f"{name}: {count} graphs written to {outdir}")
    return EXIT_OK


def cmd_map(args) -> int:
    g = load_graph(args.input)
    h = hamiltonian(g)
    c = spectral.classify(h)
    if not c.ok:
        print(f"mapping needs a pseudo-Hermitian Hamiltonian: {c.reason}", file=sys.stderr)
        return EXIT_MATH
    ht = spectral.hermitize(h).matrix
    wg = weights_from_hermitized(ht)
    residual = float(np.max(np.abs(complete_laplacian_direct(wg) - ht)))
    data = {"n": g.n, "weights": wg.weights.tolist(), "residual": residual}
    _emit(json.dumps(data, indent=1) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ptwalk", description="Pseudo-Hermitian quantum walk centrality on directed graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", help="classify a graph Hamiltonian")
    s.add_argument("--input", required=True, help="graph file (.json or edge list)")
    s.add_argument("--output", help="write eta, its inverse and V as JSON")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("centrality", help="vertex centrality scores")
    s.add_argument("--input", required=True)
    s.add_argument("--methods", default=",".join(centrality.METHODS))
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--output")
    s.set_defaults(func=cmd_centrality)

    s = sub.add_parser("walk", help="sampled walk trajectory as CSV")
    s.add_argument("--input", required=True)
    s.add_argument("--mode", choices=walk.MODES, default="eta")
    s.add_argument("--t-max", type=float, default=10.0)
    s.add_argument("--dt", type=float, default=0.01)
    s.add_argument("--output")
    s.set_defaults(func=cmd_walk)

    s = sub.add_parser("ensemble", help="random-graph ensemble statistics")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--methods")
    s.add_argument("--output", help="output directory (default: current)")
    s.set_defaults(func=cmd_ensemble)

    s = sub.add_parser("map", help="edge weights of the equivalent undirected graph")
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.set_defaults(func=cmd_map)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
