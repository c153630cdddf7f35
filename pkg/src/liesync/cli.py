"""Command-line front end.

Subcommands::

    liesync simulate CONFIG OUTDIR      # CONFIG is a JSON file or preset:NAME
    liesync gain-bound (GRAPH | --complete N) [--K K]
    liesync region N [--samples S] [--out CSV]
    liesync settling N K [--eps E] [--verify]

Exit codes: 0 success, 2 config error, 3 runtime math error, 4 domain error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import graph as graphmod
from . import lincoord, sim
from .control import ControlConfig
from .errors import ControllerUndefined, DeadbeatGain, DomainError, LeftGroup, LieSyncError

EXIT_OK, EXIT_CONFIG, EXIT_MATH, EXIT_DOMAIN = 0, 2, 3, 4


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def load_scenario(source: str) -> sim.Scenario:
    if source.startswith("preset:"):
        return sim.scenario_from_dict({"preset": source.split(":", 1)[1]})
    try:
        with open(source) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise sim.ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise sim.ConfigError(f"cannot read {source}: {exc.strerror}") from None
    return sim.scenario_from_dict(data)


def cmd_simulate(source: str, outdir) -> dict:
    """Run a scenario and write ``trajectory.csv``, ``states.csv`` and
    ``manifest.json`` into `outdir`.

    Files are staged in a temporary directory and moved into place only after
    the run succeeds, so a failing run leaves no partial CSV behind.
    """
    t0 = time.perf_counter()
    sc = load_scenario(source)
    traj = sim.run(sc)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    emitted = []
    with tempfile.TemporaryDirectory(dir=outdir) as tmp:
        tmp = Path(tmp)
        sim.write_trajectory_csv(traj, tmp / "trajectory.csv")
        sim.write_states_csv(traj, sc.group, tmp / "states.csv")
        (tmp / "scenario.json").write_text(json.dumps(sim.scenario_to_dict(sc), indent=2))
        for name in ("trajectory.csv", "states.csv", "scenario.json"):
            os.replace(tmp / name, outdir / name)
            emitted.append({"path": name, "sha256": _sha256(outdir / name)})
    manifest = {
        "source": source,
        "output_dir": str(outdir),
        "files": emitted,
        "wall_time_s": time.perf_counter() - t0,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2))
    return manifest


def cmd_gain_bound(graph_path=None, complete=None, K=None) -> dict:
    if complete is not None:
        G = graphmod.CommGraph.complete(int(complete))
    else:
        try:
            G = graphmod.load_graph(graph_path)
        except (OSError, ValueError, KeyError) as exc:
            raise sim.ConfigError(f"graph file {graph_path}: {exc}") from None
    rep = graphmod.laplacian(G)
    out = {
        "N": G.N,
        "laplacian_spectrum": [[float(z.real), float(z.imag)] for z in rep.spectrum],
        "connected": rep.connected,
        "exact_bound": graphmod.exact_gain_bound(rep),
        "K_min": graphmod.kmin_closed_form(G.N) if G.N >= 2 else None,
    }
    if K is not None:
        out["verdict"] = lincoord.stability_verdict(rep, float(K)).to_dict()
    return out


def cmd_region(N: int, samples: int = 10_000, out=None) -> dict:
    pts = graphmod.region_boundary(N, max(samples, 100))
    best = graphmod.region_maximum(N, samples)
    if out is not None:
        graphmod.write_region_csv(pts, out)
    return {
        "N": N,
        "max_g": best.g,
        "sigma": best.sigma,
        "omega": best.omega,
        "label": best.label,
        "K_min": graphmod.kmin_closed_form(N),
        "candidates": best.candidates,
        "csv": str(out) if out is not None else None,
    }


def cmd_settling(N: int, K: float, eps: float = 0.1, verify: bool = False) -> dict:
    out = {"N": N, "K": K, "eps": eps}
    try:
        ts = lincoord.settling_time(N, K, eps)
        out.update(deadbeat=False, settling_time=ts,
                   derivative=lincoord.settling_time_derivative(N, K, eps))
    except DeadbeatGain:
        ts = 1
        out.update(deadbeat=True, settling_time=1, derivative=None)
    if out["derivative"] is not None:
        out["derivative_sign"] = int(math.copysign(1, out["derivative"]))
    if verify:
        rng = np.random.default_rng(0)
        theta = rng.uniform(-0.3 / N, 0.3 / N, size=N)
        sc = sim.Scenario(sim.liegroup.SO2, graphmod.CommGraph.complete(N), ControlConfig(T=1.0, K=K),
                          theta[:, None], steps=ts + 5)
        measured = sim.measure_settling(sim.run(sc), eps)
        out["measured"] = measured
        out["verified"] = measured == ts
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liesync", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a scenario file or preset:NAME")
    s.add_argument("config")
    s.add_argument("outdir")

    g = sub.add_parser("gain-bound", help="spectral gain bounds for a graph")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("graph", nargs="?")
    src.add_argument("--complete", type=int, metavar="N")
    g.add_argument("--K", type=float)

    r = sub.add_parser("region", help="inclusion-region boundary and max of g")
    r.add_argument("N", type=int)
    r.add_argument("--samples", type=int, default=10_000)
    r.add_argument("--out", help="CSV path for the boundary points")

    t = sub.add_parser("settling", help="complete-graph settling time")
    t.add_argument("N", type=int)
    t.add_argument("K", type=float)
    t.add_argument("--eps", type=float, default=0.1)
    t.add_argument("--verify", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            result = cmd_simulate(args.config, args.outdir)
        elif args.command == "gain-bound":
            result = cmd_gain_bound(args.graph, args.complete, args.K)
        elif args.command == "region":
            result = cmd_region(args.N, args.samples, args.out)
        else:
            result = cmd_settling(args.N, args.K, args.eps, args.verify)
    except sim.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ControllerUndefined, LeftGroup) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (DomainError, ValueError) as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except LieSyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    print(json.dumps(result, indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
