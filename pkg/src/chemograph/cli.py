"""Command-line interface.

Subcommands: validate, run, steady, converge, sweep, preset.
Exit codes: 0 success (including steady termination), 1 configuration
error, 2 blow-up detected (outputs still written).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import network, runner, steady
from .runner import ConfigError, PRESET_NAMES


def _load(args) -> runner.RunConfig:
    if getattr(args, "preset", None):
        cfg = runner.preset(args.preset)
    elif getattr(args, "config", None):
        cfg = runner.load_config(args.config)
    else:
        raise ConfigError("pass --config PATH or --preset NAME")
    overrides = {}
    if getattr(args, "snapshot_every", None) is not None:
        overrides["snapshot_every"] = args.snapshot_every
    if getattr(args, "threshold", None) is not None:
        overrides["blowup_factor"] = args.threshold
    if getattr(args, "final_time", None) is not None:
        overrides["final_time"] = args.final_time
    return replace(cfg, **overrides) if overrides else cfg


def cmd_validate(args) -> int:
    cfg = _load(args)
    problems = network.validate_network(cfg.net)
    for node in cfg.net.nodes:
        ok, row_sums = network.validate_dissipative(node)
        kind = "dissipative" if ok else "non-dissipative"
        print(f"node {node.id}: {kind} (row sums {np.round(row_sums, 12).tolist()})")
    try:
        grid = network.build_grid(cfg.net, cfg.k, cfg.nu)
        for arc in cfg.net.arcs:
            print(f"arc {arc.id}: h={grid.h[arc.id]:.6g} M={grid.m[arc.id]}")
    except network.GridError as exc:
        problems.append(str(exc))
    if problems:
        for p in problems:
            print("INVALID:", p)
        return 1
    print("configuration valid")
    return 0


def cmd_run(args) -> int:
    cfg = _load(args)
    result = runner.run(cfg, out_dir=args.out)
    last = result.records[-1]
    print(f"terminated: {result.termination} at t={last.t:.6g}")
    print(f"mass drift: {result.max_mass_drift:.3e}")
    if result.blowup is not None:
        b = result.blowup
        print(f"blow-up at t={b.time:.6g} on arc {b.arc_id} (index {b.index})")
    return result.exit_code


def cmd_steady(args) -> int:
    cfg = _load(args)
    result = runner.run(cfg, out_dir=args.out)
    if result.blowup is not None:
        print(f"run blew up at t={result.blowup.time:.6g}; no steady state")
        return 2
    print(f"terminated: {result.termination} at t={result.records[-1].t:.6g}")
    net, grid = result.net, result.grid
    if cfg.model == "simplified":
        alpha = next(iter(cfg.alphas.values()))
        oracle = steady.simplified_stationary(net, alpha, result.initial_mass)
        for idx, arc in enumerate(net.arcs):
            x = grid.points(arc)
            exact = oracle.density(idx, x)
            h = grid.h[arc.id]
            err = h * np.abs(result.state.u[idx] - exact).sum()
            rel = err / (h * np.abs(exact).sum())
            print(f"arc {arc.id}: C={oracle.amplitudes[idx]:.6g} "
                  f"L1 error vs oracle {err:.3e} (relative {rel:.3e})")
    else:
        try:
            oracle = steady.constant_steady_state(net, result.initial_mass)
        except steady.SteadyStateError as exc:
            print(f"no constant-state oracle: {exc}")
            return 0
        dev_u = max(float(np.max(np.abs(u - oracle.density))) for u in result.state.u)
        dev_v = max(float(np.max(np.abs(v))) for v in result.state.v)
        print(f"oracle U={oracle.density:.6g} phi={oracle.chemoattractant:.6g}")
        print(f"max |u - U| = {dev_u:.3e}, max |v| = {dev_v:.3e}")
        if result.phi is not None:
            dev_p = max(float(np.max(np.abs(p - oracle.chemoattractant)))
                        for p in result.phi.phi)
            print(f"max |phi - phi*| = {dev_p:.3e}")
    return 0


def cmd_converge(args) -> int:
    cfg = _load(args)
    out_path = Path(args.out) / f"{cfg.name}_convergence.csv" if args.out else None
    rows = runner.converge(cfg, args.levels, out_path=out_path)
    for row in rows:
        for arc_id in sorted(row.errors_u):
            line = (f"arc {arc_id} h={row.h[arc_id]:.6g} "
                    f"e_u={row.errors_u[arc_id]:.5e} e_v={row.errors_v[arc_id]:.5e}")
            if row.errors_phi:
                line += f" e_phi={row.errors_phi[arc_id]:.5e}"
            print(line)
        if row.order_u is not None:
            line = f"  order_u={row.order_u:.4f} order_v={row.order_v:.4f}"
            if row.order_phi is not None:
                line += f" order_phi={row.order_phi:.4f}"
            print(line)
    return 0


def _parse_range(spec: str) -> list[float]:
    # "start:stop:count" inclusive, or a comma list
    if ":" in spec:
        start, stop, count = spec.split(":")
        return list(np.linspace(float(start), float(stop), int(count)))
    return [float(v) for v in spec.split(",")]


def cmd_sweep(args) -> int:
    cfg = _load(args)
    out_path = Path(args.out) / "regime_map.csv" if args.out else None
    cells = runner.sweep(cfg, _parse_range(args.lambda1), _parse_range(args.lambda2),
                         xi11=args.xi11, out_path=out_path)
    for c in cells:
        extra = ""
        if c.blowup_time is not None:
            extra = f" blowup_t={c.blowup_time:.4g}"
        if c.steady_time is not None:
            extra += f" steady_t={c.steady_time:.4g}"
        print(f"lambda=({c.lam1:g}, {c.lam2:g}): {c.classification}{extra}")
    return 0


def cmd_preset(args) -> int:
    if args.action == "list":
        for name in PRESET_NAMES:
            print(name)
        return 0
    raise ConfigError(f"unknown preset action {args.action!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chemograph",
                                description="Chemotaxis network simulations")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--preset", help="bundled experiment name")
        sp.add_argument("--out", help="output directory", default=None)
        sp.add_argument("--snapshot-every", type=float, dest="snapshot_every")
        sp.add_argument("--threshold", type=float,
                        help="blow-up factor over the initial max density")
        sp.add_argument("--final-time", type=float, dest="final_time")

    sp = sub.add_parser("validate", help="check a configuration without running")
    common(sp)
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("run", help="advance the coupled scheme and write CSVs")
    common(sp)
    sp.set_defaults(fn=cmd_run)

    sp = sub.add_parser("steady", help="run and compare against the stationary oracle")
    common(sp)
    sp.set_defaults(fn=cmd_steady)

    sp = sub.add_parser("converge", help="grid refinement study")
    common(sp)
    sp.add_argument("--levels", type=int, default=2)
    sp.set_defaults(fn=cmd_converge)

    sp = sub.add_parser("sweep", help="regime map over wave-speed pairs")
    common(sp)
    sp.add_argument("--lambda1", required=True, help="start:stop:count or comma list")
    sp.add_argument("--lambda2", required=True, help="start:stop:count or comma list")
    sp.add_argument("--xi11", type=float, default=0.96)
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("preset", help="inspect bundled experiments")
    sp.add_argument("action", choices=["list"])
    sp.set_defaults(fn=cmd_preset)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, network.NetworkError, network.GridError,
            steady.SteadyStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
