"""Simulation driver: configuration, time loop, presets, sweeps, refinement studies.

A run couples the hyperbolic stepper with the Crank-Nicolson chemoattractant
solve: the density step consumes the source field of the current level, the
phi solve consumes the density at both levels, and the next source field is
rebuilt from the fresh gradient.  Three model variants are supported:

* ``full``        - the coupled system, f = phi_x u;
* ``simplified``  - constant drift per arc, f = alpha u, no phi equation;
* ``linear``      - f = 0.

Runs terminate at the final time, at steady detection, or at blow-up and
report which; outputs are deterministic CSV files.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import chemo, diagnostics, network, scheme
from .chemo import PhiState, chemotactic_source, phi_gradient
from .diagnostics import BlowupReport, DiagnosticsRecord, DEFAULT_BLOWUP_FACTOR
from .network import ArcSpec, GridSpec, NetworkSpec, NodeSpec, build_grid
from .scheme import HyperbolicState, SchemeCoefficients, roe_aho_coefficients
from .steady import steady_residual

MODELS = ("full", "simplified", "linear")


class ConfigError(ValueError):
    """Configuration that no run should be attempted with."""


@dataclass(frozen=True)
class InitialCondition:
    """Initial density on one arc; the flux starts at zero everywhere.

    kinds: ``constant`` (base), ``cosine`` (base, amplitude, periods; mass
    is exactly base * L), ``gaussian`` (base plus a bump of the given height,
    center and width).  ``phi`` is either "equal_to_u" or a float level.
    """

    kind: str = "constant"
    base: float = 0.0
    amplitude: float = 0.0
    periods: int = 1
    center: float = 0.5
    width: float = 0.1
    phi: str | float = "equal_to_u"

    def density(self, x: np.ndarray, length: float) -> np.ndarray:
        if self.kind == "constant":
            return np.full_like(x, self.base, dtype=float)
        if self.kind == "cosine":
            if abs(self.amplitude) >= 1.0:
                raise ConfigError("cosine amplitude must satisfy |A| < 1")
            return self.base * (1.0 + self.amplitude
                                * np.cos(2 * np.pi * self.periods * x / length))
        if self.kind == "gaussian":
            return self.base + self.amplitude * np.exp(
                -(x - self.center) ** 2 / (2 * self.width ** 2))
        raise ConfigError(f"unknown initial condition kind {self.kind!r}")

    def analytic_mass(self, length: float) -> float:
        if self.kind in ("constant", "cosine"):
            return self.base * length
        if self.kind == "gaussian":
            s = self.width * math.sqrt(math.pi / 2)
            span = (math.erf((length - self.center) / (math.sqrt(2) * self.width))
                    - math.erf((0.0 - self.center) / (math.sqrt(2) * self.width)))
            return self.base * length + self.amplitude * s * span
        raise ConfigError(f"unknown initial condition kind {self.kind!r}")

    def phi_level(self, u: np.ndarray) -> np.ndarray:
        if self.phi == "equal_to_u":
            return u.copy()
        return np.full_like(u, float(self.phi))


@dataclass(frozen=True)
class RunConfig:
    net: NetworkSpec
    k: float
    final_time: float
    model: str = "full"
    initial: dict[int, InitialCondition] = field(default_factory=dict)
    alphas: dict[int, float] = field(default_factory=dict)   # simplified model drift
    nu: float = 0.5
    steady_tolerance: float = 1e-7
    blowup_factor: float = DEFAULT_BLOWUP_FACTOR
    snapshot_every: float = 0.0       # 0 disables intermediate snapshots
    phi_closure: str = "conservative"
    stop_on_steady: bool = True
    name: str = "run"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; pick one of {MODELS}")
        if self.k <= 0 or self.final_time <= 0:
            raise ConfigError("time step and final time must be positive")
        if self.model == "simplified":
            for arc in self.net.arcs:
                alpha = self.alphas.get(arc.id, 0.0)
                if abs(alpha) >= arc.speed:
                    raise ConfigError(
                        f"arc {arc.id}: drift {alpha} violates |alpha| < lambda")
        for arc in self.net.arcs:
            if arc.id not in self.initial:
                raise ConfigError(f"arc {arc.id}: missing initial condition")


@dataclass
class RunResult:
    config: RunConfig
    net: NetworkSpec
    grid: GridSpec
    state: HyperbolicState
    phi: PhiState | None
    records: list[DiagnosticsRecord]
    termination: str                   # "final_time" | "steady" | "blowup"
    blowup: BlowupReport | None
    steady_time: float | None
    max_mass_drift: float
    initial_mass: float

    @property
    def steady(self) -> bool:
        return self.termination == "steady"

    @property
    def exit_code(self) -> int:
        return 2 if self.blowup is not None else 0


def initial_state(config: RunConfig, grid: GridSpec
                  ) -> tuple[HyperbolicState, PhiState]:
    net = config.net
    u, v, phi = [], [], []
    for arc in net.arcs:
        x = grid.points(arc)
        ic = config.initial[arc.id]
        dens = ic.density(x, arc.length)
        if np.any(dens < 0):
            raise ConfigError(f"arc {arc.id}: initial density must be nonnegative")
        u.append(dens)
        v.append(np.zeros_like(dens))
        phi.append(ic.phi_level(dens))
    return HyperbolicState(u, v), PhiState(phi)


def _source_field(config: RunConfig, state: HyperbolicState,
                  phi: PhiState | None, net, grid) -> list[np.ndarray]:
    if config.model == "linear":
        return [np.zeros_like(a) for a in state.u]
    if config.model == "simplified":
        return [config.alphas.get(arc.id, 0.0) * u
                for u, arc in zip(state.u, net.arcs)]
    grad = phi_gradient(phi, net, grid)
    return chemotactic_source(state.u, grad)


def run(config: RunConfig, out_dir: str | Path | None = None,
        coeffs: SchemeCoefficients | None = None) -> RunResult:
    """Advance the coupled scheme to termination and optionally write CSVs."""
    net = config.net
    problems = network.validate_network(net)
    if problems:
        raise ConfigError("; ".join(problems))
    grid = build_grid(net, config.k, config.nu)
    if coeffs is None:
        coeffs = roe_aho_coefficients()
    for arc in net.arcs:
        if not scheme.check_monotonicity(grid.h[arc.id], config.k, arc.speed):
            warnings.warn(f"arc {arc.id}: monotonicity bounds violated "
                          f"(h={grid.h[arc.id]}, k={config.k}, lambda={arc.speed})")

    state, phi = initial_state(config, grid)
    if config.model != "full":
        phi = None
    system = (chemo.assemble_cn_system(net, grid, config.k, config.phi_closure)
              if config.model == "full" else None)

    mass0 = diagnostics.discrete_mass(state, net, grid)
    threshold = config.blowup_factor * max(state.max_abs_u(), 1e-300)
    f = _source_field(config, state, phi, net, grid)

    records: list[DiagnosticsRecord] = []
    snapshots: list[tuple[float, HyperbolicState, PhiState | None]] = []
    next_snapshot = 0.0

    def record(t, is_steady, is_blowup):
        records.append(DiagnosticsRecord(
            t=t,
            total_mass=diagnostics.discrete_mass(state, net, grid),
            energy=diagnostics.discrete_energy(state, net, grid),
            max_abs_u=state.max_abs_u(),
            min_u=min(float(a.min()) for a in state.u),
            steady=is_steady,
            blowup=is_blowup,
        ))

    def snapshot(t):
        snapshots.append((t, state.copy(), phi.copy() if phi is not None else None))

    record(0.0, False, False)
    if config.snapshot_every > 0:
        snapshot(0.0)
        next_snapshot = config.snapshot_every

    n_steps = int(round(config.final_time / config.k))
    termination = "final_time"
    blowup_report = None
    steady_time = None
    max_drift = 0.0

    for n in range(n_steps):
        prev = [a for a in state.u] + [a for a in state.v]
        if phi is not None:
            prev += [a for a in phi.phi]
        u_old = state.u
        state = scheme.hyperbolic_step(state, coeffs, f, net, grid, config.k)
        if phi is not None:
            phi = chemo.phi_step(phi, u_old, state.u, system)
        f = _source_field(config, state, phi, net, grid)
        t = (n + 1) * config.k

        report = diagnostics.detect_blowup(state, net, threshold)
        if report is None and phi is not None and not phi.finite():
            report = BlowupReport(t, net.arcs[0].id, 0, float("nan"))
        if report is not None:
            blowup_report = report
            termination = "blowup"
            record(t, False, True)
            snapshot(t)
            break

        mass = diagnostics.discrete_mass(state, net, grid)
        max_drift = max(max_drift, abs(mass - mass0) / max(abs(mass0), 1e-300))

        cur = [a for a in state.u] + [a for a in state.v]
        if phi is not None:
            cur += [a for a in phi.phi]
        residual = steady_residual(prev, cur, config.k)
        is_steady = residual < config.steady_tolerance

        if config.snapshot_every > 0 and t >= next_snapshot - 1e-12:
            record(t, is_steady, False)
            snapshot(t)
            next_snapshot += config.snapshot_every

        if is_steady and config.stop_on_steady:
            steady_time = t
            termination = "steady"
            if not records or records[-1].t != t:
                record(t, True, False)
            snapshot(t)
            break
    else:
        record(n_steps * config.k, False, False)
        snapshot(n_steps * config.k)

    result = RunResult(config=config, net=net, grid=grid, state=state, phi=phi,
                       records=records, termination=termination,
                       blowup=blowup_report, steady_time=steady_time,
                       max_mass_drift=max_drift, initial_mass=mass0)
    if out_dir is not None:
        write_outputs(result, snapshots, Path(out_dir))
    return result


def write_outputs(result: RunResult, snapshots, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    grid, net = result.grid, result.net
    with open(out_dir / f"{result.config.name}_snapshots.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "arc_id", "x", "u", "v", "phi"])
        for t, st, ph in snapshots:
            for idx, arc in enumerate(net.arcs):
                x = grid.points(arc)
                pvals = ph.phi[idx] if ph is not None else np.zeros_like(x)
                for j in range(len(x)):
                    w.writerow([f"{t:.17g}", arc.id, f"{x[j]:.17g}",
                                f"{st.u[idx][j]:.17g}", f"{st.v[idx][j]:.17g}",
                                f"{pvals[j]:.17g}"])
    with open(out_dir / f"{result.config.name}_diagnostics.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "total_mass", "energy", "max_abs_u", "min_u", "steady", "blowup"])
        for r in result.records:
            w.writerow([f"{r.t:.17g}", f"{r.total_mass:.17g}", f"{r.energy:.17g}",
                        f"{r.max_abs_u:.17g}", f"{r.min_u:.17g}",
                        int(r.steady), int(r.blowup)])


# ---------------------------------------------------------------------------
# presets

TWELVE_ARC_NODES = {
    # node name -> (incoming ids, outgoing ids, xi entries keyed (into, from))
    "SW": ((12, 11), (3, 4), {
        (12, 12): 0.1, (11, 12): 0.3, (3, 12): 0.3, (4, 12): 0.3,
        (12, 11): 0.2, (11, 11): 0.2, (3, 11): 0.3, (4, 11): 0.3,
        (12, 3): 0.2, (11, 3): 0.2, (3, 3): 0.4, (4, 3): 0.2,
        (12, 4): 0.5, (11, 4): 0.1, (3, 4): 0.2, (4, 4): 0.2}),
    "SE": ((3, 10), (9, 2), {
        (3, 3): 0.1, (10, 3): 0.3, (9, 3): 0.3, (2, 3): 0.3,
        (3, 10): 0.2, (10, 10): 0.2, (9, 10): 0.3, (2, 10): 0.3,
        (3, 9): 0.2, (10, 9): 0.2, (9, 9): 0.4, (2, 9): 0.2,
        (3, 2): 0.5, (10, 2): 0.1, (9, 2): 0.2, (2, 2): 0.2}),
    "NE": ((1, 2), (8, 7), {
        (1, 1): 0.1, (2, 1): 0.3, (8, 1): 0.3, (7, 1): 0.3,
        (1, 2): 0.2, (2, 2): 0.2, (8, 2): 0.3, (7, 2): 0.3,
        (1, 8): 0.2, (2, 8): 0.2, (8, 8): 0.4, (7, 8): 0.2,
        (1, 7): 0.5, (2, 7): 0.1, (8, 7): 0.2, (7, 7): 0.2}),
    "NW": ((5, 4), (1, 6), {
        (5, 5): 0.1, (4, 5): 0.3, (1, 5): 0.3, (6, 5): 0.3,
        (5, 4): 0.2, (4, 4): 0.2, (1, 4): 0.3, (6, 4): 0.3,
        (5, 1): 0.2, (4, 1): 0.2, (1, 1): 0.4, (6, 1): 0.2,
        (5, 6): 0.5, (4, 6): 0.1, (1, 6): 0.2, (6, 6): 0.2}),
}


def two_arc_network(lam1, lam2, xi, length1, length2, diffusivity=1.0,
                    production=1.0, degradation=1.0, kappa=1.0) -> NetworkSpec:
    """Arc 1 incoming at the single node, arc 2 outgoing; far ends outer."""
    arcs = [ArcSpec(1, length1, lam1, diffusivity, production, degradation),
            ArcSpec(2, length2, lam2, diffusivity, production, degradation)]
    node = NodeSpec(1, incoming=[1], outgoing=[2], xi=xi,
                    kappa=[[0.0, kappa], [kappa, 0.0]])
    return NetworkSpec(arcs, [node], outer_incoming=[1], outer_outgoing=[2])


def single_arc_network(length, lam, diffusivity=1.0, production=1.0,
                       degradation=1.0) -> NetworkSpec:
    arcs = [ArcSpec(1, length, lam, diffusivity, production, degradation)]
    return NetworkSpec(arcs, [], outer_incoming=[1], outer_outgoing=[1])


def twelve_arc_network(lam=10.0, length=1.0, diffusivity=1.0, production=1.0,
                       degradation=1.0, kappa=1.0) -> NetworkSpec:
    """Four internal nodes in a ring of arcs 1-4 with eight outer spokes."""
    arcs = [ArcSpec(i, length, lam, diffusivity, production, degradation)
            for i in range(1, 13)]
    nodes = []
    for node_id, (name, (inc, out, table)) in enumerate(TWELVE_ARC_NODES.items(), 1):
        order = list(inc) + list(out)
        n = len(order)
        xi = np.zeros((n, n))
        for i, into in enumerate(order):
            for j, source in enumerate(order):
                xi[i, j] = table[(into, source)]
        kap = kappa * (np.ones((n, n)) - np.eye(n))
        nodes.append(NodeSpec(node_id, incoming=inc, outgoing=out, xi=xi, kappa=kap))
    # arcs 1-4 form the inner ring; 5, 10, 11, 12 enter from outer boundaries
    # and 6, 7, 8, 9 leave toward them
    return NetworkSpec(arcs, nodes,
                       outer_incoming=(5, 10, 11, 12),
                       outer_outgoing=(6, 7, 8, 9))


PRESET_NAMES = (
    "two_arc_simplified",
    "two_arc_full_dissipative",
    "two_arc_full_nondissipative",
    "twelve_arc",
    "blowup_single_arc",
    "blowup_two_arc",
    "convergence_table2",
    "regime_sweep",
)


def preset(name: str) -> RunConfig:
    """Fully parameterized configuration for the bundled experiments."""
    if name == "two_arc_simplified":
        net = two_arc_network(2.0, 1.0, [[0.8, 0.2], [0.4, 0.6]], 4.0, 1.0)
        ic = {i: InitialCondition("cosine", base=50.0, amplitude=0.1) for i in (1, 2)}
        return RunConfig(net=net, k=0.005, final_time=100.0, model="simplified",
                         initial=ic, alphas={1: 0.5, 2: 0.5},
                         steady_tolerance=1e-8, name=name)
    if name == "two_arc_full_dissipative":
        net = two_arc_network(5.0, 4.0, [[0.8, 0.2], [0.25, 0.75]], 6.0, 2.0)
        ic = {i: InitialCondition("cosine", base=20.0, amplitude=0.1) for i in (1, 2)}
        return RunConfig(net=net, k=0.0025, final_time=10.0, model="full",
                         initial=ic, steady_tolerance=5e-3, name=name)
    if name == "two_arc_full_nondissipative":
        net = two_arc_network(5.0, 4.0, [[0.8, 0.24], [0.25, 0.70]], 6.0, 2.0)
        ic = {i: InitialCondition("cosine", base=20.0, amplitude=0.1) for i in (1, 2)}
        return RunConfig(net=net, k=0.0025, final_time=30.0, model="full",
                         initial=ic, steady_tolerance=1e-5, name=name)
    if name == "twelve_arc":
        net = twelve_arc_network()
        ic = {i: InitialCondition("constant", base=110.0) for i in range(1, 13)}
        ic[5] = InitialCondition("cosine", base=110.0, amplitude=0.1)
        return RunConfig(net=net, k=0.0005, final_time=30.0, model="full",
                         initial=ic, steady_tolerance=0.0, stop_on_steady=False,
                         name=name)
    if name == "blowup_single_arc":
        net = single_arc_network(1.0, 10.0)
        ic = {1: InitialCondition("cosine", base=9000.0, amplitude=0.065)}
        return RunConfig(net=net, k=5e-5, final_time=0.5, model="full",
                         initial=ic, steady_tolerance=0.0, stop_on_steady=False,
                         name=name)
    if name == "blowup_two_arc":
        xi = network.two_arc_dissipative_family(1.0, 2.0, 0.96)
        net = two_arc_network(1.0, 2.0, xi, 6.0, 2.0)
        ic = {i: InitialCondition("cosine", base=20.0, amplitude=0.0035) for i in (1, 2)}
        return RunConfig(net=net, k=0.005, final_time=8.0, model="full",
                         initial=ic, steady_tolerance=0.0, stop_on_steady=False,
                         name=name)
    if name == "convergence_table2":
        xi = network.two_arc_dissipative_family(4.0, 4.0, 0.96)
        net = two_arc_network(4.0, 4.0, xi, 1.0, 1.0)
        # bump height chosen so the total mass is exactly the reference 120.056
        bump = InitialCondition("gaussian", base=60.0, amplitude=0.14906636828115452,
                                center=0.5, width=0.15)
        ic = {1: bump, 2: InitialCondition("constant", base=60.0)}
        return RunConfig(net=net, k=0.025 / 8.0, final_time=25.0, model="full",
                         initial=ic, steady_tolerance=0.0, stop_on_steady=False,
                         name=name)
    if name == "regime_sweep":
        xi = network.two_arc_dissipative_family(5.0, 4.0, 0.96)
        net = two_arc_network(5.0, 4.0, xi, 6.0, 2.0)
        ic = {i: InitialCondition("cosine", base=20.0, amplitude=0.004) for i in (1, 2)}
        return RunConfig(net=net, k=0.0025, final_time=60.0, model="full",
                         initial=ic, steady_tolerance=1e-4, name=name)
    raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")


# ---------------------------------------------------------------------------
# parameter sweep over wave speeds

@dataclass(frozen=True)
class SweepCell:
    lam1: float
    lam2: float
    k: float | None
    classification: str          # blowup | boundary_spike | stable | skipped
    blowup_time: float | None
    steady_time: float | None
    max_density: float | None


def sweep(config: RunConfig, lam1_values, lam2_values, xi11: float = 0.96,
          out_path: str | Path | None = None) -> list[SweepCell]:
    """Classify the run regime over a grid of wave-speed pairs.

    Each cell rebuilds the two-arc coupling from the one-parameter dissipative
    family and picks the nearest admissible time step; cells with an
    inadmissible family parameter are marked skipped.
    """
    if len(config.net.arcs) != 2:
        raise ConfigError("sweep expects a two-arc configuration")
    lengths = [a.length for a in config.net.arcs]
    a1 = config.net.arcs[0]
    cells = []
    for lam1 in lam1_values:
        for lam2 in lam2_values:
            try:
                xi = network.two_arc_dissipative_family(lam1, lam2, xi11)
            except ValueError:
                cells.append(SweepCell(lam1, lam2, None, "skipped", None, None, None))
                continue
            net = two_arc_network(lam1, lam2, xi, lengths[0], lengths[1],
                                  a1.diffusivity, a1.production, a1.degradation)
            k_lo, k_hi = network.admissible_time_steps(net, config.k, config.nu)
            k = k_lo if abs(k_lo - config.k) <= abs(k_hi - config.k) else k_hi
            if k < config.k / 64:
                # speed ratio admits no grid near the requested resolution
                cells.append(SweepCell(lam1, lam2, None, "skipped", None, None, None))
                continue
            cell_cfg = replace(config, net=net, k=k, name=f"sweep_{lam1}_{lam2}")
            result = run(cell_cfg)
            verdict = diagnostics.classify_regime(result)
            cells.append(SweepCell(
                lam1, lam2, k, verdict,
                result.blowup.time if result.blowup else None,
                result.steady_time,
                result.state.max_abs_u() if result.blowup is None else None))
    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lambda1", "lambda2", "k", "classification",
                        "blowup_time", "steady_time", "max_density"])
            for c in cells:
                w.writerow([c.lam1, c.lam2, c.k, c.classification,
                            c.blowup_time, c.steady_time, c.max_density])
    return cells


# ---------------------------------------------------------------------------
# grid refinement study

@dataclass(frozen=True)
class ConvergenceRow:
    h: dict[int, float]                 # coarse spacing per arc
    errors_u: dict[int, float]
    errors_v: dict[int, float]
    errors_phi: dict[int, float]
    order_u: float | None = None        # min over arcs; None on the last row
    order_v: float | None = None
    order_phi: float | None = None


def converge(config: RunConfig, levels: int,
             out_path: str | Path | None = None) -> list[ConvergenceRow]:
    """Self-convergence table from ``levels`` successive 2-refinements.

    Runs the configuration at k, k/2, ..., k/2^levels (always to the exact
    final time; steady termination is disabled so states are comparable),
    then assembles the L1 nested-grid errors and per-variable orders.
    """
    if levels < 1:
        raise ConfigError("need at least one refinement level")
    runs = []
    for j in range(levels + 1):
        cfg = replace(config, k=config.k / 2 ** j, stop_on_steady=False,
                      name=f"{config.name}_L{j}")
        runs.append(run(cfg))
    rows: list[ConvergenceRow] = []
    for j in range(levels):
        coarse, fine = runs[j], runs[j + 1]
        e_u, e_v, e_p = {}, {}, {}
        for idx, arc in enumerate(config.net.arcs):
            h = coarse.grid.h[arc.id]
            e_u[arc.id] = diagnostics.l1_self_convergence_error(
                coarse.state.u[idx], fine.state.u[idx], h)
            e_v[arc.id] = diagnostics.l1_self_convergence_error(
                coarse.state.v[idx], fine.state.v[idx], h)
            if coarse.phi is not None:
                e_p[arc.id] = diagnostics.l1_self_convergence_error(
                    coarse.phi.phi[idx], fine.phi.phi[idx], h)
        rows.append(ConvergenceRow(dict(coarse.grid.h), e_u, e_v, e_p))
    out = []
    for j, row in enumerate(rows):
        if j + 1 < len(rows):
            nxt = rows[j + 1]
            ids = list(row.errors_u)
            order_u = diagnostics.min_convergence_order(
                [row.errors_u[i] for i in ids], [nxt.errors_u[i] for i in ids])
            order_v = diagnostics.min_convergence_order(
                [row.errors_v[i] for i in ids], [nxt.errors_v[i] for i in ids])
            order_p = (diagnostics.min_convergence_order(
                [row.errors_phi[i] for i in ids], [nxt.errors_phi[i] for i in ids])
                if row.errors_phi else None)
            out.append(replace(row, order_u=order_u, order_v=order_v, order_phi=order_p))
        else:
            out.append(row)
    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["arc_id", "h", "error_u", "error_v", "error_phi",
                        "order_u", "order_v", "order_phi"])
            for row in out:
                for arc_id in row.errors_u:
                    w.writerow([arc_id, row.h[arc_id],
                                row.errors_u[arc_id], row.errors_v[arc_id],
                                row.errors_phi.get(arc_id, ""),
                                row.order_u, row.order_v, row.order_phi])
    return out


# ---------------------------------------------------------------------------
# JSON configuration

def config_from_dict(doc: dict) -> RunConfig:
    try:
        arcs = [ArcSpec(int(a["id"]), float(a["length"]), float(a["lambda"]),
                        float(a.get("diffusivity", 1.0)),
                        float(a.get("production", 1.0)),
                        float(a.get("degradation", 1.0)))
                for a in doc["arcs"]]
        nodes = [NodeSpec(int(n["id"]), n["incoming"], n["outgoing"],
                          n["xi"], n.get("kappa"))
                 for n in doc.get("nodes", [])]
        net = NetworkSpec(arcs, nodes,
                          doc.get("outer_incoming", []),
                          doc.get("outer_outgoing", []))
        initial = {}
        for entry in doc["initial"]:
            arc_id = int(entry["arc"])
            initial[arc_id] = InitialCondition(
                kind=entry.get("kind", "constant"),
                base=float(entry.get("base", 0.0)),
                amplitude=float(entry.get("amplitude", 0.0)),
                periods=int(entry.get("periods", 1)),
                center=float(entry.get("center", 0.5)),
                width=float(entry.get("width", 0.1)),
                phi=entry.get("phi", "equal_to_u"))
        alphas = {int(a["id"]): float(a["alpha"])
                  for a in doc["arcs"] if "alpha" in a}
        return RunConfig(
            net=net,
            k=float(doc["time_step"]),
            final_time=float(doc["final_time"]),
            model=doc.get("model", "full"),
            initial=initial,
            alphas=alphas,
            nu=float(doc.get("nu", 0.5)),
            steady_tolerance=float(doc.get("steady_tolerance", 1e-7)),
            blowup_factor=float(doc.get("blowup_threshold", DEFAULT_BLOWUP_FACTOR)),
            snapshot_every=float(doc.get("snapshot_every", 0.0)),
            phi_closure=doc.get("phi_closure", "conservative"),
            stop_on_steady=bool(doc.get("stop_on_steady", True)),
            name=doc.get("name", "run"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad configuration document: {exc}") from exc


def load_config(path: str | Path) -> RunConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))
