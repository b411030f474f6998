"""Mass and energy bookkeeping, error norms, blow-up and regime classification."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import GridSpec, NetworkSpec
from .scheme import HyperbolicState

DEFAULT_BLOWUP_FACTOR = 1e6     # fires at this multiple of the initial max density
SPIKE_FACTOR = 10.0             # spike = max density above this multiple of the mean
SPIKE_MARGIN_FRACTION = 0.05    # ...located within this fraction of an arc end


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    total_mass: float
    energy: float
    max_abs_u: float
    min_u: float
    steady: bool
    blowup: bool


@dataclass(frozen=True)
class BlowupReport:
    time: float
    arc_id: int
    index: int
    value: float


def trapezoid(arr: np.ndarray, h: float) -> float:
    return float(h * (arr[0] / 2 + arr[1:-1].sum() + arr[-1] / 2))


def discrete_mass(state: HyperbolicState, net: NetworkSpec, grid: GridSpec) -> float:
    """Trapezoid mass of the density over the whole network."""
    return sum(trapezoid(u, grid.h[a.id]) for u, a in zip(state.u, net.arcs))


def phi_mass(phi_arrays, net: NetworkSpec, grid: GridSpec) -> float:
    return sum(trapezoid(p, grid.h[a.id]) for p, a in zip(phi_arrays, net.arcs))


def discrete_energy(state: HyperbolicState, net: NetworkSpec, grid: GridSpec) -> float:
    """Square root of the trapezoid quadrature of u^2 + v^2 / lambda^2."""
    total = 0.0
    for u, v, arc in zip(state.u, state.v, net.arcs):
        total += trapezoid(u * u + v * v / arc.speed ** 2, grid.h[arc.id])
    return math.sqrt(total)


def l1_self_convergence_error(coarse: np.ndarray, fine: np.ndarray, h: float) -> float:
    """L1 distance between nested runs: (h) * sum_l |w_l(h) - w_{2l}(h/2)|.

    ``fine`` must come from an exact 2-refinement of the coarse grid, i.e.
    carry 2*len(coarse) - 1 points; the sum runs over the coarse indices
    0..M (one short of the right boundary, as defined).
    """
    if len(fine) != 2 * len(coarse) - 1:
        raise ValueError(
            f"fine grid must be an exact 2-refinement: {len(fine)} vs {len(coarse)} points")
    m = len(coarse) - 2
    idx = np.arange(0, m + 1)
    return float(h * np.abs(coarse[idx] - fine[2 * idx]).sum())


def convergence_order(error_h: float, error_h2: float) -> float:
    """log2 of the error ratio between steps h and h/2; exact data gives inf."""
    if error_h < 0 or error_h2 < 0:
        raise ValueError("errors must be nonnegative")
    if error_h2 == 0.0:
        return math.inf
    if error_h == 0.0:
        return -math.inf
    return math.log2(error_h / error_h2)


def min_convergence_order(errors_h, errors_h2) -> float:
    """Per-arc orders reduced by min, the network-level order."""
    return min(convergence_order(a, b) for a, b in zip(errors_h, errors_h2))


def detect_blowup(state: HyperbolicState, net: NetworkSpec,
                  threshold: float) -> BlowupReport | None:
    """Fire on non-finite values or density magnitude above ``threshold``."""
    for u, arc in zip(state.u, net.arcs):
        bad = ~np.isfinite(u)
        if bad.any():
            j = int(np.argmax(bad))
            return BlowupReport(state.t, arc.id, j, float("nan"))
        j = int(np.argmax(np.abs(u)))
        if abs(u[j]) > threshold:
            return BlowupReport(state.t, arc.id, j, float(u[j]))
    for v in state.v:
        if not np.isfinite(v).all():
            return BlowupReport(state.t, net.arcs[0].id, 0, float("nan"))
    return None


def classify_regime(summary, spike_factor: float = SPIKE_FACTOR,
                    spike_margin_fraction: float = SPIKE_MARGIN_FRACTION) -> str:
    """One of {"blowup", "boundary_spike", "stable"} for a finished run.

    Blow-up wins outright.  A run that reached steadiness and whose maximum
    density sits within ``spike_margin_fraction`` of an arc length (at least
    two grid cells) of an arc end, exceeding ``spike_factor`` times the mean
    network density, is a boundary spike; anything else counts as stable.
    The margin is measured in physical length so the verdict does not flip
    under mesh refinement.
    """
    if summary.blowup is not None:
        return "blowup"
    if not summary.steady:
        return "stable"
    state, net, grid = summary.state, summary.net, summary.grid
    mean_density = discrete_mass(state, net, grid) / net.total_length()
    best = None
    for u, arc in zip(state.u, net.arcs):
        j = int(np.argmax(u))
        if best is None or u[j] > best[0]:
            best = (float(u[j]), arc, j, len(u))
    peak, arc, j, n = best
    if peak <= spike_factor * mean_density:
        return "stable"
    h = grid.h[arc.id]
    margin = max(spike_margin_fraction * arc.length, 2 * h)
    dist_to_end = min(j, (n - 1) - j) * h
    return "boundary_spike" if dist_to_end <= margin else "stable"
