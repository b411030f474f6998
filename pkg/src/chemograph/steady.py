"""Analytic stationary-solution oracles.

Two closed forms are provided: the exponential profiles of the simplified
model (constant drift in place of the chemotactic gradient) on a two-arc
network, and the constant-by-arc steady state of the full system under
dissipative coupling with a common production/degradation ratio.  General
steady states are reached by time marching and detected by the residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import (NetworkSpec, node_exchange_matrix, validate_dissipative,
                      KERNEL_RTOL)


class SteadyStateError(ValueError):
    """Oracle preconditions violated (topology, dissipativity, ratios)."""


@dataclass(frozen=True)
class SimplifiedStationary:
    """Exponential stationary profiles u_i(x) = C_i exp(alpha x / lambda_i^2)."""

    amplitudes: tuple[float, ...]       # C_i, ordered like net.arcs
    normalized: tuple[float, ...]       # the kernel vector (C-tilde)
    alpha: float
    speeds: tuple[float, ...]

    def density(self, arc_index: int, x: np.ndarray) -> np.ndarray:
        lam = self.speeds[arc_index]
        if self.alpha == 0.0:
            return np.full_like(np.asarray(x, dtype=float), self.amplitudes[arc_index])
        return self.amplitudes[arc_index] * np.exp(self.alpha * np.asarray(x) / lam ** 2)

    def flux(self, arc_index: int, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class ConstantSteadyState:
    density: float
    flux: float
    chemoattractant: float


def simplified_stationary(net: NetworkSpec, alpha: float, mu0: float
                          ) -> SimplifiedStationary:
    """Stationary state of the simplified model on a two-arc, one-node network.

    The node values solve the kernel problem of the exchange matrix; the
    remaining free factor is fixed by the total mass mu0.
    """
    if len(net.nodes) != 1 or len(net.arcs) != 2:
        raise SteadyStateError("closed form requires exactly two arcs and one node")
    node = net.nodes[0]
    if len(node.incoming) != 1 or len(node.outgoing) != 1:
        raise SteadyStateError("closed form requires one incoming and one outgoing arc")
    for arc in net.arcs:
        if abs(alpha) >= arc.speed:
            raise SteadyStateError(
                f"drift {alpha} must be strictly below the speed of arc {arc.id}")

    m = node_exchange_matrix(node, net.arcs)
    _, s, vt = np.linalg.svd(m)
    if s[0] > 0 and s[-1] > KERNEL_RTOL * s[0] * max(1.0, 1.0):
        raise SteadyStateError("node exchange matrix has trivial kernel")
    deficiency = int(np.sum(s <= KERNEL_RTOL * max(s[0], 1.0)))
    if deficiency != 1:
        raise SteadyStateError(
            f"kernel dimension {deficiency} != 1: stationary family is ambiguous")
    w = vt[-1]
    w = w * np.sign(w[np.argmax(np.abs(w))])   # Perron normalization: all positive
    if np.any(w <= 0):
        raise SteadyStateError("kernel vector is not sign-definite")

    # kernel vector is ordered by node position (incoming first); map to arc order
    ctil_by_id = {arc_id: w[pos] for pos, arc_id in enumerate(node.arc_ids)}
    incoming_id = node.incoming[0]

    amplitudes = []
    mass = 0.0
    for arc in net.arcs:
        lam, length = arc.speed, arc.length
        ct = ctil_by_id[arc.id]
        if arc.id == incoming_id:
            c = lam * ct * (np.exp(-alpha * length / lam ** 2) if alpha != 0.0 else 1.0)
        else:
            c = lam * ct
        if alpha == 0.0:
            mass += c * length
        else:
            mass += c * lam ** 2 / alpha * (np.exp(alpha * length / lam ** 2) - 1.0)
        amplitudes.append(c)
    scale = mu0 / mass
    return SimplifiedStationary(
        amplitudes=tuple(scale * c for c in amplitudes),
        normalized=tuple(scale * ctil_by_id[a.id] for a in net.arcs),
        alpha=alpha,
        speeds=tuple(a.speed for a in net.arcs),
    )


def constant_steady_state(net: NetworkSpec, mu0: float) -> ConstantSteadyState:
    """Constant-by-arc steady state (U, 0, alpha U) with U = mu0 / sum(L).

    Requires dissipative coupling at every node and a common a/b ratio;
    otherwise no nontrivial constant stationary solution exists and the
    oracle refuses.
    """
    for node in net.nodes:
        ok, row_sums = validate_dissipative(node)
        if not ok:
            raise SteadyStateError(
                f"node {node.id} is not dissipative (row sums {row_sums}); "
                "no nontrivial constant stationary solution exists")
    ratios = []
    for arc in net.arcs:
        if arc.degradation == 0:
            raise SteadyStateError(f"arc {arc.id}: degradation must be positive")
        ratios.append(arc.production / arc.degradation)
    if max(ratios) - min(ratios) > 1e-12 * max(1.0, abs(ratios[0])):
        raise SteadyStateError(
            f"production/degradation ratios differ across arcs ({ratios}); "
            "no constant stationary solution exists")
    u = mu0 / net.total_length()
    return ConstantSteadyState(density=u, flux=0.0, chemoattractant=ratios[0] * u)


def steady_residual(previous, current, k: float) -> float:
    """max |w_new - w_old| / k over all supplied per-arc arrays.

    ``previous`` and ``current`` are equal-length sequences of arrays
    (mix u, v and phi as appropriate for the model).
    """
    worst = 0.0
    for old, new in zip(previous, current):
        worst = max(worst, float(np.max(np.abs(new - old))))
    return worst / k
