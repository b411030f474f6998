"""Network topology, per-arc physics and node coupling data.

Arcs are parametrized as intervals [0, L]. An arc whose right end (x = L)
touches a node is *incoming* at that node; an arc whose left end (x = 0)
touches it is *outgoing*. Arc ends not attached to any node lie on the
outer boundary: ``outer_incoming`` collects arcs whose left end is outer,
``outer_outgoing`` those whose right end is outer.

Node transmission matrices are indexed by position in the concatenated
list ``incoming + outgoing`` so that an arc may legally appear on both
sides of the same node (a loop).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

FLUX_RTOL = 1e-12       # relative tolerance for the speed-weighted column sums
ROWSUM_ATOL = 1e-12     # absolute tolerance for dissipative row sums
GRID_RTOL = 1e-9        # relative tolerance for grid divisibility
KERNEL_RTOL = 1e-10     # singular-value cutoff for kernel dimension


class NetworkError(ValueError):
    """Structural problem: ids that do not resolve, malformed matrices."""


class GridError(ValueError):
    """Space/time step pair incompatible with an arc length."""

    def __init__(self, message: str, suggested_k: tuple[float, float] | None = None):
        super().__init__(message)
        self.suggested_k = suggested_k


@dataclass(frozen=True)
class ArcSpec:
    """One arc: length, wave speed and chemoattractant physics."""

    id: int
    length: float
    speed: float            # lambda, modulus of the cell velocity
    diffusivity: float = 1.0
    production: float = 1.0  # a, chemoattractant production rate
    degradation: float = 1.0  # b, chemoattractant degradation rate

    def __post_init__(self):
        if self.length <= 0:
            raise NetworkError(f"arc {self.id}: length must be positive")
        if self.speed <= 0:
            raise NetworkError(f"arc {self.id}: speed must be positive")
        if self.diffusivity <= 0:
            raise NetworkError(f"arc {self.id}: diffusivity must be positive")
        if self.production < 0 or self.degradation < 0:
            raise NetworkError(f"arc {self.id}: production/degradation must be nonnegative")


@dataclass(frozen=True)
class NodeSpec:
    """One junction: ordered arc lists and the xi / kappa coupling matrices.

    ``xi[i, j]`` weights the contribution of the characteristic entering the
    node from position ``j`` to the one leaving into position ``i``;
    positions run over ``incoming + outgoing``.  ``kappa`` is the symmetric
    membrane-permeability matrix of the chemoattractant coupling.
    """

    id: int
    incoming: tuple[int, ...]
    outgoing: tuple[int, ...]
    xi: np.ndarray
    kappa: np.ndarray

    def __init__(self, id, incoming, outgoing, xi, kappa=None):
        object.__setattr__(self, "id", int(id))
        object.__setattr__(self, "incoming", tuple(int(a) for a in incoming))
        object.__setattr__(self, "outgoing", tuple(int(a) for a in outgoing))
        n = len(self.incoming) + len(self.outgoing)
        xi = np.array(xi, dtype=float)
        if xi.shape != (n, n):
            raise NetworkError(f"node {self.id}: xi must be {n}x{n}, got {xi.shape}")
        if kappa is None:
            kappa = np.zeros((n, n))
        kappa = np.array(kappa, dtype=float)
        if kappa.shape != (n, n):
            raise NetworkError(f"node {self.id}: kappa must be {n}x{n}, got {kappa.shape}")
        if np.any(xi < 0) or np.any(xi > 1):
            raise NetworkError(f"node {self.id}: xi entries must lie in [0, 1]")
        if np.any(kappa < 0):
            raise NetworkError(f"node {self.id}: kappa entries must be nonnegative")
        if not np.array_equal(kappa, kappa.T):
            raise NetworkError(f"node {self.id}: kappa must be symmetric as stored")
        if np.any(np.diag(kappa) != 0.0):
            raise NetworkError(f"node {self.id}: kappa diagonal must be zero")
        xi.setflags(write=False)
        kappa.setflags(write=False)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "kappa", kappa)

    @property
    def arc_ids(self) -> tuple[int, ...]:
        return self.incoming + self.outgoing

    def degree(self) -> int:
        return len(self.incoming) + len(self.outgoing)


@dataclass(frozen=True)
class NetworkSpec:
    """A connected graph of arcs and nodes with explicit outer boundaries."""

    arcs: tuple[ArcSpec, ...]
    nodes: tuple[NodeSpec, ...]
    outer_incoming: frozenset[int]   # arcs whose left end (x=0) is outer
    outer_outgoing: frozenset[int]   # arcs whose right end (x=L) is outer

    def __init__(self, arcs, nodes=(), outer_incoming=(), outer_outgoing=()):
        object.__setattr__(self, "arcs", tuple(arcs))
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "outer_incoming", frozenset(int(a) for a in outer_incoming))
        object.__setattr__(self, "outer_outgoing", frozenset(int(a) for a in outer_outgoing))
        self._check_structure()

    def arc(self, arc_id: int) -> ArcSpec:
        try:
            return self._arc_map[arc_id]
        except (AttributeError, KeyError):
            m = {a.id: a for a in self.arcs}
            object.__setattr__(self, "_arc_map", m)
            if arc_id not in m:
                raise NetworkError(f"unknown arc id {arc_id}")
            return m[arc_id]

    @property
    def arc_ids(self) -> list[int]:
        return [a.id for a in self.arcs]

    def total_length(self) -> float:
        return sum(a.length for a in self.arcs)

    def speeds(self) -> dict[int, float]:
        return {a.id: a.speed for a in self.arcs}

    def _check_structure(self):
        ids = [a.id for a in self.arcs]
        if len(set(ids)) != len(ids):
            raise NetworkError("duplicate arc ids")
        known = set(ids)
        right_ends: dict[int, int] = {i: 0 for i in ids}
        left_ends: dict[int, int] = {i: 0 for i in ids}
        for node in self.nodes:
            for a in node.arc_ids:
                if a not in known:
                    raise NetworkError(f"node {node.id} references unknown arc {a}")
            for a in node.incoming:
                right_ends[a] += 1
            for a in node.outgoing:
                left_ends[a] += 1
        for a in self.outer_outgoing:
            if a not in known:
                raise NetworkError(f"outer boundary references unknown arc {a}")
            right_ends[a] += 1
        for a in self.outer_incoming:
            if a not in known:
                raise NetworkError(f"outer boundary references unknown arc {a}")
            left_ends[a] += 1
        for a in ids:
            if right_ends[a] != 1:
                raise NetworkError(f"arc {a}: right end attached {right_ends[a]} times, expected 1")
            if left_ends[a] != 1:
                raise NetworkError(f"arc {a}: left end attached {left_ends[a]} times, expected 1")
        if not self._connected():
            raise NetworkError("graph is not connected")

    def _connected(self) -> bool:
        if len(self.arcs) <= 1:
            return True
        # arcs are vertices of the adjacency relation "share a node"
        parent = {a.id: a.id for a in self.arcs}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for node in self.nodes:
            ids = node.arc_ids
            for other in ids[1:]:
                ra, rb = find(ids[0]), find(other)
                if ra != rb:
                    parent[ra] = rb
        roots = {find(a.id) for a in self.arcs}
        return len(roots) == 1


@dataclass(frozen=True)
class GridSpec:
    """Per-arc space steps tied to a shared time step.

    ``h[i] = k * speed_i / nu`` with the consistency value ``nu = 1/2``
    giving ``h = 2 k lambda``; smaller ``nu`` keeps the grid proportions
    but steps more often.  ``h`` is stored as ``L / (M + 1)`` exactly.
    """

    k: float
    nu: float
    h: dict[int, float]
    m: dict[int, int]          # M_i: number of interior points; M_i+2 points total

    def points(self, arc: ArcSpec) -> np.ndarray:
        return np.arange(self.m[arc.id] + 2) * self.h[arc.id]

    def npoints(self, arc_id: int) -> int:
        return self.m[arc_id] + 2


def validate_flux_conservation(node: NodeSpec, arcs) -> list[tuple[int, float]]:
    """Check the speed-weighted column sums of xi against each arc speed.

    Returns one ``(position_arc_id, residual)`` entry per violated column;
    an empty report means sum_i lambda_i xi[i, j] = lambda_j holds for all j
    within ``FLUX_RTOL`` relative.
    """
    speed = _speed_lookup(node, arcs)
    lam = np.array([speed[a] for a in node.arc_ids])
    col = lam @ node.xi
    report = []
    for j, arc_id in enumerate(node.arc_ids):
        residual = col[j] - lam[j]
        if abs(residual) > FLUX_RTOL * lam[j]:
            report.append((arc_id, float(residual)))
    return report


def validate_dissipative(node: NodeSpec) -> tuple[bool, np.ndarray]:
    """True iff every xi row sums to one (entries already confined to [0,1])."""
    row_sums = node.xi.sum(axis=1)
    ok = bool(np.all(np.abs(row_sums - 1.0) <= ROWSUM_ATOL))
    return ok, row_sums


def validate_network(net: NetworkSpec) -> list[str]:
    """Run every structural validator; returns human-readable violations."""
    problems = []
    for node in net.nodes:
        for arc_id, residual in validate_flux_conservation(node, net.arcs):
            problems.append(
                f"node {node.id}: flux conservation violated on column of arc "
                f"{arc_id} (residual {residual:.3e})")
    return problems


def two_arc_dissipative_family(lam1: float, lam2: float, xi11: float) -> np.ndarray:
    """The one-parameter dissipative family for one incoming / one outgoing arc.

    Given ``xi11`` in ``[max(0, (lam1-lam2)/lam1), 1]`` the remaining
    coefficients are forced: ``xi12 = 1 - xi11``, ``xi21 = lam1/lam2 (1 - xi11)``,
    ``xi22 = 1 - xi21``.
    """
    lo = max(0.0, (lam1 - lam2) / lam1)
    if not (lo <= xi11 <= 1.0):
        raise ValueError(
            f"xi11={xi11} outside the admissible interval [{lo}, 1] "
            f"for speeds ({lam1}, {lam2})")
    xi12 = 1.0 - xi11
    xi21 = lam1 / lam2 * (1.0 - xi11)
    xi22 = 1.0 - xi21
    return np.array([[xi11, xi12], [xi21, xi22]])


def build_grid(net: NetworkSpec, k: float, nu: float = 0.5) -> GridSpec:
    """Build per-arc grids with ``h_i = k * lambda_i / nu``.

    Rejects the pair when any ``L_i / h_i`` is not an integer within
    ``GRID_RTOL`` relative, reporting the two nearest admissible values
    of ``k``.
    """
    if k <= 0:
        raise GridError("time step must be positive")
    if not (0 < nu <= 0.5):
        raise GridError("nu must lie in (0, 1/2]")
    h, m = {}, {}
    for arc in net.arcs:
        target = k * arc.speed / nu
        cells = arc.length / target
        n = round(cells)
        if n < 1 or abs(cells - n) > GRID_RTOL * max(1.0, cells):
            lo, hi = admissible_time_steps(net, k, nu)
            raise GridError(
                f"arc {arc.id}: L/h = {cells:.12g} is not an integer for k={k}; "
                f"nearest admissible k: {lo:.12g} (finer), {hi:.12g} (coarser)",
                suggested_k=(lo, hi))
        m[arc.id] = n - 1
        h[arc.id] = arc.length / n   # exact (M+1) h = L in the stored value
    return GridSpec(k=k, nu=nu, h=h, m=m)


def admissible_time_steps(net: NetworkSpec, k_target: float, nu: float = 0.5
                          ) -> tuple[float, float]:
    """Nearest time steps below/above ``k_target`` giving integer cell counts.

    All arcs must satisfy ``L_i = N_i k lambda_i / nu`` simultaneously;
    admissible ``k`` are ``L_0 nu / (lambda_0 N)`` with ``N`` a multiple of a
    base count derived from the pairwise length/speed ratios.
    """
    arcs = net.arcs
    a0 = arcs[0]
    # N_i / N_0 = (L_i lambda_0) / (L_0 lambda_i): N_0 must clear denominators
    base = 1
    for arc in arcs[1:]:
        r = Fraction(arc.length * a0.speed / (a0.length * arc.speed)).limit_denominator(10 ** 9)
        base = base * r.denominator // math.gcd(base, r.denominator)
    n_exact = a0.length * nu / (a0.speed * k_target)
    n_lo = max(base, math.floor(n_exact / base) * base)
    n_hi = max(base, math.ceil(n_exact / base) * base)
    if n_lo == n_hi:
        n_hi += base
    k_of = lambda n: a0.length * nu / (a0.speed * n)
    return k_of(n_hi), k_of(n_lo)   # (finer = smaller k, coarser = larger k)


def node_exchange_matrix(node: NodeSpec, arcs) -> np.ndarray:
    """Matrix with entries ``lambda_j (xi[i,j] - delta_ij)`` over node positions.

    Its kernel carries the stationary node values of the simplified model;
    the flux-conservation condition makes it singular by construction.
    """
    speed = _speed_lookup(node, arcs)
    lam = np.array([speed[a] for a in node.arc_ids])
    n = node.degree()
    return (node.xi - np.eye(n)) * lam[np.newaxis, :]


def kernel_dimension_check(node: NodeSpec, arcs) -> int:
    """Rank deficiency of the node exchange matrix (numeric, via SVD)."""
    m = node_exchange_matrix(node, arcs)
    s = np.linalg.svd(m, compute_uv=False)
    scale = s[0] if s[0] > 0 else 1.0
    return int(np.sum(s <= KERNEL_RTOL * max(scale, 1.0)))


def _speed_lookup(node: NodeSpec, arcs) -> dict[int, float]:
    if isinstance(arcs, NetworkSpec):
        arcs = arcs.arcs
    speed = {a.id: a.speed for a in arcs}
    for a in node.arc_ids:
        if a not in speed:
            raise NetworkError(f"node {node.id} references unknown arc {a}")
    return speed
