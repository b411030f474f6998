"""Crank-Nicolson solver for the chemoattractant on the network.

Interior points follow the standard CN discretization of
``phi_t - D phi_xx = a u - b phi``.  Boundary rows close the system in one
of two ways:

* ``"conservative"`` (default): half-cell flux balances.  The boundary
  point evolves like a half cell exchanging the one-sided interior flux
  and, at nodes, the membrane flux ``kappa_ij (phi_j - phi_i)``.  With a
  symmetric kappa the total trapezoid mass of phi is conserved to
  round-off when sources vanish.
* ``"extrapolation"``: algebraic second-order rows.  Outer ends impose
  the one-sided zero-derivative extrapolation
  ``phi_0 = 4/3 phi_1 - 1/3 phi_2``; node ends the analogous row with the
  membrane sum folded into the diagonal weight
  ``eta = 1 + (2/3)(h/D) sum_j kappa_ij``.  These rows reproduce the
  derivative conditions to second order but let the trapezoid mass drift
  at truncation level, so the conservative closure is the default.

All arcs are solved in one sparse system; the matrix is factorized once
per run and only the right-hand side changes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .network import GridSpec, NetworkSpec

CLOSURES = ("conservative", "extrapolation")


class ChemoConfigError(ValueError):
    """Degenerate parameters: singular assembly or stencil that does not fit."""


@dataclass
class PhiState:
    """Per-arc chemoattractant arrays, M_i + 2 entries each."""

    phi: list[np.ndarray]

    def copy(self) -> "PhiState":
        return PhiState([a.copy() for a in self.phi])

    def finite(self) -> bool:
        return all(np.isfinite(a).all() for a in self.phi)


class CNSystem:
    """Factorized implicit matrix plus the explicit-side assembler."""

    def __init__(self, net: NetworkSpec, grid: GridSpec, k: float,
                 closure: str = "conservative"):
        if closure not in CLOSURES:
            raise ChemoConfigError(f"unknown closure {closure!r}; pick one of {CLOSURES}")
        self.net = net
        self.grid = grid
        self.k = k
        self.closure = closure
        self.offset: dict[int, int] = {}
        pos = 0
        for arc in net.arcs:
            self.offset[arc.id] = pos
            pos += grid.npoints(arc.id)
            if grid.m[arc.id] < 2:
                raise ChemoConfigError(
                    f"arc {arc.id}: boundary stencils need M >= 2, got M={grid.m[arc.id]}")
        self.size = pos
        rows, cols, vals = [], [], []

        def put(i, j, v):
            rows.append(i)
            cols.append(j)
            vals.append(v)

        for arc in net.arcs:
            off = self.offset[arc.id]
            M, h = grid.m[arc.id], grid.h[arc.id]
            r = arc.diffusivity * k / (2 * h * h)
            bh = arc.degradation * k / 2
            for j in range(1, M + 1):
                put(off + j, off + j, 1 + 2 * r + bh)
                put(off + j, off + j - 1, -r)
                put(off + j, off + j + 1, -r)

        # outer ends
        for arc in net.arcs:
            off = self.offset[arc.id]
            M, h = grid.m[arc.id], grid.h[arc.id]
            if arc.id in net.outer_incoming:    # left end outer
                self._outer_row(put, arc, off, h, inward=+1)
            if arc.id in net.outer_outgoing:    # right end outer
                self._outer_row(put, arc, off + M + 1, h, inward=-1)

        # node ends
        for node in net.nodes:
            ids = node.arc_ids
            n_in = len(node.incoming)
            end_index = []
            for pos_, arc_id in enumerate(ids):
                off = self.offset[arc_id]
                M = grid.m[arc_id]
                end_index.append(off + M + 1 if pos_ < n_in else off)
            for pos_, arc_id in enumerate(ids):
                arc = net.arc(arc_id)
                off = self.offset[arc_id]
                M, h = grid.m[arc_id], grid.h[arc_id]
                row = end_index[pos_]
                inward = -1 if pos_ < n_in else +1
                kap = node.kappa[pos_]
                if closure == "extrapolation":
                    eta = 1 + (2.0 / 3.0) * (h / arc.diffusivity) * kap.sum()
                    put(row, row, eta)
                    put(row, row + inward, -4.0 / 3.0)
                    put(row, row + 2 * inward, 1.0 / 3.0)
                    for q in range(len(ids)):
                        if kap[q] != 0.0:
                            put(row, end_index[q],
                                -(2.0 / 3.0) * (h / arc.diffusivity) * kap[q])
                else:
                    r = arc.diffusivity * k / (h * h)
                    bh = arc.degradation * k / 2
                    csum = k * kap.sum() / (h / 2)
                    put(row, row, 1 + r + bh + csum / 2)
                    put(row, row + inward, -r)
                    for q in range(len(ids)):
                        if kap[q] != 0.0:
                            cq = k * kap[q] / (h / 2)
                            put(row, end_index[q], -cq / 2)

        self.matrix = sp.csc_matrix(sp.coo_matrix((vals, (rows, cols)),
                                                  shape=(self.size, self.size)))
        try:
            self.lu = spla.splu(self.matrix)
        except RuntimeError as exc:
            raise ChemoConfigError(f"singular chemoattractant system: {exc}") from exc

    def _outer_row(self, put, arc, row, h, inward):
        if self.closure == "extrapolation":
            put(row, row, 1.0)
            put(row, row + inward, -4.0 / 3.0)
            put(row, row + 2 * inward, 1.0 / 3.0)
        else:
            r = arc.diffusivity * self.k / (h * h)
            bh = arc.degradation * self.k / 2
            put(row, row, 1 + r + bh)
            put(row, row + inward, -r)

    def rhs(self, phi: PhiState, u_old: list[np.ndarray], u_new: list[np.ndarray]
            ) -> np.ndarray:
        net, grid, k = self.net, self.grid, self.k
        out = np.zeros(self.size)
        for idx, arc in enumerate(net.arcs):
            off = self.offset[arc.id]
            M, h = grid.m[arc.id], grid.h[arc.id]
            p, uo, un = phi.phi[idx], u_old[idx], u_new[idx]
            r = arc.diffusivity * k / (2 * h * h)
            bh = arc.degradation * k / 2
            src = arc.production * k / 2 * (un + uo)
            j = slice(1, M + 1)
            out[off + 1: off + M + 1] = ((1 - 2 * r - bh) * p[j]
                                         + r * (p[2:M + 2] + p[0:M])
                                         + src[j])
            if self.closure == "conservative":
                rr = arc.diffusivity * k / (h * h)
                if arc.id in net.outer_incoming:
                    out[off] = (1 - rr - bh) * p[0] + rr * p[1] + src[0]
                if arc.id in net.outer_outgoing:
                    out[off + M + 1] = (1 - rr - bh) * p[M + 1] + rr * p[M] + src[M + 1]
            # extrapolation boundary rows keep zero right-hand side
        if self.closure == "conservative":
            for node in net.nodes:
                ids = node.arc_ids
                n_in = len(node.incoming)
                end_vals = []
                for pos_, arc_id in enumerate(ids):
                    idx = net.arc_ids.index(arc_id)
                    end_vals.append(phi.phi[idx][-1] if pos_ < n_in else phi.phi[idx][0])
                for pos_, arc_id in enumerate(ids):
                    arc = net.arc(arc_id)
                    idx = net.arc_ids.index(arc_id)
                    off = self.offset[arc_id]
                    M, h = grid.m[arc_id], grid.h[arc_id]
                    p, uo, un = phi.phi[idx], u_old[idx], u_new[idx]
                    rr = arc.diffusivity * k / (h * h)
                    bh = arc.degradation * k / 2
                    kap = node.kappa[pos_]
                    csum = k * kap.sum() / (h / 2)
                    if pos_ < n_in:
                        row, j, inner = off + M + 1, M + 1, M
                    else:
                        row, j, inner = off, 0, 1
                    kk = sum(k * kap[q] / (h / 2) / 2 * end_vals[q] for q in range(len(ids)))
                    out[row] = ((1 - rr - bh - csum / 2) * p[j] + rr * p[inner]
                                + kk + arc.production * k / 2 * (un[j] + uo[j]))
        return out

    def solve(self, phi: PhiState, u_old, u_new) -> PhiState:
        sol = self.lu.solve(self.rhs(phi, u_old, u_new))
        if not np.isfinite(sol).all():
            raise ChemoConfigError("chemoattractant solve produced non-finite values")
        arrs = []
        for arc in self.net.arcs:
            off = self.offset[arc.id]
            arrs.append(sol[off: off + self.grid.npoints(arc.id)].copy())
        return PhiState(arrs)

    def dense_matrix(self) -> np.ndarray:
        """Dense copy of the implicit matrix, for inspection and tests."""
        return self.matrix.toarray()


def assemble_cn_system(net: NetworkSpec, grid: GridSpec, k: float | None = None,
                       closure: str = "conservative") -> CNSystem:
    """Build and factorize the time-invariant implicit system."""
    return CNSystem(net, grid, grid.k if k is None else k, closure)


def phi_step(phi: PhiState, u_old: list[np.ndarray], u_new: list[np.ndarray],
             system: CNSystem) -> PhiState:
    """Advance phi by one step; u_new is the already-updated cell density."""
    return system.solve(phi, u_old, u_new)


def reconstruct_phi_gradient(phi_arc: np.ndarray, h: float) -> np.ndarray:
    """Second-order derivative reconstruction on one arc.

    Central differences at interior points, one-sided three-point formulas
    at the two boundary indices; exact on quadratics everywhere.
    """
    if len(phi_arc) < 4:
        raise ChemoConfigError("gradient stencil needs at least 4 points (M >= 2)")
    g = np.empty_like(phi_arc)
    g[1:-1] = (phi_arc[2:] - phi_arc[:-2]) / (2 * h)
    g[0] = (-phi_arc[2] + 4 * phi_arc[1] - 3 * phi_arc[0]) / (2 * h)
    g[-1] = (phi_arc[-3] - 4 * phi_arc[-2] + 3 * phi_arc[-1]) / (2 * h)
    return g


def phi_gradient(phi: PhiState, net: NetworkSpec, grid: GridSpec) -> list[np.ndarray]:
    return [reconstruct_phi_gradient(p, grid.h[a.id])
            for p, a in zip(phi.phi, net.arcs)]


def chemotactic_source(u: list[np.ndarray], phi_x: list[np.ndarray]) -> list[np.ndarray]:
    """Pointwise source f = phi_x * u, arc by arc."""
    if len(u) != len(phi_x):
        raise ValueError("u and phi_x must have one array per arc")
    out = []
    for a, g in zip(u, phi_x):
        if a.shape != g.shape:
            raise ValueError("u and phi_x arrays must have matching shapes")
        out.append(g * a)
    return out
