"""Twelve arcs joined by four internal nodes: a ring of four arcs with two
outer spokes at each corner.  The transmission coefficients are deliberately
non-dissipative, so the asymptotic state is non-constant and the inner ring
carries a nonzero (but spatially constant) steady flux, while the fluxes of
the outer-connected arcs vanish.

Takes about a minute at the bundled resolution.
"""

import chemograph as cg

cfg = cg.preset("twelve_arc")
print(f"{len(cfg.net.arcs)} arcs, {len(cfg.net.nodes)} nodes; "
      f"h = {cfg.k * 10 / cfg.nu:g}, k = {cfg.k:g}")

result = cg.run(cfg, out_dir="demo_out/twelve_arc")
print(f"finished at t = {result.records[-1].t:g}; "
      f"mass drift {result.max_mass_drift:.2e}\n")

print(f"{'arc':>4} {'kind':>6} {'flux mean':>12} {'flux spread':>12} {'density range':>22}")
for idx, arc in enumerate(result.net.arcs):
    v = result.state.v[idx]
    u = result.state.u[idx]
    kind = "ring" if arc.id in (1, 2, 3, 4) else "spoke"
    print(f"{arc.id:>4} {kind:>6} {v.mean():>12.5f} {v.max() - v.min():>12.2e} "
          f"{f'[{u.min():.2f}, {u.max():.2f}]':>22}")
