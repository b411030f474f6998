"""Regime map over the two wave speeds.

For fixed mass and arc lengths, the pair (lambda1, lambda2) decides the fate
of the run: finite-time blow-up, a steady solution with a large spike pinned
at a boundary, or a plain stable stationary state.  Each cell rebuilds the
dissipative coupling from its one-parameter family and picks an admissible
time step.

A few of the cells run for tens of seconds; the whole map takes a few minutes.
"""

import chemograph as cg

cfg = cg.preset("regime_sweep")
lam1 = [1.0, 3.0, 5.0]
lam2 = [0.5, 1.25, 2.0, 4.0]
cells = cg.sweep(cfg, lam1, lam2, out_path="demo_out/regime_map.csv")

symbol = {"blowup": "+", "boundary_spike": "*", "stable": "x", "skipped": "."}
by_pair = {(c.lam1, c.lam2): c for c in cells}
print("\n      " + "".join(f"l2={v:<6g}" for v in lam2))
for a in lam1:
    row = "".join(f"{symbol[by_pair[(a, b)].classification]:<9}" for b in lam2)
    print(f"l1={a:<3g} {row}")
print("\n+ blow-up   * boundary spike   x stable   . skipped")
for c in cells:
    detail = (f"blow-up at t={c.blowup_time:.2f}" if c.blowup_time is not None
              else f"steady at t={c.steady_time:.2f}" if c.steady_time is not None
              else "ran to the final time")
    print(f"  ({c.lam1:g}, {c.lam2:g}): {c.classification:<15} {detail}")
print("wrote demo_out/regime_map.csv")
