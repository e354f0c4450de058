"""Angular uncertainty relations, the wrong one and the right ones.

The Robertson-style product Delta L * Delta phi_p >= 1/2 fails on the circle:
the periodic angle spread is bounded by pi/sqrt(3), so a broad state with a
small Delta L slips under the bound.  The coordinate-pair relations

    Delta L * Delta cos >= |<sin>|/2,   Delta L * Delta sin >= |<cos>|/2,

and the combined strict relation Delta L * Delta phi > 1/2 hold for every
state.  This script shows the failure and the repairs on concrete packets.
"""

import numpy as np

import packetlab as pl

window = pl.ModeWindow.symmetric(32)


def show(name, state, f_table=None):
    print(f"--- {name}")
    for m in pl.relation_margins(state, f_table):
        mark = "ok " if m.satisfied else "VIOLATED"
        print(f"  {m.relation.value:15s} lhs = {m.lhs:9.4f}  rhs = {m.rhs:9.4f}  {mark}")
    print()


# A broad, nearly uniform state: tiny Delta L, near-maximal Delta phi_p.
c = np.zeros(window.dimension)
c[32] = 1.0
c[31] = c[33] = 0.05
broad = pl.normalize(c, window)
show("broad packet (naive bound fails, the repaired ones hold)", broad)

# A tightly squeezed packet satisfies everything comfortably.
show("narrow squeezed packet S = 25", pl.css_state(pl.CssParams(25.0, 0), pl.ModeWindow.symmetric(128)))

# Random states: the coordinate relations never fail.
print("--- 200 Haar-random states: worst margins")
worst = {"cos": np.inf, "sin": np.inf, "combined": np.inf}
for seed in range(200):
    rep = pl.moments(pl.random_state(window, seed))
    dl = rep.delta_l
    worst["cos"] = min(worst["cos"], dl * np.sqrt(rep.var_cos) - 0.5 * abs(rep.mean_sin))
    worst["sin"] = min(worst["sin"], dl * np.sqrt(rep.var_sin) - 0.5 * abs(rep.mean_cos))
    worst["combined"] = min(worst["combined"], dl * rep.delta_phi_combined - 0.5)
for k, v in worst.items():
    print(f"  min {k:8s} margin: {v:+.3e}")
print()

# The squeezed family walks the combined bound down toward 1/2 without
# ever reaching it.
print("--- combined product Delta L * Delta phi along the squeezed family")
for S in (1.0, 2.0, 4.0, 8.0):
    rep = pl.css_moments(pl.CssParams(S, 0), pl.ModeWindow.symmetric(64))
    print(f"  S = {S:4.1f}:  product = {rep.delta_l * rep.delta_phi_combined:.6f}  (> 0.5)")
