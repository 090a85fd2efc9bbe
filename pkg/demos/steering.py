"""Structural steering during Stage 1.

With a feasible XX coupling the ground state flows smoothly into the
lowest energy-ordered R-inner blocks; an oversized plain penalty freezes it
on the R-empty block until an abrupt tunneling hand-off.
"""

import numpy as np

from xxanneal.analysis import localization
from xxanneal.instances import make_gdis
from xxanneal.schedule import default_config


def show(jzz, gamma1_factor=2.0):
    inst = make_gdis(10, [9] * 10, 15, jzz=jzz)
    cfg = default_config(10, gamma1_factor=gamma1_factor)
    grid = np.linspace(0.0, cfg.t_sep, 11)
    loc = localization(inst, cfg, grid)
    print(f"\njzz = {jzz}, J_xx = {cfg.jxx} (witness)")
    print("    t    w[L0]   cum<=1  cum<=2")
    for t, w0, c in zip(grid, loc.wl0, loc.cum):
        print(f"  {t:.2f}   {w0:.4f}  {c[1]:.4f}  {c[2]:.4f}")


if __name__ == "__main__":
    show(3.0)        # feasible: steered into the lowest R-blocks
    show(1000.0)     # infeasible: stuck on H_L^(0), then snaps across
