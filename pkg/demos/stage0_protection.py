"""Stage-0 preparation gap.

Stage 0 ramps the problem term and the XX coupling in while the transverse
field relaxes from Gamma0 to Gamma1.  The gap starts at exactly Gamma0 and
stays protected provided Gamma1 dominates the instance energy scales.
"""

from xxanneal.hamiltonians import stage0_gap_scan
from xxanneal.instances import expand, make_gshare
from xxanneal.schedule import default_config, resolve_jzz_clique

inst = make_gshare(2, [3, 3], 1, jzz=3.0)

for factor in (2.0, 15.0):
    cfg = default_config(2, gamma1_factor=factor)
    graph = expand(inst)
    graph.jzz_clique = resolve_jzz_clique(cfg, inst.m_g)
    rep = stage0_gap_scan(graph, cfg, [i / 20 for i in range(21)])
    print(f"gamma1 = {cfg.gamma1}: initial gap {rep.gaps[0]:.4f}, "
          f"min gap {rep.min_gap:.4f} vs threshold {rep.threshold}, "
          f"protected = {rep.protected}")
