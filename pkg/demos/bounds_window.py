"""Feasibility window for the XX coupling.

Evaluates the four analytic bounds (lift, steer, sep, sink) on a small
shared-structure instance and shows how the window closes as the plain
penalty grows.
"""

from xxanneal.bounds import jxx_bounds, jzz_steer_bound
from xxanneal.instances import SHARED

m, m_r, m_g, n_c, gamma2 = 3, 2, 5, 9, 3.0

print(f"instance class: m={m}, m_r={m_r}, m_g={m_g}, n_c={n_c}, gamma2={gamma2}")
print(f"steering penalty bound: jzz <= {jzz_steer_bound(m, m_r, n_c)}")
print()
print("  jzz   lift   steer    sep    sink   window")
for jzz in (2.0, 3.0, 4.0, 4.5, 6.0):
    rep = jxx_bounds(m, m_r, m_g, n_c, gamma2, jzz, SHARED)
    win = rep.window
    wtxt = f"[{win[0]:.3g}, {win[1]:.3g}]" if win else "empty"
    print(f"  {jzz:3.1f}  {rep.jxx_lift:5.2f}  {rep.jxx_steer:5.2f}"
          f"  {rep.jxx_sep:5.2f}  {rep.jxx_sink:5.2f}   {wtxt}")

rep = jxx_bounds(m, m_r, m_g, n_c, gamma2, 3.0, SHARED)
print()
print(f"witness coupling 2(m-1) = {rep.witness}; "
      f"violated bounds at the witness: {rep.violated(rep.witness) or 'none'}")
