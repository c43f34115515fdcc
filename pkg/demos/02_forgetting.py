"""Watch one memory decay: the dissipative drain erases the code at t = tau.

The effective parameter of a damped pair moves linearly, Theta(t) =
gamma*t - theta, so occupation and entropy fall to exactly zero at the
forgetting time tau = theta/gamma and grow again past it: the register
returns to the empty vacuum and is ready for a fresh print.
"""

import numpy as np

from dqmem.capacity import forgetting_curve
from dqmem.states import Code, ModeParams

theta, gamma = 0.8, 1.0
modes = (ModeParams(0, omega=1.0, gamma=gamma),)
code = Code((theta,))

times = np.linspace(0.0, 2.0, 21)
curve = forgetting_curve(code, modes, times)

print(f"single pair, theta = {theta}, gamma = {gamma}, "
      f"tau = {curve.tau:.3f}\n")
print(f"{'t':>6} {'self-overlap':>14} {'vacuum-overlap':>15} "
      f"{'occupation':>12}")
for t, s, v, n in zip(curve.times, curve.self_overlap,
                      curve.vacuum_overlap, curve.total_occupation):
    marker = "  <-- tau" if abs(t - curve.tau) < 1e-12 else ""
    print(f"{t:6.2f} {s:14.6f} {v:15.6f} {n:12.6f}{marker}")

print("\nvacuum overlap peaks at exactly 1 when the memory is forgotten;")
print("past tau the pair squeezes up again, so the overlap drops back off.")
