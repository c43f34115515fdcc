"""The decaying memory as a thermodynamic system with a moving temperature.

Each pair looks exactly thermal: its occupation fixes an effective inverse
temperature beta via the Bose distribution. Along the decay, the energy
change of the memory modes equals heat (1/beta) dS step by step, and the
entropy trace bottoms out at exactly zero at the forgetting time.
"""

import numpy as np

from dqmem import thermo
from dqmem.states import Code, MemoryState, ModeParams, theta_from_beta

modes = (ModeParams(0, omega=1.0, gamma=1.0),)
state = MemoryState(modes, Code((0.8,)), 0.0)

print("entropy and effective temperature along the decay (tau = 0.8):\n")
print(f"{'t':>6} {'entropy':>10} {'energy':>10} {'beta':>12}")
# i/10 keeps t = 0.8 the exact double 0.8, so Theta hits exactly zero
for t in (i / 10 for i in range(13)):
    snap = thermo.thermo_snapshot(MemoryState(modes, state.code, float(t)))
    beta = snap.beta_per_mode[0]
    beta_txt = f"{beta:12.4f}" if np.isfinite(beta) else "         inf"
    print(f"{t:6.2f} {snap.entropy:10.6f} {snap.energy:10.6f} {beta_txt}")

print("\nfirst-law ledger on [0.05, 0.75] (stops short of the beta")
print("divergence at tau):")
for n in (51, 101, 201):
    led = thermo.first_law_ledger(state, np.linspace(0.05, 0.75, n))
    total = sum(abs(r) for r, f in zip(led.residual, led.flagged) if not f)
    print(f"  {n - 1:4d} steps: summed |dE - dQ| = {total:.3e}")
print("halving the step quarters the summed residual: the discrete ledger")
print("converges to dE = (1/beta) dS at second order.")

# a code printed from a bath at one temperature fits that beta exactly
beta_bath = 1.3
bath_modes = tuple(ModeParams(i, omega, 1.0)
                   for i, omega in enumerate((0.7, 1.0, 1.9)))
bath_code = Code(tuple(theta_from_beta(beta_bath, m.omega)
                       for m in bath_modes))
snap = thermo.thermo_snapshot(MemoryState(bath_modes, bath_code))
print(f"\nthermal code at beta = {beta_bath}: fitted beta = "
      f"{snap.beta_fit:.10f} (residual {snap.beta_fit_residual:.1e})")
