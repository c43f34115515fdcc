"""Print three coded memories into a registry, then recall with a noisy probe.

Each memory is a code: one squeeze parameter per oscillator pair. Printing
is non-destructive (the registry is a value), and recall is a fidelity
query: the probe's state overlap against every stored entry.
"""

import numpy as np

from dqmem.capacity import fidelity_matrix, new_registry, print_memory
from dqmem.states import Code, MemoryState, ModeParams, overlap

K = 6
modes = tuple(ModeParams(i, omega=1.0, gamma=1.0) for i in range(K))

rng = np.random.default_rng(1)
codes = {
    "breakfast": Code(tuple(rng.uniform(0.1, 1.2, K))),
    "phone-number": Code(tuple(rng.uniform(0.1, 1.2, K))),
    "password": Code(tuple(rng.uniform(0.1, 1.2, K))),
}

registry = new_registry(modes)
for name, code in codes.items():
    registry = print_memory(registry, name, code)
print(f"printed {len(registry.entries)} memories over {registry.k} pairs\n")

fm = fidelity_matrix(registry, t=0.0)
print("pairwise fidelity (distinct codes stay nearly orthogonal):")
for i, row_id in enumerate(fm.ids):
    cells = "  ".join(f"{fm.values[i, j]:.4f}" for j in range(len(fm.ids)))
    print(f"  {row_id:>14}  {cells}")

# a probe that remembers 'password' imperfectly: jitter every theta
true = np.array(codes["password"].thetas)
probe = Code(tuple(np.clip(true + rng.normal(0.0, 0.05, K), 0.0, None)))
probe_state = MemoryState(modes, probe, 0.0)

print("\nrecall scores for the jittered probe:")
best = max(
    ((name, overlap(probe_state, registry.state(name))) for name in fm.ids),
    key=lambda pair: pair[1],
)
for name in fm.ids:
    score = overlap(probe_state, registry.state(name))
    marker = "  <-- best" if name == best[0] else ""
    print(f"  {name:>14}  {score:.4f}{marker}")
print(f"\nrecalled {best[0]!r} with confidence {best[1]:.4f}")
