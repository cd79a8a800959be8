"""Mixed states: certified brackets and their certificates.

Run with ``python3 demos/mixed_states.py`` (about half a minute).
"""

import numpy as np

from entgauge.norm import VSetSpec, certified_norm_upper, fermionic_coupling, q_bracket
from entgauge.state_io import generate

# The uniform mixture of all Slater determinants of basis vectors.
tracial = generate("tracial_wedge", {"n": 3, "k": 2})
for family in ("wedge", "tensor"):
    spec = VSetSpec(2, 3, family)
    b = q_bracket(tracial, spec)
    d, w = b.decomposition, b.witness
    print(f"{family:>6}: [{b.lower:.10f}, {b.upper:.10f}]")
    print(f"        upper from {len(d.coefficients)} columns, residual cost {d.residual_cost:.2e}")
    print(f"        lower from witness '{w.source}', certified norm "
          f"{certified_norm_upper(w.operator, spec):.12f}")

# A separable mixture of product states sits at the threshold.
mix = generate("product_mixture", {"n": 2, "terms": 4}, seed=3)
print("\nproduct mixture:", q_bracket(mix, VSetSpec(2, 2)))

# Random fermionic mixtures: the tensor bracket, divided by 2, must meet the
# wedge bracket.  Their intersection tightens the wedge value.
rng = np.random.default_rng(5)
for j in range(3):
    phi = generate("mixed_sector", {"n": 4, "k": 2, "rank": 2}, rng)
    c = fermionic_coupling(phi)
    print(f"\nmixture {j}: q^⊗/2 in [{c.scaled[0]:.6f}, {c.scaled[1]:.6f}]")
    print(f"           q^∧   in [{c.wedge.lower:.6f}, {c.wedge.upper:.6f}]")
    print(f"           tightened [{c.tightened[0]:.6f}, {c.tightened[1]:.6f}]")
