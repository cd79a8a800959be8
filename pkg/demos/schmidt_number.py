"""Rank-bounded measures and the Schmidt number threshold.

Run with ``python3 demos/schmidt_number.py``.
"""

import math

import numpy as np

from entgauge.decompositions import schmidt_rank, slater_rank
from entgauge.norm import VSetSpec, estimate_K_norm, q_bracket, verdict
from entgauge.state_io import generate, xi_k_vector

n = 4
for terms in (1, 2):
    xi = generate("xi_k", {"k": terms, "n": n})
    print(f"ξ_{terms}: Schmidt rank {schmidt_rank(xi)}, Slater rank {slater_rank(xi)}")
    for l in (1, 2):
        for family in ("tensor", "wedge"):
            spec = VSetSpec(2, n, family, l)
            b = q_bracket(xi, spec)
            v = verdict(xi, spec)
            print(f"   l={l} {family:>6}: [{b.lower:.8f}, {b.upper:.8f}]  {v.label}")

# The witness behind the lower bound 2 for ξ_2 under rank 2: the operator
# t = ww† with w = √2 ξ_2 has K_2-norm 1.
w = math.sqrt(2) * xi_k_vector(2, n)
est = estimate_K_norm(np.outer(w, w.conj()), VSetSpec(2, n, "tensor", 2))
print(f"\n||t_√2ξ_2||_K2 ≈ {est.value:.12f}")
