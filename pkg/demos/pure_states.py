"""Pure two-party states: closed forms, decompositions and verdicts.

Run with ``python3 demos/pure_states.py``.
"""

import numpy as np

from entgauge.decompositions import schmidt_decompose, slater_decompose
from entgauge.norm import VSetSpec, q_bracket, q_pure_closed_form, verdict
from entgauge.state_io import generate

singlet = generate("singlet")
print("singlet amplitudes:", np.round(singlet.amplitudes.real, 6))
print("Schmidt coefficients:", schmidt_decompose(singlet).coefficients)
print("Slater coefficients:", slater_decompose(singlet).coefficients)

# As distinguishable particles the singlet is entangled; as two fermions it
# is a single Slater determinant.
for family in ("tensor", "wedge"):
    q = q_pure_closed_form(singlet, family=family)
    v = verdict(singlet, VSetSpec(2, 2, family))
    print(f"{family:>6}: q = {q:.12g}, verdict {v.label}")

# A generic fermionic state in four modes has two Slater terms.  The two
# closed forms differ by exactly 2, and a generic bracket agrees.
rng = np.random.default_rng(1)
phi = generate("haar_pure", {"n": 4, "k": 2, "sector": "fermionic"}, rng)
qt = q_pure_closed_form(phi, family="tensor")
qw = q_pure_closed_form(phi, family="wedge")
print(f"\nrandom fermionic state, n=4: q^⊗ = {qt:.10f}, q^∧ = {qw:.10f}, ratio {qt / qw:.12f}")
b = q_bracket(phi, VSetSpec(2, 4, "wedge"))
print("wedge bracket:", b)
