"""Exact gauge values for pure bipartite states."""

from __future__ import annotations

import numpy as np

from ..decompositions import schmidt_decompose, slater_decompose
from ..errors import InvalidArgument, UnsupportedArity
from ..tensor_core import PureState
from .spec import VSetSpec


def q_pure_closed_form(state, spec=None, family="tensor"):
    """q_K(ω_ξ) for a unit ξ ∈ C^n ⊗ C^n.

    ``tensor``: (Σ Schmidt coefficients)², the projective tensor norm of
    t_ξ.  ``wedge``: (Σ Slater coefficients)², which is half the tensor value.
    """
    if not isinstance(state, PureState):
        raise InvalidArgument("closed forms need a PureState")
    if spec is None:
        spec = VSetSpec(state.parties, state.local_dim, family)
    if state.parties != 2 or spec.arity != 2:
        raise UnsupportedArity("closed forms are only available for two parties")
    if spec.local_dim != state.local_dim:
        raise InvalidArgument("spec and state dimensions differ")
    if spec.rank_bound != 1:
        raise InvalidArgument("no closed form for rank_bound > 1; use the bracket method")
    if spec.family == "tensor":
        lam = schmidt_decompose(state).coefficients
        return float(np.sum(lam) ** 2)
    if spec.family == "wedge":
        lam = slater_decompose(state).coefficients
        return float(np.sum(lam) ** 2)
    raise InvalidArgument("no closed form for the vee family; use the bracket method")
