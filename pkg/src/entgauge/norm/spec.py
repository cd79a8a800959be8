"""Measure selection (which vector family V) and optimisation budgets."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from ..errors import InvalidArgument
from ..tensor_core import SymmetrySector

Family = Literal["tensor", "vee", "wedge"]
_FAMILY_SECTOR = {
    "tensor": SymmetrySector.FULL,
    "vee": SymmetrySector.BOSONIC,
    "wedge": SymmetrySector.FERMIONIC,
}


@dataclass(frozen=True)
class VSetSpec:
    """A balanced family V of unit vectors in (C^n)^{⊗k}.

    ``tensor`` is the set of unit vectors of Schmidt rank ≤ rank_bound
    (product vectors for rank_bound = 1), ``wedge`` the unit wedge vectors of
    Slater rank ≤ rank_bound, ``vee`` the symmetric products η⊗...⊗η.
    """

    arity: int
    local_dim: int
    family: Family = "tensor"
    rank_bound: int = 1

    def __post_init__(self):
        if self.family not in _FAMILY_SECTOR:
            raise InvalidArgument(f"unknown family {self.family!r}")
        if self.arity < 1 or self.local_dim < 1:
            raise InvalidArgument("arity and local_dim must be positive")
        if self.rank_bound < 1:
            raise InvalidArgument("rank_bound must be a positive integer")
        if self.family == "vee" and self.rank_bound != 1:
            raise InvalidArgument("the vee family only supports rank_bound = 1")
        if self.rank_bound >= 2 and self.arity != 2:
            raise InvalidArgument("rank_bound >= 2 is only defined for two parties")
        if self.family != "tensor" and self.arity < 2:
            raise InvalidArgument("vee/wedge families need at least two parties")
        if self.family == "wedge" and self.arity > self.local_dim:
            raise InvalidArgument("wedge family is empty when arity > local_dim")

    @property
    def sector(self):
        return _FAMILY_SECTOR[self.family]

    @property
    def dim(self):
        return self.local_dim**self.arity

    @property
    def exact_overlap(self):
        """Whether sup_{ξ∈V} |<ξ, w>| is computed exactly (bipartite families)."""
        return self.arity == 2

    def with_family(self, family, rank_bound=None):
        return VSetSpec(self.arity, self.local_dim, family,
                        self.rank_bound if rank_bound is None else rank_bound)

    def label(self):
        tag = {"tensor": "⊗", "vee": "∨", "wedge": "∧"}[self.family]
        base = f"K^{tag}{self.arity}"
        return base if self.rank_bound == 1 else f"{base}_l={self.rank_bound}"


@dataclass(frozen=True)
class Budget:
    """Optimisation budget shared by K-norm estimation and bracketing.

    ``multistarts`` and ``max_iters`` drive the alternating ascent;
    ``lp_pool`` caps the column pool of the membership LP; ``cg_rounds`` is
    the number of column-generation rounds; ``workers`` > 1 fans multistarts
    out over threads (results are merged in start order, so seeds stay
    reproducible).
    """

    multistarts: int = 32
    max_iters: int = 200
    lp_pool: int = 4000
    cg_rounds: int = 60
    cg_multistarts: int = 8
    ascent_steps: int = 60
    seed: int = 0
    workers: int = 1
    lp_residual: float = 1e-8

    def rng(self, *stream):
        return np.random.default_rng([self.seed, *stream])

    def as_dict(self):
        return asdict(self)


def factorial(k):
    return math.factorial(k)
