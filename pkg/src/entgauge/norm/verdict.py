"""Separability verdicts from brackets, and the fermionic q^⊗ / q^∧ coupling."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgument, NotFermionicSupport
from ..tensor_core import as_density, sector_projector
from .bracket import NormBracket, q_bracket, wedge_to_product_pairs
from .spec import Budget, VSetSpec

DEFAULT_TOL = 1e-6


class Status(enum.Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class Verdict:
    """Outcome of comparing a bracket on q_K with the threshold 1.

    ``threshold_gap`` is the signed distance of the bracket from 1: positive
    lower - 1 for entangled states, negative upper - 1 for separable ones,
    and 0 when the bracket straddles the threshold.
    """

    status: Status
    measure: VSetSpec
    bracket: NormBracket
    threshold_gap: float

    @property
    def label(self):
        """Status wording adapted to the measure (fermionic, rank-l, ...)."""
        s = self.measure
        if self.status is Status.INCONCLUSIVE:
            return "inconclusive"
        sep = self.status is Status.SEPARABLE
        if s.rank_bound > 1:
            kind = "slater-number" if s.family == "wedge" else "schmidt-number"
            return f"{kind}<={s.rank_bound}" if sep else f"{kind}>{s.rank_bound}"
        prefix = {"tensor": "", "wedge": "fermionic-", "vee": "bosonic-"}[s.family]
        return prefix + self.status.value


def classify(bracket, spec, tol=DEFAULT_TOL):
    if not tol >= 0:
        raise InvalidArgument(f"tolerance must be non-negative, got {tol!r}")
    if bracket.upper <= 1 + tol:
        return Verdict(Status.SEPARABLE, spec, bracket, bracket.upper - 1)
    if bracket.lower >= 1 + tol:
        return Verdict(Status.ENTANGLED, spec, bracket, bracket.lower - 1)
    return Verdict(Status.INCONCLUSIVE, spec, bracket, 0.0)


def verdict(phi, spec, budget=None, tol=DEFAULT_TOL):
    """Separable when q_K = 1 is certified, entangled when q_K > 1 is."""
    if not tol >= 0:
        raise InvalidArgument(f"tolerance must be non-negative, got {tol!r}")
    return classify(q_bracket(phi, spec, budget), spec, tol)


@dataclass(frozen=True, eq=False)
class Coupling:
    """Brackets for q^⊗ and q^∧ of one fermionic state.

    ``scaled`` is the q^⊗ bracket divided by k!; ``tightened`` is its
    intersection with the q^∧ bracket.
    """

    tensor: NormBracket
    wedge: NormBracket
    factor: int
    tightened: tuple

    @property
    def scaled(self):
        return (self.tensor.lower / self.factor, self.tensor.upper / self.factor)

    @property
    def ratio_bounds(self):
        """Interval for q^⊗ / q^∧ implied by the two brackets."""
        lo = self.tensor.lower / self.wedge.upper if self.wedge.upper > 0 else math.inf
        hi = self.tensor.upper / self.wedge.lower if self.wedge.lower > 0 else math.inf
        return lo, hi


def fermionic_coupling(phi, budget=None, tol=1e-9):
    """Bracket q^⊗ and q^∧ of a state living on the antisymmetric sector.

    The two values differ exactly by the factor k!, so the scaled brackets
    must overlap; their intersection is reported as a tightened q^∧ bracket.
    """
    phi = as_density(phi)
    k, n = phi.parties, phi.local_dim
    if k > n:
        raise NotFermionicSupport(f"the antisymmetric sector is empty for k={k} > n={n}")
    rho = np.asarray(phi.matrix)
    p = np.asarray(sector_projector(k, n, "fermionic"))
    leak = np.max(np.abs(p @ rho @ p - rho))
    if leak > 1e-10:
        raise NotFermionicSupport(f"state has weight {leak:.3g} outside the antisymmetric sector")
    budget = budget or Budget()
    wb = q_bracket(phi, VSetSpec(k, n, "wedge"), budget)
    # a wedge decomposition of cost c yields a product one of cost k!·c
    seeds = wedge_to_product_pairs(wb.decomposition, k, n) if wb.decomposition else ()
    tb = q_bracket(phi, VSetSpec(k, n, "tensor"), budget, extra_pairs=seeds)
    f = math.factorial(k)
    lo = max(tb.lower / f, wb.lower)
    hi = min(tb.upper / f, wb.upper)
    if lo > hi + tol * max(1.0, hi):
        raise AssertionError(
            f"scaled brackets do not overlap: q^⊗/k! in [{tb.lower / f}, {tb.upper / f}], "
            f"q^∧ in [{wb.lower}, {wb.upper}]")
    return Coupling(tb, wb, f, (lo, max(lo, hi)))
