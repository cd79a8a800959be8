"""Compatibility of the symmetry projections with the vector families.

For a projection p and λ ≥ 1, p is compatible with (V, λ) when p ξ/||p ξ||
lies in λ p V ∩ S for every ξ ∈ V with p ξ ≠ 0.  The constant
μ = sup{r ≥ 1 : r p V ⊂ unit ball} is 1/sup_{ξ∈V} ||p ξ||; since p is a
projection, sup_{ξ,η∈V} |<p ξ, η>| = sup ||p ξ||², so μ = ||p||_K^{-1/2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgument
from ..tensor_core import (
    SymmetrySector,
    all_permutations,
    permute_vector,
    product_vector,
    sector_projector,
)
from .families import in_family, random_member
from .knorm import certified_norm_upper, estimate_K_norm, pair_value
from .spec import Budget, VSetSpec


@dataclass(frozen=True, eq=False)
class CompatibilityReport:
    """λ of the target family, the estimated μ, and the membership verdict.

    ``mu`` comes from the best pair found (an upper estimate of μ);
    ``mu_certified`` is a certified lower bound on μ.
    """

    lambda_: float
    mu: float
    compatible: bool
    counterexample: np.ndarray | None = field(default=None, repr=False)
    mu_certified: float = 1.0
    samples: int = 0


@dataclass(frozen=True, eq=False)
class ContractionReport:
    sector: SymmetrySector
    trials: int
    violations: int
    max_excess: float
    lhs: tuple = field(default=(), repr=False)
    rhs: tuple = field(default=(), repr=False)


def _target_spec(spec, sector):
    if sector is SymmetrySector.FERMIONIC:
        return spec.with_family("wedge")
    return VSetSpec(spec.arity, spec.local_dim, "vee")


def family_lambda(spec, sector):
    """λ for which the projected family is defined: √k!, √2 (rank l ≥ 2) or 1."""
    if sector is SymmetrySector.BOSONIC:
        return 1.0
    if spec.rank_bound >= 2:
        return math.sqrt(2)
    return math.sqrt(math.factorial(spec.arity))


def _mu(value):
    return max(1.0, 1.0 / math.sqrt(value)) if value > 0 else math.inf


def check_compatibility(spec, sector, samples=200, budget=None, tol=1e-8):
    """Estimate μ for the projection onto ``sector`` and test compatibility.

    ``spec`` describes the tensor family V being projected.  Membership of
    p ξ/||p ξ|| is tested by rank inspection on ``samples`` random members
    of V plus a few structured ones (pairs of basis vectors).
    """
    sector = SymmetrySector(sector)
    if sector is SymmetrySector.FULL:
        raise InvalidArgument("compatibility is defined for the bosonic or fermionic sector")
    if spec.family != "tensor":
        raise InvalidArgument("compatibility is checked for a tensor family V")
    budget = budget or Budget()
    k, n = spec.arity, spec.local_dim
    p = np.array(sector_projector(k, n, sector))
    est = estimate_K_norm(p, spec, budget)
    mu = _mu(est.value)
    mu_cert = _mu(certified_norm_upper(p, spec))
    lam = family_lambda(spec, sector)

    target = _target_spec(spec, sector) if not (
        sector is SymmetrySector.FERMIONIC and k > n) else None
    rng = budget.rng(31)
    eye = np.eye(n)
    # independent basis factors first: the classic bosonic counterexample
    probes = [product_vector([eye[i % n] for i in range(k)])] if n >= 2 else []
    probes += [random_member(spec, rng) for _ in range(samples)]
    counter = None
    for xi in probes:
        pxi = p @ xi
        nrm = np.linalg.norm(pxi)
        if nrm <= 1e-12:
            continue
        if target is None or not in_family(pxi / nrm, target, tol=1e-6):
            counter = pxi
            break
    return CompatibilityReport(lam, float(mu), counter is None, counter,
                               float(mu_cert), len(probes))


def _perm_pairs(xi, eta, k, n):
    for pi in all_permutations(k):
        a = permute_vector(xi, pi.image, k, n)
        for sigma in all_permutations(k):
            yield a, permute_vector(eta, sigma.image, k, n)


def check_contraction(spec, sector, trials=50, budget=None, seed=0, tol=1e-8):
    """Check ||p x p||_K ≤ ||x||_K on random Hermitian x.

    The right side is the larger of its own estimate and the values of x on
    the permuted optimisers of the left side.  Since p x p averages x over
    those pairs, this comparison is one-sided certified: a violation would
    indicate a bug, never a weak optimiser.
    """
    sector = SymmetrySector(sector)
    budget = budget or Budget(multistarts=8)
    k, n = spec.arity, spec.local_dim
    p = np.array(sector_projector(k, n, sector))
    rng = np.random.default_rng([seed, 41])
    lhs_vals, rhs_vals = [], []
    violations, worst = 0, -math.inf
    for _ in range(trials):
        g = rng.standard_normal((spec.dim,) * 2) + 1j * rng.standard_normal((spec.dim,) * 2)
        x = (g + g.conj().T) / 2
        left = estimate_K_norm(p @ x @ p, spec, budget)
        right = estimate_K_norm(x, spec, budget).value
        for a, b in _perm_pairs(left.xi, left.eta, k, n):
            right = max(right, pair_value(x, a, b))
        lhs_vals.append(left.value)
        rhs_vals.append(right)
        excess = left.value - right
        worst = max(worst, excess)
        if excess > tol:
            violations += 1
    return ContractionReport(sector, trials, violations, float(worst),
                             tuple(lhs_vals), tuple(rhs_vals))
