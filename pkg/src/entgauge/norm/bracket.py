"""Certified brackets lower ≤ q_K(φ) ≤ upper for mixed states.

Upper side: a column-generated linear program over symmetrised vector
functionals,

    minimise Σ c_j   s.t.  Σ c_j (ξ_j η_j^† + η_j ξ_j^†)/2 = ρ,  c_j ≥ 0,

with ξ_j, η_j ∈ V.  Each such column lies in K, so any feasible point gives
φ ∈ (Σ c_j) K.  What the solver leaves as residual is expanded in members of
V and its ℓ1 cost is added, so the upper bound never depends on solver
tolerances.

Lower side: |φ(x)| / B(x) for witness operators x, where B is the certified
upper bound of ``certified_norm_upper``.  Candidates are the LP dual
operator, sector projectors and phase-aligned eigenvector witnesses,
refined by a derivative-free ascent over their span.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize_scalar

from ..decompositions import schmidt_decompose, slater_decompose
from ..errors import InvalidArgument
from ..tensor_core import (
    DensityFunctional,
    all_permutations,
    as_density,
    permute_vector,
    product_vector,
    sector_basis,
    sector_projector,
    wedge,
)
from .families import basis_members, in_family, random_member
from .knorm import certified_norm_upper, estimate_K_norm, pair_value
from .spec import Budget, VSetSpec

INF = math.inf
SUPPORT_TOL = 1e-10
STALL_ROUNDS = 8
LP_TIME_LIMIT = 60.0
_PHASES = (1.0, 1j, -1.0, -1j)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """ρ = Σ c_j (ξ_j η_j^† + η_j ξ_j^†)/2 + residual, with ξ_j, η_j ∈ V.

    ``residual_cost`` is the ℓ1 norm of the residual expanded in V-members,
    so ``total`` is a certified upper bound on q_K.
    """

    coefficients: np.ndarray
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)
    residual: np.ndarray = field(repr=False)
    residual_cost: float = 0.0

    @property
    def total(self):
        return float(np.sum(self.coefficients)) + self.residual_cost

    def operator(self):
        acc = np.zeros_like(self.residual)
        for c, a, b in zip(self.coefficients, self.left, self.right):
            t = np.outer(a, b.conj())
            acc += c * (t + t.conj().T) / 2
        return acc


@dataclass(frozen=True, eq=False)
class Witness:
    """Operator x with certified ||x||_K ≤ 1; q_K(φ) ≥ |φ(x)| = value."""

    operator: np.ndarray = field(repr=False)
    value: float
    raw_bound: float
    source: str
    reverified: float | None = None


@dataclass(frozen=True, eq=False)
class NormBracket:
    lower: float
    upper: float
    witness: Witness | None = None
    decomposition: Decomposition | None = None
    lower_method: str = ""
    upper_method: str = ""
    spec: VSetSpec | None = None

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, value, tol=0.0):
        return self.lower - tol <= value <= self.upper + tol

    def __repr__(self):
        return (f"NormBracket(lower={self.lower:.10g}, upper={self.upper:.10g}, "
                f"lower_method={self.lower_method!r}, upper_method={self.upper_method!r})")


# --- Hermitian <-> real coordinates ---------------------------------------


def _herm_index(d):
    iu = np.triu_indices(d, 1)
    return iu


def herm_encode(mats):
    """Stack Hermitian d x d matrices into real vectors (diag, Re/Im upper)."""
    mats = np.asarray(mats)
    d = mats.shape[-1]
    iu = _herm_index(d)
    diag = np.real(np.diagonal(mats, axis1=-2, axis2=-1))
    up = mats[..., iu[0], iu[1]]
    return np.concatenate([diag, up.real, up.imag], axis=-1)


def herm_dual(y, d):
    """Hermitian Y with tr(Y A) = y · herm_encode(A) for Hermitian A."""
    iu = _herm_index(d)
    m = len(iu[0])
    out = np.zeros((d, d), dtype=complex)
    out[np.diag_indices(d)] = y[:d]
    out[iu] = (y[d:d + m] + 1j * y[d + m:]) / 2
    out[(iu[1], iu[0])] = np.conj(out[iu])
    return out


def _column(a, b):
    t = np.outer(a, b.conj())
    return (t + t.conj().T) / 2


# --- canonical seeds -----------------------------------------------------


def canonical_groups(vec, spec):
    """Write ξ = Σ μ_g v_g with v_g ∈ V unit and μ_g ≥ 0 (bipartite families).

    Schmidt (or Slater) terms are taken in decreasing order and chunked into
    groups of ``rank_bound`` terms.  Returns [] when no canonical form applies.
    """
    n, l = spec.local_dim, spec.rank_bound
    if spec.arity != 2:
        return []
    vec = np.asarray(vec, dtype=complex)
    if spec.family == "vee":
        return _takagi_groups(vec, n)
    if spec.family == "tensor":
        form = schmidt_decompose(vec, n)
        terms = [(lam, np.outer(e, f).reshape(-1))
                 for lam, e, f in zip(form.coefficients, form.left_frame.T, form.right_frame.T)
                 if lam > 1e-14]
    else:
        form = slater_decompose(vec, n, cutoff=1e-14)
        terms = [(lam, ((np.outer(e, f) - np.outer(f, e)) / math.sqrt(2)).reshape(-1))
                 for lam, (e, f) in zip(form.coefficients, form.pair_frame)]
    groups = []
    for start in range(0, len(terms), l):
        chunk = terms[start:start + l]
        v = sum(lam * t for lam, t in chunk)
        mu = float(np.linalg.norm(v))
        if mu > 0:
            groups.append((mu, v / mu))
    return groups


def _takagi_groups(vec, n):
    """Takagi form ξ = Σ σ_i u_i ⊗ u_i of a symmetric ξ; [] if it does not apply."""
    t = vec.reshape(n, n)
    if np.linalg.norm(t - t.T) > 1e-10 * max(1.0, np.linalg.norm(t)):
        return []
    u, s, vh = np.linalg.svd(t)
    groups, acc = [], np.zeros_like(t)
    for sig, ui, vi in zip(s, u.T, vh.conj()):
        if sig <= 1e-14:
            continue
        # for symmetric t, conj(v_i) is a phase times u_i when σ_i is simple
        w = ui * np.sqrt(np.vdot(ui, vi.conj()))
        acc += sig * np.outer(w, w)
        groups.append((float(sig), np.outer(w, w).reshape(-1)))
    if np.linalg.norm(acc - t) > 1e-9:
        return []
    return groups


# --- column pool and LP --------------------------------------------------


class _Pool:
    def __init__(self, coords):
        self.coords = coords  # N x d, orthonormal columns
        self.left = []
        self.right = []
        self.encoded = []
        self.pinned = 0

    def add(self, a_full, b_full):
        a = self.coords.conj().T @ a_full
        b = self.coords.conj().T @ b_full
        self.left.append(a_full)
        self.right.append(b_full)
        self.encoded.append(herm_encode(_column(a, b)))

    def __len__(self):
        return len(self.left)

    def prune(self, keep_mask):
        idx = [i for i in range(len(self)) if i < self.pinned or keep_mask[i]]
        self.left = [self.left[i] for i in idx]
        self.right = [self.right[i] for i in idx]
        self.encoded = [self.encoded[i] for i in idx]


def _solve_lp(pool, rhs):
    a_eq = np.column_stack(pool.encoded)
    cost = np.ones(a_eq.shape[1])
    res = linprog(cost, A_eq=a_eq, b_eq=rhs, bounds=(0, None), method="highs",
                  options={"time_limit": LP_TIME_LIMIT})
    if res.status != 0:
        return None, None
    return np.clip(res.x, 0, None), np.asarray(res.eqlin.marginals)


def _residual_cost(resid, basis_coords):
    """ℓ1 norm of the residual expanded as Σ C_ab b_a b_b^† over V-members."""
    d = resid.shape[0]
    if np.allclose(basis_coords, np.eye(d)):
        return float(np.sum(np.abs(resid)))
    inv = np.linalg.inv(basis_coords)
    return float(np.sum(np.abs(inv @ resid @ inv.conj().T)))


# --- witnesses -----------------------------------------------------------


def _aligned_weights(lam, l):
    """Weights c maximising (Σ λ c)² / (sum of the l largest c²).

    Optimal weights clip λ at a level τ; τ is found by a bounded scalar search.
    """
    lam = np.sort(np.asarray(lam, dtype=float))[::-1]

    def ratio(tau):
        c = np.minimum(lam, tau)
        den = np.sum(np.sort(c**2)[::-1][:l])
        return (lam @ c) ** 2 / den if den > 0 else 0.0

    taus = list(lam) + [lam[-1]]
    best_tau = max(taus, key=ratio)
    if lam[0] > lam[-1]:
        res = minimize_scalar(lambda t: -ratio(t), bounds=(lam[-1], lam[0]), method="bounded")
        if -res.fun > ratio(best_tau):
            best_tau = res.x
    return np.minimum(lam, best_tau), lam


def aligned_vector(vec, spec):
    """Vector u in the canonical frames of ξ with sup_V |<·, u>| ≤ 1 and large <ξ, u>."""
    n, l = spec.local_dim, spec.rank_bound
    if spec.family == "tensor":
        form = schmidt_decompose(vec, n)
        keep = form.coefficients > 1e-14
        lam = form.coefficients[keep]
        if lam.size == 0:
            return None
        c, _ = _aligned_weights(lam, l)
        u = sum(ci * np.outer(e, f) for ci, e, f in
                zip(c, form.left_frame.T[keep], form.right_frame.T[keep]))
    elif spec.family == "wedge":
        form = slater_decompose(vec, n, cutoff=1e-14)
        lam = form.coefficients
        if lam.size == 0:
            return None
        c, _ = _aligned_weights(lam, l)
        u = sum(ci * (np.outer(e, f) - np.outer(f, e)) / math.sqrt(2)
                for ci, (e, f) in zip(c, form.pair_frame))
    elif spec.family == "vee" and spec.arity == 2:
        groups = _takagi_groups(np.asarray(vec, dtype=complex), n)
        if not groups:
            return None
        # sup_η |Σ (u_i·η)²| = 1 for an orthonormal Takagi frame
        return sum(g for _, g in groups)
    else:
        return None
    u = np.asarray(u).reshape(-1)
    return u / math.sqrt(np.sum(np.sort(np.abs(c) ** 2)[::-1][:l]))


def _ratio(x, rho, spec):
    bound = certified_norm_upper(x, spec)
    if bound <= 0:
        return 0.0, bound
    return abs(np.trace(rho @ x)) / bound, bound


def _witness_candidates(rho, spec, dual_op):
    k, n = spec.arity, spec.local_dim
    dim = spec.dim
    cands = [("identity", np.eye(dim, dtype=complex))]
    if spec.family != "tensor":
        cands.append(("sector-projector", np.array(sector_projector(k, n, spec.sector))))
    elif 2 <= k <= n:
        pm = np.array(sector_projector(k, n, "fermionic"))
        cands.append(("antisymmetric-projector", pm))
    w, v = np.linalg.eigh(rho)
    supp = v[:, w > 1e-12]
    cands.append(("support-projector", supp @ supp.conj().T))
    if dual_op is not None:
        cands.append(("lp-dual", dual_op))
        q = supp @ supp.conj().T
        cands.append(("lp-dual-compressed", q @ dual_op @ q))
    if k == 2:
        for idx in np.argsort(w)[::-1][:4]:
            if w[idx] <= 1e-12:
                continue
            u = aligned_vector(v[:, idx], spec)
            if u is not None:
                cands.append((f"aligned-eigvec-{len(cands)}", np.outer(u, u.conj())))
    return cands


def _ascent(rho, spec, cands, steps, rng):
    scored = []
    for name, x in cands:
        r, b = _ratio(x, rho, spec)
        scored.append((r, name, x, b))
    scored.sort(key=lambda t: -t[0])
    best_r, best_name, best_x, best_b = scored[0]
    if steps <= 0:
        return best_r, best_name, best_x, best_b
    others = [x / max(np.linalg.norm(x), 1e-300) for _, _, x, _ in scored[1:]]
    scale = np.linalg.norm(best_x)
    step = 0.25
    for it in range(steps):
        if others and it % 2 == 0:
            direction = others[rng.integers(len(others))]
        else:
            g = rng.standard_normal(best_x.shape) + 1j * rng.standard_normal(best_x.shape)
            direction = (g + g.conj().T) / np.linalg.norm(g + g.conj().T)
        sign = 1 if rng.random() < 0.5 else -1
        trial = best_x + sign * step * scale * direction
        r, b = _ratio(trial, rho, spec)
        if r > best_r * (1 + 1e-12):
            best_r, best_x, best_b = r, trial, b
            best_name = best_name if best_name.endswith("+ascent") else best_name + "+ascent"
        else:
            step *= 0.85
    return best_r, best_name, best_x, best_b


def best_witness(rho, spec, budget, dual_op=None, reverify=True):
    """Best certified witness among the standard candidates."""
    rng = budget.rng(23)
    cands = _witness_candidates(rho, spec, dual_op)
    r, name, x, bound = _ascent(rho, spec, cands, budget.ascent_steps, rng)
    xn = x / bound
    value = abs(np.trace(rho @ xn))
    rever = None
    if reverify:
        rever = estimate_K_norm(xn, spec, budget, starts=budget.cg_multistarts).value
    return Witness(xn, float(value), float(bound), name, rever)


# --- main entry ----------------------------------------------------------


def _support_leak(rho, spec):
    if spec.family == "tensor":
        return 0.0
    p = sector_projector(spec.arity, spec.local_dim, spec.sector)
    return float(1.0 - np.trace(p @ rho).real)


def _check_dims(phi, spec):
    if phi.parties != spec.arity or phi.local_dim != spec.local_dim:
        raise InvalidArgument(
            f"state on ({phi.local_dim})^{phi.parties} does not match spec "
            f"({spec.local_dim})^{spec.arity}"
        )


def q_bracket(phi, spec, budget=None, canonical_seeds=True, reverify=True, extra_pairs=()):
    """Certified bracket on q_K(φ) for the family described by ``spec``.

    ``extra_pairs`` are (ξ, η) pairs of V-members added to the initial
    column pool, e.g. from a decomposition found for a related family.
    """
    budget = budget or Budget()
    if not isinstance(phi, DensityFunctional):
        try:
            phi = as_density(phi)
        except InvalidArgument as exc:
            raise InvalidArgument(f"q_bracket needs a state: {exc}") from None
    _check_dims(phi, spec)
    rho = np.asarray(phi.matrix)
    if _support_leak(rho, spec) > SUPPORT_TOL:
        # no multiple of K reaches a functional with weight outside the sector
        return NormBracket(INF, INF, lower_method="outside-sector",
                           upper_method="outside-sector", spec=spec)

    coords = np.array(sector_basis(spec.arity, spec.local_dim, spec.sector))
    d = coords.shape[1]
    if d == 0:
        return NormBracket(0.0, INF, lower_method="empty", upper_method="empty", spec=spec)
    rho_c = coords.conj().T @ rho @ coords
    rho_c = (rho_c + rho_c.conj().T) / 2
    rhs = herm_encode(rho_c)
    members = np.array(basis_members(spec))
    member_coords = coords.conj().T @ members

    pool = _Pool(coords)
    for i in range(d):
        for ph in (1.0, -1.0):
            pool.add(ph * members[:, i], members[:, i])
        for j in range(i + 1, d):
            for ph in _PHASES:
                pool.add(ph * members[:, i], members[:, j])
    pool.pinned = len(pool)

    if canonical_seeds and spec.arity == 2:
        w, v = np.linalg.eigh(rho)
        for idx in np.argsort(w)[::-1]:
            if w[idx] <= 1e-12:
                continue
            groups = canonical_groups(v[:, idx], spec)
            for gi, (_, vg) in enumerate(groups):
                for _, vh in groups[gi:]:
                    pool.add(vg, vh)
    for a, b in extra_pairs:
        pool.add(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    rng = budget.rng(5)
    for _ in range(min(8, budget.multistarts)):
        a, b = random_member(spec, rng), random_member(spec, rng)
        for ph in _PHASES:
            pool.add(ph * a, b)

    c, y = _solve_lp(pool, rhs)
    # columns matching the last successful solve
    sol_cols = (list(pool.left), list(pool.right))
    dual_op = None
    rounds = 0
    cg_budget = Budget(multistarts=budget.cg_multistarts, max_iters=budget.max_iters,
                       seed=budget.seed, workers=budget.workers)
    # Wentges smoothing: also price at a mix of the current dual and the dual
    # with the best Lagrangian bound so far, which damps the zig-zag of plain
    # column generation
    center, center_lb = None, -INF
    best_obj, stalled = (INF if c is None else float(np.sum(c))), 0
    while c is not None and rounds < budget.cg_rounds:
        rounds += 1
        y_op = herm_dual(y, d)
        prices = [y]
        added = 0
        for i, y_price in enumerate(prices):
            dual_full = coords @ herm_dual(y_price, d) @ coords.conj().T
            est = estimate_K_norm(dual_full, spec,
                                  Budget(**{**cg_budget.as_dict(), "seed": budget.seed + rounds}))
            if i == 0:
                lb = float(y @ rhs) / max(est.value, 1.0)
                if lb > center_lb:
                    center, center_lb = y, lb
                if center is not y:
                    prices.append(0.5 * center + 0.5 * y)
            for _, xi, eta in est.starts:
                xc, ec = coords.conj().T @ xi, coords.conj().T @ eta
                if pair_value(y_op, xc, ec) <= 1 + 1e-9:
                    continue
                ov = np.vdot(ec, y_op @ xc)
                pool.add(xi * (abs(ov) / ov), eta)
                added += 1
        if added == 0:
            break
        if len(pool) > budget.lp_pool:
            pool.prune(np.concatenate([c > 0, np.ones(added, dtype=bool)]))
        c_new, y_new = _solve_lp(pool, rhs)
        if c_new is None:
            break
        c, y = c_new, y_new
        sol_cols = (list(pool.left), list(pool.right))
        obj = float(np.sum(c))
        # degenerate LPs can keep returning violated duals without any
        # primal progress; give up after a few such rounds
        stalled = stalled + 1 if obj > best_obj * (1 - 1e-9) else 0
        best_obj = min(best_obj, obj)
        if stalled >= STALL_ROUNDS:
            break

    if c is None:
        upper, decomp, upper_method = INF, None, "lp-infeasible"
    else:
        dual_op = coords @ herm_dual(y, d) @ coords.conj().T
        keep = c > 0
        approx = np.zeros((d, d), dtype=complex)
        left = np.array(sol_cols[0])[keep]
        right = np.array(sol_cols[1])[keep]
        for cj, a, b in zip(c[keep], left, right):
            approx += cj * _column(coords.conj().T @ a, coords.conj().T @ b)
        resid_c = rho_c - approx
        cost = _residual_cost(resid_c, member_coords)
        decomp = Decomposition(c[keep], left, right,
                               coords @ resid_c @ coords.conj().T, cost)
        upper = decomp.total
        upper_method = f"lp+cg({rounds} rounds, {len(pool)} columns)"

    wit = best_witness(rho, spec, budget, dual_op, reverify=reverify)
    lower = wit.value
    if upper < 1.0 <= upper * (1 + 1e-9) + 1e-12:
        # q_K(φ) ≥ ||φ|| = 1 for every state, so this is rounding as well
        upper = 1.0
    if upper < lower <= upper * (1 + 1e-9) + 1e-12:
        # both sides are certified; a crossing this small is rounding
        lower = upper
    return NormBracket(float(lower), float(upper), wit, decomp,
                       lower_method=f"witness:{wit.source}", upper_method=upper_method, spec=spec)


def verify_decomposition(decomp, phi, spec, tol=1e-8):
    """Re-check a decomposition certificate: membership in V and reconstruction."""
    rho = np.asarray(as_density(phi).matrix)
    members_ok = all(in_family(a, spec, 1e-8) and in_family(b, spec, 1e-8)
                     for a, b in zip(decomp.left, decomp.right))
    recon = decomp.operator() + decomp.residual
    return members_ok and bool(np.max(np.abs(recon - rho)) <= tol)


def wedge_frame(vec, k, n):
    """Orthonormal f_1..f_k with vec = f_1 ∧ ... ∧ f_k (vec a unit wedge)."""
    t = np.asarray(vec).reshape(n, -1)
    _, vecs = np.linalg.eigh(t @ t.conj().T)
    frame = vecs[:, ::-1][:, :k].T.copy()
    frame[0] *= np.vdot(wedge(frame), vec)
    return frame


def wedge_to_product_pairs(decomp, k, n):
    """Expand a wedge-family decomposition into product-vector pairs.

    With u = ∧f and v = ∧g, u v^† = (1/k!) Σ_{π,σ} sgn(π)sgn(σ) (U_π ⊗f)(U_σ ⊗g)^†,
    so each wedge column becomes k!² product columns whose weights add up to
    k! times the original weight.
    """
    perms = all_permutations(k)
    out = []
    for a, b in zip(decomp.left, decomp.right):
        fa = product_vector(wedge_frame(a, k, n))
        fb = product_vector(wedge_frame(b, k, n))
        for pi in perms:
            ua = pi.sign * permute_vector(fa, pi.image, k, n)
            for sigma in perms:
                out.append((sigma.sign * ua, permute_vector(fb, sigma.image, k, n)))
    return out

