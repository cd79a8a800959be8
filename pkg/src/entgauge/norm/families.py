"""Parameterisations of the vector families V.

Three primitives per family:

* ``random_member`` draws a unit vector of V;
* ``maximize_overlap`` finds ξ ∈ V with large |<ξ, w>| (exact for two
  parties, monotone ascent from ``init`` otherwise) and returns it with the
  phase that makes <ξ, w> real and nonnegative;
* ``overlap_bound`` gives a certified upper bound on sup_{ξ∈V} |<ξ, w>|.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from ..decompositions import slater_decompose
from ..tensor_core import (
    product_vector,
    project_vector,
    random_unit_vector,
    sector_basis,
    wedge,
)

_SLACK = 1e-12


def _unit(v):
    nrm = np.linalg.norm(v)
    return v / nrm if nrm > 0 else v


def _align(xi, w):
    """Rotate ξ so that <ξ, w> = w^† ξ is real and nonnegative."""
    ov = np.vdot(w, xi)
    if abs(ov) > 0:
        xi = xi * (abs(ov) / ov)
    return xi, abs(ov)


def _mode_factors(vec, k, n):
    """Top left singular vector of every single-mode unfolding."""
    t = np.asarray(vec).reshape((n,) * k)
    out = []
    for m in range(k):
        unf = np.moveaxis(t, m, 0).reshape(n, -1)
        u, _, _ = np.linalg.svd(unf, full_matrices=False)
        out.append(u[:, 0])
    return out


def _contract_except(tensor, factors, skip):
    """Contract a k-tensor with factors on every mode except ``skip``."""
    t = tensor
    # contract from the last mode down so axis numbers stay valid
    for m in reversed(range(len(factors))):
        if m == skip:
            continue
        t = np.tensordot(t, factors[m], axes=([m], [0]))
    return t


def random_member(spec, rng):
    k, n, l = spec.arity, spec.local_dim, spec.rank_bound
    if spec.family == "tensor":
        if l == 1:
            return product_vector([random_unit_vector(n, rng) for _ in range(k)])
        a = rng.standard_normal((n, l)) + 1j * rng.standard_normal((n, l))
        b = rng.standard_normal((l, n)) + 1j * rng.standard_normal((l, n))
        return _unit((a @ b).reshape(-1))
    if spec.family == "wedge":
        if l == 1:
            g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
            q, _ = np.linalg.qr(g)
            return wedge(q.T)
        m = min(l, n // 2)
        x = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        y = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        return _unit((x @ y.T - y @ x.T).reshape(-1))
    eta = random_unit_vector(n, rng)
    return product_vector([eta] * k)


def _tensor_rank_l(w, n, l):
    mat = w.reshape(n, n)
    u, s, vh = np.linalg.svd(mat)
    r = min(l, s.size)
    trunc = (u[:, :r] * s[:r]) @ vh[:r]
    nrm = np.linalg.norm(trunc)
    if nrm == 0:
        return None
    return (trunc / nrm).reshape(-1)


def _tensor_hopm(w, k, n, init, iters):
    t = np.asarray(w).conj().reshape((n,) * k)
    factors = _mode_factors(init if init is not None else w, k, n)
    best = -1.0
    for _ in range(iters):
        for m in range(k):
            g = _contract_except(t, factors, m)
            nrm = np.linalg.norm(g)
            if nrm == 0:
                break
            factors[m] = g.conj() / nrm
        val = nrm
        if val <= best * (1 + 1e-13):
            break
        best = val
    return product_vector(factors)


def _wedge_rank_l(w, n, l):
    anti = project_vector(w, 2, n, "fermionic")
    if np.linalg.norm(anti) == 0:
        return None
    # singular values of an antisymmetric matrix come in pairs, so the top-2l
    # truncation is itself antisymmetric unless the cut splits a degenerate pair
    u, s, vh = np.linalg.svd(anti.reshape(n, n))
    r = min(2 * l, s.size)
    trunc = (u[:, :r] * s[:r]) @ vh[:r]
    nrm = np.linalg.norm(trunc)
    if nrm > 0 and np.linalg.norm(trunc + trunc.T) <= 1e-12 * nrm and (r == s.size or s[r - 1] - s[r] > 1e-9 * s[0]):
        return (trunc / nrm).reshape(-1)
    form = slater_decompose(anti, n, cutoff=0.0)
    mat = np.zeros((n, n), dtype=complex)
    for lam, (e, f) in zip(form.coefficients[:l], form.pair_frame[:l]):
        mat += lam * (np.outer(e, f) - np.outer(f, e))
    nrm = np.linalg.norm(mat)
    return (mat / nrm).reshape(-1) if nrm > 0 else None


def _one_body_frame(vec, k, n):
    """Top-k eigenvectors of the one-particle reduced matrix of a k-vector."""
    t = np.asarray(vec).reshape(n, -1)
    rdm = t @ t.conj().T
    _, vecs = np.linalg.eigh(rdm)
    return [vecs[:, -1 - i] for i in range(k)]


def _wedge_sweeps(w, k, n, init, iters):
    anti = project_vector(w, k, n, "fermionic")
    t = math.sqrt(math.factorial(k)) * anti.conj().reshape((n,) * k)
    frame = _one_body_frame(init if init is not None else anti, k, n)
    q, _ = np.linalg.qr(np.column_stack(frame))
    frame = [q[:, i] for i in range(k)]
    best = -1.0
    for _ in range(iters):
        for m in range(k):
            g = _contract_except(t, frame, m).conj()
            others = np.column_stack([frame[j] for j in range(k) if j != m])
            g = g - others @ (others.conj().T @ g)
            nrm = np.linalg.norm(g)
            if nrm == 0:
                break
            frame[m] = g / nrm
        val = nrm
        if val <= best * (1 + 1e-13):
            break
        best = val
    return wedge(np.array(frame))


def _vee_search(w, k, n, init, iters):
    sym = project_vector(w, k, n, "bosonic").conj().reshape((n,) * k)

    def value(eta):
        return _full_contract(sym, eta, k)

    if init is not None:
        eta0 = _one_body_frame(init, 1, n)[0]
    else:
        eta0 = _mode_factors(sym.conj(), k, n)[0]

    def objective(p):
        eta = p[:n] + 1j * p[n:]
        nrm = np.linalg.norm(eta)
        if nrm == 0:
            return 0.0
        return -abs(value(eta / nrm)) ** 2

    p0 = np.concatenate([eta0.real, eta0.imag])
    res = minimize(objective, p0, method="L-BFGS-B", options={"maxiter": max(iters, 20)})
    p = res.x if res.fun <= objective(p0) else p0
    eta = _unit(p[:n] + 1j * p[n:])
    return product_vector([eta] * k)


def _full_contract(t, eta, k):
    out = t
    for _ in range(k):
        out = np.tensordot(out, eta, axes=([out.ndim - 1], [0]))
    return complex(out)


def maximize_overlap(w, spec, init=None, iters=50):
    """Return (ξ, |<ξ, w>|) with ξ ∈ V and <ξ, w> ≥ 0."""
    k, n, l = spec.arity, spec.local_dim, spec.rank_bound
    w = np.asarray(w, dtype=complex).reshape(-1)
    xi = None
    if spec.family == "tensor":
        xi = _tensor_rank_l(w, n, l) if k == 2 else _tensor_hopm(w, k, n, init, iters)
    elif spec.family == "wedge":
        xi = _wedge_rank_l(w, n, l) if k == 2 else _wedge_sweeps(w, k, n, init, iters)
    else:
        xi = _vee_search(w, k, n, init, iters)
    if xi is None:
        xi = init if init is not None else basis_members(spec)[:, 0]
    return _align(np.asarray(xi, dtype=complex), w)


def _unfolding_bound(vec, k, n):
    t = np.asarray(vec).reshape((n,) * k)
    best = math.inf
    for m in range(k):
        unf = np.moveaxis(t, m, 0).reshape(n, -1)
        best = min(best, np.linalg.norm(unf, 2))
    return best


def overlap_bound(w, spec):
    """Certified upper bound on sup_{ξ∈V} |<ξ, w>|.

    Bipartite families are exact (truncated singular values); for k ≥ 3 the
    injective norm is bounded by the smallest single-mode unfolding norm.
    """
    k, n, l = spec.arity, spec.local_dim, spec.rank_bound
    w = np.asarray(w, dtype=complex).reshape(-1)
    if spec.family == "tensor":
        if k == 2:
            s = np.linalg.svd(w.reshape(n, n), compute_uv=False)
            val = math.sqrt(float(np.sum(s[:l] ** 2)))
        elif k == 1:
            val = float(np.linalg.norm(w))
        else:
            val = _unfolding_bound(w, k, n)
    elif spec.family == "wedge":
        anti = project_vector(w, k, n, "fermionic")
        if k == 2:
            s = np.linalg.svd(anti.reshape(n, n), compute_uv=False)
            val = math.sqrt(float(np.sum(s[: 2 * l] ** 2)))
        else:
            val = math.sqrt(math.factorial(k)) * _unfolding_bound(anti, k, n)
            val = min(val, float(np.linalg.norm(anti)))
    else:
        sym = project_vector(w, k, n, "bosonic")
        if k == 2:
            val = float(np.linalg.norm(sym.reshape(n, n), 2))
        else:
            val = _unfolding_bound(sym, k, n)
    return val * (1 + _SLACK) + 1e-15


@lru_cache(maxsize=None)
def _vee_members(k, n):
    rng = np.random.default_rng([k, n, 7])
    w = sector_basis(k, n, "bosonic")
    d = w.shape[1]
    for _ in range(50):
        cols = [product_vector([random_unit_vector(n, rng)] * k) for _ in range(d)]
        mem = np.column_stack(cols)
        if np.linalg.cond(w.conj().T @ mem) < 1e4:
            break
    mem.setflags(write=False)
    return mem


def basis_members(spec):
    """Members of V (as columns) spanning the sector of the family.

    For tensor and wedge families these are the orthonormal sector basis
    itself; for vee they are symmetric products in general position.
    """
    if spec.family == "vee":
        return _vee_members(spec.arity, spec.local_dim)
    return sector_basis(spec.arity, spec.local_dim, spec.sector)


def in_family(vec, spec, tol=1e-8):
    """Numerical membership test for V (unit norm plus rank structure)."""
    k, n, l = spec.arity, spec.local_dim, spec.rank_bound
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(vec) - 1) > tol:
        return False
    if spec.family == "tensor":
        if k == 2:
            s = np.linalg.svd(vec.reshape(n, n), compute_uv=False)
            return bool(np.sum(s[l:] ** 2) <= tol**2 * 1e4)
        return all(np.linalg.svd(np.moveaxis(vec.reshape((n,) * k), m, 0).reshape(n, -1),
                                 compute_uv=False)[1] <= tol * 100 for m in range(k))
    if spec.family == "wedge":
        if np.linalg.norm(project_vector(vec, k, n, "fermionic") - vec) > tol:
            return False
        if k == 2:
            s = np.linalg.svd(vec.reshape(n, n), compute_uv=False)
            return bool(np.sum(s[2 * l:] ** 2) <= tol**2 * 1e4)
        occ = np.linalg.eigvalsh(vec.reshape(n, -1) @ vec.reshape(n, -1).conj().T)
        # a Slater determinant has k equal one-body occupations
        return bool(np.all(np.abs(occ[-k:] - 1 / k) < tol * 100) and np.all(occ[:-k] < tol * 100))
    if np.linalg.norm(project_vector(vec, k, n, "bosonic") - vec) > tol:
        return False
    occ = np.linalg.eigvalsh(vec.reshape(n, -1) @ vec.reshape(n, -1).conj().T)
    return bool(np.all(occ[:-1] < tol * 100))
