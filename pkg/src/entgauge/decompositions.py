"""Schmidt and Slater canonical forms of bipartite vectors.

For k = 2 a vector ξ of C^n ⊗ C^n is identified with its coefficient matrix
M (``M[i, j]`` is the amplitude of e_i ⊗ e_j), so that e ⊗ f has matrix
``outer(e, f)`` (no conjugation).  Frames are stored as columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import InvalidArgument, NotAntisymmetric, UnsupportedArity
from .tensor_core import PureState

RANK_CUTOFF = 1e-10
ANTISYM_TOL = 1e-10
BLOCK_RTOL = 1e-8
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """ξ = Σ λ_i e_i ⊗ f_i with ``left_frame[:, i] = e_i``, ``right_frame[:, i] = f_i``."""

    coefficients: np.ndarray
    left_frame: np.ndarray = field(repr=False)
    right_frame: np.ndarray = field(repr=False)

    def reconstruct(self):
        mat = (self.left_frame * self.coefficients) @ self.right_frame.T
        return mat.reshape(-1)


@dataclass(frozen=True, eq=False)
class SlaterForm:
    """ξ = Σ λ_i e_i ∧ f_i with ``pair_frame[i] = (e_i, f_i)``.

    ``truncated`` is the Frobenius norm of whatever the pairing could not
    absorb (odd leftovers of a degenerate block); it is ~0 for valid input.
    """

    coefficients: np.ndarray
    pair_frame: np.ndarray = field(repr=False)  # shape (r, 2, n)
    truncated: float = 0.0

    @property
    def left_frame(self):
        return self.pair_frame[:, 0, :].T

    @property
    def right_frame(self):
        return self.pair_frame[:, 1, :].T

    def reconstruct(self):
        n = self.pair_frame.shape[2] if self.pair_frame.size else 0
        mat = np.zeros((n, n), dtype=complex)
        for lam, (e, f) in zip(self.coefficients, self.pair_frame):
            mat += lam / _SQRT2 * (np.outer(e, f) - np.outer(f, e))
        return mat.reshape(-1)


@dataclass(frozen=True)
class RankReport:
    rank: int
    kind: Literal["schmidt", "slater"]
    numerical_cutoff: float


def _fix_phase(vec):
    """Phase making the first non-negligible component real positive."""
    idx = np.flatnonzero(np.abs(vec) > 1e-12 * max(np.abs(vec).max(), 1e-300))
    if idx.size == 0:
        return 1.0 + 0j
    c = vec[idx[0]]
    return abs(c) / c


def coefficient_matrix(state, local_dim=None):
    if isinstance(state, PureState):
        if state.parties != 2:
            raise UnsupportedArity(f"bipartite operation on {state.parties} parties")
        return state.amplitudes.reshape(state.local_dim, state.local_dim)
    vec = np.asarray(state, dtype=complex).reshape(-1)
    n = local_dim if local_dim is not None else math.isqrt(vec.size)
    if n * n != vec.size:
        raise UnsupportedArity("vector length is not a square; not bipartite")
    return vec.reshape(n, n)


def schmidt_decompose(state, local_dim=None, cutoff=0.0):
    """Schmidt form from the SVD of the coefficient matrix.

    Coefficients come out nonincreasing.  Terms at or below ``cutoff`` are
    dropped (the default keeps all n of them).
    """
    mat = coefficient_matrix(state, local_dim)
    u, s, vh = np.linalg.svd(mat)
    keep = s > cutoff if cutoff > 0 else np.ones_like(s, dtype=bool)
    u, s, v = u[:, keep], s[keep], vh[keep].T  # right vectors f_i = vh[i]
    left = u.copy()
    right = v.copy()
    for i in range(s.size):
        ph = _fix_phase(left[:, i])
        left[:, i] *= ph
        right[:, i] *= np.conj(ph)
    return SchmidtForm(s.copy(), left, right)


def _check_antisymmetric(mat):
    err = np.linalg.norm(mat + mat.T) / 2  # = ||P- ξ - ξ||
    if err > ANTISYM_TOL:
        raise NotAntisymmetric(f"state is not antisymmetric (||P-ξ - ξ|| = {err:.3g})")


def antisymmetric_coefficient_matrix(state, local_dim=None):
    """Matrix A with ξ = Σ_i e_i ⊗ (1/√2) Σ_j A[i, j] e_j, i.e. A = √2 M.

    For ξ = a e1∧e2 + b e1∧e3 + c e2∧e3 this is ((0, a, b), (-a, 0, c), (-b, -c, 0)).
    """
    mat = coefficient_matrix(state, local_dim)
    _check_antisymmetric(mat)
    a = _SQRT2 * mat
    return (a - a.T) / 2


def _group_blocks(s, cutoff):
    """Index groups of (relatively) equal singular values above cutoff."""
    groups = []
    i = 0
    while i < s.size and s[i] > cutoff:
        j = i + 1
        while j < s.size and s[j] > cutoff and abs(s[j] - s[i]) <= BLOCK_RTOL * s[i]:
            j += 1
        groups.append(np.arange(i, j))
        i = j
    return groups


def slater_decompose(state, local_dim=None, cutoff=RANK_CUTOFF):
    """Slater form of an antisymmetric bipartite vector.

    Equal Schmidt values are grouped into blocks; each block spans a space K
    with ξ restricted to K ∧ K, and the restricted coefficient matrix is
    √2·λ/2 times a unitary antisymmetric matrix.  Pairs (g, h) are peeled off
    each block with h = -C conj(g) / |C conj(g)|.
    """
    mat = coefficient_matrix(state, local_dim)
    _check_antisymmetric(mat)
    mat = (mat - mat.T) / 2
    n = mat.shape[0]
    u, s, _ = np.linalg.svd(mat)
    coeffs, pairs = [], []
    leftover = 0.0
    for block in _group_blocks(s, cutoff):
        ub = u[:, block]
        c = ub.conj().T @ mat @ ub.conj()
        c = (c - c.T) / 2
        d = len(block)
        basis = np.eye(d, dtype=complex)
        taken = np.zeros((d, 0), dtype=complex)
        for _ in range(d // 2):
            proj = basis - taken @ taken.conj().T
            col = int(np.argmax(np.linalg.norm(proj, axis=0)))
            g = proj[:, col] / np.linalg.norm(proj[:, col])
            w = -c @ g.conj()
            sval = np.linalg.norm(w)
            if sval <= cutoff / _SQRT2:
                break
            h = w / sval
            c = c - sval * (np.outer(g, h) - np.outer(h, g))
            taken = np.column_stack([taken, g, h])
            e_vec, f_vec = ub @ g, ub @ h
            ph = _fix_phase(e_vec)
            pairs.append((e_vec * ph, f_vec * np.conj(ph)))
            coeffs.append(_SQRT2 * sval)
        leftover += np.linalg.norm(c) ** 2
    order = np.argsort(coeffs)[::-1] if coeffs else np.array([], dtype=int)
    coeffs = np.asarray(coeffs, dtype=float)[order]
    frame = np.array([pairs[i] for i in order], dtype=complex).reshape(len(order), 2, n)
    return SlaterForm(coeffs, frame, truncated=float(math.sqrt(leftover)))


def rank(form, cutoff=RANK_CUTOFF):
    """Schmidt or Slater rank: number of coefficients strictly above cutoff."""
    if cutoff < 0:
        raise InvalidArgument("cutoff must be nonnegative")
    if isinstance(form, SchmidtForm):
        kind = "schmidt"
    elif isinstance(form, SlaterForm):
        kind = "slater"
    else:
        raise InvalidArgument(f"cannot take the rank of {type(form).__name__}")
    return RankReport(int(np.sum(np.asarray(form.coefficients) > cutoff)), kind, cutoff)


def schmidt_rank(state, cutoff=RANK_CUTOFF, local_dim=None):
    return rank(schmidt_decompose(state, local_dim), cutoff).rank


def slater_rank(state, cutoff=RANK_CUTOFF, local_dim=None):
    return rank(slater_decompose(state, local_dim, cutoff), cutoff).rank
