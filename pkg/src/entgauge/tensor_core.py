"""Dense multilinear algebra on (C^n)^{⊗k}.

Vectors of the k-fold tensor power are flat complex arrays of length n**k.
The multi-index (i_1, ..., i_k) is flattened row-major, i.e. the same order
numpy uses for ``reshape((n,) * k)``.  Every other module relies on this.

The inner product is linear in the first argument: ``<a, b> = sum a * conj(b)``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce

import numpy as np

from .errors import InvalidArgument

UNIT_TOL = 1e-12
DENSITY_TOL = 1e-10
ZERO_TOL = 1e-12


def inner(a, b):
    """<a, b>, linear in ``a`` and antilinear in ``b``."""
    return complex(np.vdot(b, a))


def _as_vector_list(vectors):
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        arr = vectors.astype(complex)
    else:
        vectors = list(vectors)
        if not vectors:
            raise InvalidArgument("empty vector list")
        arr = np.array([np.asarray(v, dtype=complex) for v in vectors])
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise InvalidArgument("expected a nonempty list of equal-length vectors")
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector of (C^n)^{⊗k}."""

    parties: int
    local_dim: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.parties < 1 or self.local_dim < 1:
            raise InvalidArgument("parties and local_dim must be positive")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.local_dim**self.parties:
            raise InvalidArgument(
                f"expected {self.local_dim ** self.parties} amplitudes, got {amps.size}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > UNIT_TOL:
            raise InvalidArgument(f"state is not normalised (norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vector, parties, local_dim, normalize=False):
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise InvalidArgument("cannot normalise the zero vector")
            vec = vec / norm
        return cls(parties, local_dim, vec)

    @property
    def dim(self):
        return self.local_dim**self.parties

    def tensor(self):
        return self.amplitudes.reshape((self.local_dim,) * self.parties)

    def density(self):
        return DensityFunctional(
            self.parties, self.local_dim, np.outer(self.amplitudes, self.amplitudes.conj())
        )

    def __repr__(self):
        return f"PureState(parties={self.parties}, local_dim={self.local_dim})"


@dataclass(frozen=True, eq=False)
class DensityFunctional:
    """Density matrix of a normal state on B((C^n)^{⊗k}).

    The functional acts as ``phi(x) = tr(matrix @ x)``.
    """

    parties: int
    local_dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.parties < 1 or self.local_dim < 1:
            raise InvalidArgument("parties and local_dim must be positive")
        dim = self.local_dim**self.parties
        rho = np.array(self.matrix, dtype=complex)
        if rho.shape != (dim, dim):
            raise InvalidArgument(f"expected a {dim}x{dim} matrix, got {rho.shape}")
        herm_err = np.max(np.abs(rho - rho.conj().T))
        if herm_err > DENSITY_TOL:
            raise InvalidArgument(f"matrix is not Hermitian (deviation {herm_err:.3g})")
        rho = (rho + rho.conj().T) / 2
        tr = np.trace(rho).real
        if abs(tr - 1.0) > DENSITY_TOL:
            raise InvalidArgument(f"trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(rho).min()
        if lo < -DENSITY_TOL:
            raise InvalidArgument(f"matrix has negative eigenvalue {lo:.3g}")
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)

    @property
    def dim(self):
        return self.local_dim**self.parties

    def __call__(self, x):
        return complex(np.trace(self.matrix @ np.asarray(x)))

    def __repr__(self):
        return f"DensityFunctional(parties={self.parties}, local_dim={self.local_dim})"


def as_density(state):
    """Promote a PureState to its vector functional; pass densities through."""
    if isinstance(state, PureState):
        return state.density()
    if isinstance(state, DensityFunctional):
        return state
    raise InvalidArgument(f"expected PureState or DensityFunctional, got {type(state).__name__}")


@dataclass(frozen=True)
class Permutation:
    image: tuple
    sign: int

    def __post_init__(self):
        image = tuple(int(i) for i in self.image)
        if sorted(image) != list(range(len(image))):
            raise InvalidArgument(f"{image} is not a permutation of 0..{len(image) - 1}")
        if self.sign != permutation_sign(image):
            raise InvalidArgument("sign does not match the parity of the permutation")
        object.__setattr__(self, "image", image)

    @classmethod
    def of(cls, image):
        image = tuple(int(i) for i in image)
        return cls(image, permutation_sign(image))

    @property
    def degree(self):
        return len(self.image)

    def inverse(self):
        return Permutation.of(np.argsort(self.image))


def permutation_sign(image):
    """Parity of a permutation given as an image tuple, via cycle counting."""
    image = list(image)
    seen = [False] * len(image)
    sign = 1
    for start in range(len(image)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = image[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def all_permutations(k):
    return tuple(Permutation.of(p) for p in itertools.permutations(range(k)))


class SymmetrySector(enum.Enum):
    FULL = "full"
    BOSONIC = "bosonic"
    FERMIONIC = "fermionic"


def _vector_and_shape(state, parties=None, local_dim=None):
    if isinstance(state, PureState):
        return state.amplitudes, state.parties, state.local_dim
    vec = np.asarray(state, dtype=complex).reshape(-1)
    if parties is None or local_dim is None:
        raise InvalidArgument("raw vectors need explicit parties and local_dim")
    if vec.size != local_dim**parties:
        raise InvalidArgument(f"vector length {vec.size} != {local_dim}**{parties}")
    return vec, parties, local_dim


def permute_vector(vec, image, parties, local_dim):
    """U_pi on a raw flat vector: output factor m is input factor image[m]."""
    if len(image) != parties:
        raise InvalidArgument(f"permutation of degree {len(image)} on {parties} parties")
    tensor = np.asarray(vec).reshape((local_dim,) * parties)
    return np.transpose(tensor, axes=tuple(image)).reshape(-1)


def apply_permutation(state, perm):
    """Return U_pi xi as a PureState; the norm is preserved exactly."""
    if not isinstance(state, PureState):
        raise InvalidArgument("apply_permutation expects a PureState")
    image = perm.image if isinstance(perm, Permutation) else tuple(perm)
    out = permute_vector(state.amplitudes, image, state.parties, state.local_dim)
    return PureState(state.parties, state.local_dim, out)


def project_vector(vec, parties, local_dim, sector):
    """Apply P+ or P- (or nothing) to a raw flat vector, action-wise."""
    sector = SymmetrySector(sector)
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    if sector is SymmetrySector.FULL:
        return vec.copy()
    if parties < 2:
        raise InvalidArgument("bosonic/fermionic sectors need at least two parties")
    tensor = vec.reshape((local_dim,) * parties)
    acc = np.zeros_like(tensor)
    for perm in all_permutations(parties):
        term = np.transpose(tensor, axes=perm.image)
        acc += term if sector is SymmetrySector.BOSONIC else perm.sign * term
    return acc.reshape(-1) / math.factorial(parties)


def project_sector(state, sector, parties=None, local_dim=None):
    """P± xi, unnormalised.  May be the zero vector, so a raw array is returned."""
    vec, k, n = _vector_and_shape(state, parties, local_dim)
    return project_vector(vec, k, n, sector)


@lru_cache(maxsize=None)
def _projector_cached(parties, local_dim, sector_value):
    dim = local_dim**parties
    sector = SymmetrySector(sector_value)
    if sector is SymmetrySector.FULL:
        mat = np.eye(dim, dtype=complex)
    else:
        eye = np.eye(dim, dtype=complex)
        mat = np.column_stack([project_vector(eye[:, j], parties, local_dim, sector)
                               for j in range(dim)])
    mat.setflags(write=False)
    return mat


def sector_projector(parties, local_dim, sector):
    """P± as an explicit n^k x n^k matrix (read-only, cached)."""
    return _projector_cached(parties, local_dim, SymmetrySector(sector).value)


@lru_cache(maxsize=None)
def _sector_basis_cached(parties, local_dim, sector_value):
    sector = SymmetrySector(sector_value)
    dim = local_dim**parties
    if sector is SymmetrySector.FULL:
        basis = np.eye(dim, dtype=complex)
    elif sector is SymmetrySector.FERMIONIC:
        eye = np.eye(local_dim, dtype=complex)
        cols = [wedge(eye[list(idx)]) for idx in itertools.combinations(range(local_dim), parties)]
        basis = np.column_stack(cols) if cols else np.zeros((dim, 0), dtype=complex)
    else:
        eye = np.eye(local_dim, dtype=complex)
        cols = []
        for idx in itertools.combinations_with_replacement(range(local_dim), parties):
            v = vee(eye[list(idx)])
            cols.append(v / np.linalg.norm(v))
        basis = np.column_stack(cols)
    basis.setflags(write=False)
    return basis


def sector_basis(parties, local_dim, sector):
    """Orthonormal basis of a sector as columns.

    Fermionic columns are e_{i1}∧...∧e_{ik} for i1 < ... < ik; bosonic columns
    are normalised symmetrised occupation vectors.
    """
    return _sector_basis_cached(parties, local_dim, SymmetrySector(sector).value)


def product_vector(vectors):
    arr = _as_vector_list(vectors)
    return reduce(np.multiply.outer, arr).reshape(-1)


def wedge(vectors):
    """η1∧...∧ηk = sqrt(k!) P- (η1⊗...⊗ηk)."""
    arr = _as_vector_list(vectors)
    k, n = arr.shape
    if k > n:
        return np.zeros(n**k, dtype=complex)
    out = math.sqrt(math.factorial(k)) * project_vector(product_vector(arr), k, n, "fermionic")
    scale = np.prod(np.linalg.norm(arr, axis=1))
    if np.linalg.norm(out) <= ZERO_TOL * max(scale, 1.0):
        out[:] = 0
    return out


def vee(vectors):
    """η1∨...∨ηk = P+ (η1⊗...⊗ηk); no sqrt(k!) factor."""
    arr = _as_vector_list(vectors)
    k, n = arr.shape
    return project_vector(product_vector(arr), k, n, "bosonic")


def wedge_gram_inner(xs, ys):
    """<ξ1∧...∧ξk, η1∧...∧ηk> as det(G) with G[i, j] = <ξ_j, η_i>."""
    xs = _as_vector_list(xs)
    ys = _as_vector_list(ys)
    if xs.shape != ys.shape:
        raise InvalidArgument(f"shape mismatch {xs.shape} vs {ys.shape}")
    gram = ys.conj() @ xs.T
    return complex(np.linalg.det(gram))


def wedge_orthogonalize(vectors):
    """Orthogonal system with the same wedge product and no longer vectors.

    Splits every later vector against the current head into a component
    along the head and one orthogonal to it, keeps the orthogonal part and
    recurses on the tail.
    """
    arr = _as_vector_list(vectors).copy()
    k = arr.shape[0]
    for head in range(k - 1):
        h = arr[head]
        hh = np.vdot(h, h).real
        if hh <= ZERO_TOL**2:
            continue
        tail = arr[head + 1:]
        coeffs = (tail @ h.conj()) / hh
        arr[head + 1:] = tail - np.outer(coeffs, h)
    return arr


def random_unit_vector(dim, rng):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
