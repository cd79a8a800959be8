import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entgauge.decompositions import (
    RankReport,
    SchmidtForm,
    SlaterForm,
    antisymmetric_coefficient_matrix,
    rank,
    schmidt_decompose,
    schmidt_rank,
    slater_decompose,
    slater_rank,
)
from entgauge.errors import NotAntisymmetric, UnsupportedArity
from entgauge.tensor_core import PureState, product_vector, project_vector, wedge

from conftest import basis, random_vector

SQ2 = math.sqrt(2)
seeds = st.integers(0, 2**32 - 1)


def antisym_state(rng, n):
    v = project_vector(random_vector(rng, n * n), 2, n, "fermionic")
    return PureState.from_vector(v, 2, n, normalize=True)


def test_schmidt_examples():
    e = basis(2)
    f = schmidt_decompose(PureState(2, 2, product_vector([e[0], e[1]])))
    assert f.coefficients[0] == pytest.approx(1) and rank(f).rank == 1
    f = schmidt_decompose(PureState(2, 2, wedge([e[0], e[1]])))
    assert np.allclose(f.coefficients, [1 / SQ2, 1 / SQ2])
    v = 0.8 * product_vector([e[0], e[0]]) + 0.6 * product_vector([e[1], e[1]])
    assert np.allclose(schmidt_decompose(PureState(2, 2, v)).coefficients, [0.8, 0.6])


def test_schmidt_needs_two_parties():
    with pytest.raises(UnsupportedArity):
        schmidt_decompose(PureState(3, 2, np.eye(8)[0]))


@given(seeds, st.integers(2, 6))
def test_schmidt_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    s = PureState(2, n, random_vector(rng, n * n))
    f = schmidt_decompose(s)
    assert np.linalg.norm(f.reconstruct() - s.amplitudes) <= 1e-10
    assert np.all(np.diff(f.coefficients) <= 1e-15)
    assert np.sum(f.coefficients**2) == pytest.approx(1, abs=1e-10)
    for frame in (f.left_frame, f.right_frame):
        assert np.allclose(frame.conj().T @ frame, np.eye(frame.shape[1]), atol=1e-10)


@given(seeds, st.integers(2, 5))
def test_schmidt_coefficients_unique(seed, n):
    # the same state presented in rotated local bases has the same coefficients
    rng = np.random.default_rng(seed)
    s = PureState(2, n, random_vector(rng, n * n))
    u, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    w, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    rotated = PureState(2, n, np.kron(u, w) @ s.amplitudes)
    assert np.allclose(schmidt_decompose(s).coefficients,
                       schmidt_decompose(rotated).coefficients, atol=1e-10)


def test_slater_examples():
    e = basis(4)
    f = slater_decompose(PureState(2, 2, wedge([e[0, :2], e[1, :2]])))
    assert np.allclose(f.coefficients, [1])
    v = (wedge([e[0], e[1]]) + wedge([e[2], e[3]])) / SQ2
    f = slater_decompose(PureState(2, 4, v))
    assert np.allclose(f.coefficients, [1 / SQ2, 1 / SQ2])
    assert slater_rank(PureState(2, 4, v)) == 2
    assert np.linalg.norm(f.reconstruct() - v) <= 1e-10


def test_slater_rejects_symmetric_part():
    e = basis(2)
    with pytest.raises(NotAntisymmetric):
        slater_decompose(PureState(2, 2, product_vector([e[0], e[1]])))
    with pytest.raises(NotAntisymmetric):
        antisymmetric_coefficient_matrix(PureState(2, 2, product_vector([e[0], e[0]])))


@given(seeds, st.integers(2, 6))
def test_slater_round_trip_and_pairing(seed, n):
    rng = np.random.default_rng(seed)
    s = antisym_state(rng, n)
    f = slater_decompose(s)
    assert np.linalg.norm(f.reconstruct() - s.amplitudes) <= 1e-10
    assert f.truncated <= 1e-10
    # {e_i} ∪ {f_i} is an orthonormal family
    frame = np.column_stack([f.left_frame, f.right_frame])
    assert np.allclose(frame.conj().T @ frame, np.eye(frame.shape[1]), atol=1e-10)
    # every Slater coefficient shows up twice, divided by √2, among the Schmidt ones
    sch = schmidt_decompose(s).coefficients
    paired = np.sort(np.repeat(f.coefficients / SQ2, 2))[::-1]
    assert np.allclose(sch[: paired.size], paired, atol=1e-10)
    assert np.allclose(sch[paired.size:], 0, atol=1e-10)


def test_slater_degenerate_block():
    # four equal Schmidt values mixed by a random unitary
    rng = np.random.default_rng(8)
    e = basis(4)
    v = (wedge([e[0], e[1]]) + wedge([e[2], e[3]])) / SQ2
    u, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    s = PureState(2, 4, np.kron(u, u) @ v)
    f = slater_decompose(s)
    assert np.allclose(f.coefficients, [1 / SQ2] * 2)
    assert np.linalg.norm(f.reconstruct() - s.amplitudes) <= 1e-10


def test_c3_wedge_c3_has_slater_rank_one():
    rng = np.random.default_rng(9)
    for _ in range(50):
        assert slater_rank(antisym_state(rng, 3)) == 1


def test_example_matrix():
    e = basis(3)
    a = antisymmetric_coefficient_matrix(PureState(2, 3, wedge([e[0], e[1]])))
    assert np.allclose(a, [[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    rng = np.random.default_rng(10)
    for _ in range(20):
        a_, b_, c_ = random_vector(rng, 3)
        v = a_ * wedge([e[0], e[1]]) + b_ * wedge([e[0], e[2]]) + c_ * wedge([e[1], e[2]])
        a = antisymmetric_coefficient_matrix(PureState(2, 3, v))
        assert np.allclose(a, -a.T, atol=1e-12)
        u = np.array([c_, -b_, a_])  # spans the kernel of A
        ata = a.conj().T @ a
        assert np.allclose(ata, np.eye(3) - np.outer(u, u.conj()), atol=1e-9)
        assert np.sum(np.linalg.svd(a / SQ2, compute_uv=False)) == pytest.approx(SQ2)


def test_rank_cutoff():
    form = SchmidtForm(np.array([0.8, 0.6, 3e-12]), np.eye(3), np.eye(3))
    assert rank(form) == RankReport(2, "schmidt", 1e-10)
    assert rank(SchmidtForm(np.array([1.0]), np.eye(1), np.eye(1))).rank == 1
    assert rank(SlaterForm(np.array([1 / SQ2, 1 / SQ2]), np.zeros((2, 2, 4)))).rank == 2
    with pytest.raises(ValueError):
        rank(form, cutoff=-1)


@given(seeds, st.integers(3, 6), st.integers(1, 3))
def test_slater_rank_of_projection_bounded_by_schmidt_rank(seed, n, r):
    rng = np.random.default_rng(seed)
    v = sum(product_vector([random_vector(rng, n), random_vector(rng, n)]) for _ in range(r))
    anti = project_vector(v, 2, n, "fermionic")
    if np.linalg.norm(anti) < 1e-8:
        return
    s = PureState.from_vector(anti, 2, n, normalize=True)
    assert slater_rank(s) <= schmidt_rank(PureState.from_vector(v, 2, n, normalize=True))
