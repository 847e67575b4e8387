import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtruth.errors import NormalizationError, NotAProjectorError, NotUnitaryError
from qtruth.hilbert import (
    DEFAULT_TOL, PAULI_Z, Tolerances, as_state, basis_state, check_projector, conjugate, identity,
    is_hermitian, is_projector, is_unitary, outer, random_projector, random_state, random_unitary,
    tensor, trace_product,
)

H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def test_tolerance_defaults():
    t = Tolerances()
    assert (t.norm, t.herm, t.idem, t.eq, t.eig) == (1e-10, 1e-10, 1e-10, 1e-10, 1e-8)
    with pytest.raises(ValueError):
        Tolerances(eq=-1.0)


def test_outer_examples():
    assert np.allclose(outer([1, 0]), np.diag([1, 0]))
    assert np.allclose(outer(np.array([1, 1]) / math.sqrt(2)), 0.5 * np.ones((2, 2)))
    assert np.allclose(outer([0, 1, 0]), np.diag([0, 1, 0]))
    with pytest.raises(NormalizationError):
        outer([1, 1])


def test_is_projector_examples():
    assert is_projector(np.diag([1, 0]))
    assert not is_projector(0.5 * identity(2))
    assert is_projector(0.5 * np.ones((2, 2)))
    assert not is_projector(np.array([[1, 1], [0, 0]]))  # idempotent but not Hermitian
    with pytest.raises(NotAProjectorError):
        check_projector(0.5 * identity(2))


def test_conjugate_examples():
    assert np.allclose(conjugate(np.diag([1, 0]), identity(2)), np.diag([1, 0]))
    assert np.allclose(conjugate(np.diag([1, 0]), H), 0.5 * np.ones((2, 2)))
    u = random_unitary(5, 3)
    assert np.allclose(conjugate(identity(5), u), identity(5))
    with pytest.raises(NotUnitaryError):
        conjugate(identity(2), 2 * identity(2))


def test_tensor_examples():
    assert np.allclose(tensor(identity(2), identity(2)), identity(4))
    assert np.allclose(tensor(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))
    v = np.array([0, 1, -1, 0]) / math.sqrt(2)
    zz = tensor(PAULI_Z, PAULI_Z)
    assert np.allclose(zz @ v, -v)


def test_trace_product_examples():
    assert trace_product(np.diag([1, 0]), np.diag([1, 0])) == pytest.approx(1)
    assert trace_product(np.diag([1, 0]), np.diag([0, 1])) == pytest.approx(0)
    up_x = outer(np.array([1, 1]) / math.sqrt(2))
    assert trace_product(np.diag([1, 0]), up_x) == pytest.approx(0.5)


def test_basis_and_state_helpers():
    assert np.allclose(basis_state(3, 2), [0, 0, 1])
    with pytest.raises(NormalizationError):
        as_state([0.5, 0.5])


def test_random_unitary_is_deterministic():
    assert np.array_equal(random_unitary(4, 7), random_unitary(4, 7))
    assert is_unitary(random_unitary(16, 1))


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_projector_invariants(dim, seed):
    rng = np.random.default_rng(seed)
    rank = int(rng.integers(0, dim + 1))
    p = random_projector(dim, rank, rng)
    assert is_projector(p)
    ev = np.linalg.eigvalsh(p)
    assert np.all(np.minimum(np.abs(ev), np.abs(ev - 1)) <= DEFAULT_TOL.eig)
    assert np.trace(p).real == pytest.approx(rank, abs=1e-9)


@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_conjugation_preserves_trace_and_idempotency(dim, seed):
    rng = np.random.default_rng(seed)
    p = random_projector(dim, int(rng.integers(0, dim + 1)), rng)
    q = conjugate(p, random_unitary(dim, rng))
    assert is_projector(q)
    assert abs(np.trace(q) - np.trace(p)) <= 1e-10


@given(st.integers(1, 16), st.integers(0, 2**32 - 1))
def test_orthonormal_family_is_orthogonal_and_complete(dim, seed):
    u = random_unitary(dim, seed)
    fam = [outer(u[:, i]) for i in range(dim)]
    for i, a in enumerate(fam):
        for j, b in enumerate(fam):
            assert np.linalg.norm(a @ b - (a if i == j else 0)) <= 1e-10 * dim
    assert np.linalg.norm(sum(fam) - identity(dim)) <= 1e-10 * dim


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_tensor_trace_and_mixed_product(da, db, seed):
    rng = np.random.default_rng(seed)
    a, c = (rng.standard_normal((da, da)) for _ in range(2))
    b, d = (rng.standard_normal((db, db)) for _ in range(2))
    assert np.trace(tensor(a, b)) == pytest.approx(np.trace(a) * np.trace(b))
    assert np.allclose(tensor(a, b) @ tensor(c, d), tensor(a @ c, b @ d))


def test_random_state_normalized():
    assert abs(np.linalg.norm(random_state(9, 0)) - 1) < 1e-12
    assert is_hermitian(outer(random_state(3, 1)))
