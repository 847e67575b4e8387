"""Dense complex linear algebra and projector primitives.

Operators are plain ``numpy`` complex arrays of shape ``(d, d)``; state vectors
are complex arrays of shape ``(d,)``. Nothing here mutates its inputs.

Tolerance checks compare a Frobenius norm against ``tau * d`` so that the same
default works across dimensions up to a few hundred.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NormalizationError,
    NotAProjectorError,
    NotHermitianError,
    NotUnitaryError,
    QTruthError,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-10
    herm: float = 1e-10
    idem: float = 1e-10
    eig: float = 1e-8
    eq: float = 1e-10

    def __post_init__(self):
        for name in ("norm", "herm", "idem", "eig", "eq"):
            if getattr(self, name) < 0:
                raise QTruthError(f"tolerance {name} must be >= 0")


DEFAULT_TOL = Tolerances()


def as_operator(op) -> np.ndarray:
    a = np.asarray(op, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatchError(f"operator must be square with dim >= 1, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise QTruthError("operator has non-finite entries")
    return a


def as_state(state, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    v = np.asarray(state, dtype=complex)
    if v.ndim != 1 or v.size < 1:
        raise DimensionMismatchError(f"state must be a non-empty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise QTruthError("state has non-finite amplitudes")
    if abs(np.linalg.norm(v) - 1.0) > tol.norm:
        raise NormalizationError(f"state norm {np.linalg.norm(v):.3e} differs from 1")
    return v


def close(a, b, tau: float) -> bool:
    """Frobenius distance of ``a`` and ``b`` within ``tau`` times the dimension."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.linalg.norm(a - b) <= tau * max(1, a.shape[0]))


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def basis_state(dim: int, i: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[i] = 1.0
    return v


def dagger(op) -> np.ndarray:
    return np.asarray(op).conj().T


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def is_hermitian(op, tol: Tolerances = DEFAULT_TOL) -> bool:
    op = as_operator(op)
    return close(op, op.conj().T, tol.herm)


def is_unitary(u, tol: Tolerances = DEFAULT_TOL) -> bool:
    u = as_operator(u)
    return close(u @ u.conj().T, identity(u.shape[0]), tol.herm)


def is_projector(op, tol: Tolerances = DEFAULT_TOL) -> bool:
    op = as_operator(op)
    if not close(op, op.conj().T, tol.herm):
        return False
    if not close(op @ op, op, tol.idem):
        return False
    # Hermitian from here on, so eigvalsh is safe.
    ev = np.linalg.eigvalsh((op + op.conj().T) / 2)
    return bool(np.all(np.minimum(np.abs(ev), np.abs(ev - 1.0)) <= tol.eig))


def check_projector(op, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Return ``op`` as an array, raising ``NotAProjectorError`` unless it is a projector."""
    a = as_operator(op)
    if not is_projector(a, tol):
        raise NotAProjectorError("operator is not a Hermitian idempotent")
    return a


def outer(state, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Rank-1 truth operator |psi><psi| of a normalized state."""
    v = as_state(state, tol)
    return np.outer(v, v.conj())


def conjugate(op, u, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Change of representation ``u @ op @ u^dagger``."""
    op = as_operator(op)
    u = as_operator(u)
    if op.shape != u.shape:
        raise DimensionMismatchError(f"operator dim {op.shape[0]} vs unitary dim {u.shape[0]}")
    if not is_unitary(u, tol):
        raise NotUnitaryError("conjugating matrix is not unitary")
    return u @ op @ u.conj().T


def tensor(a, b) -> np.ndarray:
    return np.kron(as_operator(a), as_operator(b))


def trace_product(a, b) -> complex:
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dims {a.shape[0]} and {b.shape[0]} differ")
    # tr(AB) without forming the product
    return complex(np.einsum("ij,ji->", a, b))


def random_unitary(dim: int, rng: np.random.Generator | int | None = None) -> np.ndarray:
    """Haar-random unitary: QR of a complex Gaussian matrix with phase-fixed diagonal."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(dim: int, rng: np.random.Generator | int | None = None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_projector(dim: int, rank: int, rng: np.random.Generator | int | None = None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    u = random_unitary(dim, rng)
    cols = u[:, :rank]
    return cols @ cols.conj().T


def check_hermitian(op, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    a = as_operator(op)
    if not is_hermitian(a, tol):
        raise NotHermitianError("operator is not Hermitian")
    return a
