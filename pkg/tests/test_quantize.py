import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtruth import quantize as qz
from qtruth.errors import ConfigError, QTruthError
from qtruth.hilbert import conjugate, identity, is_projector, is_unitary


def fft_dft(n):
    # independent construction: inverse FFT of the identity, rescaled to be unitary
    return np.fft.ifft(np.eye(n), axis=0) * math.sqrt(n)


def test_lattice_validation():
    for bad in (0, 1, -3):
        with pytest.raises(ConfigError):
            qz.Lattice(bad)
    with pytest.raises(ConfigError):
        qz.Lattice(4, spacing=0)


def test_translation_examples():
    assert np.allclose(qz.translation_operator(qz.Lattice(2)), [[0, 1], [1, 0]])
    t3 = qz.translation_operator(qz.Lattice(3))
    assert np.allclose(np.linalg.matrix_power(t3, 3), identity(3))
    t = qz.translation_operator(qz.Lattice(7))
    assert is_unitary(t)
    assert np.allclose(t @ np.eye(7)[2], np.eye(7)[3])


def test_kernel_examples():
    assert np.allclose(qz.momentum_truth_kernel(qz.Lattice(4), 0).op, 0.25 * np.ones((4, 4)))
    assert np.allclose(qz.momentum_truth_kernel(qz.Lattice(2), 1).op, 0.5 * np.array([[1, -1], [-1, 1]]))
    with pytest.raises(QTruthError):
        qz.momentum_truth_kernel(qz.Lattice(4), 4)


def test_dft_examples():
    assert np.allclose(qz.dft_matrix(qz.Lattice(2)), np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    assert is_unitary(qz.dft_matrix(qz.Lattice(8)))
    lat = qz.Lattice(4)
    assert np.allclose(conjugate(np.diag([0, 1, 0, 0]), qz.dft_matrix(lat)), qz.momentum_truth_kernel(lat, 1).op)


@pytest.mark.parametrize("n", [2, 3, 5, 8, 16, 33])
def test_dft_matches_fft(n):
    assert np.allclose(qz.dft_matrix(qz.Lattice(n)), fft_dft(n), atol=1e-12)


@given(st.integers(2, 40), st.data())
def test_kernel_is_translation_invariant_projector(n, data):
    lat = qz.Lattice(n)
    k = data.draw(st.integers(0, n - 1))
    op = qz.momentum_truth_kernel(lat, k).op
    assert is_projector(op)
    assert np.trace(op).real == pytest.approx(1)
    assert qz.is_translation_invariant(op, lat)
    col = fft_dft(n)[:, k]
    assert np.allclose(op, np.outer(col, col.conj()), atol=1e-12)


@given(st.integers(2, 48))
def test_family_complete_and_dft_diagonalizes_shift(n):
    lat = qz.Lattice(n)
    assert np.linalg.norm(sum(qz.momentum_projectors(lat)) - identity(n)) <= 1e-10 * n
    s = qz.dft_matrix(lat)
    d = s.conj().T @ qz.translation_operator(lat) @ s
    assert np.linalg.norm(d - np.diag(np.diag(d))) <= 1e-10 * n


def test_momentum_operator():
    lat2 = qz.Lattice(2)
    p = qz.momentum_operator(lat2, [0.0, math.pi])
    assert np.allclose(np.sort(np.linalg.eigvalsh(p)), [0, math.pi])
    lat = qz.Lattice(16)
    p = qz.momentum_operator(lat)
    spec = qz.default_spectrum(lat)
    for k in range(16):
        psi = qz.plane_wave(lat, k)
        assert np.allclose(p @ psi, spec[k] * psi)
    t = qz.translation_operator(lat)
    assert np.allclose(p @ t, t @ p)
    with pytest.raises(QTruthError):
        qz.momentum_operator(lat, [1.0, 2.0])


def test_signed_spectrum():
    assert [qz.signed_mode(k, 6) for k in range(6)] == [0, 1, 2, 3, -2, -1]
    lat = qz.Lattice(4, spacing=0.5, hbar=2.0)
    assert np.allclose(qz.default_spectrum(lat), 2.0 * 2 * np.pi * np.array([0, 1, 2, -1]) / (4 * 0.5))


def test_angular_kernel():
    assert np.allclose(qz.angular_kernel(0, 4), 0.25 * np.ones((4, 4)))
    k1 = qz.angular_kernel(1, 4)
    assert is_projector(k1)
    assert np.trace(k1).real == pytest.approx(1)
    for m in range(-3, 4):
        for m2 in range(-3, 4):
            if m != m2:
                assert np.allclose(qz.angular_kernel(m, 8) @ qz.angular_kernel(m2, 8), 0)
    with pytest.raises(QTruthError):
        qz.angular_kernel(3, 6)


def test_interval_examples():
    lat = qz.Lattice(8)
    mom = qz.momentum_projectors(lat)
    assert np.allclose(qz.interval_statement(mom, 3, 7), identity(8))
    assert np.allclose(qz.interval_statement(mom, 3, 0), mom[3])
    assert np.allclose(qz.interval_statement(qz.position_projectors(lat), 6, 2), np.diag([1, 0, 0, 0, 0, 0, 1, 1]))
    with pytest.raises(QTruthError):
        qz.interval_statement(mom, 0, 8)


def test_interval_commutator_norm_oracle():
    # ||[Q, P]||_F^2 = 2 (tr QP - tr QPQP) for projectors Q, P
    n, w = 64, 8
    lat = qz.Lattice(n)
    q = np.diag([1.0] * (w + 1) + [0.0] * (n - w - 1))
    p = sum(qz.momentum_truth_kernel(lat, k).op for k in range(w + 1))
    qp = q @ p
    oracle = math.sqrt(2 * (np.trace(qp).real - np.trace(qp @ qp).real))
    assert qz.interval_commutator_norms(n, (w,))[0] == pytest.approx(oracle, rel=1e-10)


def test_commutator_norm_independent_of_interval_start():
    a = qz.interval_commutator_norms(32, (2, 4, 8))
    b = qz.interval_commutator_norms(32, (2, 4, 8), start_q=5, start_p=11)
    assert np.allclose(a, b)


def test_relative_commutator_decreases_with_width():
    rel = qz.relative_interval_commutator_norms(64)
    assert all(b < a for a, b in zip(rel, rel[1:]))


def test_kernel_csv_layout():
    lat = qz.Lattice(3)
    header = qz.kernels_csv_header(3)
    rows = qz.kernels_csv_rows(lat)
    assert header == ["k", "row", "re0", "im0", "re1", "im1", "re2", "im2"]
    assert len(rows) == 9 and all(len(r) == len(header) for r in rows)
    op = qz.momentum_truth_kernel(lat, 2).op
    r = rows[2 * 3 + 1]
    assert r[:2] == [2, 1]
    assert np.allclose(np.array(r[2::2]) + 1j * np.array(r[3::2]), op[1])
