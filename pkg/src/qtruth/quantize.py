"""Momentum and angular-momentum truth kernels on a periodic lattice.

Requiring the truth operator of "p = p_k" to be invariant under the cyclic
shift q -> q+1, idempotent and of unit trace forces the plane-wave kernel

    Lambda_k(q, q') = exp(2 pi i k (q - q') / n) / n,

i.e. |psi_k><psi_k| with psi_k(q) = exp(2 pi i k q / n) / sqrt(n). The unitary
that carries the diagonal momentum projectors to these kernels is the DFT
matrix S(q, p) = exp(2 pi i q p / n) / sqrt(n).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, QTruthError
from .hilbert import DEFAULT_TOL, Tolerances, check_projector


@dataclass(frozen=True)
class Lattice:
    n: int
    spacing: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"lattice needs n >= 2 sites, got {self.n}")
        if self.spacing <= 0 or self.hbar <= 0:
            raise ConfigError("lattice spacing and hbar must be positive")


@dataclass(frozen=True, eq=False)
class MomentumKernel:
    lattice: Lattice
    k: int
    op: np.ndarray


def translation_operator(lat: Lattice) -> np.ndarray:
    """Cyclic shift T|q> = |q+1 mod n>."""
    n = lat.n
    t = np.zeros((n, n), dtype=complex)
    t[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return t


def plane_wave(lat: Lattice, k: int) -> np.ndarray:
    q = np.arange(lat.n)
    return np.exp(2j * np.pi * k * q / lat.n) / np.sqrt(lat.n)


def momentum_truth_kernel(lat: Lattice, k: int) -> MomentumKernel:
    if not 0 <= k < lat.n:
        raise QTruthError(f"mode index {k} outside [0, {lat.n})")
    q = np.arange(lat.n)
    op = np.exp(2j * np.pi * k * np.subtract.outer(q, q) / lat.n) / lat.n
    return MomentumKernel(lat, k, op)


def dft_matrix(lat: Lattice) -> np.ndarray:
    q = np.arange(lat.n)
    return np.exp(2j * np.pi * np.outer(q, q) / lat.n) / np.sqrt(lat.n)


def signed_mode(k: int, n: int) -> int:
    """Map k in [0, n) onto the symmetric window (-n/2, n/2]."""
    return k if k <= n // 2 else k - n


def default_spectrum(lat: Lattice) -> np.ndarray:
    ks = np.array([signed_mode(k, lat.n) for k in range(lat.n)], dtype=float)
    return lat.hbar * 2 * np.pi * ks / (lat.n * lat.spacing)


def momentum_operator(lat: Lattice, spectrum: Sequence[float] | None = None) -> np.ndarray:
    """p = sum_k p_k Lambda_k; Hermitian, diagonal in the plane-wave basis."""
    p = default_spectrum(lat) if spectrum is None else np.asarray(spectrum, dtype=float)
    if p.shape != (lat.n,):
        raise QTruthError(f"spectrum needs {lat.n} values, got {p.size}")
    s = dft_matrix(lat)
    return (s * p) @ s.conj().T


def position_projectors(lat: Lattice) -> list[np.ndarray]:
    return [np.diag(np.eye(lat.n, dtype=complex)[q]) for q in range(lat.n)]


def momentum_projectors(lat: Lattice) -> list[np.ndarray]:
    return [momentum_truth_kernel(lat, k).op for k in range(lat.n)]


def angular_kernel(m: int, grid: int) -> np.ndarray:
    """Projector onto |m> = exp(i m phi)/sqrt(2 pi), sampled on ``grid`` angles with weight 1/grid."""
    if grid < 2 * abs(m) + 1:
        raise QTruthError(f"grid of {grid} angles aliases mode m={m}; need >= {2 * abs(m) + 1}")
    phi = 2 * np.pi * np.arange(grid) / grid
    return np.exp(1j * m * np.subtract.outer(phi, phi)) / grid


def interval_statement(projs: Sequence, i1: int, width: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Coarse statement: sum of projs[i1], ..., projs[i1 + width], indices taken mod len(projs)."""
    n = len(projs)
    if width < 0 or n == 0:
        raise QTruthError("empty interval")
    if width + 1 > n:
        raise QTruthError(f"interval of {width + 1} projectors exceeds the family size {n}")
    idx = [(i1 + j) % n for j in range(width + 1)]
    out = sum((np.asarray(projs[i], dtype=complex) for i in idx[1:]), np.asarray(projs[idx[0]], dtype=complex).copy())
    return check_projector(out, tol)


def interval_commutator_norms(n: int = 64, widths: Sequence[int] = (2, 4, 8, 16, 32),
                              start_q: int = 0, start_p: int = 0) -> list[float]:
    """Frobenius norm of [position interval, momentum interval] for each paired width."""
    lat = Lattice(n)
    pos = position_projectors(lat)
    mom = momentum_projectors(lat)
    out = []
    for w in widths:
        iq = interval_statement(pos, start_q, w)
        ip = interval_statement(mom, start_p, w)
        out.append(float(np.linalg.norm(iq @ ip - ip @ iq)))
    return out


def relative_interval_commutator_norms(n: int = 64, widths: Sequence[int] = (2, 4, 8, 16, 32)) -> list[float]:
    """Commutator norm divided by ||dI_q dI_p||_F = (width + 1)/sqrt(n)."""
    raw = interval_commutator_norms(n, widths)
    return [c / ((w + 1) / np.sqrt(n)) for c, w in zip(raw, widths)]


def kernels_csv_rows(lat: Lattice, ks: Sequence[int] | None = None) -> list[list]:
    """Rows ``k, row, re0, im0, re1, im1, ...`` for each requested kernel."""
    ks = range(lat.n) if ks is None else ks
    rows = []
    for k in ks:
        op = momentum_truth_kernel(lat, k).op
        for i in range(lat.n):
            inter = np.empty(2 * lat.n)
            inter[0::2] = op[i].real
            inter[1::2] = op[i].imag
            rows.append([k, i, *inter.tolist()])
    return rows


def kernels_csv_header(n: int) -> list[str]:
    cols = ["k", "row"]
    for j in range(n):
        cols += [f"re{j}", f"im{j}"]
    return cols


def is_translation_invariant(op, lat: Lattice, tol: Tolerances = DEFAULT_TOL) -> bool:
    t = translation_operator(lat)
    return bool(np.linalg.norm(t @ op @ t.conj().T - op) <= tol.eq * lat.n)

