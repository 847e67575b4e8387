"""Stern-Gerlach spin-1/2 scenarios.

Spin states use the asymmetric phase convention

    |Z(theta, phi)> = (exp(i phi/2) cos(theta/2), sin(theta/2))

in the S_Z basis. Because the phase enters as phi/2, the Bloch direction of
this state has polar angle theta and azimuth -phi/2, so phi ranges over
[0, 4 pi) to cover the whole sphere. Angles between axes are always taken
between Bloch directions (see :func:`axis_angle`).

The spatial packets of the two beams are represented only by orthogonal
branch labels; nothing is propagated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import NormalizationError, QTruthError, UnsupportedCascadeError
from .hilbert import DEFAULT_TOL, PAULIS, Tolerances, identity, outer
from .logic import conditional_truth

HBAR = 1.054571817e-34  # J s
FOUR_PI = 4 * math.pi


@dataclass(frozen=True)
class SpinAxis:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise QTruthError(f"theta={self.theta} outside [0, pi]")
        if not (0.0 <= self.phi < FOUR_PI):
            raise QTruthError(f"phi={self.phi} outside [0, 4 pi)")

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float = 0.0) -> "SpinAxis":
        return cls(math.radians(theta_deg), math.radians(phi_deg))

    @classmethod
    def from_vector(cls, n) -> "SpinAxis":
        """Axis whose spin-up state has Bloch direction ``n``."""
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        theta = math.acos(min(1.0, max(-1.0, float(n[2]))))
        azimuth = math.atan2(float(n[1]), float(n[0]))
        return cls(theta, (-2.0 * azimuth) % FOUR_PI)

    @classmethod
    def in_xz_plane(cls, alpha: float) -> "SpinAxis":
        """Axis at angle ``alpha`` from +Z towards +X, any real alpha."""
        return cls.from_vector((math.sin(alpha), 0.0, math.cos(alpha)))

    def bloch_vector(self) -> np.ndarray:
        s = math.sin(self.theta)
        return np.array([s * math.cos(self.phi / 2), -s * math.sin(self.phi / 2), math.cos(self.theta)])


Z_AXIS = SpinAxis(0.0, 0.0)


def spin_state(axis: SpinAxis) -> np.ndarray:
    return np.array([np.exp(0.5j * axis.phi) * math.cos(axis.theta / 2), math.sin(axis.theta / 2)], dtype=complex)


def spin_down_state(axis: SpinAxis) -> np.ndarray:
    """State orthogonal to :func:`spin_state` (spin -1/2 along the axis)."""
    a, b = spin_state(axis)
    return np.array([-np.conj(b), np.conj(a)], dtype=complex)


def spin_truth(axis: SpinAxis) -> np.ndarray:
    """Truth operator of "S along axis = +1/2"."""
    return outer(spin_state(axis))


def spin_down_truth(axis: SpinAxis) -> np.ndarray:
    return outer(spin_down_state(axis))


def sigma_along(axis: SpinAxis) -> np.ndarray:
    """n . sigma for the Bloch direction n of the axis."""
    return 2 * spin_truth(axis) - identity(2)


def axis_angle(a1: SpinAxis, a2: SpinAxis) -> float:
    c = float(np.dot(a1.bloch_vector(), a2.bloch_vector()))
    return math.acos(min(1.0, max(-1.0, c)))


def su2_rotation(u, alpha: float) -> np.ndarray:
    """exp(-i alpha u.sigma / 2): rotates Bloch vectors by ``alpha`` about unit vector ``u``."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    gen = sum(ui * s for ui, s in zip(u, PAULIS))
    return math.cos(alpha / 2) * identity(2) - 1j * math.sin(alpha / 2) * gen


def rotation_between(z1: SpinAxis, z2: SpinAxis) -> np.ndarray:
    """SU(2) rotation about n1 x n2 carrying axis z1 onto z2.

    For antipodal axes the rotation axis is n1 x e, with e the coordinate axis
    least aligned with n1 (first one on ties).
    """
    n1, n2 = z1.bloch_vector(), z2.bloch_vector()
    cross = np.cross(n1, n2)
    s, c = float(np.linalg.norm(cross)), float(np.dot(n1, n2))
    if s < 1e-12:
        if c > 0:
            return identity(2)
        e = np.eye(3)[int(np.argmin(np.abs(n1)))]
        cross = np.cross(n1, e)
        return su2_rotation(cross, math.pi)
    return su2_rotation(cross, math.atan2(s, c))


class Overlap(NamedTuple):
    total: float
    diagonal: float
    interference: float


def overlap_probability(a1: SpinAxis, a2: SpinAxis) -> Overlap:
    """tr(rho1 rho2) split into the S_Z-diagonal part and the interference term."""
    c1, c2 = spin_state(a1), spin_state(a2)
    total = conditional_truth(spin_truth(a1), spin_truth(a2))
    diagonal = float(abs(c1[0]) ** 2 * abs(c2[0]) ** 2 + abs(c1[1]) ** 2 * abs(c2[1]) ** 2)
    interference = float(2 * (c1[0] * np.conj(c1[1]) * np.conj(c2[0]) * c2[1]).real)
    return Overlap(total, diagonal, interference)


def interference_closed_form(theta1: float, theta2: float, phi1: float = 0.0, phi2: float = 0.0) -> float:
    return 0.5 * math.sin(theta1) * math.sin(theta2) * math.cos((phi2 - phi1) / 2)


def up_probability(theta: float) -> float:
    """Probability of S_Z = +1/2 for spin prepared along an axis at angle ``theta`` (coplanar)."""
    return conditional_truth(spin_truth(SpinAxis.in_xz_plane(theta)), spin_truth(Z_AXIS))


def interference_from_three(w1: float, w2: float, w12: float, tol: float = DEFAULT_TOL.eq) -> float:
    """Interference term from three single-axis probabilities w(th1), w(th2), w(th2 - th1)."""
    for name, w in (("w1", w1), ("w2", w2), ("w12", w12)):
        if not (-tol <= w <= 1 + tol):
            raise QTruthError(f"{name}={w} is not a probability")
    return w12 - w1 * w2 - (1 - w1) * (1 - w2)


def three_angle_interference(theta1: float, theta2: float) -> float:
    """Three-measurement recovery of the interference term for coplanar axes."""
    return interference_from_three(up_probability(theta1), up_probability(theta2),
                                   up_probability(theta2 - theta1))


# --- two-magnet cascade ----------------------------------------------------

@dataclass(frozen=True)
class SgCascade:
    axes: tuple
    initial: SpinAxis

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not self.axes:
            raise QTruthError("cascade needs at least one magnet")


_MAX_DEPTH = 2


def _branch_state(axis: SpinAxis, sign: int) -> np.ndarray:
    if sign == +1:
        return spin_state(axis)
    if sign == -1:
        return spin_down_state(axis)
    raise QTruthError(f"branch sign must be +1 or -1, got {sign}")


def cascade_amplitude(c: SgCascade, select: Sequence[int]) -> complex:
    """Amplitude of the path picking branch ``select[i]`` (+1 upper, -1 lower) at magnet ``i``."""
    if len(c.axes) > _MAX_DEPTH:
        raise UnsupportedCascadeError(f"cascades deeper than {_MAX_DEPTH} magnets are not supported")
    if len(select) != len(c.axes):
        raise QTruthError("need one branch choice per magnet")
    prev = spin_state(c.initial)
    amp = 1.0 + 0j
    for axis, sign in zip(c.axes, select):
        b = _branch_state(axis, sign)
        amp *= np.vdot(b, prev)
        prev = b
    return complex(amp)


def cascade_overlap(c: SgCascade) -> Overlap:
    """Upper-spot intensity of the second magnet with both first-magnet branches recombined."""
    if len(c.axes) > _MAX_DEPTH:
        raise UnsupportedCascadeError(f"cascades deeper than {_MAX_DEPTH} magnets are not supported")
    if len(c.axes) != 2:
        raise QTruthError("recombined intensity needs exactly two magnets")
    upper = cascade_amplitude(c, (+1, +1))
    lower = cascade_amplitude(c, (-1, +1))
    total = abs(upper + lower) ** 2
    diagonal = abs(upper) ** 2 + abs(lower) ** 2
    return Overlap(float(total), float(diagonal), float(2 * (upper * np.conj(lower)).real))


# --- quasiclassical condition ------------------------------------------------

@dataclass(frozen=True)
class QuasiclassicalParams:
    force: float        # N
    flight_time: float  # s
    mass: float         # kg
    hbar: float = HBAR  # J s

    def __post_init__(self):
        for name in ("force", "flight_time", "mass", "hbar"):
            if not getattr(self, name) > 0:
                raise QTruthError(f"{name} must be positive")


def quasiclassical_ratio(p: QuasiclassicalParams) -> tuple[float, float]:
    """(|d lambda_z / dz|, S/hbar) = (hbar m / F^2 T^3, its reciprocal)."""
    d = p.hbar * p.mass / (p.force**2 * p.flight_time**3)
    return d, 1.0 / d


# --- atom + detector collapse model -------------------------------------------

@dataclass(frozen=True, eq=False)
class DetectorModel:
    """Detector amplitudes alpha[m, k]; row 0 is the upper (m=+1/2) branch."""

    n_states: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_states < 1:
            raise QTruthError("detector needs at least one state")
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != (2, self.n_states):
            raise QTruthError(f"amplitudes must have shape (2, {self.n_states}), got {a.shape}")
        norms = np.sum(np.abs(a) ** 2, axis=1)
        if np.any(np.abs(norms - 1.0) > DEFAULT_TOL.norm):
            raise NormalizationError(f"each branch needs sum_k |alpha|^2 = 1, got {norms}")
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def random(cls, n_states: int = 8, rng=None) -> "DetectorModel":
        rng = np.random.default_rng(rng)
        a = rng.standard_normal((2, n_states)) + 1j * rng.standard_normal((2, n_states))
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        return cls(n_states, a)

    @property
    def dim(self) -> int:
        return 2 * 2 * self.n_states

    def rephased(self, betas) -> "DetectorModel":
        """alpha[m, k] -> exp(i beta_k) alpha[m, k]; ``betas`` of shape (N,) or (2, N)."""
        return DetectorModel(self.n_states, self.amplitudes * np.exp(1j * np.asarray(betas, dtype=float)))


def _record_index(d: DetectorModel, m: int, k: int) -> int:
    # spin (2) x joint atom+detector record (2N); record j = m*N + k
    return m * 2 * d.n_states + m * d.n_states + k


def record_state(d: DetectorModel, m: int, k: int) -> np.ndarray:
    v = np.zeros(d.dim, dtype=complex)
    v[_record_index(d, m, k)] = 1.0
    return v


def coarse_spin_statements(d: DetectorModel) -> tuple[np.ndarray, np.ndarray]:
    """"Spin up" and "Spin down": sums of the N fine-grained record projectors of each branch."""
    up = np.zeros((d.dim, d.dim), dtype=complex)
    down = np.zeros_like(up)
    for k in range(d.n_states):
        up[_record_index(d, 0, k), _record_index(d, 0, k)] = 1.0
        down[_record_index(d, 1, k), _record_index(d, 1, k)] = 1.0
    return up, down


def collapse_state(c_up: complex, c_down: complex, d: DetectorModel, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    if abs(abs(c_up) ** 2 + abs(c_down) ** 2 - 1.0) > tol.norm:
        raise NormalizationError("|c_up|^2 + |c_down|^2 must equal 1")
    v = np.zeros(d.dim, dtype=complex)
    for m, c in enumerate((c_up, c_down)):
        for k in range(d.n_states):
            v[_record_index(d, m, k)] = c * d.amplitudes[m, k]
    return v


def collapse_truths(c_up: complex, c_down: complex, d: DetectorModel,
                    tol: Tolerances = DEFAULT_TOL) -> tuple[float, float]:
    psi = collapse_state(c_up, c_down, d, tol)
    up, down = coarse_spin_statements(d)
    return conditional_truth(psi, up, tol), conditional_truth(psi, down, tol)


def spin_eigenvector(d: DetectorModel, branch: int, coeffs) -> np.ndarray:
    """Normalized sum_k A_k |record(branch, k)>; any coefficients, phases included, give an
    eigenvector of the branch's coarse statement with eigenvalue 1."""
    m = {+1: 0, -1: 1}.get(branch)
    if m is None:
        raise QTruthError("branch must be +1 (up) or -1 (down)")
    a = np.asarray(coeffs, dtype=complex)
    if a.shape != (d.n_states,) or np.linalg.norm(a) == 0:
        raise QTruthError("need n_states non-zero coefficients")
    v = sum(ak * record_state(d, m, k) for k, ak in enumerate(a))
    return v / np.linalg.norm(v)
