"""EPR-Bohm scenarios on the two-spin singlet.

Ordering is a-channel first: C^2 (a) x C^2 (b). The statement for channel a
asserts spin up along its analyzer axis, the statement for channel b asserts
spin down along its axis; both embed into the pair space with an identity on
the other channel, so they always commute.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import QTruthError
from .hilbert import DEFAULT_TOL, PAULIS, Tolerances, identity, outer, random_unitary, tensor
from .logic import conditional_truth, conjoin, iff_
from .stern_gerlach import SpinAxis, sigma_along, spin_down_truth, spin_truth

TSIRELSON = 2 * math.sqrt(2)


@dataclass(frozen=True, eq=False)
class EprPair:
    state: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.state, dtype=complex)
        if v.shape != (4,) or abs(np.linalg.norm(v) - 1) > DEFAULT_TOL.norm:
            raise QTruthError("pair state must be a normalized 4-vector")
        object.__setattr__(self, "state", v)

    def projector(self) -> np.ndarray:
        return outer(self.state)


def singlet() -> EprPair:
    s = 1 / math.sqrt(2)
    return EprPair(np.array([0, s, -s, 0], dtype=complex))


def sigma_observable() -> np.ndarray:
    """(1 + sigma_a . sigma_b) / 2: +1 on the triplet, -1 on the singlet."""
    return 0.5 * (identity(4) + sum(np.kron(s, s) for s in PAULIS))


@dataclass(frozen=True)
class ChannelStatement:
    channel: str
    axis: SpinAxis
    sign: float

    def __post_init__(self):
        if self.channel not in ("a", "b"):
            raise QTruthError(f"channel must be 'a' or 'b', got {self.channel!r}")
        if self.sign not in (0.5, -0.5):
            raise QTruthError(f"sign must be +1/2 or -1/2, got {self.sign}")


def channel_projector(cs: ChannelStatement) -> np.ndarray:
    p = spin_truth(cs.axis) if cs.sign > 0 else spin_down_truth(cs.axis)
    return tensor(p, identity(2)) if cs.channel == "a" else tensor(identity(2), p)


def statement_a(za: SpinAxis) -> np.ndarray:
    """M_a: spin of particle a is +1/2 along za."""
    return channel_projector(ChannelStatement("a", za, +0.5))


def statement_b(zb: SpinAxis) -> np.ndarray:
    """M_b: spin of particle b is -1/2 along zb."""
    return channel_projector(ChannelStatement("b", zb, -0.5))


def equivalence_truth(za: SpinAxis, zb: SpinAxis, pair: EprPair | None = None,
                      tol: Tolerances = DEFAULT_TOL) -> float:
    pair = pair or singlet()
    return conditional_truth(pair.projector(), iff_(statement_a(za), statement_b(zb), tol).op, tol)


def conjunction_truth(za: SpinAxis, zb: SpinAxis, pair: EprPair | None = None,
                      tol: Tolerances = DEFAULT_TOL, b_first: bool = False) -> float:
    pair = pair or singlet()
    ma, mb = statement_a(za), statement_b(zb)
    prod = conjoin(mb, ma, tol) if b_first else conjoin(ma, mb, tol)
    return conditional_truth(pair.projector(), prod.op, tol)


def correlation(za: SpinAxis, zb: SpinAxis, pair: EprPair | None = None) -> float:
    pair = pair or singlet()
    op = np.kron(sigma_along(za), sigma_along(zb))
    return float(np.vdot(pair.state, op @ pair.state).real)


def chsh(a: SpinAxis, a2: SpinAxis, b: SpinAxis, b2: SpinAxis, pair: EprPair | None = None) -> float:
    """|E(a,b) - E(a,b') + E(a',b) + E(a',b')|."""
    pair = pair or singlet()
    return abs(correlation(a, b, pair) - correlation(a, b2, pair)
               + correlation(a2, b, pair) + correlation(a2, b2, pair))


class ChshSearch(NamedTuple):
    value: float
    axes: tuple  # (a, a', b, b') as SpinAxis
    evaluations: int


def _random_axis(rng, coplanar: bool) -> SpinAxis:
    if coplanar:
        return SpinAxis.in_xz_plane(rng.uniform(0, 2 * math.pi))
    v = rng.standard_normal(3)
    return SpinAxis.from_vector(v)


def _perturb(axis: SpinAxis, step: float, rng, coplanar: bool) -> SpinAxis:
    n = axis.bloch_vector()
    if coplanar:
        alpha = math.atan2(n[0], n[2]) + rng.normal(0, step)
        return SpinAxis.in_xz_plane(alpha)
    return SpinAxis.from_vector(n + rng.normal(0, step, 3))


def chsh_search(samples: int = 10_000, seed=None, coplanar: bool = True,
                explore_fraction: float = 0.2) -> ChshSearch:
    """Adaptive random search for the largest CHSH value.

    The first ``explore_fraction`` of the budget draws independent uniform
    quadruples; the rest perturbs the incumbent with Gaussian steps whose width
    shrinks by 0.6 every 500 proposals. Every evaluation goes through the
    operator route (:func:`chsh`).
    """
    if samples < 1:
        raise QTruthError("need at least one sample")
    rng = np.random.default_rng(seed)
    n_explore = max(1, int(samples * explore_fraction))
    best, best_v = None, -1.0
    for _ in range(n_explore):
        q = tuple(_random_axis(rng, coplanar) for _ in range(4))
        v = chsh(*q)
        if v > best_v:
            best, best_v = q, v
    step = 0.3
    for i in range(samples - n_explore):
        q = tuple(_perturb(ax, step, rng, coplanar) for ax in best)
        v = chsh(*q)
        if v > best_v:
            best, best_v = q, v
        if i % 500 == 499:
            step *= 0.6
    return ChshSearch(best_v, best, samples)


def random_su2(rng=None) -> np.ndarray:
    u = random_unitary(2, rng)
    return u / np.sqrt(np.linalg.det(u))


def rotate_axis(axis: SpinAxis, u: np.ndarray) -> SpinAxis:
    """Axis whose up-projector is u P u^dagger."""
    p = u @ spin_truth(axis) @ u.conj().T
    n = [float(np.trace(p @ s).real) for s in PAULIS]
    return SpinAxis.from_vector(n)
