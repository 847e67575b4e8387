"""Statements about observables and their truth operators.

A statement is a small tree of connectives over elementary statements. Each
elementary statement carries its truth operator (a projector); compiling the
tree applies the two-variable connective formulas

    negation     1 - M
    conjunction  M1 M2
    disjunction  M1 + M2 - M1 M2
    xor          M1 + M2 - 2 M1 M2
    implication  1 - M1 + M1 M2
    equivalence  1 - M1 - M2 + 2 M1 M2

bottom-up. Products of noncommuting projectors are kept (they have meaningful
averages under the conditions checked by :func:`meaningful`) but the result is
flagged as not representing a statement.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonCommutingFamilyError,
    NonOrthogonalFamilyError,
    NormalizationError,
    NotAProjectorError,
    NumericalIntegrityError,
    QTruthError,
)
from .hilbert import (
    DEFAULT_TOL,
    Tolerances,
    as_operator,
    as_state,
    check_hermitian,
    check_projector,
    close,
    commutator,
    identity,
    outer,
    random_unitary,
)


class Compiled(NamedTuple):
    op: np.ndarray
    is_statement: bool


# --- connectives -----------------------------------------------------------

def _pair(m1, m2) -> tuple[np.ndarray, np.ndarray]:
    a = as_operator(m1)
    b = as_operator(m2)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dims {a.shape[0]} and {b.shape[0]} differ")
    return a, b


def _commute(a, b, tol: Tolerances) -> bool:
    return close(commutator(a, b), np.zeros_like(a), tol.eq)


def negate(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    m = check_projector(m, tol)
    return identity(m.shape[0]) - m


def conjoin(m1, m2, tol: Tolerances = DEFAULT_TOL) -> Compiled:
    a, b = _pair(m1, m2)
    return Compiled(a @ b, _commute(a, b, tol))


def disjoin(m1, m2, tol: Tolerances = DEFAULT_TOL) -> Compiled:
    a, b = _pair(m1, m2)
    return Compiled(a + b - a @ b, _commute(a, b, tol))


def xor_(m1, m2, tol: Tolerances = DEFAULT_TOL) -> Compiled:
    a, b = _pair(m1, m2)
    return Compiled(a + b - 2 * (a @ b), _commute(a, b, tol))


def implies_(m1, m2, tol: Tolerances = DEFAULT_TOL) -> Compiled:
    a, b = _pair(m1, m2)
    return Compiled(identity(a.shape[0]) - a + a @ b, _commute(a, b, tol))


def iff_(m1, m2, tol: Tolerances = DEFAULT_TOL) -> Compiled:
    a, b = _pair(m1, m2)
    return Compiled(identity(a.shape[0]) - a - b + 2 * (a @ b), _commute(a, b, tol))


# --- statement trees -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Elementary:
    label: str
    proj: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "proj", check_projector(self.proj))


@dataclass(frozen=True, eq=False)
class Not:
    arg: "Statement"


@dataclass(frozen=True, eq=False)
class And:
    left: "Statement"
    right: "Statement"


@dataclass(frozen=True, eq=False)
class Or:
    left: "Statement"
    right: "Statement"


@dataclass(frozen=True, eq=False)
class Xor:
    left: "Statement"
    right: "Statement"


@dataclass(frozen=True, eq=False)
class Implies:
    left: "Statement"
    right: "Statement"


@dataclass(frozen=True, eq=False)
class Iff:
    left: "Statement"
    right: "Statement"


@dataclass(frozen=True, eq=False)
class CoarseInterval:
    """Disjunction of mutually exclusive statements: the sum of their projectors."""

    projs: tuple
    labels: tuple = field(default=())

    def __post_init__(self):
        projs = tuple(check_projector(p) for p in self.projs)
        if not projs:
            raise QTruthError("coarse interval needs at least one projector")
        dims = {p.shape[0] for p in projs}
        if len(dims) != 1:
            raise DimensionMismatchError(f"coarse interval mixes dims {sorted(dims)}")
        for p, q in itertools.combinations(projs, 2):
            if not close(p @ q, np.zeros_like(p), DEFAULT_TOL.eq):
                raise NonOrthogonalFamilyError("coarse interval projectors are not mutually exclusive")
        if self.labels and len(self.labels) != len(projs):
            raise QTruthError("coarse interval labels do not match projectors")
        object.__setattr__(self, "projs", projs)
        object.__setattr__(self, "labels", tuple(self.labels))


Statement = Union[Elementary, Not, And, Or, Xor, Implies, Iff, CoarseInterval]
Leaf = Union[Elementary, CoarseInterval]

_BINARY = {And: conjoin, Or: disjoin, Xor: xor_, Implies: implies_, Iff: iff_}


def compile_statement(s: Statement, tol: Tolerances = DEFAULT_TOL) -> Compiled:
    """Truth operator of a statement tree, with a flag that is False once any
    connective combined noncommuting operands."""
    if isinstance(s, Elementary):
        return Compiled(s.proj, True)
    if isinstance(s, CoarseInterval):
        return Compiled(sum(s.projs[1:], s.projs[0].copy()), True)
    if isinstance(s, Not):
        inner = compile_statement(s.arg, tol)
        return Compiled(identity(inner.op.shape[0]) - inner.op, inner.is_statement)
    fn = _BINARY.get(type(s))
    if fn is None:
        raise QTruthError(f"not a statement node: {s!r}")
    left = compile_statement(s.left, tol)
    right = compile_statement(s.right, tol)
    if left.op.shape != right.op.shape:
        raise DimensionMismatchError(
            f"statement mixes dims {left.op.shape[0]} and {right.op.shape[0]}"
        )
    res = fn(left.op, right.op, tol)
    return Compiled(res.op, res.is_statement and left.is_statement and right.is_statement)


def leaves(s: Statement) -> list[Leaf]:
    """Distinct leaves in first-appearance order. Elementary leaves are keyed by label."""
    out: list[Leaf] = []
    seen: dict = {}

    def walk(node):
        if isinstance(node, Elementary):
            prev = seen.get(("e", node.label))
            if prev is None:
                seen[("e", node.label)] = node
                out.append(node)
            elif not close(prev.proj, node.proj, DEFAULT_TOL.eq):
                raise QTruthError(f"label {node.label!r} bound to two different projectors")
        elif isinstance(node, CoarseInterval):
            if ("c", id(node)) not in seen:
                seen[("c", id(node))] = node
                out.append(node)
        elif isinstance(node, Not):
            walk(node.arg)
        else:
            walk(node.left)
            walk(node.right)

    walk(s)
    return out


def map_leaves(s: Statement, fn: Callable[[Leaf], Statement]) -> Statement:
    if isinstance(s, (Elementary, CoarseInterval)):
        return fn(s)
    if isinstance(s, Not):
        return Not(map_leaves(s.arg, fn))
    return type(s)(map_leaves(s.left, fn), map_leaves(s.right, fn))


def _leaf_operator(leaf: Leaf) -> np.ndarray:
    return compile_statement(leaf).op


def _leaf_key(leaf: Leaf):
    return ("e", leaf.label) if isinstance(leaf, Elementary) else ("c", id(leaf))


# --- conditional truth -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class MixedState:
    """Convex combination of rank-1 truth operators, kept unreduced."""

    weights: tuple
    projs: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != len(self.projs) or len(w) == 0:
            raise QTruthError("weights and projectors must be non-empty and of equal length")
        if np.any(w < 0) or abs(w.sum() - 1.0) > DEFAULT_TOL.norm:
            raise NormalizationError(f"weights must be >= 0 and sum to 1, got sum {w.sum():.12g}")
        projs = tuple(check_projector(p) for p in self.projs)
        for p in projs:
            if abs(np.trace(p).real - 1.0) > DEFAULT_TOL.norm:
                raise NotAProjectorError("mixture components must be rank-1 projectors")
        if len({p.shape[0] for p in projs}) != 1:
            raise DimensionMismatchError("mixture components differ in dimension")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "projs", projs)

    @property
    def dim(self) -> int:
        return self.projs[0].shape[0]

    def density(self) -> np.ndarray:
        return sum(w * p for w, p in zip(self.weights, self.projs))


def _condition_density(condition, tol: Tolerances) -> np.ndarray:
    if isinstance(condition, MixedState):
        return condition.density()
    c = np.asarray(condition)
    if c.ndim == 1:
        return outer(c, tol)
    c = as_operator(c)
    if abs(np.trace(c) - 1.0) > tol.norm * c.shape[0]:
        raise NormalizationError(f"condition trace {np.trace(c).real:.12g} is not 1")
    return c


def conditional_truth(condition, m, tol: Tolerances = DEFAULT_TOL, clamp: bool = True) -> float:
    """tr(condition @ m): the truth of ``m`` given that ``condition`` holds.

    ``condition`` may be a unit-trace operator, a state vector or a
    :class:`MixedState`. Values that leave [0, 1] (or pick up an imaginary
    part) by at most ``tol.eq`` are clamped when ``clamp`` is set; larger
    excursions raise :class:`NumericalIntegrityError`.
    """
    rho = _condition_density(condition, tol)
    m = as_operator(m)
    if rho.shape != m.shape:
        raise DimensionMismatchError(f"condition dim {rho.shape[0]} vs statement dim {m.shape[0]}")
    t = complex(np.einsum("ij,ji->", rho, m))
    if abs(t.imag) > tol.eq:
        raise NumericalIntegrityError(f"conditional truth has imaginary part {t.imag:.3e}")
    v = t.real
    if v < -tol.eq or v > 1.0 + tol.eq:
        raise NumericalIntegrityError(f"conditional truth {v:.12g} outside [0, 1]")
    return min(max(v, 0.0), 1.0) if clamp else v


def mixture_truth(mix: MixedState, m, tol: Tolerances = DEFAULT_TOL) -> float:
    return float(sum(w * conditional_truth(p, m, tol) for w, p in zip(mix.weights, mix.projs)))


def meaningful(condition, m1, m2, tol: float = DEFAULT_TOL.eq) -> bool:
    """Order of ``m1`` and ``m2`` does not matter for averages in ``condition``.

    All three traces tr(L[m1,m2]), tr([L,m1] m2), tr(m1 [m2,L]) must vanish.
    """
    lam = as_operator(condition)
    a, b = _pair(m1, m2)
    if lam.shape != a.shape:
        raise DimensionMismatchError("condition and statements differ in dimension")
    traces = (
        np.trace(lam @ commutator(a, b)),
        np.trace(commutator(lam, a) @ b),
        np.trace(a @ commutator(b, lam)),
    )
    return all(abs(t) <= tol for t in traces)


def observable_from_spectrum(values: Sequence[float], projs: Sequence, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """sum_i k_i Lambda_i over an orthogonal projector family."""
    if len(values) != len(projs) or not projs:
        raise QTruthError("need one value per projector")
    ps = [check_projector(p, tol) for p in projs]
    if len({p.shape for p in ps}) != 1:
        raise DimensionMismatchError("projector family mixes dimensions")
    for p, q in itertools.combinations(ps, 2):
        if not close(p @ q, np.zeros_like(p), tol.eq):
            raise NonOrthogonalFamilyError("projector family is not orthogonal")
    return sum(float(k) * p for k, p in zip(values, ps))


def expectation(state, obs, tol: Tolerances = DEFAULT_TOL) -> float:
    v = as_state(state, tol)
    obs = check_hermitian(obs, tol)
    if obs.shape[0] != v.size:
        raise DimensionMismatchError("state and observable differ in dimension")
    return float(np.vdot(v, obs @ v).real)


# --- connective coefficients ----------------------------------------------

class ConnectiveCoefficients(NamedTuple):
    """Coefficients of  a + b M1 + c M2 + d M1 M2."""

    a: int
    b: int
    c: int
    d: int


NAMED_CONNECTIVES = {
    "negation": ConnectiveCoefficients(1, -1, 0, 0),
    "conjunction": ConnectiveCoefficients(0, 0, 0, 1),
    "disjunction": ConnectiveCoefficients(0, 1, 1, -1),
    "exclusive-or": ConnectiveCoefficients(0, 1, 1, -2),
    "implication": ConnectiveCoefficients(1, -1, 0, 1),
    "equivalence": ConnectiveCoefficients(1, -1, -1, 2),
}


def verify_coefficients(c: ConnectiveCoefficients) -> bool:
    a, b, cc, d = c
    return (
        a * a == a
        and b * b + 2 * a * b == b
        and cc * cc + 2 * a * cc == cc
        and d * d + 2 * (a * d + b * cc + b * d + cc * d) == d
    )


def enumerate_connectives(range_: int) -> list[ConnectiveCoefficients]:
    r = range(-range_, range_ + 1)
    return [
        ConnectiveCoefficients(*t)
        for t in itertools.product(r, repeat=4)
        if verify_coefficients(ConnectiveCoefficients(*t))
    ]


def apply_coefficients(c: ConnectiveCoefficients, m1, m2) -> np.ndarray:
    a, b = _pair(m1, m2)
    return c.a * identity(a.shape[0]) + c.b * a + c.c * b + c.d * (a @ b)


# --- tautologies -----------------------------------------------------------

def _commuting_family(ops: Sequence[np.ndarray], tol: Tolerances) -> bool:
    return all(_commute(p, q, tol) for p, q in itertools.combinations(ops, 2))


def truth_table_family(n_vars: int) -> list[np.ndarray]:
    """Diagonal projectors on C^(2^n) whose basis vectors enumerate every 0/1 assignment."""
    rows = np.arange(2**n_vars)
    return [np.diag(((rows >> i) & 1).astype(complex)) for i in range(n_vars)]


def tautology_residuals(s: Statement, trials: int = 20, seed=None, tol: Tolerances = DEFAULT_TOL) -> list[float]:
    """Frobenius distances from the identity over every re-representation tried.

    The statement is compiled (a) on the canonical truth-table family, which
    covers every 0/1 assignment of the leaves, and (b) on its own leaf family;
    each under the identity and ``trials`` random unitary conjugations.
    """
    lv = leaves(s)
    own = [_leaf_operator(x) for x in lv]
    if not _commuting_family(own, tol):
        raise NonCommutingFamilyError("tautology check needs a commuting leaf family")
    rng = np.random.default_rng(seed)
    families = [own]
    if len(lv) <= 8:
        families.insert(0, truth_table_family(len(lv)))
    out = []
    for fam in families:
        dim = fam[0].shape[0]
        unitaries = [identity(dim)] + [random_unitary(dim, rng) for _ in range(trials)]
        for u in unitaries:
            table = {_leaf_key(x): u @ p @ u.conj().T for x, p in zip(lv, fam)}
            sub = map_leaves(s, lambda leaf: Elementary(getattr(leaf, "label", "coarse"), table[_leaf_key(leaf)]))
            op = compile_statement(sub, tol).op
            out.append(float(np.linalg.norm(op - identity(dim))))
    return out


def is_tautology(s: Statement, trials: int = 20, seed=None, tol: Tolerances = DEFAULT_TOL) -> bool:
    res = tautology_residuals(s, trials, seed, tol)
    dims = [_leaf_operator(x).shape[0] for x in leaves(s)]
    return all(r <= tol.eq * max(dims + [2]) for r in res)


def standard_tautologies(p, q, r) -> dict[str, Statement]:
    """Textbook tautologies over three leaves."""
    P, Q, R = p, q, r
    return {
        "excluded middle": Or(P, Not(P)),
        "non-contradiction": Not(And(P, Not(P))),
        "double negation": Iff(Not(Not(P)), P),
        "de morgan (and)": Iff(Not(And(P, Q)), Or(Not(P), Not(Q))),
        "de morgan (or)": Iff(Not(Or(P, Q)), And(Not(P), Not(Q))),
        "contraposition": Iff(Implies(P, Q), Implies(Not(Q), Not(P))),
        "modus ponens": Implies(And(P, Implies(P, Q)), Q),
        "modus tollens": Implies(And(Implies(P, Q), Not(Q)), Not(P)),
        "distribution (and over or)": Iff(And(P, Or(Q, R)), Or(And(P, Q), And(P, R))),
        "distribution (or over and)": Iff(Or(P, And(Q, R)), And(Or(P, Q), Or(P, R))),
        "hypothetical syllogism": Implies(And(Implies(P, Q), Implies(Q, R)), Implies(P, R)),
        "xor as non-equivalence": Iff(Xor(P, Q), Not(Iff(P, Q))),
        "simplification": Implies(And(P, Q), P),
        "peirce": Implies(Implies(Implies(P, Q), P), P),
    }


# --- JSON tree form ----------------------------------------------------------

_OPS = {"not": Not, "and": And, "or": Or, "xor": Xor, "implies": Implies, "iff": Iff}
_NAMES = {v: k for k, v in _OPS.items()}


def statement_to_json(s: Statement) -> dict:
    if isinstance(s, Elementary):
        return {"op": "elem", "args": [s.label]}
    if isinstance(s, CoarseInterval):
        if not s.labels:
            raise QTruthError("coarse interval without labels cannot be serialized")
        return {"op": "coarse", "args": list(s.labels)}
    if isinstance(s, Not):
        return {"op": "not", "args": [statement_to_json(s.arg)]}
    return {"op": _NAMES[type(s)], "args": [statement_to_json(s.left), statement_to_json(s.right)]}


def statement_from_json(tree, registry: Mapping[str, np.ndarray]) -> Statement:
    if isinstance(tree, str):
        tree = json.loads(tree)
    if not isinstance(tree, dict) or "op" not in tree:
        raise QTruthError(f"malformed statement node: {tree!r}")
    op, args = tree["op"], tree.get("args", [])
    if op == "elem":
        if len(args) != 1:
            raise QTruthError("elem takes exactly one name")
        name = args[0]
        if name not in registry:
            raise QTruthError(f"unknown projector name {name!r}")
        return Elementary(name, registry[name])
    if op == "coarse":
        missing = [a for a in args if a not in registry]
        if missing:
            raise QTruthError(f"unknown projector names {missing}")
        return CoarseInterval(tuple(registry[a] for a in args), tuple(args))
    cls = _OPS.get(op)
    if cls is None:
        raise QTruthError(f"unknown connective {op!r}")
    want = 1 if cls is Not else 2
    if len(args) != want:
        raise QTruthError(f"{op} takes {want} argument(s), got {len(args)}")
    return cls(*(statement_from_json(a, registry) for a in args))


def statement_names(tree) -> list[str]:
    """Projector names referenced by a JSON statement tree, first appearance first."""
    out: list[str] = []

    def walk(t):
        if t["op"] in ("elem", "coarse"):
            for a in t["args"]:
                if a not in out:
                    out.append(a)
        else:
            for a in t["args"]:
                walk(a)

    walk(tree)
    return out


def random_commuting_family(dim: int, n: int, rng, rotate: bool = True) -> list[np.ndarray]:
    """``n`` commuting projectors: random 0/1 diagonals, optionally in a random basis."""
    rng = np.random.default_rng(rng)
    diags = [np.diag(rng.integers(0, 2, dim).astype(complex)) for _ in range(n)]
    if not rotate:
        return diags
    u = random_unitary(dim, rng)
    return [u @ d @ u.conj().T for d in diags]
