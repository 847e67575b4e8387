"""Cross-module acceptance checks, shared by ``qtruth selftest`` and the test suite.

Each criterion returns a :class:`CriterionResult`; thresholds are pinned here.
Passing ``tau`` tightens every floating-point threshold to ``min(pinned, tau)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import epr, logic, quantize
from . import stern_gerlach as sg
from .hilbert import identity, random_projector, random_state
from .logic import Elementary, NAMED_CONNECTIVES

DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.name}: {self.detail}"


def _t(pinned: float, tau: float | None) -> float:
    return pinned if tau is None else min(pinned, tau)


def epr_equivalence(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    t10, t12 = _t(1e-10, tau), _t(1e-12, tau)
    za = sg.Z_AXIS
    err_eq = err_and = 0.0
    for th in np.arange(0, 180.0 + 1e-9, 7.5):
        zb = sg.SpinAxis.from_degrees(th)
        c2 = math.cos(math.radians(th) / 2) ** 2
        err_eq = max(err_eq, abs(epr.equivalence_truth(za, zb) - c2))
        err_and = max(err_and, abs(epr.conjunction_truth(za, zb) - 0.5 * c2))
    err0 = abs(epr.equivalence_truth(za, za) - 1.0)
    ok = err_eq <= t10 and err_and <= t10 and err0 <= t12
    return CriterionResult(1, "EPR equivalence/conjunction laws", ok,
                           f"max|iff-cos^2|={err_eq:.2e} max|and-cos^2/2|={err_and:.2e} |iff(0)-1|={err0:.2e}")


def sigma_observable(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    s = epr.sigma_observable()
    psi = epr.singlet().state
    r = float(np.linalg.norm(s @ psi + psi))
    ev = np.sort(np.linalg.eigvalsh(s))
    spec_err = float(np.max(np.abs(ev - np.array([-1.0, 1.0, 1.0, 1.0]))))
    ok = r <= _t(1e-12, tau) and spec_err <= _t(1e-10, tau)
    return CriterionResult(2, "Sigma observable on the singlet", ok,
                           f"|S psi + psi|={r:.2e} spectrum err={spec_err:.2e}")


def chsh(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    found = epr.chsh_search(10_000, seed=seed, coplanar=True)
    canon = epr.chsh(*(sg.SpinAxis.from_degrees(d) for d in (0, 90, 45, 135)))
    classical = epr.chsh(*(sg.Z_AXIS,) * 4)
    t10 = _t(1e-10, tau)
    ok = (2.8274 <= found.value <= 2.8285 and abs(canon - epr.TSIRELSON) <= t10
          and abs(classical - 2.0) <= t10)
    return CriterionResult(3, "CHSH search, canonical and classical values", ok,
                           f"search max={found.value:.10f} |canon-2sqrt2|={abs(canon - epr.TSIRELSON):.2e} "
                           f"|equal-axes-2|={abs(classical - 2):.2e}")


def sg_interference(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    t10 = _t(1e-10, tau)
    grid = np.linspace(0, math.pi, 13)
    e_three = e_closed = etot = ecas = 0.0
    for th1 in grid:
        for th2 in grid:
            a1, a2 = sg.SpinAxis(float(th1)), sg.SpinAxis(float(th2))
            ov = sg.overlap_probability(a1, a2)
            three = sg.three_angle_interference(float(th1), float(th2))
            e_three = max(e_three, abs(three - ov.interference))
            e_closed = max(e_closed, abs(ov.interference - sg.interference_closed_form(th1, th2)))
            etot = max(etot, abs(ov.total - math.cos(sg.axis_angle(a1, a2) / 2) ** 2))
            cas = sg.cascade_overlap(sg.SgCascade((sg.Z_AXIS, a2), a1))
            ecas = max(ecas, abs(cas.total - ov.total))
    ok = max(e_three, e_closed, etot, ecas) <= t10
    return CriterionResult(4, "Stern-Gerlach interference identities (13x13)", ok,
                           f"three-angle={e_three:.2e} closed-form={e_closed:.2e} total={etot:.2e} cascade={ecas:.2e}")


def connectives(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    sols = logic.enumerate_connectives(2)
    missing = [n for n, c in NAMED_CONNECTIVES.items() if c not in sols]
    ok = len(sols) == 16 and not missing
    return CriterionResult(5, "Connective coefficient enumeration", ok,
                           f"{len(sols)} solutions in [-2,2]^4, named missing={missing or 'none'}")


def tautologies(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst, count = 0.0, 0
    names = None
    for dim in range(2, 9):
        fam = logic.random_commuting_family(dim, 3, rng)
        p, q, r = (Elementary(n, m) for n, m in zip("PQR", fam))
        taut = logic.standard_tautologies(p, q, r)
        names = list(taut)
        for s in taut.values():
            res = logic.tautology_residuals(s, trials=20, seed=rng)
            worst = max(worst, max(res))
            count += 1
    ok = worst <= _t(1e-10, tau) and len(names) >= 10
    return CriterionResult(6, "Tautologies compile to the identity", ok,
                           f"{len(names)} tautologies x dims 2-8 x 20 unitaries, max residual={worst:.2e}")


def quantization(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    t10 = _t(1e-10, tau)
    lat = quantize.Lattice(64)
    n = lat.n
    t = quantize.translation_operator(lat)
    s = quantize.dft_matrix(lat)
    errs = {"proj": 0.0, "trace": 0.0, "transl": 0.0, "dft": 0.0}
    total = np.zeros((n, n), dtype=complex)
    for k in range(n):
        op = quantize.momentum_truth_kernel(lat, k).op
        errs["proj"] = max(errs["proj"], np.linalg.norm(op @ op - op), np.linalg.norm(op - op.conj().T))
        errs["trace"] = max(errs["trace"], abs(np.trace(op) - 1))
        errs["transl"] = max(errs["transl"], np.linalg.norm(t @ op @ t.conj().T - op))
        diag = np.zeros((n, n), dtype=complex)
        diag[k, k] = 1
        errs["dft"] = max(errs["dft"], np.linalg.norm(s @ diag @ s.conj().T - op))
        total += op
    errs["complete"] = np.linalg.norm(total - identity(n))
    errs["unitary"] = np.linalg.norm(s @ s.conj().T - identity(n))
    p = quantize.momentum_operator(lat)
    spec = quantize.default_spectrum(lat)
    errs["eigen"] = max(np.linalg.norm(p @ quantize.plane_wave(lat, k) - spec[k] * quantize.plane_wave(lat, k))
                        for k in range(n))
    errs["[p,T]"] = np.linalg.norm(p @ t - t @ p)
    worst = max(errs.values())
    return CriterionResult(7, "Momentum quantization on n=64", bool(worst <= t10),
                           " ".join(f"{k}={float(v):.1e}" for k, v in errs.items()))


def commutator_decay(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    widths = (2, 4, 8, 16, 32)
    norms = quantize.interval_commutator_norms(64, widths)
    ok = all(b <= a for a, b in zip(norms, norms[1:]))
    return CriterionResult(8, "Coarse-interval commutator decay (n=64)", ok,
                           "||[dI_p,dI_q]||_F at widths "
                           + ", ".join(f"{w}:{v:.4f}" for w, v in zip(widths, norms)))


def collapse(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    t10 = _t(1e-10, tau)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        d = sg.DetectorModel.random(8, rng)
        c_up, c_down = random_state(2, rng)
        up, down = sg.collapse_truths(c_up, c_down, d)
        ru, rd = sg.collapse_truths(c_up, c_down, d.rephased(rng.uniform(0, 2 * math.pi, 8)))
        worst = max(worst, abs(up - abs(c_up) ** 2), abs(down - abs(c_down) ** 2),
                    abs(up + down - 1), abs(ru - up), abs(rd - down))
    return CriterionResult(9, "Collapse model coarse truths (N=8)", worst <= t10,
                           f"50 seeded draws, max error={worst:.2e}")


def complement_and_bounds(seed: int = DEFAULT_SEED, tau: float | None = None) -> CriterionResult:
    t12 = _t(1e-12, tau)
    rng = np.random.default_rng(seed)
    comp = bound = 0.0
    for _ in range(500):
        dim = int(rng.integers(2, 17))
        lam = random_state(dim, rng)
        m = random_projector(dim, int(rng.integers(0, dim + 1)), rng)
        tm = logic.conditional_truth(lam, m, clamp=False)
        tn = logic.conditional_truth(lam, logic.negate(m), clamp=False)
        comp = max(comp, abs(tn - (1 - tm)))
        for v in (tm, tn):
            bound = max(bound, -v, v - 1)
    ok = comp <= t12 and bound <= t12
    return CriterionResult(10, "Negation complement law and truth bounds", ok,
                           f"500 pairs dims 2-16, complement err={comp:.2e} worst bound excursion={max(bound, 0.0):.2e}")


CRITERIA: list[Callable[..., CriterionResult]] = [
    epr_equivalence, sigma_observable, chsh, sg_interference, connectives,
    tautologies, quantization, commutator_decay, collapse, complement_and_bounds,
]


def run_all(seed: int = DEFAULT_SEED, tau: float | None = None) -> list[CriterionResult]:
    return [c(seed, tau) for c in CRITERIA]
