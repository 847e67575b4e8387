import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtruth import stern_gerlach as sg
from qtruth.errors import NormalizationError, QTruthError, UnsupportedCascadeError
from qtruth.hilbert import conjugate, identity, is_projector, is_unitary, random_state
from qtruth.logic import conditional_truth

thetas = st.floats(0, math.pi)
phis = st.floats(0, 4 * math.pi, exclude_max=True)
seeds = st.integers(0, 2**32 - 1)


def law_of_cosines_total(t1, p1, t2, p2):
    # Bloch azimuth of this phase convention is -phi/2
    cos_big = math.cos(t1) * math.cos(t2) + math.sin(t1) * math.sin(t2) * math.cos((p1 - p2) / 2)
    return 0.5 * (1 + cos_big)


def test_axis_validation():
    with pytest.raises(QTruthError):
        sg.SpinAxis(-0.1)
    with pytest.raises(QTruthError):
        sg.SpinAxis(1.0, 4 * math.pi)


def test_spin_state_examples():
    assert np.allclose(sg.spin_state(sg.SpinAxis(0, 0)), [1, 0])
    assert np.allclose(sg.spin_state(sg.SpinAxis(math.pi, 0)), [0, 1])
    assert np.allclose(sg.spin_state(sg.SpinAxis(math.pi / 2, 0)), np.array([1, 1]) / math.sqrt(2))


def test_spin_truth_examples():
    assert np.allclose(sg.spin_truth(sg.Z_AXIS), np.diag([1, 0]))
    assert np.allclose(sg.spin_truth(sg.SpinAxis(math.pi / 2)), 0.5 * np.ones((2, 2)))
    assert np.allclose(sg.spin_truth(sg.Z_AXIS) + sg.spin_down_truth(sg.Z_AXIS), identity(2))


@given(thetas, phis)
def test_bloch_vector_matches_truth_operator(t, p):
    ax = sg.SpinAxis(t, p)
    proj = sg.spin_truth(ax)
    n = [np.trace(proj @ s).real for s in (np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]),
                                           np.diag([1, -1]))]
    assert np.allclose(n, ax.bloch_vector(), atol=1e-12)
    assert is_projector(sg.spin_down_truth(ax))
    assert np.allclose(sg.sigma_along(ax) @ sg.sigma_along(ax), identity(2))


@given(thetas, phis)
def test_from_vector_round_trip(t, p):
    ax = sg.SpinAxis(t, p)
    back = sg.SpinAxis.from_vector(ax.bloch_vector())
    assert np.allclose(sg.spin_truth(back), sg.spin_truth(ax), atol=1e-9)


@given(thetas, phis, thetas, phis)
def test_overlap_total_is_law_of_cosines(t1, p1, t2, p2):
    a1, a2 = sg.SpinAxis(t1, p1), sg.SpinAxis(t2, p2)
    ov = sg.overlap_probability(a1, a2)
    assert ov.total == pytest.approx(law_of_cosines_total(t1, p1, t2, p2), abs=1e-10)
    assert ov.diagonal + ov.interference == pytest.approx(ov.total, abs=1e-12)
    assert ov.interference == pytest.approx(sg.interference_closed_form(t1, t2, p1, p2), abs=1e-12)
    assert conditional_truth(sg.spin_truth(a1), sg.spin_truth(a2)) == pytest.approx(
        math.cos(sg.axis_angle(a1, a2) / 2) ** 2, abs=1e-10)


def test_overlap_examples():
    ax = sg.SpinAxis(1.0, 2.0)
    assert sg.overlap_probability(ax, ax).total == pytest.approx(1)
    half = sg.SpinAxis(math.pi / 2)
    assert sg.overlap_probability(half, half).interference == pytest.approx(0.5)
    assert sg.overlap_probability(sg.Z_AXIS, sg.SpinAxis(math.pi)).total == pytest.approx(0, abs=1e-15)


def test_three_angle_examples():
    assert sg.interference_from_three(0.5, 0.5, 1.0) == pytest.approx(0.5)
    assert sg.interference_from_three(1, 1, 1) == 0
    t1, t2 = math.pi / 3, math.pi / 6
    direct = sg.overlap_probability(sg.SpinAxis(t1), sg.SpinAxis(t2)).interference
    assert sg.three_angle_interference(t1, t2) == pytest.approx(direct, abs=1e-10)
    with pytest.raises(QTruthError):
        sg.interference_from_three(1.5, 0.5, 0.5)


@given(thetas, thetas)
def test_three_angle_matches_closed_form(t1, t2):
    assert sg.three_angle_interference(t1, t2) == pytest.approx(sg.interference_closed_form(t1, t2), abs=1e-10)


def test_rotation_examples():
    assert np.allclose(sg.rotation_between(sg.Z_AXIS, sg.Z_AXIS), identity(2))
    x = sg.SpinAxis(math.pi / 2)
    g = sg.rotation_between(sg.Z_AXIS, x)
    assert abs(np.vdot(sg.spin_state(x), g @ sg.spin_state(sg.Z_AXIS))) == pytest.approx(1)
    anti = sg.rotation_between(sg.Z_AXIS, sg.SpinAxis(math.pi))
    assert np.allclose(conjugate(np.diag([1, 0]), anti), np.diag([0, 1]))


@given(thetas, phis, thetas, phis)
def test_rotation_between_carries_axis(t1, p1, t2, p2):
    a1, a2 = sg.SpinAxis(t1, p1), sg.SpinAxis(t2, p2)
    g = sg.rotation_between(a1, a2)
    assert is_unitary(g)
    assert np.linalg.norm(conjugate(sg.spin_truth(a1), g) - sg.spin_truth(a2)) <= 1e-9


@given(thetas, phis)
def test_spin_truth_is_rotated_z(t, p):
    ax = sg.SpinAxis(t, p)
    g = sg.rotation_between(sg.Z_AXIS, ax)
    assert np.linalg.norm(conjugate(np.diag([1, 0]), g) - sg.spin_truth(ax)) <= 1e-10 * 2


def test_cascade_examples():
    c = sg.SgCascade((sg.Z_AXIS, sg.Z_AXIS), sg.Z_AXIS)
    assert abs(sg.cascade_amplitude(c, (+1, +1))) ** 2 == pytest.approx(1)
    half = sg.SpinAxis(math.pi / 2)
    res = sg.cascade_overlap(sg.SgCascade((sg.Z_AXIS, half), half))
    assert (res.diagonal, res.interference, res.total) == pytest.approx((0.5, 0.5, 1.0))
    flipped = sg.cascade_overlap(sg.SgCascade((sg.Z_AXIS, sg.SpinAxis(math.pi / 2, math.pi)), half))
    assert flipped.interference == pytest.approx(0, abs=1e-15)
    with pytest.raises(UnsupportedCascadeError):
        sg.cascade_amplitude(sg.SgCascade((sg.Z_AXIS,) * 3, half), (1, 1, 1))
    with pytest.raises(QTruthError):
        sg.cascade_overlap(sg.SgCascade((sg.Z_AXIS,), half))


@given(thetas, phis, thetas, phis)
def test_cascade_recombination_equals_direct_overlap(t1, p1, t2, p2):
    init, mag2 = sg.SpinAxis(t1, p1), sg.SpinAxis(t2, p2)
    res = sg.cascade_overlap(sg.SgCascade((sg.Z_AXIS, mag2), init))
    ov = sg.overlap_probability(init, mag2)
    assert res.total == pytest.approx(ov.total, abs=1e-12)
    assert res.interference == pytest.approx(ov.interference, abs=1e-12)


def test_quasiclassical_example():
    p = sg.QuasiclassicalParams(force=1e-22, flight_time=1e-4, mass=1.8e-25, hbar=1.0546e-34)
    d, ratio = sg.quasiclassical_ratio(p)
    # 1e-44 * 1e-12 / (1.0546e-34 * 1.8e-25) by hand
    assert ratio == pytest.approx(526.80, rel=1e-4)
    assert d * ratio == pytest.approx(1)
    _, doubled = sg.quasiclassical_ratio(sg.QuasiclassicalParams(1e-22, 2e-4, 1.8e-25, 1.0546e-34))
    assert doubled / ratio == pytest.approx(8)
    with pytest.raises(QTruthError):
        sg.QuasiclassicalParams(0, 1, 1)


def test_collapse_examples(rng):
    d = sg.DetectorModel.random(8, rng)
    assert sg.collapse_truths(1, 0, d) == pytest.approx((1, 0))
    s = 1 / math.sqrt(2)
    assert sg.collapse_truths(s, s, d) == pytest.approx((0.5, 0.5))
    up, down = sg.coarse_spin_statements(d)
    assert np.allclose(up @ down, 0)
    assert is_projector(up) and is_projector(down)
    assert np.trace(up).real == 8 and d.dim == 32
    with pytest.raises(NormalizationError):
        sg.collapse_state(1, 1, d)
    with pytest.raises(NormalizationError):
        sg.DetectorModel(2, np.ones((2, 2)))


@given(st.integers(1, 12), seeds)
def test_collapse_truths_sum_to_one_and_ignore_phases(n, seed):
    rng = np.random.default_rng(seed)
    d = sg.DetectorModel.random(n, rng)
    cu, cd = random_state(2, rng)
    up, down = sg.collapse_truths(cu, cd, d)
    assert up + down == pytest.approx(1, abs=1e-12)
    assert up == pytest.approx(abs(cu) ** 2, abs=1e-12)
    for betas in (rng.uniform(0, 2 * math.pi, n), rng.uniform(0, 2 * math.pi, (2, n))):
        assert sg.collapse_truths(cu, cd, d.rephased(betas)) == pytest.approx((up, down), abs=1e-12)


@given(st.integers(1, 8), seeds)
def test_any_record_superposition_is_an_eigenvector(n, seed):
    rng = np.random.default_rng(seed)
    d = sg.DetectorModel.random(n, rng)
    up, down = sg.coarse_spin_statements(d)
    coeffs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v = sg.spin_eigenvector(d, +1, coeffs)
    assert np.allclose(up @ v, v) and np.allclose(down @ v, 0)
    w = sg.spin_eigenvector(d, -1, coeffs)
    assert np.allclose(down @ w, w)
