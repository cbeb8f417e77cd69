import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from conftest import random_orthogonal, random_states
from spin1geom.classicality import (
    CaseLabel,
    InconsistencyError,
    NonPhysicalStateError,
    Verdict,
    classify,
    classify_batch,
    classify_case,
    descartes_nonnegative,
    is_classical,
    is_physical,
    kappa_boundary,
    lowest_eigenvalue_curve,
    min_quantumness_direction,
    physical_invariants,
    quantumness_from_moments,
    quantumness_witness,
    thermal_transition,
    tri_state,
    z_eigenvalues,
    z_invariants,
    z_matrix,
)
from spin1geom.oracles import sample_random_states
from spin1geom.states import (
    BlochPair,
    DiagonalFrame,
    bloch_from_rho,
    coherent_state,
    diagonal_frame,
    rho_from_bloch,
    rotate_state,
    thermal_state,
)

P_10 = np.diag([0.0, 1.0, 0.0]).astype(complex)
MIXED = BlochPair(np.zeros(3), np.eye(3) / 3)


def frame(mu, u):
    return DiagonalFrame(np.asarray(mu, float), np.asarray(u, float), np.eye(3))


# --- Z matrix ----------------------------------------------------------------


def test_z_equals_w_when_u_vanishes():
    W = np.diag([0.2, 0.3, 0.5])
    np.testing.assert_array_equal(z_matrix(BlochPair(np.zeros(3), W)), W)


def test_z_of_m0_state():
    np.testing.assert_allclose(z_eigenvalues(P_10), [-1, 1, 1], atol=1e-15)


@pytest.mark.parametrize("theta,phi", [(0.3, 1.1), (2.0, -0.4), (np.pi / 2, np.pi)])
def test_z_of_coherent_state_vanishes(theta, phi):
    np.testing.assert_allclose(z_matrix(bloch_from_rho(coherent_state(theta, phi))), 0, atol=1e-15)


def test_trace_identities(rng):
    for _ in range(500):
        u = rng.normal(size=3)
        A = rng.normal(size=(3, 3))
        W = A + A.T
        W += (1 - np.trace(W)) / 3 * np.eye(3)
        bp = BlochPair(u, W)
        Z = W - np.outer(u, u)
        tr_z, tr_z2, det_z = z_invariants(bp)
        scale = max(1.0, np.abs(Z).max()) ** 3
        np.testing.assert_allclose(tr_z, np.trace(Z), rtol=1e-12, atol=1e-12 * scale)
        np.testing.assert_allclose(tr_z2, np.trace(Z @ Z), rtol=1e-12, atol=1e-12 * scale)
        np.testing.assert_allclose(det_z, np.linalg.det(Z), rtol=1e-12, atol=1e-12 * scale)
        np.testing.assert_allclose(tr_z, 1 - u @ u, rtol=1e-12, atol=1e-12 * scale)


def test_physical_invariants_match_spectrum():
    rho = random_states(500, 21)
    a, d = physical_invariants(bloch_from_rho(rho))
    lam = np.linalg.eigvalsh(rho)
    e2 = lam[:, 0] * lam[:, 1] + lam[:, 0] * lam[:, 2] + lam[:, 1] * lam[:, 2]
    np.testing.assert_allclose(a, 4 * e2, atol=1e-13)
    np.testing.assert_allclose(d, 8 * lam.prod(axis=1), atol=1e-13)


# --- is_physical ---------------------------------------------------------------


def test_mixed_state_is_physical():
    assert is_physical(MIXED).verdict is Verdict.INSIDE


def test_ellipsoid_boundary_point():
    res = is_physical(BlochPair([2 / 3, 0, 0], np.eye(3) / 3))
    assert res.verdict is Verdict.BOUNDARY
    assert abs(res.min_eig) < 1e-15


def test_beyond_ellipsoid_is_outside():
    res = is_physical(BlochPair([0.9, 0, 0], np.eye(3) / 3))
    assert res.verdict is Verdict.OUTSIDE
    assert res.descartes_verdict is Verdict.OUTSIDE


def test_random_states_are_physical():
    for rho in random_states(300, 22):
        assert is_physical(rho).verdict in (Verdict.INSIDE, Verdict.BOUNDARY)


def test_is_physical_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        is_physical(MIXED, tol=0.0)


# --- is_classical ----------------------------------------------------------------


@pytest.mark.parametrize(
    "beta,expected",
    [(np.log(2) - 0.1, Verdict.INSIDE), (np.log(2), Verdict.BOUNDARY), (np.log(2) + 0.1, Verdict.OUTSIDE)],
)
def test_thermal_verdicts(beta, expected):
    assert is_classical(thermal_state(beta)).verdict is expected


def test_m0_state_is_quantum():
    res = is_classical(P_10)
    assert res.verdict is Verdict.OUTSIDE
    assert res.min_eig == pytest.approx(-1, abs=1e-15)


@pytest.mark.parametrize("theta", np.linspace(0, np.pi, 5))
@pytest.mark.parametrize("phi", [0.0, 1.0, 4.0])
def test_coherent_states_are_boundary(theta, phi):
    assert is_classical(coherent_state(theta, phi)).verdict is Verdict.BOUNDARY


def test_nonphysical_input_is_an_error():
    with pytest.raises(NonPhysicalStateError):
        is_classical(BlochPair([0.9, 0, 0], np.eye(3) / 3))


def test_descartes_cross_check_agrees_on_samples():
    # Any inside/outside clash would raise InconsistencyError.
    for rho in sample_random_states(2000, 23):
        res = is_classical(rho)
        if res.verdict is not Verdict.BOUNDARY:
            assert res.descartes_verdict in (res.verdict, Verdict.BOUNDARY)


def test_inconsistency_error_type():
    assert issubclass(InconsistencyError, RuntimeError)


def test_trace_of_z_nonnegative_on_physical_states():
    tr_z, _, _ = z_invariants(bloch_from_rho(sample_random_states(5000, 24)))
    assert tr_z.min() >= -1e-12


def test_degenerate_descartes_strata_lie_on_det_surface():
    # tr Z = 0 happens only at coherent states, where Z vanishes entirely.
    bp = bloch_from_rho(coherent_state(1.2, 0.7))
    tr_z, tr_z2, det_z = z_invariants(bp)
    assert abs(tr_z) < 1e-15 and abs(det_z) < 1e-15
    # (tr Z)^2 = tr Z^2 with Z >= 0 forces rank one, hence det Z = 0.
    t = np.array([1.0, 2.0, 2.0]) / 3
    rho = 0.5 * coherent_state(0.0, 0.0) + 0.5 * coherent_state(np.arccos(t[2]), np.arctan2(t[1], t[0]))
    tr_z, tr_z2, det_z = z_invariants(bloch_from_rho(rho))
    assert abs(tr_z**2 - tr_z2) < 1e-14
    assert abs(det_z) < 1e-15


def test_nesting_and_convexity(rng):
    rhos = sample_random_states(4000, 25)
    lam = z_eigenvalues(rhos)[:, 0]
    classical = rhos[lam > 1e-9]
    assert len(classical) > 50
    for rho in classical:
        assert is_physical(rho).verdict is not Verdict.OUTSIDE
    for _ in range(1000):
        i, j = rng.integers(len(classical), size=2)
        w = rng.uniform()
        mix = w * classical[i] + (1 - w) * classical[j]
        assert is_classical(mix).verdict is Verdict.INSIDE


def test_verdicts_invariant_under_rotation():
    rhos = sample_random_states(300, 26)
    for rho, O in zip(rhos, random_orthogonal(300, 27)):
        bp = bloch_from_rho(rho)
        rot = rotate_state(bp, O)
        assert is_physical(rot).verdict is is_physical(bp).verdict
        assert is_classical(rot).verdict is is_classical(bp).verdict
        assert min_quantumness_direction(rot)[0] == pytest.approx(min_quantumness_direction(bp)[0], abs=1e-13)


# --- Descartes test on bare matrices -------------------------------------------


def test_descartes_matches_eigenvalues_on_random_matrices(rng):
    M = rng.normal(size=(10_000, 3, 3))
    M = M + np.swapaxes(M, 1, 2)
    M += 6 * rng.uniform(size=(10_000, 1, 1)) * np.eye(3)  # mix of definite and indefinite
    lam = np.linalg.eigvalsh(M)[:, 0]
    clear = np.abs(lam) > 1e-9
    assert 0.1 < np.mean(lam > 0) < 0.9
    np.testing.assert_array_equal(descartes_nonnegative(M[clear]), lam[clear] >= 0)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-3, 3, allow_nan=False), min_size=3, max_size=3), st.integers(0, 2**31))
def test_descartes_property(diag, seed):
    O = Rotation.random(random_state=seed).as_matrix()
    M = O @ np.diag(diag) @ O.T
    M = 0.5 * (M + M.T)
    lam = min(diag)
    if abs(lam) > 1e-6:
        assert bool(descartes_nonnegative(M)) == (lam >= 0)


# --- quantumness witness -------------------------------------------------------


def test_min_direction_examples():
    q, t = min_quantumness_direction(P_10)
    assert q == pytest.approx(-1, abs=1e-15)
    np.testing.assert_allclose(t, [0, 0, 1], atol=1e-15)
    q, _ = min_quantumness_direction(MIXED)
    assert q == pytest.approx(1 / 3, abs=1e-15)
    q, t = min_quantumness_direction(coherent_state(0.4, 0.2))
    assert abs(q) < 1e-15
    assert np.linalg.norm(t) == pytest.approx(1)


def test_witness_formulas_agree(rng):
    for rho in sample_random_states(200, 28):
        t = rng.normal(size=3)
        assert quantumness_witness(rho, t) == pytest.approx(quantumness_from_moments(rho, t), abs=1e-13)


def test_witness_minimum_is_approached(rng):
    for rho in sample_random_states(20, 29):
        q, t = min_quantumness_direction(rho)
        assert quantumness_witness(rho, t) == pytest.approx(q, abs=1e-13)
        dirs = rng.normal(size=(10_000, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        Z = z_matrix(bloch_from_rho(rho))
        values = np.einsum("na,ab,nb->n", dirs, Z, dirs)
        assert values.min() >= q - 1e-13
        assert values.min() - q < 1e-3


# --- case labels ---------------------------------------------------------------


def test_case_three_n_is_m0_state():
    fr = diagonal_frame(bloch_from_rho(P_10))
    np.testing.assert_allclose(fr.mu, [-1, 1, 1], atol=1e-15)
    rep = classify_case(fr)
    assert rep.case_n is CaseLabel.CASE3
    assert rep.violations == []


def test_case_three_c():
    fr = diagonal_frame(BlochPair([0.5, 0, 0], np.diag([1.0, 0, 0])))
    rep = classify_case(fr)
    assert rep.case_c is CaseLabel.CASE3
    assert rep.violations == []


def test_case_three_c_violation():
    rep = classify_case(frame([0, 0, 1], [0, 0, 1.5]))
    assert rep.case_c is CaseLabel.CASE3
    assert any("|u|" in v for v in rep.violations)


def test_generic_case():
    rep = classify_case(frame([0.05, 0.4, 0.55], [0.1, 0, 0]))
    assert (rep.case_n, rep.case_c) == (CaseLabel.CASE1, CaseLabel.CASE1)


def test_case_two_n_side_conditions():
    good = classify_case(frame([-0.3, 0.3, 1.0], [0, 0, 0.5]))
    assert good.case_n is CaseLabel.CASE2 and good.case_c is None
    assert good.violations == []
    bad = classify_case(frame([-0.2, 0.2, 1.0], [0.1, 0, 0.99]))
    assert bad.case_n is CaseLabel.CASE2
    assert sum(v.startswith("N case 2") for v in bad.violations) == 2


def test_case_two_c():
    rep = classify_case(frame([0.0, 0.4, 0.6], [0.0, 0.2, 0.1]))
    assert rep.case_c is CaseLabel.CASE2 and rep.violations == []
    rep = classify_case(frame([0.0, 0.4, 0.6], [0.3, 0.2, 0.1]))
    assert rep.violations


# --- monotonicity curve ----------------------------------------------------------


def test_curve_at_zero_is_reduced_spectrum():
    mu = np.array([0.05, 0.4, 0.55])
    assert lowest_eigenvalue_curve(frame(mu, [0.3, 0.1, 0]), [0.0])[0] == pytest.approx(((1 - mu) / 2).min(), abs=1e-15)


def test_curve_constant_without_u():
    curve = lowest_eigenvalue_curve(frame([0.05, 0.4, 0.55], [0, 0, 0]), np.linspace(0, 3, 7))
    np.testing.assert_allclose(curve, curve[0], atol=1e-15)


def test_curve_decreasing_for_generic_frame():
    curve = lowest_eigenvalue_curve(frame([0.05, 0.4, 0.55], [1.0, 0, 0]), np.arange(0, 1.0001, 0.25))
    assert np.all(np.diff(curve) < 0)


def test_curve_rejects_negative_kappa():
    with pytest.raises(ValueError):
        lowest_eigenvalue_curve(frame([0.05, 0.4, 0.55], [1.0, 0, 0]), [-0.1])


def test_kappa_boundary_hits_zero():
    fr = frame([1 / 3, 1 / 3, 1 / 3], [1.0, 0, 0])
    k = kappa_boundary(fr)
    # boundary of the ellipsoid with semi-axis 2/3 along x
    assert k == pytest.approx(2 / 3, abs=1e-9)
    assert abs(lowest_eigenvalue_curve(fr, [k])[0]) < 1e-9
    assert kappa_boundary(frame([1 / 3, 1 / 3, 1 / 3], [0, 0, 0])) == np.inf


# --- reports -------------------------------------------------------------------


def test_report_json_fields():
    rep = classify(P_10)
    d = rep.to_dict()
    assert set(d) == {"physical", "classical", "rhoEigs", "zEigs", "qMin", "worstDirection", "caseN", "caseC", "tol"}
    assert d["qMin"] == min(d["zEigs"])
    assert d["classical"] == "outside"
    json.dumps(d)


def test_report_for_nonphysical_state():
    rep = classify(BlochPair([0.9, 0, 0], np.eye(3) / 3))
    assert rep.physical is Verdict.OUTSIDE
    assert rep.classical is None


def test_report_invariants():
    for rho in sample_random_states(200, 30):
        rep = classify(rho)
        assert rep.q_min == rep.z_eigs[0]
        assert np.linalg.norm(rep.worst_direction) == pytest.approx(1)
        Z = z_matrix(bloch_from_rho(rho))
        assert rep.worst_direction @ Z @ rep.worst_direction == pytest.approx(rep.q_min, abs=1e-12)
        if rep.classical is Verdict.INSIDE:
            assert rep.physical is not Verdict.OUTSIDE


def test_batch_matches_single():
    rhos = np.concatenate([sample_random_states(300, 31), [P_10, np.eye(3) / 3, rho_from_bloch(BlochPair([0.9, 0, 0], np.eye(3) / 3))]])
    phys, cls, lam_rho, lam_z = classify_batch(rhos)
    for k, rho in enumerate(rhos):
        assert phys[k] == tri_state(np.linalg.eigvalsh(rho)[0], 1e-9).value
        if phys[k] == "outside":
            assert cls[k] == "nonphysical"
        else:
            assert cls[k] == is_classical(rho).verdict.value


def test_thermal_transition_is_ln2():
    assert thermal_transition() == pytest.approx(np.log(2), abs=1e-12)
