import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spin1geom.eigen import companion_eigs, sym_eigh_3x3, sym_eigs_3x3


def residual(M, vals, vecs):
    return np.linalg.norm(M @ vecs - vecs * vals, axis=0).max()


def test_diagonal_sorted():
    np.testing.assert_array_equal(sym_eigs_3x3(np.diag([0.7, -2.0, 0.1])), [-2.0, 0.1, 0.7])


def test_rank_one_update_of_identity():
    u = np.full(3, 1 / np.sqrt(3))
    M = np.eye(3) / 3 - np.outer(u, u)
    np.testing.assert_allclose(sym_eigs_3x3(M), [-2 / 3, 1 / 3, 1 / 3], atol=1e-15)


def test_zero_matrix():
    vals, vecs = sym_eigh_3x3(np.zeros((3, 3)))
    np.testing.assert_array_equal(vals, 0.0)
    np.testing.assert_allclose(vecs.T @ vecs, np.eye(3), atol=1e-15)


def test_rejects_asymmetric():
    M = np.eye(3)
    M[0, 1] = 1e-3
    with pytest.raises(ValueError):
        sym_eigs_3x3(M)


def test_against_companion_root_finder(rng):
    for _ in range(500):
        G = rng.normal(size=(3, 3))
        M = G + G.T
        np.testing.assert_allclose(sym_eigs_3x3(M), companion_eigs(M), atol=1e-10)


def test_batch_matches_single(rng):
    G = rng.normal(size=(50, 3, 3))
    M = G + G.transpose(0, 2, 1)
    batch = sym_eigs_3x3(M)
    for k in range(50):
        np.testing.assert_array_equal(batch[k], sym_eigs_3x3(M[k]))


@pytest.mark.parametrize("gap", [0.0, 1e-15, 1e-12, 1e-8, 1e-4])
def test_residual_near_degenerate(rng, gap):
    Q = np.linalg.qr(rng.normal(size=(2000, 3, 3)))[0]
    lam = rng.normal(size=(2000, 3))
    lam[:, 1] = lam[:, 0] + gap
    for lam2 in (lam[:, 2], lam[:, 0] - gap):
        lam[:, 2] = lam2
        M = np.einsum("nab,nb,ncb->nac", Q, lam, Q)
        vals, vecs = sym_eigh_3x3(M)
        res = np.linalg.norm(np.einsum("nab,nbk->nak", M, vecs) - vecs * vals[:, None, :], axis=1).max(-1)
        assert np.all(res <= 1e-12 * np.linalg.norm(M, axis=(1, 2)))
        np.testing.assert_allclose(np.einsum("nak,nal->nkl", vecs, vecs), np.broadcast_to(np.eye(3), M.shape), atol=1e-13)


symmetric = arrays(
    np.float64, (3, 3), elements=st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False)
).map(lambda A: np.triu(A) + np.triu(A, 1).T)


@settings(max_examples=300, deadline=None)
@given(symmetric)
def test_residual_property(M):
    vals, vecs = sym_eigh_3x3(M)
    assert np.all(np.diff(vals) >= 0)
    assert residual(M, vals, vecs) <= 1e-12 * max(np.linalg.norm(M), 1e-300)
    np.testing.assert_allclose(vals, np.linalg.eigvalsh(M), atol=1e-12 * max(1.0, np.linalg.norm(M)))
