"""Spin-1 states in matrix form and in Bloch-pair form ``(u, W)``.

The basis is ordered ``(|1,1>, |1,0>, |1,-1>)`` with ``Jz`` diagonal. A
state is written

    rho = 1/3 + (1/2) u.J + (1/2) sum_ab (W_ab - delta_ab / 3) {J_a, J_b} / 2

with ``u_a = tr(rho J_a)`` and ``W_ab = tr(rho {J_a, J_b}) - delta_ab``.
Functions in this module accept single states or stacks of states; the
leading axes are treated as batch axes.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .eigen import sym_eigh_3x3
from .validation import DEFAULT_TOL, check_bloch, check_density_matrix, check_orthogonal


class SpinOperators(NamedTuple):
    Jx: np.ndarray
    Jy: np.ndarray
    Jz: np.ndarray


def spin1_operators():
    """Spin-1 angular momentum matrices, built from the ladder operators."""
    jp = np.sqrt(2.0) * np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
    jm = jp.conj().T
    Jx = 0.5 * (jp + jm)
    Jy = -0.5j * (jp - jm)
    Jz = np.diag([1.0, 0.0, -1.0]).astype(complex)
    return SpinOperators(Jx, Jy, Jz)


J = np.stack(spin1_operators())
# ANTICOMM[a, b] = (J_a J_b + J_b J_a) / 2
ANTICOMM = 0.5 * (np.einsum("aij,bjk->abik", J, J) + np.einsum("bij,ajk->abik", J, J))


@dataclass(frozen=True)
class BlochPair:
    """Coordinates ``(u, W)`` of a spin-1 state; may hold a stack of states."""

    u: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        u, W = check_bloch(self.u, self.W)
        object.__setattr__(self, "u", u)
        # Symmetrize away sub-tolerance noise so downstream eigensolvers see exact symmetry.
        object.__setattr__(self, "W", 0.5 * (W + np.swapaxes(W, -1, -2)))

    def __len__(self):
        return 1 if self.u.ndim == 1 else self.u.shape[0]

    def __getitem__(self, idx):
        return BlochPair(self.u[idx], self.W[idx])

    def as_features(self):
        """Flatten to ``(..., 12)``: ``[u, W.ravel()]``."""
        return np.concatenate([self.u, self.W.reshape(self.W.shape[:-2] + (9,))], axis=-1)


@dataclass(frozen=True)
class DiagonalFrame:
    """``W`` diagonalized: ``O @ W @ O.T == diag(mu)`` and ``u_frame == O @ u``."""

    mu: np.ndarray
    u_frame: np.ndarray
    O: np.ndarray


def rho_from_bloch(bp):
    """Density matrix for a Bloch pair. Positivity is not guaranteed."""
    if not isinstance(bp, BlochPair):
        raise TypeError("expected a BlochPair")
    traceless = bp.W - np.eye(3) / 3.0
    rho = (
        np.eye(3) / 3.0
        + 0.5 * np.einsum("...a,aij->...ij", bp.u, J)
        + 0.5 * np.einsum("...ab,abij->...ij", traceless, ANTICOMM)
    )
    return rho


def bloch_from_rho(rho, tol=DEFAULT_TOL, renormalize=False):
    """Extract ``(u, W)`` from a Hermitian unit-trace matrix."""
    rho = check_density_matrix(rho, tol, renormalize)
    u = np.einsum("...ij,aji->...a", rho, J).real
    W = 2.0 * np.einsum("...ij,abji->...ab", rho, ANTICOMM).real - np.eye(3)
    return BlochPair(u, W)


def rotate_state(bp, O):
    """Rotate the coordinate system: ``(u, W) -> (O u, O W O^T)``."""
    O = check_orthogonal(O)
    return BlochPair(bp.u @ O.T, O @ bp.W @ O.T)


def diagonal_frame(bp):
    """Rotate to the eigenbasis of ``W`` with ``mu`` ascending.

    Rows of ``O`` are eigenvectors of ``W``, each signed so that its
    largest-magnitude component is positive. An already-diagonal ``W`` only
    gets its axes permuted.
    """
    W = np.asarray(bp.W)
    if W.ndim != 2:
        raise ValueError("diagonal_frame works on a single state")
    if not np.any(W - np.diag(np.diag(W))):
        order = np.argsort(np.diag(W), kind="stable")
        O = np.eye(3)[order]
        mu = np.diag(W)[order]
    else:
        mu, vecs = sym_eigh_3x3(W)
        O = vecs.T.copy()
        lead = O[np.arange(3), np.argmax(np.abs(O), axis=1)]
        O *= np.where(lead < 0, -1.0, 1.0)[:, None]
    return DiagonalFrame(mu=mu, u_frame=O @ bp.u, O=O)


def coherent_ket(theta, phi):
    """Spin-1 coherent state pointing along ``(sin t cos p, sin t sin p, cos t)``."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array(
        [np.exp(-1j * phi) * c * c, np.sqrt(2.0) * c * s, np.exp(1j * phi) * s * s]
    )


def coherent_state(theta, phi):
    """Projector onto :func:`coherent_ket`."""
    psi = coherent_ket(theta, phi)
    return np.outer(psi, psi.conj())


def reduced_rho(mu):
    """``rho' = (1/2) sum_a mu_a J_a^2`` for a diagonal ``W = diag(mu)`` and ``u = 0``."""
    mu = np.asarray(mu, dtype=float)
    return 0.5 * np.einsum("...a,aij->...ij", mu, np.einsum("aij,ajk->aik", J, J))


def thermal_state(beta):
    """Gibbs state of ``H = Jz^2`` at inverse temperature ``beta`` (closed form)."""
    beta = float(beta)
    if not np.isfinite(beta):
        raise ValueError("beta must be finite")
    if beta >= 0:
        x = np.exp(-beta)
        diag = np.array([x, 1.0, x]) / (1.0 + 2.0 * x)
    else:
        x = np.exp(beta)
        diag = np.array([1.0, x, 1.0]) / (2.0 + x)
    return np.diag(diag).astype(complex)


def thermal_bloch(beta):
    """Closed-form Bloch pair of :func:`thermal_state`: ``u = 0``, diagonal ``W``."""
    # e^b / (2 + e^b) written in terms of e^-b to stay finite for large beta
    x = np.exp(-abs(beta))
    if beta >= 0:
        side, top = 1.0 / (1.0 + 2.0 * x), (2.0 * x - 1.0) / (2.0 * x + 1.0)
    else:
        side, top = x / (x + 2.0), (2.0 - x) / (2.0 + x)
    return BlochPair(np.zeros(3), np.diag([side, side, top]))
