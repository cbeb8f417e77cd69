"""Input validation helpers shared by the functional API and the estimators."""

import numpy as np

DEFAULT_TOL = 1e-9


class StateValidationError(ValueError):
    """Raised when an input is not a valid spin-1 state representation."""


def check_tolerance(tol):
    tol = float(tol)
    if not np.isfinite(tol) or tol <= 0:
        raise ValueError(f"tolerance must be a positive finite number, got {tol!r}")
    return tol


def check_density_matrix(rho, tol=DEFAULT_TOL, renormalize=False):
    """Validate a Hermitian, unit-trace 3x3 matrix (or a stack of them).

    Positivity is *not* checked here; membership of the physical set is a
    question for :func:`spin1geom.classicality.is_physical`.

    With ``renormalize=True`` the input is Hermitian-symmetrized and divided
    by its trace instead of being rejected for a trace mismatch.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (3, 3):
        raise StateValidationError(f"expected (..., 3, 3) array, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise StateValidationError("density matrix has non-finite entries")
    herm_err = np.abs(rho - np.conj(np.swapaxes(rho, -1, -2))).max(axis=(-2, -1))
    tr = np.trace(rho, axis1=-2, axis2=-1)
    if renormalize:
        rho = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
        tr = np.trace(rho, axis1=-2, axis2=-1).real
        if np.any(np.abs(tr) <= tol):
            raise StateValidationError("cannot renormalize a matrix with zero trace")
        return rho / tr[..., None, None]
    if np.any(herm_err > tol):
        raise StateValidationError(f"matrix is not Hermitian (max deviation {herm_err.max():.3g})")
    if np.any(np.abs(tr - 1.0) > tol):
        worst = tr.ravel()[np.argmax(np.abs(tr - 1.0).ravel())]
        raise StateValidationError(f"trace must be 1, got {worst.real:.17g}")
    return rho


def check_bloch(u, W, tol=DEFAULT_TOL):
    """Validate a Bloch pair: real ``u`` of shape (..., 3), real symmetric ``W`` with trace 1."""
    u = np.asarray(u, dtype=float)
    W = np.asarray(W, dtype=float)
    if u.shape[-1:] != (3,) or W.shape[-2:] != (3, 3) or u.shape[:-1] != W.shape[:-2]:
        raise StateValidationError(f"incompatible shapes u{u.shape}, W{W.shape}")
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(W))):
        raise StateValidationError("Bloch pair has non-finite entries")
    if np.any(np.abs(W - np.swapaxes(W, -1, -2)).max(axis=(-2, -1)) > tol):
        raise StateValidationError("W is not symmetric")
    if np.any(np.abs(np.trace(W, axis1=-2, axis2=-1) - 1.0) > tol):
        raise StateValidationError("trace of W must be 1")
    return u, W


def check_orthogonal(O, tol=DEFAULT_TOL):
    O = np.asarray(O, dtype=float)
    if O.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {O.shape}")
    if np.abs(O.T @ O - np.eye(3)).max() > tol:
        raise ValueError("matrix is not orthogonal")
    return O


def as_state_batch(X, tol=DEFAULT_TOL):
    """Coerce estimator input to a batched :class:`~spin1geom.states.BlochPair`.

    Accepts either density matrices of shape ``(n, 3, 3)`` or Bloch features
    of shape ``(n, 12)`` laid out as ``[u_x, u_y, u_z, W_xx, W_xy, ..., W_zz]``.
    """
    from .states import BlochPair, bloch_from_rho

    X = np.asarray(X)
    if X.ndim == 3 and X.shape[1:] == (3, 3):
        return bloch_from_rho(check_density_matrix(X, tol))
    if X.ndim == 2 and X.shape[1] == 12:
        if np.iscomplexobj(X):
            if np.abs(X.imag).max() > tol:
                raise StateValidationError("Bloch features must be real")
            X = X.real
        return BlochPair(*check_bloch(X[:, :3], X[:, 3:].reshape(-1, 3, 3), tol))
    raise StateValidationError(
        f"expected density matrices (n, 3, 3) or Bloch features (n, 12), got shape {X.shape}"
    )
