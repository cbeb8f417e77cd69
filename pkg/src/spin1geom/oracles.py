"""Independent checks on the classicality criterion.

* The symmetric two-qubit embedding plus the partial-transpose test: for two
  qubits, PPT is equivalent to separability, and classical spin-1 states are
  the separable symmetric ones.
* A constructive decomposition into coherent-state projectors.
* Hilbert-Schmidt random states and Monte-Carlo estimates of the classical
  volume fraction.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .classicality import (
    NonPhysicalStateError,
    Verdict,
    classify_batch,
    is_physical,
    tri_state,
    tri_state_array,
)
from .states import coherent_state
from .validation import DEFAULT_TOL, check_density_matrix, check_tolerance

# Columns map |1,1>, |1,0>, |1,-1> to |00>, (|01> + |10>)/sqrt2, |11>.
SYMMETRIC_ISOMETRY = np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0 / np.sqrt(2.0), 0.0],
        [0.0, 1.0 / np.sqrt(2.0), 0.0],
        [0.0, 0.0, 1.0],
    ],
    dtype=complex,
)
SYMMETRIC_PROJECTOR = SYMMETRIC_ISOMETRY @ SYMMETRIC_ISOMETRY.conj().T

CHUNK = 50_000
WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class TwoQubitState:
    entries: np.ndarray
    supported_on_symmetric: bool


def embed_symmetric_two_qubit(rho, tol=DEFAULT_TOL):
    """Map a spin-1 state (or a stack) into the symmetric subspace of two qubits."""
    rho = check_density_matrix(rho, tol)
    V = SYMMETRIC_ISOMETRY
    out = V @ rho @ V.conj().T
    sym = np.abs(SYMMETRIC_PROJECTOR @ out @ SYMMETRIC_PROJECTOR - out).max() <= tol
    return TwoQubitState(out, bool(sym))


def partial_transpose(M):
    """Transpose the second qubit of a ``(..., 4, 4)`` operator."""
    M = np.asarray(M)
    T = M.reshape(M.shape[:-2] + (2, 2, 2, 2))
    return np.swapaxes(T, -3, -1).reshape(M.shape)


def ppt_min_eig(ts):
    """Smallest eigenvalue of the partial transpose (dense Hermitian solver)."""
    entries = ts.entries if isinstance(ts, TwoQubitState) else np.asarray(ts)
    return np.linalg.eigvalsh(partial_transpose(entries))[..., 0]


def ppt_separable(ts, tol=DEFAULT_TOL):
    """Three-valued separability verdict: ``inside`` means strictly separable."""
    tol = check_tolerance(tol)
    lam = ppt_min_eig(ts)
    if np.ndim(lam):
        return tri_state_array(lam, tol)
    return tri_state(float(lam), tol)


def fibonacci_sphere(n):
    """``n`` near-uniform directions as ``(theta, phi)`` arrays."""
    if n < 1:
        raise ValueError("grid size must be positive")
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    theta = np.arccos(z)
    phi = np.mod(i * np.pi * (3.0 - np.sqrt(5.0)), 2.0 * np.pi)
    return theta, phi


@dataclass(frozen=True)
class Decomposition:
    directions: np.ndarray
    weights: np.ndarray
    residual: float
    converged: bool = True

    def to_dict(self):
        return {
            "directions": [[float(t), float(p)] for t, p in self.directions],
            "weights": [float(w) for w in self.weights],
            "residual": float(self.residual),
        }


def _real_rows(mats):
    # Stack real and imaginary parts so that the 2-norm of the residual is the Frobenius norm.
    flat = mats.reshape(mats.shape[0], 9)
    return np.concatenate([flat.real, flat.imag], axis=1).T


def coherent_dictionary(grid_n):
    theta, phi = fibonacci_sphere(grid_n)
    projs = np.array([coherent_state(t, p) for t, p in zip(theta, phi)])
    return np.stack([theta, phi], axis=1), projs


def classical_decomposition(rho, grid_n, tol=DEFAULT_TOL, directions=None):
    """Fit rho as a non-negative combination of coherent-state projectors.

    The dictionary is a Fibonacci grid of ``grid_n`` directions unless an
    explicit ``(n, 2)`` array of ``(theta, phi)`` is given. A residual near
    zero certifies classicality; a classical state may still leave a small
    residual if the grid is too coarse.
    """
    rho = check_density_matrix(rho, tol)
    if is_physical(rho, tol).verdict is Verdict.OUTSIDE:
        raise NonPhysicalStateError("decomposition requires a physical state")
    if directions is None:
        dirs, projs = coherent_dictionary(grid_n)
    else:
        dirs = np.asarray(directions, dtype=float).reshape(-1, 2)
        projs = np.array([coherent_state(t, p) for t, p in dirs])
    A = np.vstack([_real_rows(projs), np.ones((1, len(dirs)))])
    b = np.concatenate([_real_rows(rho[None])[:, 0], [1.0]])
    converged = True
    try:
        w, _ = nnls(A, b, maxiter=10 * len(dirs))
    except RuntimeError:
        # Iteration cap hit: report the stall instead of a spurious fit.
        converged = False
        w = np.zeros(len(dirs))
        warnings.warn("NNLS hit its iteration cap; decomposition is incomplete", RuntimeWarning)
    # Drop rounding-level weights; the residual describes the pruned fit.
    keep = w > WEIGHT_FLOOR
    residual = float(np.linalg.norm(rho - np.einsum("k,kij->ij", w[keep], projs[keep])))
    return Decomposition(dirs[keep], w[keep], residual, converged)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_random_states(n, seed):
    """``n`` Hilbert-Schmidt random states ``G G^+ / tr(G G^+)`` with complex Ginibre ``G``."""
    rng = _rng(seed)
    G = rng.standard_normal((n, 3, 3)) + 1j * rng.standard_normal((n, 3, 3))
    rho = G @ np.conj(np.swapaxes(G, -1, -2))
    rho = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
    return rho / np.trace(rho, axis1=-2, axis2=-1).real[:, None, None]


def sample_random_state(seed):
    """A single Hilbert-Schmidt random state."""
    return sample_random_states(1, seed)[0]


def _chunk_seeds(n_samples, seed):
    n_chunks = max(1, -(-n_samples // CHUNK))
    seqs = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [min(CHUNK, n_samples - k * CHUNK) for k in range(n_chunks)]
    return list(zip(sizes, seqs))


def _audit_chunk(size, seq, tol):
    rho = sample_random_states(size, np.random.default_rng(seq))
    _, classical, _, lam_z = classify_batch(rho, tol)
    lam_pt = ppt_min_eig(embed_symmetric_two_qubit(rho))
    band = (np.abs(lam_z) <= tol) | (np.abs(lam_pt) <= tol)
    strict = ~band
    disagree = strict & ((lam_z > tol) != (lam_pt > tol))
    return {
        "samples": size,
        "classical": int(np.sum(classical == Verdict.INSIDE.value)),
        "ppt_separable": int(np.sum(lam_pt > tol)),
        "band": int(np.sum(band)),
        "disagreements": int(np.sum(disagree)),
        "min_q": float(lam_z.min()),
    }


def oracle_audit(n_samples, seed, tol=DEFAULT_TOL, n_jobs=1):
    """Classicality verdicts against the PPT oracle on Hilbert-Schmidt samples.

    Samples are drawn in fixed-size chunks, each from its own spawned seed
    stream, so the result does not depend on ``n_jobs``.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    tol = check_tolerance(tol)
    jobs = _chunk_seeds(n_samples, seed)
    if n_jobs == 1:
        parts = [_audit_chunk(size, seq, tol) for size, seq in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(lambda job: _audit_chunk(job[0], job[1], tol), jobs))
    total = {k: sum(p[k] for p in parts) for k in ("samples", "classical", "ppt_separable", "band", "disagreements")}
    total["min_q"] = min(p["min_q"] for p in parts)
    frac = total["classical"] / total["samples"]
    total["fraction"] = frac
    total["stderr"] = float(np.sqrt(frac * (1.0 - frac) / total["samples"]))
    return total


def classical_volume_fraction(n_samples, seed, tol=DEFAULT_TOL):
    """Fraction of Hilbert-Schmidt samples strictly inside C, with its binomial standard error."""
    audit = oracle_audit(n_samples, seed, tol)
    return audit["fraction"], audit["stderr"]

