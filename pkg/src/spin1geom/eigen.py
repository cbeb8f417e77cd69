"""Closed-form eigensolver for real symmetric 3x3 matrices.

Eigenvalues come from the trigonometric solution of the characteristic
cubic, followed by a single guarded Newton step per root. Eigenvectors use
the cross-product / deflation construction, which stays well conditioned
when two eigenvalues coincide.

Every function accepts a single matrix of shape ``(3, 3)`` or a stack of
shape ``(..., 3, 3)``.
"""

import numpy as np

SYMMETRY_TOL = 1e-9


def _check_symmetric(M):
    M = np.asarray(M, dtype=float)
    if M.shape[-2:] != (3, 3):
        raise ValueError(f"expected (..., 3, 3) array, got shape {M.shape}")
    scale = np.maximum(1.0, np.abs(M).max(axis=(-2, -1)))
    asym = np.abs(M - np.swapaxes(M, -1, -2)).max(axis=(-2, -1))
    if np.any(asym > SYMMETRY_TOL * scale):
        raise ValueError("matrix is not symmetric")
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def char_poly_coeffs(M):
    """Return ``(e1, e2, e3)`` with ``det(x I - M) = x^3 - e1 x^2 + e2 x - e3``."""
    M = np.asarray(M, dtype=float)
    e1 = np.trace(M, axis1=-2, axis2=-1)
    e2 = 0.5 * (e1**2 - np.einsum("...ab,...ba->...", M, M))
    e3 = np.linalg.det(M)
    return e1, e2, e3


def _depressed(A):
    # Shift/scale A to B = (A - q I) / p, whose characteristic polynomial is
    # x^3 - 3x - 2r with r = det(B) / 2.
    q = np.trace(A, axis1=-2, axis2=-1) / 3.0
    off = A[..., 0, 1] ** 2 + A[..., 0, 2] ** 2 + A[..., 1, 2] ** 2
    d = np.stack([A[..., 0, 0], A[..., 1, 1], A[..., 2, 2]], axis=-1) - q[..., None]
    p = np.sqrt(((d**2).sum(axis=-1) + 2.0 * off) / 6.0)
    safe_p = np.where(p > 0, p, 1.0)
    B = (A - q[..., None, None] * np.eye(3)) / safe_p[..., None, None]
    r = np.clip(np.linalg.det(B) / 2.0, -1.0, 1.0)
    return q, p, r


def _trig_roots(r):
    phi = np.arccos(r) / 3.0
    hi = 2.0 * np.cos(phi)
    lo = 2.0 * np.cos(phi + 2.0 * np.pi / 3.0)
    mid = -hi - lo
    return np.sort(np.stack([lo, mid, hi], axis=-1), axis=-1)


def _newton_polish(x, r):
    """One guarded Newton step per root of ``x^3 - 3x - 2r``."""
    r = r[..., None]

    def f(t):
        return (t * t - 3.0) * t - 2.0 * r

    fp = 3.0 * (x * x - 1.0)
    f0 = f(x)
    ok = fp != 0
    step = np.where(ok, f0 / np.where(ok, fp, 1.0), 0.0)
    # A step larger than the distance to a neighbouring root is untrustworthy
    # (near-double roots); so is one that does not reduce |f|.
    gaps = np.diff(x, axis=-1)
    big = np.full(x.shape[:-1] + (1,), np.inf)
    room = np.minimum(np.concatenate([big, gaps], axis=-1), np.concatenate([gaps, big], axis=-1))
    cand = x - step
    accept = ok & (np.abs(step) < 0.5 * room) & (np.abs(f(cand)) <= np.abs(f0))
    return np.sort(np.where(accept, cand, x), axis=-1)


def _cubic_roots(A):
    q, p, r = _depressed(A)
    x = _newton_polish(_trig_roots(r), r)
    return q[..., None] + p[..., None] * x


def _unit(v):
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / np.where(n > 0, n, 1.0)


def _orthonormal_complement(w):
    # Two unit vectors u, v with (u, v, w) orthonormal.
    big_x = np.abs(w[..., 0]) > np.abs(w[..., 1])
    inv_x = np.stack([-w[..., 2], np.zeros_like(w[..., 0]), w[..., 0]], axis=-1)
    inv_y = np.stack([np.zeros_like(w[..., 0]), w[..., 2], -w[..., 1]], axis=-1)
    u = _unit(np.where(big_x[..., None], inv_x, inv_y))
    v = np.cross(w, u)
    return u, v


def _vector_for_isolated(A, lam):
    """Eigenvector for an eigenvalue of multiplicity one."""
    R = A - lam[..., None, None] * np.eye(3)
    r0, r1, r2 = R[..., 0, :], R[..., 1, :], R[..., 2, :]
    c = np.stack([np.cross(r0, r1), np.cross(r0, r2), np.cross(r1, r2)], axis=-2)
    norms = (c**2).sum(axis=-1)
    pick = np.argmax(norms, axis=-1)
    best = np.take_along_axis(c, pick[..., None, None], axis=-2)[..., 0, :]
    nb = np.take_along_axis(norms, pick[..., None], axis=-1)[..., 0]
    # R == 0 means A is a multiple of the identity: any axis will do.
    fallback = np.broadcast_to(np.array([1.0, 0.0, 0.0]), best.shape)
    return np.where((nb > 0)[..., None], best / np.sqrt(np.where(nb > 0, nb, 1.0))[..., None], fallback)


def _sym2x2(a, b, c):
    # Eigen-decomposition of [[a, b], [b, c]]: ascending values, unit vector of the larger one.
    mean = 0.5 * (a + c)
    half = 0.5 * (a - c)
    rad = np.hypot(half, b)
    big, small = mean + rad, mean - rad
    # Null vector of the larger-magnitude row of M - big*I; the rows differ in
    # conditioning, so pick the one that keeps the result accurate.
    use_first = half >= 0
    x = np.where(use_first, half + rad, b)
    y = np.where(use_first, b, rad - half)
    n = np.hypot(x, y)
    zero = n == 0
    x = np.where(zero, 1.0, x / np.where(zero, 1.0, n))
    y = np.where(zero, 0.0, y / np.where(zero, 1.0, n))
    return small, big, x, y


def sym_eigh_3x3(M):
    """Eigenvalues (ascending) and eigenvectors of a real symmetric 3x3 matrix.

    Returns ``(vals, vecs)`` where ``vecs[..., :, k]`` is the unit eigenvector
    for ``vals[..., k]``.
    """
    M = _check_symmetric(M)
    scale = np.abs(M).max(axis=(-2, -1))
    scale = np.where(scale > 0, scale, 1.0)
    A = M / scale[..., None, None]
    roots = _cubic_roots(A)

    # The trigonometric formula is accurate for the eigenvalue farthest from
    # the other two; the remaining pair is resolved by deflating onto the
    # orthogonal plane, which stays exact when the pair nearly coincides.
    lo, mid, hi = roots[..., 0], roots[..., 1], roots[..., 2]
    low_isolated = (mid - lo) > (hi - mid)
    iso = np.where(low_isolated, lo, hi)
    v_iso = _vector_for_isolated(A, iso)
    u, v = _orthonormal_complement(v_iso)
    Au = np.einsum("...ab,...b->...a", A, u)
    Av = np.einsum("...ab,...b->...a", A, v)
    small, big, x, y = _sym2x2((u * Au).sum(-1), (u * Av).sum(-1), (v * Av).sum(-1))
    v_big = x[..., None] * u + y[..., None] * v
    v_small = np.cross(v_iso, v_big)

    lows = low_isolated[..., None]
    vals = np.where(
        lows,
        np.stack([iso, small, big], axis=-1),
        np.stack([small, big, iso], axis=-1),
    )
    vecs = np.where(
        lows[..., None],
        np.stack([v_iso, v_small, v_big], axis=-1),
        np.stack([v_small, v_big, v_iso], axis=-1),
    )
    # Rounding can swap nearly-equal neighbours; keep the output ascending.
    order = np.argsort(vals, axis=-1)
    vals = np.take_along_axis(vals, order, axis=-1)
    vecs = np.take_along_axis(vecs, order[..., None, :], axis=-1)
    vals = vals * scale[..., None]

    # Exactly diagonal input: return the sorted diagonal untouched.
    is_diag = ~np.any(M - M * np.eye(3), axis=(-2, -1))
    if np.any(is_diag):
        d = np.diagonal(M, axis1=-2, axis2=-1)
        d_order = np.argsort(d, axis=-1, kind="stable")
        d_vecs = np.eye(3)[d_order].swapaxes(-1, -2)
        vals = np.where(is_diag[..., None], np.take_along_axis(d, d_order, axis=-1), vals)
        vecs = np.where(is_diag[..., None, None], d_vecs, vecs)
    return vals, vecs


def sym_eigs_3x3(M):
    """Ascending eigenvalues of a real symmetric 3x3 matrix (or a stack of them)."""
    return sym_eigh_3x3(M)[0]


def companion_eigs(M):
    """Reference eigenvalues via companion-matrix root finding of the characteristic cubic.

    Independent of :func:`sym_eigs_3x3`; only used as a cross-check.
    """
    e1, e2, e3 = char_poly_coeffs(np.asarray(M, dtype=float))
    return np.sort(np.roots([1.0, -float(e1), float(e2), -float(e3)]).real)
