"""Explicit parametrizations of the boundaries of N and C.

In the frame where ``W = diag(mu)``, the boundary of N at fixed ``mu`` is the
ellipsoid with semi-axes ``sqrt(mu_a + mu_b mu_c)`` and the boundary of C is
the ellipsoid with semi-axes ``sqrt(mu_a)``. Both are centered at ``u = 0``.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .states import BlochPair, coherent_ket

AXIS_CLAMP = 1e-12
_SLACK = 1e-12


class ChartDomainError(ValueError):
    """Chart parameters outside the region where the parametrization is valid."""


class Family(str, enum.Enum):
    N = "N"
    C = "C"


def _check_mu_chart(theta, phi, name):
    if not (0.0 < phi <= np.pi / 4 + _SLACK):
        raise ChartDomainError(f"{name}: azimuth {phi!r} outside (0, pi/4]")
    upper = np.arctan(1.0 / np.cos(phi))
    if not (0.0 < theta <= upper + _SLACK):
        raise ChartDomainError(f"{name}: polar angle {theta!r} outside (0, {upper:.17g}]")


def _sphere_weights(theta, phi):
    s2 = np.sin(theta) ** 2
    return np.array([s2 * np.sin(phi) ** 2, s2 * np.cos(phi) ** 2, np.cos(theta) ** 2])


def mu_from_angles_N(theta_p, phi_p, restrict=True):
    """``mu`` on the N-chart: ``mu_a = 1 - 2 lambda'_a`` with ``lambda'`` on the unit simplex.

    With ``restrict=True`` the angles must lie in the single-cover domain,
    which yields ``mu_x >= mu_y >= mu_z``.
    """
    if restrict:
        _check_mu_chart(theta_p, phi_p, "N chart")
    return 1.0 - 2.0 * _sphere_weights(theta_p, phi_p)


def mu_from_angles_C(theta1, phi1, restrict=True):
    """``mu`` on the C-chart: a point of the unit simplex, ascending in the single-cover domain."""
    if restrict:
        _check_mu_chart(theta1, phi1, "C chart")
    return _sphere_weights(theta1, phi1)


def _check_mu(mu, lo):
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (3,):
        raise ChartDomainError(f"mu must have 3 entries, got shape {mu.shape}")
    if abs(mu.sum() - 1.0) > 1e-9:
        raise ChartDomainError(f"mu must sum to 1, got {mu.sum():.17g}")
    if np.any(mu < lo - 1e-9) or np.any(mu > 1.0 + 1e-9):
        raise ChartDomainError(f"mu entries must lie in [{lo}, 1], got {mu}")
    return mu


def n_semi_axes(mu):
    """``sqrt(mu_a + mu_b mu_c)``; semi-axes below ``AXIS_CLAMP`` become 0.

    With ``sum(mu) = 1`` the radicand equals ``(1 - mu_b)(1 - mu_c)``, which is
    evaluated instead: near ``mu = (1, 1, -1)`` the direct sum cancels
    catastrophically while the product keeps full relative precision.
    """
    mu = _check_mu(mu, -1.0)
    gap = np.clip(1.0 - mu, 0.0, None)
    rad = np.array([gap[1] * gap[2], gap[0] * gap[2], gap[0] * gap[1]])
    return np.sqrt(np.where(rad < AXIS_CLAMP**2, 0.0, rad))


def c_semi_axes(mu):
    """``sqrt(mu_a)``; requires every ``mu_a`` in ``[0, 1]``."""
    mu = _check_mu(mu, 0.0)
    return np.sqrt(np.where(mu < AXIS_CLAMP**2, 0.0, mu))


def _ellipsoid_direction(theta, phi):
    return np.array([np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), np.sin(theta)])


def boundary_N_point(mu, theta, phi):
    """Point ``u`` on the boundary of N for diagonal ``W = diag(mu)``."""
    return n_semi_axes(mu) * _ellipsoid_direction(theta, phi)


@dataclass(frozen=True)
class AngleChartC:
    """Angles of the C-boundary chart: simplex point, ellipsoid point, Euler rotation."""

    theta1: float
    phi1: float
    theta2: float
    phi2: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0


def boundary_C_point(chart, restrict=True):
    """``(mu, u)`` in the diagonal frame for a point on the boundary of C."""
    mu = mu_from_angles_C(chart.theta1, chart.phi1, restrict)
    s1, c1 = np.sin(chart.theta1), np.cos(chart.theta1)
    u = np.array(
        [
            s1 * np.sin(chart.phi1) * np.cos(chart.theta2) * np.cos(chart.phi2),
            s1 * np.cos(chart.phi1) * np.cos(chart.theta2) * np.sin(chart.phi2),
            c1 * np.sin(chart.theta2),
        ]
    )
    return mu, u


def euler_matrix(alpha, beta, gamma):
    """Rotation ``Rz(alpha) Ry(beta) Rz(gamma)``."""

    def rz(a):
        c, s = np.cos(a), np.sin(a)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    c, s = np.cos(beta), np.sin(beta)
    ry = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    return rz(alpha) @ ry @ rz(gamma)


def apply_euler(alpha, beta, gamma, mu, u):
    """Rotate a diagonal-frame pair: ``W = O diag(mu) O^T``, ``u -> O u``."""
    O = euler_matrix(alpha, beta, gamma)
    return BlochPair(O @ np.asarray(u, dtype=float), O @ np.diag(mu) @ O.T)


def boundary_C_state(chart, restrict=True):
    """Full Bloch pair for a C-boundary chart point, Euler rotation included."""
    mu, u = boundary_C_point(chart, restrict)
    return apply_euler(chart.alpha, chart.beta, chart.gamma, mu, u)


@dataclass(frozen=True)
class EllipsoidSpec:
    semi_axes: np.ndarray
    frame: np.ndarray
    family: Family
    mu: np.ndarray


def ellipsoid_N(mu, frame=None):
    frame = np.eye(3) if frame is None else np.asarray(frame, dtype=float)
    return EllipsoidSpec(n_semi_axes(mu), frame, Family.N, np.asarray(mu, dtype=float))


def ellipsoid_C(mu, frame=None):
    frame = np.eye(3) if frame is None else np.asarray(frame, dtype=float)
    return EllipsoidSpec(c_semi_axes(mu), frame, Family.C, np.asarray(mu, dtype=float))


def ellipsoid_specs(mu, frame=None):
    """Boundary ellipsoids of N and of C at fixed ``mu``, plus whether C's nests inside N's."""
    spec_n = ellipsoid_N(mu, frame)
    spec_c = ellipsoid_C(mu, frame)
    nested = bool(np.all(spec_c.semi_axes <= spec_n.semi_axes + 1e-15))
    return spec_n, spec_c, nested


def mesh_ellipsoid(spec, n_theta, n_phi, rotate=False):
    """Latitude/longitude sampling of an ellipsoid surface.

    Latitude runs over ``[-pi/2, pi/2]`` (``n_theta`` values, poles included)
    and longitude over ``[0, 2 pi)``. Coincident points (the poles, and any
    points merged by a zero semi-axis) are emitted once, keeping the first
    occurrence in row-major order. Points are in the diagonal frame unless
    ``rotate`` is set.
    """
    if n_theta < 2 or n_phi < 2:
        raise ValueError("mesh resolution must be at least 2x2")
    lat = np.linspace(-np.pi / 2, np.pi / 2, n_theta)
    lon = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    cl = np.cos(lat)
    cl[[0, -1]] = 0.0
    sl = np.sin(lat)
    pts = np.stack(
        [
            np.outer(cl, np.cos(lon)),
            np.outer(cl, np.sin(lon)),
            np.outer(sl, np.ones_like(lon)),
        ],
        axis=-1,
    ).reshape(-1, 3)
    pts = pts * spec.semi_axes
    pts[pts == 0.0] = 0.0  # drop negative zeros so duplicates compare equal
    _, first = np.unique(np.round(pts, 12), axis=0, return_index=True)
    pts = pts[np.sort(first)]
    if rotate:
        pts = pts @ spec.frame.T
    return pts


def mesh_states(spec, points):
    """Bloch pairs for mesh points given in the diagonal frame."""
    points = np.asarray(points, dtype=float)
    W = np.broadcast_to(np.diag(spec.mu), points.shape[:-1] + (3, 3))
    return BlochPair(points, W)


def coherent_mixture_line(v):
    """Mixture of the coherent states along +x and -x with ``<J_x> = v``."""
    v = float(v)
    if not -1.0 <= v <= 1.0:
        raise ValueError(f"v must lie in [-1, 1], got {v}")
    plus = coherent_ket(np.pi / 2, 0.0)
    minus = coherent_ket(np.pi / 2, np.pi)
    return 0.5 * (1 - v) * np.outer(minus, minus.conj()) + 0.5 * (1 + v) * np.outer(plus, plus.conj())
