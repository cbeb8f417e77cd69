"""Membership in the physical set N and the classical set C.

A state is classical iff ``Z = W - u u^T`` is positive semidefinite. The
smallest eigenvalue of ``Z`` is the deciding quantity; the sign conditions on
the characteristic-polynomial coefficients are evaluated alongside and must
agree with it. Every verdict is three-valued because each boundary is an
exact equality that floating point can only bracket.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .eigen import sym_eigh_3x3, sym_eigs_3x3
from .states import J, BlochPair, bloch_from_rho, diagonal_frame, reduced_rho, rho_from_bloch, thermal_state
from .validation import DEFAULT_TOL, check_tolerance


class Verdict(str, enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class CaseLabel(enum.IntEnum):
    CASE1 = 1
    CASE2 = 2
    CASE3 = 3


class NonPhysicalStateError(ValueError):
    """The input is not a density matrix, so classicality is undefined."""


class InconsistencyError(RuntimeError):
    """Two independent routes to the same verdict disagree."""


def tri_state(value, tol):
    """Verdict for a quantity that must be non-negative, with a symmetric band."""
    if value > tol:
        return Verdict.INSIDE
    if value < -tol:
        return Verdict.OUTSIDE
    return Verdict.BOUNDARY


def tri_state_array(values, tol):
    values = np.asarray(values)
    out = np.full(values.shape, Verdict.BOUNDARY.value, dtype=object)
    out[values > tol] = Verdict.INSIDE.value
    out[values < -tol] = Verdict.OUTSIDE.value
    return out


def _as_bloch(state):
    if isinstance(state, BlochPair):
        return state
    return bloch_from_rho(state)


def z_matrix(bp):
    """``Z_ab = W_ab - u_a u_b``."""
    u = np.asarray(bp.u)
    return bp.W - u[..., :, None] * u[..., None, :]


def z_invariants(bp):
    """``(tr Z, tr Z^2, det Z)`` written in terms of ``u`` and ``W``."""
    u, W = bp.u, bp.W
    uu = np.einsum("...a,...a->...", u, u)
    uWu = np.einsum("...a,...ab,...b->...", u, W, u)
    trW2 = np.einsum("...ab,...ba->...", W, W)
    tr_z = 1.0 - uu
    tr_z2 = trW2 - 2.0 * uWu + uu**2
    det_z = np.linalg.det(W - u[..., :, None] * u[..., None, :])
    return tr_z, tr_z2, det_z


def physical_invariants(bp):
    """The two sign conditions for positivity of rho.

    Returns ``(a, d)`` where ``a = 1 - |u|^2 + (1 - tr W^2)/2`` (the linear
    coefficient of the characteristic polynomial of rho, times four) and
    ``d = <u|W|u> - |u|^2 + (1 - tr W^2)/2 - det W`` (``det rho`` times eight).
    """
    u, W = bp.u, bp.W
    uu = np.einsum("...a,...a->...", u, u)
    uWu = np.einsum("...a,...ab,...b->...", u, W, u)
    trW2 = np.einsum("...ab,...ba->...", W, W)
    a = 1.0 - uu + 0.5 * (1.0 - trW2)
    d = uWu - uu + 0.5 * (1.0 - trW2) - np.linalg.det(W)
    return a, d


def rho_eigenvalues(state):
    """Ascending eigenvalues of rho, for a single state or a batch."""
    rho = rho_from_bloch(state) if isinstance(state, BlochPair) else np.asarray(state)
    return np.linalg.eigvalsh(rho)


def z_eigenvalues(state):
    """Ascending eigenvalues of ``Z``, via the closed-form 3x3 solver."""
    return sym_eigs_3x3(z_matrix(_as_bloch(state)))


def _descartes_verdict(quantities, tol):
    quantities = np.atleast_1d(quantities)
    if np.all(quantities > tol):
        return Verdict.INSIDE
    if np.any(quantities < -tol):
        return Verdict.OUTSIDE
    return Verdict.BOUNDARY


def _check_agreement(name, eig_verdict, descartes_verdict):
    # Only a clear inside/outside contradiction counts; band verdicts are compatible with anything.
    clash = {eig_verdict, descartes_verdict} == {Verdict.INSIDE, Verdict.OUTSIDE}
    if clash:
        raise InconsistencyError(
            f"{name}: eigenvalue verdict {eig_verdict.value} contradicts "
            f"coefficient-sign verdict {descartes_verdict.value}"
        )


@dataclass(frozen=True)
class MembershipResult:
    verdict: Verdict
    min_eig: float
    descartes: tuple
    descartes_verdict: Verdict


def is_physical(state, tol=DEFAULT_TOL):
    """Is the state a density matrix (rho >= 0)?

    The verdict follows ``lambda_min(rho)``; the coefficient signs ``(a, d)``
    of :func:`physical_invariants` are cross-checked against it.
    """
    tol = check_tolerance(tol)
    bp = _as_bloch(state)
    lam = float(rho_eigenvalues(bp)[0])
    a, d = physical_invariants(bp)
    verdict = tri_state(lam, tol)
    dv = _descartes_verdict([a, d], tol)
    _check_agreement("is_physical", verdict, dv)
    return MembershipResult(verdict, lam, (float(a), float(d)), dv)


def is_classical(state, tol=DEFAULT_TOL):
    """Is the state classical (``Z >= 0``)?

    Raises :class:`NonPhysicalStateError` if the state is not a density
    matrix: classicality is only defined inside N.
    """
    tol = check_tolerance(tol)
    bp = _as_bloch(state)
    phys = is_physical(bp, tol)
    if phys.verdict is Verdict.OUTSIDE:
        raise NonPhysicalStateError(f"state is not physical (lambda_min(rho) = {phys.min_eig:.3g})")
    lam = float(z_eigenvalues(bp)[0])
    tr_z, tr_z2, det_z = z_invariants(bp)
    if tr_z < -tol:
        raise InconsistencyError(f"tr Z = {tr_z:.3g} < 0 for a physical state")
    triple = (float(tr_z), float(0.5 * (tr_z**2 - tr_z2)), float(det_z))
    verdict = tri_state(lam, tol)
    dv = _descartes_verdict(triple, tol)
    _check_agreement("is_classical", verdict, dv)
    return MembershipResult(verdict, lam, triple, dv)


def descartes_nonnegative(M, tol=0.0):
    """Coefficient-sign test for positive semidefiniteness of a symmetric 3x3 matrix.

    ``tr M >= 0``, ``((tr M)^2 - tr M^2) / 2 >= 0`` and ``det M >= 0``,
    each with slack ``tol``. Valid because a symmetric matrix has real roots.
    """
    M = np.asarray(M, dtype=float)
    tr = np.trace(M, axis1=-2, axis2=-1)
    e2 = 0.5 * (tr**2 - np.einsum("...ab,...ba->...", M, M))
    det = np.linalg.det(M)
    return (tr >= -tol) & (e2 >= -tol) & (det >= -tol)


def quantumness_witness(state, t):
    """``Q_t = t^T Z t`` for a unit vector ``t``; negative values certify non-classicality."""
    bp = _as_bloch(state)
    t = np.asarray(t, dtype=float)
    t = t / np.linalg.norm(t)
    return float(t @ z_matrix(bp) @ t)


def quantumness_from_moments(rho, t):
    """``Q_t = 2 <J_t^2> - <J_t>^2 - 1`` evaluated directly on rho."""
    t = np.asarray(t, dtype=float)
    t = t / np.linalg.norm(t)
    Jt = np.einsum("a,aij->ij", t, J)
    mean = np.trace(rho @ Jt).real
    second = np.trace(rho @ Jt @ Jt).real
    return 2.0 * second - mean**2 - 1.0


def min_quantumness_direction(state):
    """Smallest ``Q_t`` over unit ``t`` and a direction achieving it."""
    bp = _as_bloch(state)
    vals, vecs = sym_eigh_3x3(z_matrix(bp))
    t = vecs[:, 0]
    if t[np.argmax(np.abs(t))] < 0:
        t = -t
    return float(vals[0]), t


@dataclass(frozen=True)
class CaseReport:
    case_n: CaseLabel = None
    case_c: CaseLabel = None
    violations: list = field(default_factory=list)


def classify_case(frame, tol=DEFAULT_TOL):
    """Which of the enumerated cases the diagonal-frame parameters fall into.

    ``frame.mu`` is ascending, so the special axes are the largest ``mu``
    (value 1, for N) and the smallest (value 0, for C). Side conditions
    forced in each case are checked and listed in ``violations``.
    """
    tol = check_tolerance(tol)
    mu = np.asarray(frame.mu, dtype=float)
    u = np.asarray(frame.u_frame, dtype=float)
    violations = []

    case_n = None
    if np.any(mu > 1 + tol) or np.any(mu < -1 - tol):
        violations.append("N: some mu outside [-1, 1]")
    else:
        ones = int(np.sum(mu >= 1 - tol))
        if ones == 0:
            case_n = CaseLabel.CASE1
        elif ones == 1:
            case_n = CaseLabel.CASE2
            if abs(mu[0] + mu[1]) > tol:
                violations.append("N case 2: the two other mu must be opposite")
            if abs(u[0]) > tol or abs(u[1]) > tol:
                violations.append("N case 2: u must lie along the mu = 1 axis")
            if u[2] ** 2 > 1 - mu[0] ** 2 + tol:
                violations.append("N case 2: u_z^2 exceeds 1 - mu_x^2")
        elif ones == 2:
            case_n = CaseLabel.CASE3
            if abs(mu[0] + 1) > tol:
                violations.append("N case 3: remaining mu must be -1")
            if np.any(np.abs(u) > tol):
                violations.append("N case 3: u must vanish")
        else:
            violations.append("N: three mu equal to 1 is incompatible with tr W = 1")

    # A negative mu only means the state is not classical: no C case applies.
    case_c = None
    if not np.any(mu < -tol):
        zeros = int(np.sum(mu <= tol))
        if zeros == 0:
            case_c = CaseLabel.CASE1
        elif zeros == 1:
            case_c = CaseLabel.CASE2
            if abs(u[0]) > tol:
                violations.append("C case 2: u must vanish along the mu = 0 axis")
        elif zeros == 2:
            case_c = CaseLabel.CASE3
            if abs(mu[2] - 1) > tol:
                violations.append("C case 3: remaining mu must be 1")
            if abs(u[0]) > tol or abs(u[1]) > tol:
                violations.append("C case 3: u must lie along the mu = 1 axis")
            if abs(u[2]) > 1 + tol:
                violations.append("C case 3: |u| exceeds 1")
        else:
            violations.append("C: all mu vanish, incompatible with tr W = 1")

    return CaseReport(case_n, case_c, violations)


def rho_kappa(frame, kappa):
    """``rho' + (kappa / 2) u.J`` in the diagonal frame."""
    return reduced_rho(frame.mu) + 0.5 * kappa * np.einsum("a,aij->ij", frame.u_frame, J)


def lowest_eigenvalue_curve(frame, kappas):
    """``lambda_min(rho_kappa)`` for each ``kappa`` in ``kappas``."""
    kappas = np.asarray(kappas, dtype=float)
    if np.any(kappas < 0):
        raise ValueError("kappa must be non-negative")
    mats = reduced_rho(frame.mu)[None] + 0.5 * kappas[:, None, None] * np.einsum(
        "a,aij->ij", frame.u_frame, J
    )[None]
    return np.linalg.eigvalsh(mats)[:, 0]


def kappa_boundary(frame, xtol=1e-10):
    """First ``kappa >= 0`` where ``lambda_min(rho_kappa)`` reaches zero.

    Returns ``0.0`` if ``rho'`` is already singular or worse, ``inf`` if
    ``u`` vanishes and the curve never crosses.
    """

    def lam(k):
        return lowest_eigenvalue_curve(frame, [k])[0]

    if lam(0.0) <= 0:
        return 0.0
    if not np.any(frame.u_frame):
        return np.inf
    lo, hi = 0.0, 1.0
    while lam(hi) > 0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            return np.inf
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if lam(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ClassificationReport:
    physical: Verdict
    classical: Verdict
    rho_eigs: np.ndarray
    z_eigs: np.ndarray
    q_min: float
    worst_direction: np.ndarray
    case_n: CaseLabel
    case_c: CaseLabel
    tol: float
    violations: list = field(default_factory=list)

    def to_dict(self):
        def enum_value(x):
            return None if x is None else x.value

        return {
            "physical": self.physical.value,
            "classical": enum_value(self.classical),
            "rhoEigs": [float(x) for x in self.rho_eigs],
            "zEigs": [float(x) for x in self.z_eigs],
            "qMin": float(self.q_min),
            "worstDirection": [float(x) for x in self.worst_direction],
            "caseN": enum_value(self.case_n),
            "caseC": enum_value(self.case_c),
            "tol": self.tol,
        }


def classify(state, tol=DEFAULT_TOL):
    """Full report: both verdicts, spectra, worst direction and case labels.

    For a non-physical state ``classical`` is ``None`` rather than an error.
    """
    tol = check_tolerance(tol)
    bp = _as_bloch(state)
    phys = is_physical(bp, tol)
    classical = None
    if phys.verdict is not Verdict.OUTSIDE:
        classical = is_classical(bp, tol).verdict
    q_min, t = min_quantumness_direction(bp)
    cases = classify_case(diagonal_frame(bp), tol)
    return ClassificationReport(
        physical=phys.verdict,
        classical=classical,
        rho_eigs=rho_eigenvalues(bp),
        z_eigs=z_eigenvalues(bp),
        q_min=q_min,
        worst_direction=t,
        case_n=cases.case_n,
        case_c=cases.case_c,
        tol=tol,
        violations=cases.violations,
    )


def classify_batch(state, tol=DEFAULT_TOL):
    """Vectorized verdicts for a stack of states.

    Returns ``(physical, classical, lambda_min_rho, lambda_min_z)``; verdicts
    are arrays of strings and ``classical`` is ``"nonphysical"`` where the
    state lies outside N.
    """
    tol = check_tolerance(tol)
    bp = _as_bloch(state)
    lam_rho = rho_eigenvalues(bp)[..., 0]
    lam_z = z_eigenvalues(bp)[..., 0]
    physical = tri_state_array(lam_rho, tol)
    classical = tri_state_array(lam_z, tol)
    classical[physical == Verdict.OUTSIDE.value] = "nonphysical"
    return physical, classical, lam_rho, lam_z


def thermal_lambda_min_z(beta):
    """``lambda_min(Z)`` of the Gibbs state of ``Jz^2`` at inverse temperature ``beta``."""
    return float(z_eigenvalues(thermal_state(beta))[0])


def thermal_transition(beta_lo=0.0, beta_hi=2.0, xtol=1e-13):
    """Inverse temperature where the Gibbs state of ``Jz^2`` leaves C, by bisection on ``lambda_min(Z)``."""
    f_lo, f_hi = thermal_lambda_min_z(beta_lo), thermal_lambda_min_z(beta_hi)
    if f_lo * f_hi > 0:
        raise ValueError(f"no sign change of lambda_min(Z) on [{beta_lo}, {beta_hi}]")
    while beta_hi - beta_lo > xtol:
        mid = 0.5 * (beta_lo + beta_hi)
        f_mid = thermal_lambda_min_z(mid)
        if (f_mid > 0) == (f_lo > 0):
            beta_lo, f_lo = mid, f_mid
        else:
            beta_hi = mid
    return 0.5 * (beta_lo + beta_hi)
