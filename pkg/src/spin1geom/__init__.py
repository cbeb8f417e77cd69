"""Geometry of spin-1 states: physical and classical sets in Bloch-pair coordinates."""

from .boundary import (
    AngleChartC,
    ChartDomainError,
    EllipsoidSpec,
    apply_euler,
    boundary_C_point,
    boundary_C_state,
    boundary_N_point,
    coherent_mixture_line,
    ellipsoid_specs,
    euler_matrix,
    mesh_ellipsoid,
    mu_from_angles_C,
    mu_from_angles_N,
)
from .classicality import (
    CaseLabel,
    ClassificationReport,
    InconsistencyError,
    NonPhysicalStateError,
    Verdict,
    classify,
    classify_batch,
    classify_case,
    is_classical,
    is_physical,
    kappa_boundary,
    lowest_eigenvalue_curve,
    min_quantumness_direction,
    thermal_transition,
    z_matrix,
)
from .eigen import sym_eigh_3x3, sym_eigs_3x3
from .estimators import BlochEncoder, ClassicalityClassifier, PPTClassifier
from .oracles import (
    classical_decomposition,
    classical_volume_fraction,
    embed_symmetric_two_qubit,
    oracle_audit,
    ppt_separable,
    sample_random_state,
    sample_random_states,
)
from .states import (
    BlochPair,
    DiagonalFrame,
    bloch_from_rho,
    coherent_state,
    diagonal_frame,
    rho_from_bloch,
    rotate_state,
    spin1_operators,
    thermal_state,
)
from .validation import StateValidationError

__version__ = "0.1.0"
