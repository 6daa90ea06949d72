"""Capillary floating in neutral equilibrium via constant-angle billiard caustics."""

from .billiard import OrbitSummary, PhasePoint, billiard_jacobian, billiard_step, iterate_on_caustic
from .conjecture import (
    GcdCertificate,
    conditional_classification,
    irrationality_evidence,
    pair_disjointness,
    scan_disjointness,
    small_k_numeric_check,
    special_angle_exclusion,
)
from .curve import (
    CausticReport,
    FourierCurve,
    area,
    boundary_point,
    caustic_residual,
    eval_radius,
    floating_report,
    has_constant_caustic,
    is_constant_width,
    kernel_hat,
    make_omega_n_tau,
    perimeter,
    width,
)
from .polychain import (
    IntPolynomial,
    mobius_root_map,
    pq_closed_eval,
    pq_pair,
    r_poly,
    reduced_s_poly,
    s_poly,
    s_roots_on_circle,
)
from .trigroots import AngleSet, BracketedRoot, build_An, density_gap, sin_eq_residual, solve_Bn

__version__ = "0.1.0"
