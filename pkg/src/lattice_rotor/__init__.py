"""Exact arithmetic for discretised planar rotations on the integer lattice."""

from .core_map import (
    DEFAULT_STEP_CAP, FieldAgreementReport, OrbitRecord, RotationParameter,
    apply_F, apply_F4, apply_F4_inverse, apply_F_inverse, as_parameter,
    fourth_iterate_field_v, auxiliary_field_w, in_fix_G, in_fix_H,
    measure_field_agreement, orbit_period, recurrence_time, reversor_G,
    reversor_H,
)
from .hamiltonian import (
    AsymptoticPoint, BoxIndex, CriticalNumber, PolygonClass, TracedPolygon,
    alt_hamiltonian, alt_vector_field, asymptotic_form, class_of, count_E,
    critical_numbers_up_to, epsilon_b, epsilon_bounds, eval_P,
    eval_P_inverse, eval_hamiltonian, is_critical, next_critical, on_delta,
    period_T, period_T_float, period_T_prime, representations_r, rho_bar,
    rho_tilde, trace_polygon, traversal_period, twist_K, vector_field_w,
    vertex_list,
)
from .return_map import (
    DensityReport, EquivarianceReport, EscapeError, GuardViolation,
    IrregularOrbit, ReturnDomainPoint, ReturnOrbit, XeDomain,
    check_equivariance, class_of_point, density_delta, in_Lambda, in_Sigma,
    in_X, is_regular, phi_direct, phi_point, regular_domain_Xe,
    return_map_Phi, strip_map_Psi, symmetric_fixed_direct,
    symmetric_fixed_point_test,
)
from .statistics import (
    CoordinateFrame, CylinderPoint, DistributionResult, InvariantSet,
    OrbitSummary, build_invariant_set, choose_anchor, gh_ratio, omega_step,
    orbit_period_fast, period_distribution, symmetric_census, to_cylinder,
    universal_R,
)

__version__ = "0.1.0"
