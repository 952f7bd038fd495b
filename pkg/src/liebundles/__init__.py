"""Numerical Lie group bundles, multiplicative connections, and equivariant
parallel transport in local trivializations."""

__version__ = "0.1.0"

from .bundles import (
    AdjointBundlePoint,
    FiberedAction,
    LieGroupBundle,
    SectionJet,
    Tangent,
    TotalPoint,
    TotalSpace,
    adjoint_class_equal,
    jet_lift_action,
)
from .calculus import (
    AlgebraOneForm,
    BaseCurve,
    ChartDomain,
    Polynomial,
    TwoIndexAlgebraForm,
    finite_diff_jacobian,
    numerical_bracket,
)
from .connections import (
    AlgebraConnection,
    LieGroupBundleConnection,
    algebra_transport,
    transport_group,
    validate_group_connection,
)
from .groups import (
    AlgebraElement,
    GroupDescriptor,
    GroupElement,
    descriptor_from_json,
    descriptor_to_json,
    so3_descriptor,
    translation_descriptor,
)
from .integrators import TransportResult, integrate_on_group
from .principal import (
    GeneralizedPrincipalConnection,
    TensorialAdjointForm,
    build_canonical_connection,
    build_two_chart_connection,
    connection_difference,
    curvature,
    reduced_curvature_residual,
    transport_total,
    validate_principal_connection,
)
from .scenarios import PRESET_NAMES, build_scenario, preset_config
from .suites import run_suite
