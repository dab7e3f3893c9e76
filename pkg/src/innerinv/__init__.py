"""Continuous symmetries of inner functions with finite singularity sets.

The package computes, for a declaratively specified inner function, the
classification of its boundary singularities and arcs, the invariant group
Z^k x| Z_d acting by circle maps, numerically certified realizations of the
generators, and a property-check suite tying everything together.
"""

from .errors import (
    CertificationError,
    DomainError,
    DuplicateSingularityError,
    InnerInvError,
    InvalidArcError,
    NoLimitError,
    NotShiftableError,
    NotSingularError,
    PhaseRangeError,
    RangeError,
    RotationUnavailableError,
    SchemaError,
    SingularPointError,
    TruncationError,
)
from .inner_model import (
    Atom,
    DiskZero,
    InnerFunctionSpec,
    PhaseChart,
    StolzTail,
    TangentialTail,
    TruncationPolicy,
    UnitPoint,
    angular_gap,
    atom_phase,
    atom_phase_derivative,
    blaschke_phase,
    build_chart_auto,
    build_phase_chart,
    canon_angle,
    certifiable_terms,
    eval_factor,
    eval_inner,
    frostman_phase,
    frostman_transform,
    phase_derivative,
    phase_inverse,
    phase_lift,
    poisson_arc_mass,
    poisson_kernel,
    truncation_error_bound,
)
from .classify import (
    CertifiedUnimodular,
    IntervalRecord,
    SeriesResult,
    SingularityRecord,
    SpectrumReport,
    angular_derivative_series,
    classify_intervals,
    classify_singularity,
    one_sided_limit,
    spectrum,
    stolz_contains,
    truncated_solution_count,
)
from .group_algebra import (
    GroupDescriptor,
    GroupElement,
    IntervalLabel,
    IntervalLabelSequence,
    compose,
    compute_group,
    element_order,
    inverse,
    labels_from_report,
    rotation_part,
    valid_rotations,
)
from .circle_maps import (
    CircleMap,
    MapWorkspace,
    SolutionGrid,
    compose_maps,
    enumerate_solutions,
    invert_map,
)
from .checks import (
    CheckReport,
    check_bijection,
    check_garnett_identity,
    check_invariance,
    check_phase_derivative,
    check_relations,
    run_all_checks,
)
from .document import (
    SpecDocument,
    parse_document,
    parse_spec,
    render_document,
)

__version__ = "0.1.0"
