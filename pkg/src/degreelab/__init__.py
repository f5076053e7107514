"""Verification lab for graded correspondence models: exact dynamical
degrees, log-concave envelopes, spectral comparisons, and model generators."""

__version__ = "0.1.0"

from .model import (              # noqa: F401
    EXACT,
    FLOAT,
    CorrespondenceClass,
    GradedMap,
    GradedSpace,
    NumericalStructure,
    ScalarField,
    compose,
    correspondence_action,
    degree_profile,
    diagonal_class,
    graph_class,
    identity_numerical,
    make_correspondence,
    make_space,
    numerical_pushdown,
    product_pushforward,
    trace_component,
    transpose,
)
from .spectral import (           # noqa: F401
    JordanReport,
    SpectralReport,
    frobenius_norm,
    growth_fit,
    jordan_profile,
    singular_extremes,
    spectral_radius,
    yamamoto_sequence,
)
from .degrees import (            # noqa: F401
    DegreeEstimate,
    IterateSystem,
    cohomological_degrees,
    ddc_verdict,
    endo_degrees,
    iterate,
    numerical_degrees,
)
from .envelope import (           # noqa: F401
    LogConcaveEnvelope,
    PowerProduct,
    check_conditions,
    envelope_eval,
    prop1_verdict,
    upper_log_envelope,
)
from .twist import (              # noqa: F401
    FrobeniusModel,
    KroneckerResult,
    PolarizedModel,
    claim1_check,
    eq1_scan,
    gr_operator,
    jordan_compare,
    kronecker_approx,
    twist_compose,
)
from .constructions import (      # noqa: F401
    ModelBundle,
    abelian_model,
    blowup_model,
    hilb2_model,
    product_model,
    projective_model,
    random_semisimple_model,
)
