"""Exact metric graphs, low-distortion embeddings, and certified l1-basis extraction."""

from .backend import active_backend
from .calculators import cube_exponent, james_halving, min_k
from .errors import (
    InputError,
    InternalInvariantError,
    L1CertError,
    SeparationFailure,
    VerificationError,
)
from .extraction import (
    ExtractionResult,
    SeparationCertificate,
    Thresholds,
    VectorFamily,
    certified_lower_constant,
    certify_separation,
    extract_thm4a,
    extract_thm4b,
    lower_constant_grid,
    norming_coordinate,
    partition_classes,
    thresholds,
    validate_certificate,
)
from .metric import (
    DistortionReport,
    FiniteMetricSpace,
    Graph,
    MetricViolation,
    PointMap,
    SignedCoordinate,
    SupVector,
    distortion,
    identity_map,
    james_gap,
    kuratowski_embed,
    make_graph,
    shortest_path_metric,
    space_from_table,
    verify_metric,
)
from .shattering import (
    SetFamily,
    binom_bound_check,
    eta,
    sauer_bound,
    sauer_shelah_extract,
    shatters,
)
from .spaces import (
    EventuallyConstSeq,
    MVertex,
    RVertex,
    SparseVector,
    build_cube,
    build_m_ell1,
    build_m_r,
    g_embed,
    phi_embed,
    phi_pointmap,
    rho_metric,
)
from .stability import (
    DoubleFamily,
    IteratedLimits,
    iterated_limits,
    preset,
    stability_gap_ratio,
)

__version__ = "0.1.0"
