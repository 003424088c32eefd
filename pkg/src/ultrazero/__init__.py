"""Exact computation with finite metric spaces of dimension zero at all scales.

Everything is rational arithmetic end to end: validation and ultrametric
certification, scale decompositions with dimension-zero certificates,
isometric embeddings into a universal symbol-sequence space, Lipschitz
retractions, locally finite groups as metric spaces, and island
assemblies with their invariants.
"""

from .archipelago import (
    Archipelago,
    BallAuditReport,
    BallSample,
    FingerprintReport,
    IslandSpec,
    ProfileResult,
    ball_audit,
    build_archipelago,
    fingerprint_compare,
    island_profile,
)
from .errors import UltrazeroError
from .groups import (
    CyclicSumSpec,
    GroupElement,
    GroupEmbedding,
    M0Report,
    ProtasovReport,
    SylowNumber,
    d_filtration,
    group_ball,
    group_isometric_embedding,
    m0_distortion_check,
    m0_encode,
    protasov_equivalent,
    sylow_number,
)
from .lomega import (
    LOmegaEmbedding,
    LOmegaPoint,
    ThreePower,
    embed_3n_valued,
    embed_ultrametric,
    extend_one_point,
    first_difference,
    mu,
)
from .rational import (
    as_fraction,
    ceil_exponent_base3,
    exact_power_of_three,
    parse_rational,
    rational_str,
)
from .metric_core import (
    FiniteMetricSpace,
    Gauge,
    PointedSpace,
    UltraWitness,
    apply_gauge,
    cone,
    is_ultrametric,
    metric_wedge,
    quantize_3adic,
    scale_truncate,
    validate_metric,
)
from .retract import (
    AnnulusOrder,
    RetractionMap,
    annulus_order,
    audit_lipschitz,
    brute_force_min_constant,
    default_delta,
    lipschitz_retraction,
)
from .scale_analysis import (
    BoundsReport,
    BoundViolation,
    Dim0Certificate,
    Partition,
    SubdominantResult,
    chain_minimax_oracle,
    dim0_certificate,
    s_components,
    subdominant_ultrametric,
    verify_scale_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "AnnulusOrder",
    "Archipelago",
    "BallAuditReport",
    "BallSample",
    "BoundsReport",
    "BoundViolation",
    "CyclicSumSpec",
    "Dim0Certificate",
    "FingerprintReport",
    "FiniteMetricSpace",
    "Gauge",
    "GroupElement",
    "GroupEmbedding",
    "IslandSpec",
    "LOmegaEmbedding",
    "LOmegaPoint",
    "M0Report",
    "Partition",
    "PointedSpace",
    "ProfileResult",
    "ProtasovReport",
    "RetractionMap",
    "SubdominantResult",
    "SylowNumber",
    "ThreePower",
    "UltraWitness",
    "UltrazeroError",
    "annulus_order",
    "apply_gauge",
    "as_fraction",
    "audit_lipschitz",
    "ball_audit",
    "brute_force_min_constant",
    "build_archipelago",
    "ceil_exponent_base3",
    "chain_minimax_oracle",
    "cone",
    "d_filtration",
    "default_delta",
    "dim0_certificate",
    "embed_3n_valued",
    "embed_ultrametric",
    "exact_power_of_three",
    "extend_one_point",
    "fingerprint_compare",
    "first_difference",
    "group_ball",
    "group_isometric_embedding",
    "is_ultrametric",
    "island_profile",
    "lipschitz_retraction",
    "m0_distortion_check",
    "m0_encode",
    "metric_wedge",
    "mu",
    "parse_rational",
    "protasov_equivalent",
    "quantize_3adic",
    "rational_str",
    "s_components",
    "scale_truncate",
    "subdominant_ultrametric",
    "sylow_number",
    "validate_metric",
    "verify_scale_bounds",
]
