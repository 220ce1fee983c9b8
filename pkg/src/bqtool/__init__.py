"""bqtool: certified trace-condition decisions on the Farey tree, with the
matching hyperbolic-geometry verifiers.

Layers: primitive-class combinatorics (farey), trace propagation and the
certified BQ semi-decision (markoff, with a compiled kernel fallback pair
in kernel/_bqpure/_bqcore), SL(2,ℂ) geometry in upper half-space
(geometry), desk-scale empirical scans (analysis), and the grid scanner
with report emitters (scan, cli).
"""

from .errors import (
    AxesIntersect,
    BqToolError,
    CapExceeded,
    CertifiedLarge,
    ChainStuck,
    NoAxis,
    NoPalindromeFound,
    NotAdmissible,
    NotCertified,
    NotLoxodromic,
    NotNeighbours,
    NotPrimitive,
    Reducible,
    SharedEndpoint,
)
from .farey import (
    BasicPair,
    Fraction,
    Mod2Type,
    enumerate_primitives,
    farey_sum,
    fraction_of_word,
    is_neighbour,
    mod2_type,
    palindromic_representative,
    rewrite_in_pair,
    standard_word,
)
from .markoff import (
    ArrowReport,
    BqOutcome,
    BqParams,
    Certificate,
    EdgeFrame,
    FrontierRecord,
    GrowthReport,
    MarkoffTriple,
    ValidationReport,
    ValueMap,
    arrow_agreement_scan,
    certified_core,
    decide_bq,
    edge_flip,
    enumerate_omega,
    fibonacci_growth_scan,
    mu,
    trace_of_fraction,
    validate_certificate,
)
from .geometry import (
    ComplexDist,
    HalfLength,
    HexagonData,
    Line,
    Matrix2C,
    NestingReport,
    PointH3,
    act,
    amplitude,
    axis,
    broken_geodesic,
    classify_and_half_length,
    common_perpendicular,
    complex_distance,
    evaluate_word,
    foot_on,
    hyperbolic_distance,
    lift_triple,
    line_matrix,
    nested_halfspace_check,
    quasigeodesic_constants,
    standard_hexagon,
)
from .analysis import (
    AngleReport,
    BipReport,
    ChainReport,
    PsReport,
    angle_decay_scan,
    bip_scan,
    palindromic_chain,
    ps_scan,
)
from .scan import ScanConfig, ScanResult, dot_text, render_ppm, scan_grid

__version__ = "0.1.0"

__all__ = [
    "AngleReport",
    "ArrowReport",
    "AxesIntersect",
    "BasicPair",
    "BipReport",
    "BqOutcome",
    "BqParams",
    "BqToolError",
    "CapExceeded",
    "Certificate",
    "CertifiedLarge",
    "ChainReport",
    "ChainStuck",
    "ComplexDist",
    "EdgeFrame",
    "Fraction",
    "FrontierRecord",
    "GrowthReport",
    "HalfLength",
    "HexagonData",
    "Line",
    "MarkoffTriple",
    "Matrix2C",
    "Mod2Type",
    "NestingReport",
    "NoAxis",
    "NoPalindromeFound",
    "NotAdmissible",
    "NotCertified",
    "NotLoxodromic",
    "NotNeighbours",
    "NotPrimitive",
    "PointH3",
    "PsReport",
    "Reducible",
    "ScanConfig",
    "ScanResult",
    "SharedEndpoint",
    "ValidationReport",
    "ValueMap",
    "act",
    "amplitude",
    "angle_decay_scan",
    "arrow_agreement_scan",
    "axis",
    "bip_scan",
    "broken_geodesic",
    "certified_core",
    "classify_and_half_length",
    "common_perpendicular",
    "complex_distance",
    "decide_bq",
    "dot_text",
    "edge_flip",
    "enumerate_omega",
    "enumerate_primitives",
    "evaluate_word",
    "farey_sum",
    "fibonacci_growth_scan",
    "foot_on",
    "fraction_of_word",
    "hyperbolic_distance",
    "is_neighbour",
    "lift_triple",
    "line_matrix",
    "mod2_type",
    "mu",
    "nested_halfspace_check",
    "palindromic_chain",
    "palindromic_representative",
    "ps_scan",
    "quasigeodesic_constants",
    "render_ppm",
    "rewrite_in_pair",
    "scan_grid",
    "standard_hexagon",
    "standard_word",
    "trace_of_fraction",
    "validate_certificate",
    "__version__",
]
