"""Verification and construction of centro-affine hypersurfaces in R^4.

The package builds three-parameter immersions into R^4 whose transversal
field stays tangent to the para-complex structure that swaps the two natural
coordinate planes, derives the induced affine invariants (metric, shape
operator, transversal form, connection, curvature), induces the almost
paracontact structure, and classifies the result (immersion, transversality,
centro-affine, equiaffine, Blaschke, hypersphere, hyperquadric, eigenplane
nullity) with explicit numerical tolerances.
"""

from .affine import (
    AffineData,
    DerivedTensors,
    FundamentalResiduals,
    change_transversal,
    decompose,
    full_structure,
    fundamental_residuals,
)
from .classify import ClassificationReport, GridSpec, Tolerances, classify
from .constructors import (
    CentroAffineSpec,
    GALLERY_NAMES,
    ImmersionOracle,
    SphereSpec,
    build_centroaffine,
    build_sphere,
    gallery,
    hyperbolic_solution,
    lambda_from_E,
    random_centroaffine_spec,
    random_sphere_spec,
    scaled_transversal,
)
from .errors import (
    DegenerateCurveData,
    DegenerateD,
    GeometryError,
    NotJTangent,
    SingularFrame,
    ZeroScale,
    ZNotInD,
)
from .exprlang import CurveSpec, EvaluationError, ParseError, differentiate, evaluate, parse
from .golden import GOLDEN, VerifyResult, verify_example
from .jets import Jet3, Jet3Vec4, lift_curve, lift_vec4
from .paracomplex import det4, eigen_embed, swap_pairs, swap_pairs_jet
from .paracontact import (
    NullVerdict,
    ParacontactData,
    induce,
    induce_with_derivatives,
    null_verdict,
    structure_residuals,
    transform_structure,
)
from .reports import (
    report_csv,
    report_json,
    sample_rows,
    table_csv,
    table_json,
)

__version__ = "0.1.0"

__all__ = [
    "AffineData",
    "CentroAffineSpec",
    "ClassificationReport",
    "CurveSpec",
    "DegenerateCurveData",
    "DegenerateD",
    "DerivedTensors",
    "EvaluationError",
    "FundamentalResiduals",
    "GALLERY_NAMES",
    "GOLDEN",
    "GeometryError",
    "GridSpec",
    "ImmersionOracle",
    "Jet3",
    "Jet3Vec4",
    "NotJTangent",
    "NullVerdict",
    "ParacontactData",
    "ParseError",
    "SingularFrame",
    "SphereSpec",
    "Tolerances",
    "VerifyResult",
    "ZNotInD",
    "ZeroScale",
    "build_centroaffine",
    "build_sphere",
    "change_transversal",
    "classify",
    "decompose",
    "det4",
    "differentiate",
    "eigen_embed",
    "evaluate",
    "full_structure",
    "fundamental_residuals",
    "gallery",
    "hyperbolic_solution",
    "induce",
    "induce_with_derivatives",
    "lambda_from_E",
    "lift_curve",
    "lift_vec4",
    "null_verdict",
    "parse",
    "random_centroaffine_spec",
    "random_sphere_spec",
    "report_csv",
    "report_json",
    "sample_rows",
    "scaled_transversal",
    "structure_residuals",
    "table_csv",
    "table_json",
    "swap_pairs",
    "swap_pairs_jet",
    "transform_structure",
    "verify_example",
]
