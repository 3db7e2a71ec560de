"""Exact angle certificates for Seifert fibered surgery on Montesinos knots."""

from .classifier import Classification, Verdict, classify, cross_check, enumerate_and_classify, family_match
from .feasibility import (
    PRESETS,
    Certificate,
    FarkasWitness,
    LinearConstraint,
    LinearSystem,
    NotAKnotError,
    Relation,
    build_angle_system,
    fm_eliminate,
    preset_for,
    solve,
    verify_certificate,
    verify_farkas,
)
from .gauss_bonnet import (
    AngledFace,
    FaceType,
    GeneralizedGraph,
    angled_euler,
    curvature_spectrum,
    face_euler,
    graph_euler_check,
    s_min,
    validate_graph,
)
from .tangles import (
    MontesinosKnot,
    RationalTangle,
    component_count,
    is_knot,
    mirror,
    mod_inverse_min_abs,
    normalize,
    parse_knot,
    partial_fraction_small_pbar,
    permute,
    sum_condition,
)

__version__ = "0.1.0"
