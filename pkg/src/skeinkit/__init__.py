"""Exact skein-theoretic invariants of links with labeled twist regions.

Subpackages:

* ``algebra``: exact Laurent arithmetic in A, closed-form network values
* ``planar``: planar matchings, projectors, slice programs, networks
* ``diagram``: link diagrams, twist regions, states, adequacy
* ``invariants``: bracket and colored bracket evaluation pipelines
* ``stability``: coefficient windows, tail equivalence, rate checks
* ``cli``: the ``skein`` command line tool
"""

from .algebra import (
    A,
    DELTA,
    AdmissibilityError,
    ExactDivisionError,
    GradingError,
    LaurentPoly,
    QPoly,
    RationalFn,
    ZeroPolynomialError,
    coeff_window,
    delta,
    exact_div,
    fusion_coeff,
    min_degree,
    mirror,
    qpoch4,
    quantum_fact,
    quantum_int,
    substitute_quarter,
    tet,
    theta,
    twist_coeff,
)
from .diagram import (
    DiagramError,
    LinkDiagram,
    PDSyntaxError,
    State,
    StateGraph,
    TwistRegion,
    apply_state,
    is_adequate,
    is_alternating,
    is_minus_adequate,
    minus_graph,
    parse_pd,
    plus_graph,
    pretzel,
    reduced_minus_graph,
    relabel_arcs,
    set_twists,
    smooth_region,
)
from .invariants import (
    AdequacyError,
    BracketValue,
    BudgetError,
    FusedTemplate,
    LayoutError,
    bracket_state_sum,
    build_fused_template,
    build_upsilon,
    colored_bracket_fused,
    colored_state_sum,
    predicted_min_degree,
    reduced_jones,
    unreduced_colored_jones,
)
from .planar import (
    Matching,
    SliceError,
    SliceProgram,
    TLMorphism,
    TrivalentVertex,
    boxed,
    cabled_crossing,
    channel_element,
    closure,
    compose,
    crossing_morphism,
    drum,
    evaluate,
    jones_wenzl,
    plat_caps,
    plat_cups,
    set_cache_dir,
    tensor,
    tet_program,
    theta_program,
    turnback,
    vertex_morphism,
)
from .stability import (
    CoeffList,
    ExpressionError,
    FamilyExpr,
    FamilySpec,
    MemberError,
    StepCheck,
    TailReport,
    WindowError,
    check_bracket_rate,
    check_color_stability,
    check_colored_rate,
    family_tail,
    higher_order_windows,
    n_equivalent,
    normalize,
    pretzel_family,
    stable_prefix,
    window_from_bracket,
    window_from_reduced,
)

__all__ = [
    "A",
    "AdequacyError",
    "AdmissibilityError",
    "BracketValue",
    "BudgetError",
    "CoeffList",
    "DELTA",
    "DiagramError",
    "ExactDivisionError",
    "ExpressionError",
    "FamilyExpr",
    "FamilySpec",
    "FusedTemplate",
    "GradingError",
    "LaurentPoly",
    "LayoutError",
    "LinkDiagram",
    "Matching",
    "MemberError",
    "PDSyntaxError",
    "QPoly",
    "RationalFn",
    "SliceError",
    "SliceProgram",
    "State",
    "StateGraph",
    "StepCheck",
    "TLMorphism",
    "TailReport",
    "TrivalentVertex",
    "TwistRegion",
    "WindowError",
    "ZeroPolynomialError",
    "apply_state",
    "boxed",
    "bracket_state_sum",
    "build_fused_template",
    "build_upsilon",
    "cabled_crossing",
    "channel_element",
    "check_bracket_rate",
    "check_color_stability",
    "check_colored_rate",
    "closure",
    "coeff_window",
    "colored_bracket_fused",
    "colored_state_sum",
    "compose",
    "crossing_morphism",
    "delta",
    "drum",
    "evaluate",
    "exact_div",
    "family_tail",
    "fusion_coeff",
    "higher_order_windows",
    "is_adequate",
    "is_alternating",
    "is_minus_adequate",
    "jones_wenzl",
    "min_degree",
    "minus_graph",
    "mirror",
    "n_equivalent",
    "normalize",
    "parse_pd",
    "plat_caps",
    "plat_cups",
    "plus_graph",
    "predicted_min_degree",
    "pretzel",
    "pretzel_family",
    "qpoch4",
    "quantum_fact",
    "quantum_int",
    "reduced_jones",
    "reduced_minus_graph",
    "relabel_arcs",
    "set_cache_dir",
    "set_twists",
    "smooth_region",
    "stable_prefix",
    "substitute_quarter",
    "tensor",
    "tet",
    "tet_program",
    "theta",
    "theta_program",
    "turnback",
    "twist_coeff",
    "unreduced_colored_jones",
    "vertex_morphism",
    "window_from_bracket",
    "window_from_reduced",
]

__version__ = "0.1.0"
