"""Exact symbolic toolkit for plane polynomial maps over Laurent base rings,
their transition functions, and machine checks of the constructions built
from them."""

__version__ = "0.1.0"

from .errors import AlgebraError  # noqa: F401
from .fields import QQ, FieldElem, PrimeField, QuotientExtension, Rationals  # noqa: F401
from .poly import MultiPoly, RingDescriptor, VarTable, substitute  # noqa: F401
from .exprio import field_from_descriptor, parse, to_expr  # noqa: F401
from .maps import (  # noqa: F401
    Lemma41Block,
    Permute,
    PolyMap,
    Scale,
    Triangular,
    flatten,
    invert,
    lemma41_build,
)
from .fibration import (  # noqa: F401
    PLANE,
    PVAR,
    FibrationSpec,
    TransitionFunction,
    closed_form_m1,
    closed_form_m2,
    formal_transition,
    stable_variable,
    transition_formula,
    transition_function,
)
from .bivariable import (  # noqa: F401
    BivariableCert,
    basic_bivariable,
    cert_from_json,
    cert_to_json,
    certify,
    ex66_bivariable,
    extend_a,
    extend_b,
    lemma44_bivariable,
    p_shift_bivariable,
    with_constant,
)
from .bundles import (  # noqa: F401
    TrivialityVerdict,
    a1_equiv,
    classify,
    hypersurface_embed,
    lemma62_variable,
    prop45_check,
    prop45_search,
    prop63_membership,
)
from .report import CheckResult, VerificationReport  # noqa: F401
from .cli import main  # noqa: F401
