"""Finite Menger (2,n)-semigroups of partial n-place functions: tables, checks, representations."""

from .algebra import (
    AlgebraTable,
    MuReachability,
    SelectorSet,
    algebra_from_functions,
    check_axioms,
    check_embedding,
    check_representability,
    eval_word,
    find_selectors,
    mu,
    mu_star,
    reachable_mu_states,
)
from .binrel import BinaryRelation
from .errors import (
    ClosureCapError,
    ConstructionError,
    DimensionError,
    DocumentError,
    MengerError,
    PreconditionError,
    UnionConflictError,
)
from .nfun import (
    FunctionSet,
    PartialFunctionTable,
    complete_function,
    is_included,
    mann_compose,
    projector,
    restrict_to,
    superpose,
)
from .relations import (
    DeterminingPair,
    OrderedAlgebra,
    check_orbit_condition,
    check_image_inclusion,
    decompose_rep,
    eh_wh,
    inclusion_order,
    is_l_ideal,
    order_represent,
    pair_orbit,
    polynomial_orbit,
    relation_properties,
    simplest_rep,
    verify_determining_pair,
)
from .report import Check, Report
from .represent import (
    ExtensionLevels,
    Representation,
    StarContext,
    completion_of_rep,
    embedding_rep,
    rep_general,
    rep_unitary,
    sum_reps,
    union_reps,
    unitary_extension,
    verify_faithful,
    verify_representation,
    zeta_of_rep,
)

__version__ = "0.1.0"
