"""Exact polynomial constraints on interventional distributions of causal BNs.

Build a :class:`CausalGraph`, pick a set of interventional distribution
requests, and derive the polynomial equality constraints the graph imposes
on them — by direct elimination, by closed forms, or after shrinking the
problem with product/sum relations.  Derived constraints can be checked
against exact or empirical probability tables.
"""

from .errors import (
    BudgetExceededError,
    CausalImplicitsError,
    GraphError,
    GraphParseError,
    MissingParameterError,
    PreconditionError,
)
from .extras import bundled_candidate_constraint
from .graph import CausalGraph, IndependenceStatement, Variable, parse_graph
from .kernels import (
    ConstraintSet,
    constraint_set_from_json,
    kernel_antichain_pair,
    kernel_direct,
    kernel_marginal_pair,
    kernel_product_form,
    kernel_saturation,
    kernel_two_step,
)
from .mapping import as_fully_observed, image_polynomial, mapping_ideal, problem_context
from .params import (
    AuxParam,
    DistributionRequest,
    JointSpaceParam,
    ModelQParam,
    ModelRParam,
    all_requests,
    joint_param,
    joint_space_params,
    model_params,
    parse_param,
)
from .reduction import (
    RelationLedger,
    SubProblem,
    decompose_by_c_components,
    poly_relations,
    reduced_kernel,
    replay_steps,
)
from .ring import (
    DEFAULT_BUDGET,
    GREVLEX,
    LEX,
    BlockOrder,
    Budget,
    GrevLex,
    Ideal,
    Lex,
    Polynomial,
    RingContext,
    buchberger,
    contains,
    elimination_ideal,
    groebner,
    ideal_equal,
    ideal_sum,
    independence_ideal,
    normal_form,
    parse_polynomial,
    s_polynomial,
    saturate,
    saturate_by_product,
)
from .verify import (
    CheckReport,
    DistributionTable,
    ModelPoint,
    check,
    evaluate,
    exact_distribution,
    member,
    parse_intervention,
    random_model,
    table_from_csv,
    table_from_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
