"""The polynomial mapping from model parameters to interventional distributions.

For a fully observed graph each joint-space parameter maps to the product
of CPT entries of the non-intervened vertices (truncated factorization);
with hidden variables it maps to the mixture of such products over all
hidden assignments.  The mapping ideal collects one difference generator
per joint-space parameter plus the sum-to-one generators for every CPT
column and every hidden marginal.
"""

from __future__ import annotations

from .errors import GraphError
from .graph import HIDDEN, OBSERVED, CausalGraph, Variable
from .params import (
    JointSpaceParam,
    ModelRParam,
    joint_space_params,
    model_columns,
    q_param,
    sorted_requests,
)
from .ring import Ideal, Polynomial, RingContext


def as_fully_observed(graph: CausalGraph) -> CausalGraph:
    """The same DAG with every hidden variable reclassified as observed."""
    variables = [
        Variable(v.name, v.cardinality, OBSERVED) if v.kind == HIDDEN else v
        for v in graph.variables
    ]
    return CausalGraph(variables, graph.edges)


def image_polynomial(graph: CausalGraph, param: JointSpaceParam, ctx: RingContext) -> Polynomial:
    """Image of ``p^t_v`` under the parameterization, as a model-parameter polynomial."""
    t_vars = {name for name, _ in param.t}
    v = dict(param.v)
    free = [n for n in graph.observed if n not in t_vars]
    total = Polynomial.zero(ctx)
    for u in graph.assignments(graph.hidden):
        context = {**v, **u}
        term = Polynomial.constant(ctx, 1)
        for name in free:
            term = term * Polynomial.variable(ctx, q_param(graph, name, v[name], context))
        for h in graph.hidden:
            term = term * Polynomial.variable(ctx, ModelRParam(h, u[h]))
        total = total + term
    return total


def sum_to_one_generators(graph: CausalGraph, ctx: RingContext, columns=None) -> list[Polynomial]:
    """One ``sum(column) - 1`` generator per CPT column / hidden marginal."""
    out = []
    for column in columns if columns is not None else model_columns(graph):
        acc = Polynomial.constant(ctx, -1)
        for param in column:
            acc = acc + Polynomial.variable(ctx, param)
        out.append(acc)
    return out


def used_model_columns(graph: CausalGraph, requests) -> list[list]:
    """The CPT columns that can appear in some requested image polynomial.

    A column (vertex, parent context, hidden context) is used when the
    vertex is free in some request and the observed parent context agrees
    with that request's treatment on the intervened parents.  Columns that
    never appear generate sum-to-one relations in otherwise-unused
    variables; dropping them does not change the elimination ideal.
    """
    used = []
    seen = set()
    for column in model_columns(graph):
        head = column[0]
        if isinstance(head, ModelRParam):
            if graph.hidden:
                used.append(column)
            continue
        pa = dict(head.parents)
        for req in requests:
            t = req.as_dict()
            if head.vertex in t:
                continue
            if all(t[name] == value for name, value in pa.items() if name in t):
                key = (head.vertex, head.parents, head.hidden)
                if key not in seen:
                    seen.add(key)
                    used.append(column)
                break
    return used


def problem_context(graph: CausalGraph, requests, prune: bool = False) -> RingContext:
    """Ring context holding the joint-space and (optionally pruned) model parameters."""
    requests = sorted_requests(graph, requests)
    columns = used_model_columns(graph, requests) if prune else model_columns(graph)
    params = [p for column in columns for p in column]
    params.extend(joint_space_params(graph, requests))
    return RingContext(graph, params)


def mapping_ideal(graph: CausalGraph, requests, ctx: RingContext | None = None, prune: bool = False) -> Ideal:
    """Difference generators for every joint-space parameter plus sum-to-one."""
    requests = sorted_requests(graph, requests)
    if not requests:
        raise GraphError("at least one distribution request is required")
    if ctx is None:
        ctx = problem_context(graph, requests, prune=prune)
    gens = []
    for param in joint_space_params(graph, requests):
        gens.append(Polynomial.variable(ctx, param) - image_polynomial(graph, param, ctx))
    columns = used_model_columns(graph, requests) if prune else model_columns(graph)
    gens.extend(sum_to_one_generators(graph, ctx, columns))
    return Ideal(ctx, gens)
