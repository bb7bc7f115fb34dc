"""Constraint derivation: the kernel of the parameterization map.

``kernel_direct`` eliminates the model parameters from the mapping ideal
and works for any graph.  The closed forms avoid most of that Groebner
work when their preconditions hold:

* ``kernel_saturation`` (tag ``prop1``) — one distribution on a fully
  observed graph: saturate the local Markov ideal of the subgraph on the
  free variables by the marginal-prefix linear forms, then add sum-to-one.
* ``kernel_product_form`` (tag ``eq19``) — all interventional
  distributions on a fully observed graph: each parameter minus the
  product of its single-free-variable parameters.  Sound but provably
  incomplete as an ideal (see the notes it carries).
* ``kernel_marginal_pair`` (tag ``prop2``) — observational plus one
  treatment whose free set is ancestral: add marginalization generators.
* ``kernel_antichain_pair`` (tag ``lemma1``) — observational plus one
  treatment whose free set is an antichain: add bridge generators built
  from consistent-set marginals.
* ``kernel_two_step`` — hidden-variable graphs: implicitize as if hidden
  variables were observed, then marginalize them out by a second
  elimination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GraphError, PreconditionError
from .graph import CausalGraph
from .mapping import as_fully_observed, mapping_ideal, problem_context
from .params import (
    DistributionRequest,
    JointSpaceParam,
    joint_param,
    joint_space_params,
    sorted_requests,
)
from .ring import (
    GREVLEX,
    Budget,
    Ideal,
    Polynomial,
    RingContext,
    elimination_ideal,
    ideal_sum,
    independence_ideal,
    poly_from_json,
    saturate_by_product,
)

METHOD_DIRECT = "direct"
METHOD_TWO_STEP = "two-step"
METHOD_PROP1 = "prop1"
METHOD_EQ19 = "eq19"
METHOD_PROP2 = "prop2"
METHOD_LEMMA1 = "lemma1"
METHOD_REDUCED = "reduced"


@dataclass(frozen=True)
class ConstraintSet:
    """Polynomial constraints over joint-space parameters only."""

    ideal: Ideal
    method: str
    graph_digest: str
    requests: tuple[DistributionRequest, ...]
    notes: tuple[str, ...] = ()

    @property
    def generators(self):
        return self.ideal.generators

    def render_text(self) -> str:
        lines = [
            f"# method: {self.method}",
            f"# graph: {self.graph_digest}",
            f"# requests: {'; '.join(r.label() for r in self.requests)}",
        ]
        lines.extend(note and f"# note: {note}" for note in self.notes)
        lines.extend(g.render() for g in self.generators)
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "method": self.method,
            "graph_digest": self.graph_digest,
            "requests": [r.as_dict() for r in self.requests],
            "notes": list(self.notes),
            "generators": [g.to_json() for g in self.generators],
        }

    def dump(self, fmt: str = "json") -> str:
        if fmt == "text":
            return self.render_text()
        return json.dumps(self.to_json(), indent=2) + "\n"


def constraint_set_from_json(data, graph: CausalGraph | None = None) -> ConstraintSet:
    requests = tuple(
        DistributionRequest(tuple(sorted((k, int(v)) for k, v in r.items())))
        if graph is None
        else DistributionRequest.of(graph, {k: int(v) for k, v in r.items()})
        for r in data["requests"]
    )
    params = set()
    from .params import parse_param

    for gen in data["generators"]:
        for term in gen:
            for factor in term["factors"]:
                params.add(parse_param(factor["param"], graph))
    ctx = RingContext(graph, params)
    gens = [poly_from_json(gen, ctx) for gen in data["generators"]]
    return ConstraintSet(
        ideal=Ideal(ctx, gens),
        method=data.get("method", "unknown"),
        graph_digest=data.get("graph_digest", ""),
        requests=requests,
        notes=tuple(data.get("notes", ())),
    )


def _sorted_generators(gens):
    """Deterministic generator order: leading monomial, then full term list."""

    def gen_key(g):
        items = g.sorted_terms(GREVLEX)
        return (
            tuple(GREVLEX.key(m) for m, _ in items),
            tuple(str(c) for _, c in items),
        )

    uniq = []
    seen = set()
    for g in sorted(gens, key=gen_key, reverse=True):
        marker = tuple(sorted(g.terms.items()))
        if marker not in seen and not g.is_zero:
            seen.add(marker)
            uniq.append(g)
    return uniq


def _finish(graph, ideal, method, requests, notes=(), keep=None):
    """Restrict to joint-space variables and package as a ConstraintSet."""
    joint = keep if keep is not None else ideal.ctx.joint_params()
    ctx = RingContext(graph, joint)
    gens = []
    for g in ideal.generators:
        moved = g.transport(ctx)  # raises if a model/aux variable survived
        gens.append(moved)
    out = Ideal(ctx, _sorted_generators(gens))
    cached = ideal._gb.get(GREVLEX.name)
    if cached is not None:
        out.cache_basis(GREVLEX, [g.transport(ctx) for g in cached])
    return ConstraintSet(
        ideal=out,
        method=method,
        graph_digest=graph.digest(),
        requests=sorted_requests(graph, requests),
        notes=tuple(notes),
    )


# --- direct elimination ---------------------------------------------------------


def kernel_direct(graph: CausalGraph, requests, budget: Budget = None, workers: int = 1) -> ConstraintSet:
    """Eliminate all model parameters from the mapping ideal."""
    requests = sorted_requests(graph, requests)
    ideal = mapping_ideal(graph, requests, prune=True)
    eliminated = elimination_ideal(ideal, ideal.ctx.model_params(), budget, workers)
    return _finish(graph, eliminated, METHOD_DIRECT, requests)


def kernel_two_step(graph: CausalGraph, requests, budget: Budget = None, workers: int = 1) -> ConstraintSet:
    """Hidden-variable kernel via the all-observed kernel plus marginalization."""
    if not graph.hidden:
        raise PreconditionError("two-step method expects at least one hidden variable")
    requests = sorted_requests(graph, requests)
    extended = as_fully_observed(graph)
    ext_requests = [DistributionRequest(r.t) for r in requests]

    step1 = kernel_direct(extended, ext_requests, budget, workers)

    ext_params = step1.ideal.ctx.params
    orig_params = joint_space_params(graph, requests)
    ctx = RingContext(extended, list(ext_params) + list(orig_params))
    gens = [g.transport(ctx) for g in step1.generators]
    for req in requests:
        t = req.as_dict()
        free = [n for n in graph.observed if n not in t]
        for w in graph.assignments(free):
            v = {**t, **w}
            acc = Polynomial.variable(ctx, joint_param(graph, t, v))
            for u in extended.assignments(graph.hidden):
                vu = {**v, **u}
                acc = acc - Polynomial.variable(ctx, joint_param(extended, t, vu))
            gens.append(acc)
    eliminated = elimination_ideal(Ideal(ctx, gens), list(ext_params), budget, workers)
    return _finish(graph, eliminated, METHOD_TWO_STEP, requests, keep=orig_params)


# --- closed forms ------------------------------------------------------------------


def marginal_prefix_forms(graph: CausalGraph, t: dict, ctx: RingContext) -> list[Polynomial]:
    """The saturating linear forms: sink-first marginal prefixes of the free set.

    For each r from 0 to k-1, one form per assignment of the last k-r free
    variables in sink-first order, summing the joint-space parameters over
    the first r (sink-most) variables.  r = 0 yields the parameters
    themselves.
    """
    free = [n for n in graph.observed if n not in t]
    sub = graph.induced_subgraph(free)
    order = sub.sink_first_order()
    forms = []
    for r in range(len(order)):
        marginalized = list(order[:r])
        kept = list(order[r:])
        for tail in graph.assignments(kept):
            acc = Polynomial.zero(ctx)
            for head in graph.assignments(marginalized):
                v = {**t, **tail, **head}
                acc = acc + Polynomial.variable(ctx, joint_param(graph, t, v))
            forms.append(acc)
    return forms


def kernel_saturation(graph: CausalGraph, t: dict, budget: Budget = None, workers: int = 1) -> ConstraintSet:
    """Single-distribution closed form for fully observed graphs (tag prop1)."""
    if graph.hidden:
        raise PreconditionError("saturation closed form requires a fully observed graph")
    graph.check_assignment(t)
    request = DistributionRequest.of(graph, t)
    ctx = RingContext(graph, joint_space_params(graph, [request]))

    free = [n for n in graph.observed if n not in t]
    sub = graph.induced_subgraph(free)
    local = Ideal(ctx, [])
    for stmt in sub.local_markov():
        local = ideal_sum(local, independence_ideal(stmt, graph, t, ctx))

    saturated = saturate_by_product(local, marginal_prefix_forms(graph, t, ctx), budget, workers)

    total = Polynomial.constant(ctx, -1)
    for param in ctx.joint_params():
        total = total + Polynomial.variable(ctx, param)
    ideal = Ideal(ctx, list(saturated.generators) + [total])
    return _finish(graph, ideal, METHOD_PROP1, [request])


def kernel_product_form(graph: CausalGraph, budget: Budget = None) -> ConstraintSet:
    """All-interventions product form for fully observed graphs (tag eq19).

    Every parameter with two or more free variables equals the product of
    the corresponding single-free-variable parameters.  The generators are
    sound; they are not a full kernel (the simplex relations, and equalities
    between parameters pinning the same CPT entry, are not implied).
    """
    if graph.hidden:
        raise PreconditionError("product form requires a fully observed graph")
    from .params import all_requests

    requests = all_requests(graph)
    ctx = RingContext(graph, joint_space_params(graph, requests))
    gens = []
    for req in requests:
        t = req.as_dict()
        free = [n for n in graph.observed if n not in t]
        if len(free) < 2:
            continue
        for w in graph.assignments(free):
            v = {**t, **w}
            acc = Polynomial.variable(ctx, joint_param(graph, t, v))
            prod = Polynomial.constant(ctx, 1)
            for name in free:
                t_i = {k: val for k, val in v.items() if k != name}
                prod = prod * Polynomial.variable(ctx, joint_param(graph, t_i, v))
            gens.append(acc - prod)
    ideal = Ideal(ctx, gens)
    notes = ("product form is sound but smaller than the full kernel ideal",)
    return _finish(graph, ideal, METHOD_EQ19, requests, notes)


def kernel_marginal_pair(graph: CausalGraph, t: dict, budget: Budget = None, workers: int = 1) -> ConstraintSet:
    """Observational plus one ancestral-free-set treatment (tag prop2)."""
    if graph.hidden:
        raise PreconditionError("marginal-pair closed form requires a fully observed graph")
    graph.check_assignment(t)
    if not t:
        raise PreconditionError("treatment must be nonempty (duplicate of the observational request)")
    free = [n for n in graph.observed if n not in t]
    if not graph.is_ancestral(free):
        raise PreconditionError("free variables must form an ancestral set")
    obs_req = DistributionRequest.of(graph, {})
    t_req = DistributionRequest.of(graph, t)
    ctx = RingContext(graph, joint_space_params(graph, [obs_req, t_req]))

    base = kernel_saturation(graph, {}, budget, workers)
    gens = [g.transport(ctx) for g in base.generators]
    for w in graph.assignments(free):
        acc = Polynomial.variable(ctx, joint_param(graph, t, {**t, **w}))
        for tau in graph.assignments(list(t)):
            acc = acc - Polynomial.variable(ctx, joint_param(graph, {}, {**w, **tau}))
        gens.append(acc)
    return _finish(graph, Ideal(ctx, gens), METHOD_PROP2, [obs_req, t_req])


def kernel_antichain_pair(graph: CausalGraph, t: dict, budget: Budget = None, workers: int = 1) -> ConstraintSet:
    """Observational plus one antichain-free-set treatment (tag lemma1)."""
    if graph.hidden:
        raise PreconditionError("antichain-pair closed form requires a fully observed graph")
    graph.check_assignment(t)
    if not t:
        raise PreconditionError("treatment must be nonempty (duplicate of the observational request)")
    w1, _w2 = graph.antichain_split(list(t))
    free = [n for n in graph.observed if n not in t]

    obs_req = DistributionRequest.of(graph, {})
    t_req = DistributionRequest.of(graph, t)
    ctx = RingContext(graph, joint_space_params(graph, [obs_req, t_req]))

    base_obs = kernel_saturation(graph, {}, budget, workers)
    base_t = kernel_saturation(graph, t, budget, workers)
    gens = [g.transport(ctx) for g in base_obs.generators]
    gens.extend(g.transport(ctx) for g in base_t.generators)

    # marginal of one free variable inside the treated table
    def treated_marginal(name, value):
        acc = Polynomial.zero(ctx)
        rest = [n for n in free if n != name]
        for w in graph.assignments(rest):
            v = {**t, name: value, **w}
            acc = acc + Polynomial.variable(ctx, joint_param(graph, t, v))
        return acc

    for v in graph.assignments(graph.observed):
        vcons = graph.sort_names(graph.consistent_set(v, t))
        f = Polynomial.constant(ctx, 1)
        for name in vcons:
            f = f * treated_marginal(name, v[name])
        sum_small = _observational_sum(graph, ctx, v, list(w1))
        sum_big = _observational_sum(graph, ctx, v, list(w1) + list(vcons))
        gens.append(f * sum_big - sum_small)
    return _finish(graph, Ideal(ctx, gens), METHOD_LEMMA1, [obs_req, t_req])


def _observational_sum(graph, ctx, v, varying):
    acc = Polynomial.zero(ctx)
    for w in graph.assignments(varying):
        acc = acc + Polynomial.variable(ctx, joint_param(graph, {}, {**v, **w}))
    return acc
