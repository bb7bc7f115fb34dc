"""Shrinking an implicitization problem with known inter-distribution relations.

Two families of exact relations let many joint-space parameters be written
in terms of others before any Groebner computation happens:

* product relations — when the free set of a treatment splits into two or
  more c-components, the treated distribution factors into the
  distributions that intervene on everything outside each component;
* sum relations — when the free set is ancestral after removing a smaller
  treatment, the treated distribution is a marginal of the smaller one.

``poly_relations`` applies the product rule to exhaustion and then a
single canonical-order pass of the sum rule, returning the residual
request families, the relation ideal, and a replayable audit log.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import PreconditionError
from .graph import CausalGraph
from .kernels import METHOD_REDUCED, ConstraintSet, _finish, kernel_direct, kernel_two_step
from .params import DistributionRequest, joint_param, joint_space_params, sorted_requests
from .ring import Budget, Ideal, Polynomial, RingContext


@dataclass(frozen=True)
class LedgerStep:
    family: DistributionRequest
    rule: str  # "c-component-product" | "ancestral-sum"
    witnesses: tuple[DistributionRequest, ...]

    def to_json(self):
        return {
            "family": self.family.as_dict(),
            "rule": self.rule,
            "witnesses": [w.as_dict() for w in self.witnesses],
        }


@dataclass(frozen=True)
class RelationLedger:
    universe: tuple[DistributionRequest, ...]
    residual: tuple[DistributionRequest, ...]
    relations: Ideal
    steps: tuple[LedgerStep, ...]

    def to_json(self):
        return {
            "universe": [r.as_dict() for r in self.universe],
            "residual": [r.as_dict() for r in self.residual],
            "relations": [g.to_json() for g in self.relations.generators],
            "steps": [s.to_json() for s in self.steps],
        }

    def dump(self, fmt: str = "json") -> str:
        if fmt == "text":
            lines = [f"# residual families: {len(self.residual)}"]
            for r in self.residual:
                lines.append(f"residual {r.label()}")
            for s in self.steps:
                wit = "; ".join(w.label() for w in s.witnesses)
                lines.append(f"step {s.family.label()} [{s.rule}] <- {wit}")
            lines.append(f"# relation generators: {len(self.relations.generators)}")
            lines.extend(g.render() for g in self.relations.generators)
            return "\n".join(lines) + "\n"
        return json.dumps(self.to_json(), indent=2) + "\n"


def _free_components(graph: CausalGraph, request: DistributionRequest):
    free = [n for n in graph.observed if n not in request.t_vars]
    return graph.induced_subgraph(free).c_components()


def product_relation_targets(graph: CausalGraph, request: DistributionRequest):
    """Factor families referenced by the product rule, or None if it does not apply."""
    comps = _free_components(graph, request)
    if len(comps) < 2:
        return None
    t = request.as_dict()
    free = [n for n in graph.observed if n not in t]
    referenced = []
    for comp in comps:
        outside = [n for n in free if n not in comp]
        for w in graph.assignments(outside):
            referenced.append(DistributionRequest.of(graph, {**t, **w}))
    return comps, sorted_requests(graph, referenced)


def product_relation_generators(graph: CausalGraph, request: DistributionRequest, ctx: RingContext):
    """p^t_v minus the product over c-components, one generator per consistent v."""
    comps = _free_components(graph, request)
    if len(comps) < 2:
        return None
    t = request.as_dict()
    free = [n for n in graph.observed if n not in t]
    gens = []
    for w in graph.assignments(free):
        v = {**t, **w}
        acc = Polynomial.variable(ctx, joint_param(graph, t, v))
        prod = Polynomial.constant(ctx, 1)
        for comp in comps:
            t_i = {name: value for name, value in v.items() if name not in comp}
            prod = prod * Polynomial.variable(ctx, joint_param(graph, t_i, v))
        gens.append(acc - prod)
    return gens


def sum_relation_candidate(graph: CausalGraph, request: DistributionRequest, candidates):
    """The chosen smaller treatment for the sum rule, or None.

    Eligible candidates are restrictions of this request's treatment whose
    removal leaves the free set ancestral; the smallest treatment wins,
    ties broken canonically.
    """
    t = request.as_dict()
    t_vars = set(request.t_vars)
    free = [n for n in graph.observed if n not in t_vars]
    eligible = []
    for cand in candidates:
        if cand.t == request.t:
            continue
        c_vars = set(cand.t_vars)
        if not c_vars <= t_vars:
            continue
        if any(t[name] != value for name, value in cand.t):
            continue
        sub = graph.induced_subgraph([n for n in graph.observed if n not in c_vars])
        if sub.is_ancestral(free):
            eligible.append(cand)
    if not eligible:
        return None
    return min(eligible, key=lambda c: (len(c.t), c.sort_key(graph)))


def sum_relation_generators(graph, request, candidate, ctx):
    """p^t_v minus the sum of the candidate's parameters over the dropped treatments."""
    t = request.as_dict()
    c = candidate.as_dict()
    dropped = [n for n in request.t_vars if n not in c]
    free = [n for n in graph.observed if n not in t]
    gens = []
    for w in graph.assignments(free):
        v = {**t, **w}
        acc = Polynomial.variable(ctx, joint_param(graph, t, v))
        for tau in graph.assignments(dropped):
            acc = acc - Polynomial.variable(ctx, joint_param(graph, c, {**v, **tau}))
        gens.append(acc)
    return gens


def poly_relations(graph: CausalGraph, requests) -> RelationLedger:
    """Apply the product rule, then one canonical pass of the sum rule.

    Relations must stay inside the given parameter universe: a family is
    only decomposed when every referenced factor family was requested.
    Referenced families never decompose themselves (their free set is a
    single c-component), so one pass of the product rule suffices.
    """
    universe = list(sorted_requests(graph, requests))
    in_universe = set(universe)
    residual = dict.fromkeys(universe)
    steps: list[LedgerStep] = []

    for req in list(residual):
        target = product_relation_targets(graph, req)
        if target is None:
            continue
        _comps, referenced = target
        if not all(ref in in_universe for ref in referenced):
            continue
        del residual[req]
        steps.append(LedgerStep(req, "c-component-product", referenced))

    # sum rule: candidates are drawn from the families still unexplained
    for req in sorted(residual, key=lambda r: r.sort_key(graph)):
        candidates = [c for c in residual if c != req]
        chosen = sum_relation_candidate(graph, req, candidates)
        if chosen is not None:
            del residual[req]
            steps.append(LedgerStep(req, "ancestral-sum", (chosen,)))

    ctx = RingContext(graph, joint_space_params(graph, universe))
    relations = replay_steps(graph, steps, ctx)
    return RelationLedger(
        universe=tuple(universe),
        residual=tuple(sorted(residual, key=lambda r: r.sort_key(graph))),
        relations=relations,
        steps=tuple(steps),
    )


def replay_steps(graph: CausalGraph, steps, ctx: RingContext) -> Ideal:
    """Rebuild the relation ideal from the audit log, bit-exactly."""
    gens = []
    for step in steps:
        if step.rule == "c-component-product":
            gens.extend(product_relation_generators(graph, step.family, ctx))
        elif step.rule == "ancestral-sum":
            gens.extend(sum_relation_generators(graph, step.family, step.witnesses[0], ctx))
        else:
            raise PreconditionError(f"unknown ledger rule {step.rule!r}")
    return Ideal(ctx, gens)


def reduced_kernel(graph: CausalGraph, requests, budget: Budget = None, workers: int = 1) -> ConstraintSet:
    """Relations from the ledger plus the kernel of the residual families."""
    ledger = poly_relations(graph, requests)
    gens = list(ledger.relations.generators)
    notes = [
        f"relations eliminated {len(ledger.universe) - len(ledger.residual)} of {len(ledger.universe)} families",
    ]
    if ledger.residual:
        if graph.hidden:
            sub = kernel_two_step(graph, ledger.residual, budget, workers)
        else:
            sub = kernel_direct(graph, ledger.residual, budget, workers)
        gens.extend(g.transport(ledger.relations.ctx) for g in sub.generators)
        notes.append(f"residual kernel method: {sub.method}")
    ideal = Ideal(ledger.relations.ctx, gens)
    return _finish(graph, ideal, METHOD_REDUCED, ledger.universe, notes)


@dataclass(frozen=True)
class SubProblem:
    """One independent implicitization problem from the c-component split."""

    component: tuple[str, ...]
    requests: tuple[DistributionRequest, ...]


def decompose_by_c_components(graph: CausalGraph) -> list[SubProblem]:
    """One sub-problem per c-component, when no component has internal edges.

    Each sub-problem covers the family that intervenes on everything
    outside the component; the inducing maps share no model parameters, so
    their kernels may be computed independently.
    """
    comps = graph.c_components()
    for comp in comps:
        inside = set(comp)
        for parent, child in graph.edges:
            if parent in inside and child in inside:
                raise PreconditionError(
                    f"c-component {comp} contains edge {parent}->{child}; "
                    "use reduced_kernel instead"
                )
    out = []
    for comp in comps:
        outside = [n for n in graph.observed if n not in comp]
        reqs = [DistributionRequest.of(graph, w) for w in graph.assignments(outside)]
        out.append(SubProblem(component=comp, requests=tuple(sorted_requests(graph, reqs))))
    return out
