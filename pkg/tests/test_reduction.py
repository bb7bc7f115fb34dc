import pytest

from causal_implicits import (
    DistributionRequest,
    PreconditionError,
    Polynomial,
    check,
    decompose_by_c_components,
    exact_distribution,
    ideal_equal,
    joint_param,
    kernel_direct,
    parse_graph,
    poly_relations,
    random_model,
    reduced_kernel,
    replay_steps,
)
from causal_implicits.params import all_requests
from causal_implicits.reduction import (
    product_relation_generators,
    product_relation_targets,
    sum_relation_candidate,
    sum_relation_generators,
)
from causal_implicits.ring import RingContext
from causal_implicits.params import joint_space_params

from .conftest import req


def ledger_ctx(graph, requests):
    return RingContext(graph, joint_space_params(graph, requests))


def test_product_relation_three_components(confounded_chain):
    g = confounded_chain
    request = req(g, V1=1)
    comps, referenced = product_relation_targets(g, request)
    assert comps == (("V2",), ("V3",), ("V4",))
    ref_t_sets = {r.t_vars for r in referenced}
    assert ref_t_sets == {("V1", "V3", "V4"), ("V1", "V2", "V4"), ("V1", "V2", "V3")}

    ctx = ledger_ctx(g, all_requests(g))
    gens = product_relation_generators(g, request, ctx)
    assert len(gens) == 8  # one per assignment of the free variables
    v = {"V1": 1, "V2": 1, "V3": 1, "V4": 1}
    expected = Polynomial.variable(ctx, joint_param(g, {"V1": 1}, v))
    prod = Polynomial.constant(ctx, 1)
    for dropped in (("V2",), ("V3",), ("V4",)):
        t_i = {k: val for k, val in v.items() if k not in dropped}
        prod = prod * Polynomial.variable(ctx, joint_param(g, t_i, v))
    assert any(gen == expected - prod for gen in gens)


def test_product_relation_two_components(confounded_chain):
    comps, _ = product_relation_targets(confounded_chain, req(confounded_chain, V2=1))
    assert comps == (("V1", "V3"), ("V4",))


def test_product_relation_single_component_none(confounded_chain):
    assert product_relation_targets(confounded_chain, req(confounded_chain, V2=1, V4=1)) is None


def test_sum_relation_candidate_and_generators(confounded_chain):
    g = confounded_chain
    universe = list(all_requests(g))
    target = req(g, V2=1, V3=1, V4=1)
    # candidates as in the procedure: families surviving the product step
    survivors = [
        c
        for c in universe
        if c != target and product_relation_targets(g, c) is None
    ]
    chosen = sum_relation_candidate(g, target, survivors)
    assert chosen == req(g, V2=1, V4=1)

    ctx = ledger_ctx(g, universe)
    gens = sum_relation_generators(g, target, chosen, ctx)
    assert len(gens) == 2
    v = {"V1": 1, "V2": 1, "V3": 1, "V4": 1}
    expected = Polynomial.variable(ctx, joint_param(g, target.as_dict(), v))
    for v3 in (1, 2):
        expected = expected - Polynomial.variable(
            ctx, joint_param(g, chosen.as_dict(), {**v, "V3": v3})
        )
    assert any(gen == expected for gen in gens)


def test_sum_relation_marginalization_pattern(fork):
    # fully observed: treated distribution is a marginal of the observational one
    universe = [req(fork), req(fork, V1=1)]
    chosen = sum_relation_candidate(fork, universe[1], [universe[0]])
    assert chosen == universe[0]
    ctx = ledger_ctx(fork, universe)
    gens = sum_relation_generators(fork, universe[1], chosen, ctx)
    v = {"V1": 1, "V2": 1, "V3": 1}
    expected = Polynomial.variable(ctx, joint_param(fork, {"V1": 1}, v))
    for v1 in (1, 2):
        expected = expected - Polynomial.variable(ctx, joint_param(fork, {}, {**v, "V1": v1}))
    assert any(gen == expected for gen in gens)


def test_poly_relations_walkthrough(confounded_chain):
    ledger = poly_relations(confounded_chain, all_requests(confounded_chain))
    assert len(ledger.universe) == 65
    assert sum(len(ledger.relations.ctx.params) for _ in [0]) == 240

    product_families = {s.family.t_vars for s in ledger.steps if s.rule == "c-component-product"}
    survivors_step1 = {r.t_vars for r in ledger.universe} - product_families
    assert survivors_step1 == {
        ("V2", "V4"),
        ("V1", "V3", "V4"),
        ("V1", "V2", "V3"),
        ("V2", "V3", "V4"),
        ("V1", "V2", "V4"),
    }
    assert {r.t_vars for r in ledger.residual} == {
        ("V2", "V4"),
        ("V1", "V3", "V4"),
        ("V1", "V2", "V3"),
    }
    assert len(ledger.residual) == 4 + 8 + 8


def test_poly_relations_no_op(confounded_pair):
    ledger = poly_relations(confounded_pair, [req(confounded_pair)])
    assert ledger.residual == (req(confounded_pair),)
    assert ledger.steps == ()
    assert ledger.relations.generators == ()


def test_poly_relations_idempotent(confounded_chain):
    ledger = poly_relations(confounded_chain, all_requests(confounded_chain))
    again = poly_relations(confounded_chain, ledger.residual)
    assert again.steps == ()
    assert again.residual == ledger.residual


def test_audit_replay_bit_exact(confounded_chain):
    ledger = poly_relations(confounded_chain, all_requests(confounded_chain))
    rebuilt = replay_steps(confounded_chain, ledger.steps, ledger.relations.ctx)
    assert [g.render() for g in rebuilt.generators] == [
        g.render() for g in ledger.relations.generators
    ]


def test_residual_is_fixed_point(confounded_chain):
    ledger = poly_relations(confounded_chain, all_requests(confounded_chain))
    residual_set = set(ledger.residual)
    for fam in ledger.residual:
        assert product_relation_targets(confounded_chain, fam) is None or not all(
            r in residual_set for r in product_relation_targets(confounded_chain, fam)[1]
        )
        assert (
            sum_relation_candidate(confounded_chain, fam, residual_set - {fam}) is None
        )


def test_reduced_kernel_equals_direct_small(chain2, confounded_pair):
    reqs = all_requests(chain2)
    assert ideal_equal(reduced_kernel(chain2, reqs).ideal, kernel_direct(chain2, reqs).ideal)
    reqs_h = [req(confounded_pair), req(confounded_pair, V2=2)]
    assert ideal_equal(
        reduced_kernel(confounded_pair, reqs_h).ideal,
        kernel_direct(confounded_pair, reqs_h).ideal,
    )


def test_reduced_kernel_trivial_case(fork):
    single = [req(fork)]
    assert ideal_equal(reduced_kernel(fork, single).ideal, kernel_direct(fork, single).ideal)


def test_relation_soundness_random_models(confounded_chain):
    ledger = poly_relations(confounded_chain, all_requests(confounded_chain))
    needed = sorted(
        {r for r in ledger.universe}, key=lambda r: r.sort_key(confounded_chain)
    )
    for seed in (0, 1, 2):
        point = random_model(confounded_chain, seed)
        tables = [exact_distribution(confounded_chain, point, r.as_dict()) for r in needed]
        from causal_implicits import evaluate

        for gen in ledger.relations.generators:
            assert evaluate(gen, tables) == 0


def test_decompose_confounded_chain(confounded_chain):
    subs = decompose_by_c_components(confounded_chain)
    assert [s.component for s in subs] == [("V1", "V3"), ("V2",), ("V4",)]
    assert [len(s.requests) for s in subs] == [4, 8, 8]


def test_decompose_rejects_internal_edges(chain2):
    g = parse_graph(
        "obs V1 2\nobs V2 2\nhidden U1\nedge V2 V1\nedge U1 V1\nedge U1 V2\n"
    )
    with pytest.raises(PreconditionError, match="reduced_kernel"):
        decompose_by_c_components(g)


def test_decompose_no_hidden_singletons(fork):
    subs = decompose_by_c_components(fork)
    assert [s.component for s in subs] == [("V1",), ("V2",), ("V3",)]


def test_decomposed_subproblem_kernels_join(confounded_pair):
    # component kernels plus relations reproduce the direct kernel of the family union
    subs = decompose_by_c_components(confounded_pair)
    assert [s.component for s in subs] == [("V1", "V2")]
    sub_kernel = kernel_direct(confounded_pair, subs[0].requests)
    direct = kernel_direct(confounded_pair, subs[0].requests)
    assert ideal_equal(sub_kernel.ideal, direct.ideal)
