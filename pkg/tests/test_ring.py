from fractions import Fraction

import pytest

from causal_implicits import (
    AuxParam,
    BlockOrder,
    Budget,
    BudgetExceededError,
    GREVLEX,
    Ideal,
    LEX,
    Polynomial,
    RingContext,
    buchberger,
    contains,
    elimination_ideal,
    groebner,
    ideal_equal,
    ideal_sum,
    independence_ideal,
    mapping_ideal,
    normal_form,
    parse_graph,
    parse_polynomial,
    saturate,
)

from .conftest import req


def abstract_ring(*names):
    ctx = RingContext(None, [AuxParam(n) for n in names])
    variables = {n: Polynomial.variable(ctx, AuxParam(n)) for n in names}
    return ctx, variables


def test_normal_form_self_is_zero():
    ctx, v = abstract_ring("x", "y")
    f = v["x"] * v["x"] - v["y"]
    assert normal_form(f, [f], LEX).is_zero


def test_normal_form_hand_division():
    ctx, v = abstract_ring("x", "y")
    f = v["x"] * v["x"] - v["y"]
    r = normal_form(f, [v["x"] - v["y"]], LEX)
    assert r == v["y"] * v["y"] - v["y"]


def test_normal_form_of_zero():
    ctx, v = abstract_ring("x", "y")
    assert normal_form(Polynomial.zero(ctx), [v["x"]], LEX).is_zero


def test_groebner_hand_example():
    ctx, v = abstract_ring("x", "y", "z")
    basis = buchberger([v["x"] - v["y"], v["y"] - v["z"]], LEX)
    assert set(p.render(LEX) for p in basis) == {"aux[x] - aux[z]", "aux[y] - aux[z]"}


def test_groebner_unit_ideal():
    ctx, v = abstract_ring("x")
    basis = buchberger([Polynomial.constant(ctx, 1)], GREVLEX)
    assert [p.render() for p in basis] == ["1"]


def test_local_markov_ideal_is_its_own_basis(fork):
    # the independence minors are already a reduced basis under grevlex
    from causal_implicits import DistributionRequest, joint_space_params

    ctx = RingContext(fork, joint_space_params(fork, [req(fork)]))
    ideal = Ideal(ctx, [])
    for stmt in fork.local_markov():
        ideal = ideal_sum(ideal, independence_ideal(stmt, fork, {}, ctx))
    basis = ideal.groebner(GREVLEX)

    def monic(g):
        _, lc = g.lead(GREVLEX)
        return (g * (1 / lc)).render()

    assert {b.render() for b in basis} == {monic(g) for g in ideal.generators}
    assert len(basis) == 2


def test_elimination_trivial():
    ctx, v = abstract_ring("x", "y")
    out = elimination_ideal(Ideal(ctx, [v["x"] - v["y"]]), [AuxParam("x")])
    assert out.generators == ()


def test_elimination_hand_example():
    ctx, v = abstract_ring("x", "y", "z")
    out = elimination_ideal(Ideal(ctx, [v["x"] - v["y"], v["x"] - v["z"]]), [AuxParam("x")])
    assert [g.render() for g in out.generators] == ["aux[y] - aux[z]"]


def test_elimination_of_full_model_is_simplex(chain2):
    ideal = mapping_ideal(chain2, [req(chain2)])
    out = elimination_ideal(ideal, ideal.ctx.model_params())
    texts = [g.render() for g in out.generators]
    assert texts == ["p[|V1=1,V2=1] + p[|V1=1,V2=2] + p[|V1=2,V2=1] + p[|V1=2,V2=2] - 1"]


def test_saturate_textbook():
    ctx, v = abstract_ring("x", "y")
    out = saturate(Ideal(ctx, [v["x"] * v["y"]]), v["x"])
    assert [g.render() for g in out.generators] == ["aux[y]"]


def test_saturate_by_member_gives_unit():
    ctx, v = abstract_ring("x", "y")
    out = saturate(Ideal(ctx, [v["x"]]), v["x"])
    assert [g.render() for g in out.generators] == ["1"]


def test_ideal_sum_and_equal():
    ctx, v = abstract_ring("x", "y")
    a = Ideal(ctx, [v["x"]])
    b = Ideal(ctx, [v["y"]])
    s = ideal_sum(a, b)
    assert len(s.generators) == 2
    assert ideal_equal(a, a)
    assert ideal_equal(a, Ideal(ctx, [2 * v["x"]]))
    assert not ideal_equal(a, b)
    assert ideal_equal(ideal_sum(a, Ideal(ctx, [])), a)


def test_contains():
    ctx, v = abstract_ring("x", "y")
    ideal = Ideal(ctx, [v["x"] * v["y"] - 1, v["x"] * v["x"]])
    for g in ideal.generators:
        assert contains(ideal, g)
    assert not contains(Ideal(ctx, [v["x"]]), v["y"])


def test_independence_ideal_fork_minors(fork):
    stmt = fork.local_markov()[0]
    ideal = independence_ideal(stmt, fork, {})
    expected = [
        "p[|V1=1,V2=1,V3=1]*p[|V1=2,V2=2,V3=1] - p[|V1=1,V2=2,V3=1]*p[|V1=2,V2=1,V3=1]",
        "p[|V1=1,V2=1,V3=2]*p[|V1=2,V2=2,V3=2] - p[|V1=1,V2=2,V3=2]*p[|V1=2,V2=1,V3=2]",
    ]
    assert len(ideal.generators) == 2
    for text in expected:
        want = parse_polynomial(text, ideal.ctx)
        assert any(g == want for g in ideal.generators)


def test_independence_ideal_marginalizes_unmentioned(fork):
    # V1 and V2 unconditionally, V3 summed out: minors of the 2x2 marginal
    from causal_implicits import IndependenceStatement

    stmt = IndependenceStatement("V1", frozenset({"V2"}), frozenset())
    ideal = independence_ideal(stmt, fork, {})
    assert len(ideal.generators) == 1
    gen = ideal.generators[0]
    assert gen.total_degree() == 2
    assert len(gen.terms) == 8  # (sum of 2)(sum of 2) - (sum of 2)(sum of 2)


def test_independence_ideal_minor_count():
    g = parse_graph("obs A 2\nobs B 2\nobs C 3\nedge C A\nedge C B\n")
    from causal_implicits import IndependenceStatement

    stmt = IndependenceStatement("A", frozenset({"B"}), frozenset({"C"}))
    ideal = independence_ideal(stmt, g, {})
    assert len(ideal.generators) == 3  # one minor per value of C


def test_budget_pairs_exceeded():
    g = parse_graph("obs V1 2\nobs V2 2\nobs V3 2\nedge V3 V1\nedge V3 V2\n")
    ideal = mapping_ideal(g, [req(g)])
    with pytest.raises(BudgetExceededError):
        elimination_ideal(ideal, ideal.ctx.model_params(), Budget(max_pairs=2, max_degree=40))


def test_budget_degree_exceeded():
    ctx, v = abstract_ring("x", "y")
    # x^9 - y and x*y force high-degree basis elements under grevlex
    with pytest.raises(BudgetExceededError):
        buchberger([v["x"] ** 9 - v["y"], v["x"] * v["y"] - 1], GREVLEX, Budget(200, 5))


def test_parse_polynomial_round_trip(fork):
    from causal_implicits import joint_space_params

    ctx = RingContext(fork, joint_space_params(fork, [req(fork)]))
    ps = ctx.params
    poly = (
        Polynomial.variable(ctx, ps[0]) * Polynomial.variable(ctx, ps[1]) * Fraction(3, 2)
        - Polynomial.variable(ctx, ps[2]) ** 3
        + Fraction(7)
    )
    assert parse_polynomial(poly.render(), ctx) == poly


def test_block_order_elimination_property():
    ctx, v = abstract_ring("x", "y", "z")
    order = BlockOrder(ctx, [AuxParam("x")])
    # any monomial containing x outranks any x-free monomial
    assert order.key((1, 0, 0)) > order.key((0, 5, 5))
