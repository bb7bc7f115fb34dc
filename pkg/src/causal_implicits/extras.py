"""Bundled data: a candidate constraint awaiting a user-supplied graph."""

from __future__ import annotations

import re
from importlib import resources

from .graph import CausalGraph
from .params import parse_param
from .ring import Polynomial, RingContext, parse_polynomial

_TERM_SPLIT = re.compile(r"[+\-]")


def bundled_candidate_constraint(graph: CausalGraph | None = None) -> Polynomial:
    """The shipped three-variable two-treatment candidate constraint.

    Its ring context is rebuilt from the parameters the text mentions; pass
    a graph to align the variable order with that graph's declarations.
    """
    text = (
        resources.files("causal_implicits.data")
        .joinpath("two_treatment_candidate.txt")
        .read_text()
    )
    body = " ".join(
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )
    params = set()
    for chunk in _TERM_SPLIT.split(body):
        for factor in chunk.split("*"):
            factor = factor.strip().split("^")[0]
            if factor.startswith(("p[", "q[", "r[", "aux[")):
                params.add(parse_param(factor, graph))
    ctx = RingContext(graph, params)
    return parse_polynomial(body, ctx)
