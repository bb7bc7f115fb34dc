"""Polynomial-ring variables and the parameter enumeration for a problem.

Three families of ring variables describe an implicitization problem:

* joint-space parameters ``p[t|w]`` — the unknown value of the distribution
  obtained by fixing the treatment assignment ``t``, at the free assignment
  ``w`` over the remaining observed variables;
* model parameters ``q[Vi=v|pa;u]`` (one CPT entry per vertex, parent
  context and hidden-parent context) and ``r[Uj=u]`` (one marginal entry
  per hidden variable value);
* auxiliary variables ``aux[tag]`` introduced for saturation.

The canonical total order ranks Aux before ModelQ before ModelR before
JointSpace, lexicographically within each class, so that the default block
elimination order removes auxiliaries and model parameters first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import GraphError
from .graph import CausalGraph

Pairs = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class DistributionRequest:
    """One interventional distribution, named by its treatment assignment."""

    t: Pairs = ()

    @staticmethod
    def of(graph: CausalGraph, assignment: dict) -> "DistributionRequest":
        graph.check_assignment(assignment)
        if set(assignment) == set(graph.observed):
            raise GraphError("a request must leave at least one variable free")
        return DistributionRequest(graph.assignment_key(assignment))

    def as_dict(self) -> dict:
        return dict(self.t)

    @property
    def t_vars(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.t)

    def sort_key(self, graph: CausalGraph):
        return (
            tuple(graph.index(name) for name, _ in self.t),
            tuple(value for _, value in self.t),
        )

    def label(self) -> str:
        if not self.t:
            return "observational"
        return ",".join(f"{n}={v}" for n, v in self.t)


@dataclass(frozen=True)
class JointSpaceParam:
    """p^t_v: value of the t-interventional distribution at total assignment v."""

    t: Pairs
    v: Pairs

    def free(self) -> Pairs:
        t_vars = {name for name, _ in self.t}
        return tuple((n, val) for n, val in self.v if n not in t_vars)

    @property
    def request(self) -> DistributionRequest:
        return DistributionRequest(self.t)

    def text(self) -> str:
        t_part = ",".join(f"{n}={v}" for n, v in self.t)
        v_part = ",".join(f"{n}={v}" for n, v in self.free())
        return f"p[{t_part}|{v_part}]"


@dataclass(frozen=True)
class ModelQParam:
    """CPT entry q for ``vertex = value`` given parent and hidden-parent context."""

    vertex: str
    value: int
    parents: Pairs = ()
    hidden: Pairs = ()

    def text(self) -> str:
        pa = ",".join(f"{n}={v}" for n, v in self.parents)
        if self.hidden:
            u = ",".join(f"{n}={v}" for n, v in self.hidden)
            return f"q[{self.vertex}={self.value}|{pa};{u}]"
        return f"q[{self.vertex}={self.value}|{pa}]"


@dataclass(frozen=True)
class ModelRParam:
    """Marginal entry r for one hidden variable value."""

    hidden: str
    value: int

    def text(self) -> str:
        return f"r[{self.hidden}={self.value}]"


@dataclass(frozen=True)
class AuxParam:
    """Auxiliary ring variable (saturation helper)."""

    tag: str

    def text(self) -> str:
        return f"aux[{self.tag}]"


ParamId = JointSpaceParam | ModelQParam | ModelRParam | AuxParam

_CLASS_RANK = {AuxParam: 0, ModelQParam: 1, ModelRParam: 2, JointSpaceParam: 3}


def param_sort_key(graph: CausalGraph | None, param: ParamId):
    """Canonical strict total order: Aux > ModelQ > ModelR > JointSpace.

    Smaller key = more significant (eliminated first).  Within a class the
    order is lexicographic over declaration indices when a graph is given,
    else over names.
    """

    def vix(name):
        return graph.index(name) if graph is not None else name

    def pairs_key(pairs):
        return tuple((vix(n), val) for n, val in pairs)

    rank = _CLASS_RANK[type(param)]
    if isinstance(param, AuxParam):
        return (rank, param.tag)
    if isinstance(param, ModelQParam):
        return (rank, vix(param.vertex), pairs_key(param.parents), pairs_key(param.hidden), param.value)
    if isinstance(param, ModelRParam):
        return (rank, vix(param.hidden), param.value)
    return (rank, pairs_key(param.t), pairs_key(param.v))


# --- enumeration ------------------------------------------------------------


def sorted_requests(graph: CausalGraph, requests) -> tuple[DistributionRequest, ...]:
    """Deduplicate and order requests canonically."""
    uniq = {r.t: r for r in requests}
    return tuple(sorted(uniq.values(), key=lambda r: r.sort_key(graph)))


def all_requests(graph: CausalGraph) -> tuple[DistributionRequest, ...]:
    """Every interventional distribution: all (T, t) with T a proper subset."""
    out = []
    observed = graph.observed
    for mask in range(2 ** len(observed) - 1):
        t_vars = [n for i, n in enumerate(observed) if mask >> i & 1]
        for assignment in graph.assignments(t_vars):
            out.append(DistributionRequest.of(graph, assignment))
    return sorted_requests(graph, out)


def joint_space_params(graph: CausalGraph, requests) -> list[JointSpaceParam]:
    """All joint-space parameters for the requests, in canonical order."""
    if not requests:
        raise GraphError("at least one distribution request is required")
    out = []
    for req in sorted_requests(graph, requests):
        t = req.as_dict()
        free_vars = [n for n in graph.observed if n not in t]
        for free in graph.assignments(free_vars):
            v = dict(t)
            v.update(free)
            out.append(JointSpaceParam(req.t, graph.assignment_key(v)))
    return out


def joint_param(graph: CausalGraph, t: dict, v: dict) -> JointSpaceParam:
    """The p-parameter for total assignment ``v`` under treatment ``t``."""
    graph.check_assignment(v, total=True)
    graph.check_assignment(t)
    for name, value in t.items():
        if v[name] != value:
            raise GraphError(f"assignment is inconsistent with treatment at {name}")
    return JointSpaceParam(graph.assignment_key(t), graph.assignment_key(v))


def q_param(graph: CausalGraph, vertex: str, value: int, context: dict) -> ModelQParam:
    """CPT entry of ``vertex`` with parent values drawn from ``context``."""
    obs_pa = tuple((p, context[p]) for p in graph.observed_parents(vertex))
    hid_pa = tuple((u, context[u]) for u in graph.hidden_parents(vertex))
    return ModelQParam(vertex, value, obs_pa, hid_pa)


def model_params(graph: CausalGraph) -> list[ParamId]:
    """The full redundant model parameter set, in canonical order.

    Sum-to-one is imposed by ideal generators rather than by dropping the
    last value of each CPT column.
    """
    out = []
    for vertex in graph.observed:
        card = graph.cardinality(vertex)
        obs_pa = graph.observed_parents(vertex)
        hid_pa = graph.hidden_parents(vertex)
        for pa in graph.assignments(obs_pa):
            for u in graph.assignments(hid_pa):
                ctx = {**pa, **u}
                for value in range(1, card + 1):
                    out.append(q_param(graph, vertex, value, ctx))
    for h in graph.hidden:
        for value in range(1, graph.cardinality(h) + 1):
            out.append(ModelRParam(h, value))
    return out


def model_columns(graph: CausalGraph):
    """Sum-to-one groups: lists of ModelQ per (vertex, context) and ModelR per hidden."""
    columns = []
    for vertex in graph.observed:
        card = graph.cardinality(vertex)
        for pa in graph.assignments(graph.observed_parents(vertex)):
            for u in graph.assignments(graph.hidden_parents(vertex)):
                ctx = {**pa, **u}
                columns.append([q_param(graph, vertex, value, ctx) for value in range(1, card + 1)])
    for h in graph.hidden:
        columns.append([ModelRParam(h, value) for value in range(1, graph.cardinality(h) + 1)])
    return columns


# --- text round-trip ----------------------------------------------------------

_ASSIGN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)=(\d+)$")


def _parse_pairs(text: str) -> Pairs:
    text = text.strip()
    if not text:
        return ()
    pairs = []
    for item in text.split(","):
        m = _ASSIGN_RE.match(item.strip())
        if not m:
            raise GraphError(f"bad assignment fragment {item!r}")
        pairs.append((m.group(1), int(m.group(2))))
    return tuple(pairs)


def parse_param(text: str, graph: CausalGraph | None = None) -> ParamId:
    """Inverse of ``.text()``.  With a graph, pairs are re-sorted canonically."""
    text = text.strip()
    m = re.match(r"^p\[(.*?)\|(.*?)\]$", text)
    if m:
        t = _parse_pairs(m.group(1))
        free = _parse_pairs(m.group(2))
        v = t + free
        if graph is not None:
            t = graph.assignment_key(dict(t))
            v = graph.assignment_key(dict(v))
        else:
            t = tuple(sorted(t))
            v = tuple(sorted(v))
        return JointSpaceParam(t, v)
    m = re.match(r"^q\[([A-Za-z_][A-Za-z0-9_]*)=(\d+)\|(.*?)(?:;(.*?))?\]$", text)
    if m:
        vertex, value = m.group(1), int(m.group(2))
        pa = _parse_pairs(m.group(3))
        hid = _parse_pairs(m.group(4) or "")
        if graph is not None:
            pa = graph.assignment_key(dict(pa))
            hid = graph.assignment_key(dict(hid))
        return ModelQParam(vertex, value, pa, hid)
    m = re.match(r"^r\[([A-Za-z_][A-Za-z0-9_]*)=(\d+)\]$", text)
    if m:
        return ModelRParam(m.group(1), int(m.group(2)))
    m = re.match(r"^aux\[(.*)\]$", text)
    if m:
        return AuxParam(m.group(1))
    raise GraphError(f"unparseable parameter {text!r}")


def param_to_json(param: ParamId):
    if isinstance(param, JointSpaceParam):
        return {"kind": "joint", "t": dict(param.t), "v": dict(param.v)}
    if isinstance(param, ModelQParam):
        return {
            "kind": "q",
            "vertex": param.vertex,
            "value": param.value,
            "parents": dict(param.parents),
            "hidden": dict(param.hidden),
        }
    if isinstance(param, ModelRParam):
        return {"kind": "r", "hidden": param.hidden, "value": param.value}
    return {"kind": "aux", "tag": param.tag}
