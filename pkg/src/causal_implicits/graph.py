"""Causal graphs over discrete variables and the graph-side queries.

A graph holds observed variables (with cardinalities) and hidden variables.
Hidden variables are root causes only: they never have parents, so every
bidirected connection between observed vertices is witnessed by one hidden
variable with two or more observed children.

Assignments are plain ``{name: value}`` dicts with values in
``1..cardinality``.  All enumeration and tie-breaking derives from the
declaration order of the variables, which makes every operation in this
module bit-reproducible.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass

from .errors import GraphError, GraphParseError, PreconditionError

OBSERVED = "observed"
HIDDEN = "hidden"


@dataclass(frozen=True)
class Variable:
    name: str
    cardinality: int
    kind: str = OBSERVED

    def __post_init__(self):
        if self.cardinality < 2:
            raise GraphError(f"variable {self.name}: cardinality must be >= 2")
        if self.kind not in (OBSERVED, HIDDEN):
            raise GraphError(f"variable {self.name}: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class IndependenceStatement:
    """``a`` independent of the set ``b`` given the set ``c``."""

    a: str
    b: frozenset[str]
    c: frozenset[str]

    def __post_init__(self):
        if self.a in self.b or self.a in self.c or self.b & self.c:
            raise GraphError("independence statement variables must be disjoint")
        if not self.b:
            raise GraphError("vacuous independence statement")


class CausalGraph:
    """Immutable DAG over observed and hidden discrete variables."""

    def __init__(self, variables, edges):
        self.variables: tuple[Variable, ...] = tuple(variables)
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise GraphError("duplicate variable names")
        self._by_name = {v.name: v for v in self.variables}
        self._index = {v.name: i for i, v in enumerate(self.variables)}

        edge_list = []
        seen = set()
        for parent, child in edges:
            for end in (parent, child):
                if end not in self._by_name:
                    raise GraphError(f"edge endpoint {end!r} is not a declared variable")
            if self._by_name[child].kind == HIDDEN:
                raise GraphError(f"hidden variable {child} may not have parents")
            if parent == child:
                raise GraphError(f"self loop on {parent}")
            if (parent, child) not in seen:
                seen.add((parent, child))
                edge_list.append((parent, child))
        # canonical edge order: by (child index, parent index)
        edge_list.sort(key=lambda e: (self._index[e[1]], self._index[e[0]]))
        self.edges: tuple[tuple[str, str], ...] = tuple(edge_list)

        self._parents = {v.name: [] for v in self.variables}
        self._children = {v.name: [] for v in self.variables}
        for parent, child in self.edges:
            self._parents[child].append(parent)
            self._children[parent].append(child)
        for name in names:
            self._parents[name].sort(key=self._index.__getitem__)
            self._children[name].sort(key=self._index.__getitem__)

        self._topo = self._topological_order()  # raises on cycles

    # --- basic accessors -------------------------------------------------

    def variable(self, name) -> Variable:
        try:
            return self._by_name[name]
        except KeyError:
            raise GraphError(f"unknown variable {name!r}") from None

    def index(self, name) -> int:
        return self._index[name]

    def cardinality(self, name) -> int:
        return self.variable(name).cardinality

    @property
    def observed(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.kind == OBSERVED)

    @property
    def hidden(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.kind == HIDDEN)

    def parents(self, name) -> tuple[str, ...]:
        self.variable(name)
        return tuple(self._parents[name])

    def observed_parents(self, name) -> tuple[str, ...]:
        return tuple(p for p in self._parents[name] if self._by_name[p].kind == OBSERVED)

    def hidden_parents(self, name) -> tuple[str, ...]:
        return tuple(p for p in self._parents[name] if self._by_name[p].kind == HIDDEN)

    def children(self, name) -> tuple[str, ...]:
        self.variable(name)
        return tuple(self._children[name])

    def sort_names(self, names):
        """Names sorted by declaration order."""
        return tuple(sorted(names, key=self._index.__getitem__))

    def __eq__(self, other):
        return (
            isinstance(other, CausalGraph)
            and self.variables == other.variables
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.variables, self.edges))

    def __repr__(self):
        return f"CausalGraph({len(self.observed)} observed, {len(self.hidden)} hidden, {len(self.edges)} edges)"

    # --- order and reachability ------------------------------------------

    def _topological_order(self):
        indeg = {v.name: len(self._parents[v.name]) for v in self.variables}
        ready = [v.name for v in self.variables if indeg[v.name] == 0]
        order = []
        while ready:
            ready.sort(key=self._index.__getitem__)
            node = ready.pop(0)
            order.append(node)
            for child in self._children[node]:
                indeg[child] -= 1
                if indeg[child] == 0:
                    ready.append(child)
        if len(order) != len(self.variables):
            stuck = [n for n, d in indeg.items() if d > 0]
            raise GraphError(f"cycle detected among {stuck}")
        return tuple(order)

    def topological_order(self) -> tuple[str, ...]:
        """Source-to-sink order; parents precede children, ties by declaration."""
        return self._topo

    def sink_first_order(self, names=None) -> tuple[str, ...]:
        """Sink-to-source order over ``names`` (default: observed variables).

        Among currently available sinks the earliest-declared is taken first;
        this is the enumeration order used for marginal-prefix linear forms.
        """
        if names is None:
            names = self.observed
        names = set(names)
        remaining = dict.fromkeys(n for n in self._topo if n in names)
        out = []
        while remaining:
            for name in sorted(remaining, key=self._index.__getitem__):
                if not any(c in remaining for c in self._children[name]):
                    out.append(name)
                    del remaining[name]
                    break
        return tuple(out)

    def ancestors(self, names, within=None) -> frozenset[str]:
        """Strict ancestors of ``names`` via directed paths inside ``within``.

        ``within`` defaults to the observed variables; path vertices
        (including the sources returned) are restricted to it.
        """
        allowed = set(self.observed if within is None else within)
        frontier = [n for n in names]
        seen = set()
        while frontier:
            node = frontier.pop()
            for parent in self._parents[node]:
                if parent in allowed and parent not in seen:
                    seen.add(parent)
                    frontier.append(parent)
        return frozenset(seen - set(names))

    def descendants(self, name) -> frozenset[str]:
        frontier = [name]
        seen = set()
        while frontier:
            node = frontier.pop()
            for child in self._children[node]:
                if child not in seen:
                    seen.add(child)
                    frontier.append(child)
        return frozenset(seen)

    # --- subgraphs and c-components --------------------------------------

    def induced_subgraph(self, keep) -> "CausalGraph":
        """Subgraph on observed ``keep`` plus hidden variables with a child in keep."""
        keep = set(keep)
        for name in keep:
            if self.variable(name).kind != OBSERVED:
                raise GraphError(f"induced_subgraph keeps observed variables only, got {name}")
        retained = set(keep)
        for h in self.hidden:
            if any(c in keep for c in self._children[h]):
                retained.add(h)
        variables = [v for v in self.variables if v.name in retained]
        edges = [(p, c) for p, c in self.edges if p in retained and c in retained]
        return CausalGraph(variables, edges)

    def c_components(self) -> tuple[tuple[str, ...], ...]:
        """Partition of the observed variables by hidden-common-cause connectivity."""
        parent = {n: n for n in self.observed}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

        for h in self.hidden:
            kids = [c for c in self._children[h] if self._by_name[c].kind == OBSERVED]
            for a, b in zip(kids, kids[1:]):
                union(a, b)
        blocks = {}
        for n in self.observed:
            blocks.setdefault(find(n), []).append(n)
        out = [self.sort_names(members) for members in blocks.values()]
        out.sort(key=lambda block: self._index[block[0]])
        return tuple(out)

    def is_ancestral(self, names) -> bool:
        """True iff ``names`` contains all of its own observed ancestors."""
        names = set(names)
        for name in names:
            if self.variable(name).kind != OBSERVED:
                raise GraphError(f"{name} is not observed")
        return not (self.ancestors(names) - names)

    # --- assignments -------------------------------------------------------

    def check_assignment(self, assignment, total=False, over=None):
        """Validate an assignment over observed variables (``over`` overrides)."""
        domain = tuple(over) if over is not None else self.observed
        for name, value in assignment.items():
            if name not in domain:
                raise GraphError(f"assignment names {name}, not in scope")
            card = self.cardinality(name)
            if not 1 <= value <= card:
                raise GraphError(f"{name}={value} out of range 1..{card}")
        if total and set(assignment) != set(domain):
            missing = [n for n in domain if n not in assignment]
            raise GraphError(f"assignment missing {missing}")

    def assignments(self, names) -> list[dict]:
        """All assignments over ``names`` in canonical order (last name fastest)."""
        names = self.sort_names(names)
        ranges = [range(1, self.cardinality(n) + 1) for n in names]
        return [dict(zip(names, values)) for values in itertools.product(*ranges)]

    def assignment_key(self, assignment) -> tuple:
        """Canonical hashable form: ((name, value), ...) in declaration order."""
        return tuple(sorted(assignment.items(), key=lambda kv: self._index[kv[0]]))

    def consistent_set(self, v, t) -> frozenset[str]:
        """Non-intervened variables whose own parent values in ``v`` agree with ``t``."""
        self.check_assignment(v, total=True)
        self.check_assignment(t)
        out = set()
        for name in self.observed:
            if name in t:
                continue
            if all(v[p] == t[p] for p in self.observed_parents(name) if p in t):
                out.add(name)
        return frozenset(out)

    def cons(self, v, t) -> dict:
        """``v`` with the intervened coordinates overridden by ``t``."""
        self.check_assignment(v, total=True)
        self.check_assignment(t)
        merged = dict(v)
        merged.update(t)
        return merged

    # --- independence structure -------------------------------------------

    def local_markov(self) -> list[IndependenceStatement]:
        """Per-vertex statements: vertex independent of its nondescendants given parents.

        Only defined for fully observed graphs; statements with an empty
        independent set are dropped.
        """
        if self.hidden:
            raise PreconditionError("local Markov statements require a fully observed graph")
        out = []
        all_names = set(self.observed)
        for name in self.observed:
            nd = all_names - self.descendants(name) - {name}
            pa = set(self.observed_parents(name))
            b = nd - pa
            if b:
                out.append(IndependenceStatement(name, frozenset(b), frozenset(pa)))
        return out

    def antichain_split(self, t_vars) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Split T into (W1, W2) so that W2, V\\T, W1 reads source to sink.

        Requires the free set V\\T to be an antichain (no ancestor relation
        between any two of its members).  W2 collects the T-variables that
        are ancestors of the free set; everything else goes to W1.
        """
        t_vars = set(t_vars)
        for name in t_vars:
            if self.variable(name).kind != OBSERVED:
                raise PreconditionError(f"{name} is not observed")
        free = [n for n in self.observed if n not in t_vars]
        for a, b in itertools.combinations(free, 2):
            if a in self.ancestors([b]) or b in self.ancestors([a]):
                raise PreconditionError(
                    f"free variables must be mutually non-ancestral; {a} and {b} are related"
                )
        anc_free = self.ancestors(free)
        w2 = self.sort_names(n for n in t_vars if n in anc_free)
        w1 = self.sort_names(n for n in t_vars if n not in anc_free)
        return w1, w2

    # --- text format ---------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for v in self.variables:
            if v.kind == OBSERVED:
                lines.append(f"obs {v.name} {v.cardinality}")
            else:
                lines.append(f"hidden {v.name} {v.cardinality}")
        for parent, child in self.edges:
            lines.append(f"edge {parent} {child}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def parse_graph(text) -> CausalGraph:
    """Parse the line-based graph format.

    ``obs NAME CARD``, ``hidden NAME [CARD]`` (cardinality defaults to 2),
    ``edge PARENT CHILD``; ``#`` starts a comment.  Declaration order is the
    canonical variable order.
    """
    variables = []
    edges = []
    names = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "obs":
                if len(parts) != 3:
                    raise GraphParseError("expected: obs NAME CARD", line_no)
                name, card = parts[1], _parse_card(parts[2], line_no)
                _check_new_name(name, names, line_no)
                variables.append(Variable(name, card, OBSERVED))
            elif kind == "hidden":
                if len(parts) not in (2, 3):
                    raise GraphParseError("expected: hidden NAME [CARD]", line_no)
                name = parts[1]
                card = _parse_card(parts[2], line_no) if len(parts) == 3 else 2
                _check_new_name(name, names, line_no)
                variables.append(Variable(name, card, HIDDEN))
            elif kind == "edge":
                if len(parts) != 3:
                    raise GraphParseError("expected: edge PARENT CHILD", line_no)
                edges.append((parts[1], parts[2]))
            else:
                raise GraphParseError(f"unknown directive {kind!r}", line_no)
        except GraphError as exc:
            if isinstance(exc, GraphParseError):
                raise
            raise GraphParseError(str(exc), line_no) from None
    try:
        return CausalGraph(variables, edges)
    except GraphError as exc:
        raise GraphParseError(str(exc)) from None


def _parse_card(token, line_no):
    try:
        card = int(token)
    except ValueError:
        raise GraphParseError(f"cardinality {token!r} is not an integer", line_no) from None
    if card < 2:
        raise GraphParseError("cardinality must be >= 2", line_no)
    return card


def _check_new_name(name, names, line_no):
    if name in names:
        raise GraphParseError(f"duplicate variable name {name}", line_no)
    names.add(name)
