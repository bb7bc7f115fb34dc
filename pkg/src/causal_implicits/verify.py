"""Forward computation of interventional distributions and constraint checking.

Everything here that touches probabilities is exact rational arithmetic;
decimal (empirical) tables are converted to rationals on load, and the
checking tolerance only applies when some table was declared empirical.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import CausalImplicitsError, GraphError, MissingParameterError
from .graph import CausalGraph
from .kernels import ConstraintSet
from .params import (
    DistributionRequest,
    JointSpaceParam,
    ModelRParam,
    model_columns,
    q_param,
)
from .ring import Budget, Polynomial, contains

EXACT = "exact"
EMPIRICAL = "empirical"

_EMPIRICAL_TOTAL_SLACK = Fraction(1, 10**6)


@dataclass(frozen=True)
class ModelPoint:
    """Exact values for every model parameter of a graph."""

    values: dict

    def validate(self, graph: CausalGraph):
        for column in model_columns(graph):
            total = Fraction(0)
            for param in column:
                try:
                    value = self.values[param]
                except KeyError:
                    raise GraphError(f"model point missing {param.text()}") from None
                if not 0 <= value <= 1:
                    raise GraphError(f"{param.text()} = {value} outside [0, 1]")
                total += value
            if total != 1:
                raise GraphError(f"column at {column[0].text()} sums to {total}, not 1")
        return self

    def to_json(self):
        return {p.text(): str(v) for p, v in sorted(self.values.items(), key=lambda kv: kv[0].text())}


def random_model(graph: CausalGraph, seed: int) -> ModelPoint:
    """Deterministic positive rational CPTs with denominators at most 1000."""
    rng = random.Random(seed)
    values = {}
    for column in model_columns(graph):
        cap = max(1, 1000 // len(column))
        weights = [rng.randint(1, cap) for _ in column]
        total = sum(weights)
        for param, w in zip(column, weights):
            values[param] = Fraction(w, total)
    return ModelPoint(values).validate(graph)


@dataclass(frozen=True)
class DistributionTable:
    """One interventional distribution as explicit (assignment, probability) rows."""

    request: DistributionRequest
    entries: dict  # assignment key (pairs) -> Fraction
    mode: str = EXACT

    def validate(self, graph: CausalGraph | None = None):
        total = Fraction(0)
        for key, value in self.entries.items():
            if value < 0:
                raise CausalImplicitsError(f"negative probability at {dict(key)}")
            total += value
        if self.mode == EXACT:
            if total != 1:
                raise CausalImplicitsError(f"exact table sums to {total}, not 1")
        elif abs(total - 1) > _EMPIRICAL_TOTAL_SLACK:
            raise CausalImplicitsError(f"empirical table sums to {float(total)}")
        if graph is not None:
            t = self.request.as_dict()
            graph.check_assignment(t)
            free = [n for n in graph.observed if n not in t]
            expected = set()
            for w in graph.assignments(free):
                expected.add(graph.assignment_key({**t, **w}))
            present = set(self.entries)
            if present != expected:
                missing = sorted(dict(k) for k in expected - present)
                extra = sorted(dict(k) for k in present - expected)
                raise CausalImplicitsError(
                    f"table support mismatch: missing {missing[:3]}{'...' if len(missing) > 3 else ''}, "
                    f"unexpected {extra[:3]}{'...' if len(extra) > 3 else ''}"
                )
        return self

    def lookup(self, v_key) -> Fraction:
        return self.entries[v_key]

    def to_json(self):
        return {
            "t": self.request.as_dict(),
            "mode": self.mode,
            "entries": [
                {"v": dict(key), "p": str(value)}
                for key, value in sorted(self.entries.items())
            ],
        }

    def to_csv(self, graph: CausalGraph) -> str:
        out = io.StringIO()
        t = self.request.as_dict()
        out.write(f"# intervention: {self.request.label() if t else ''}\n")
        writer = csv.writer(out)
        names = list(graph.observed)
        writer.writerow(names + ["p"])
        for key, value in sorted(self.entries.items()):
            v = dict(key)
            writer.writerow([v[n] for n in names] + [str(value)])
        return out.getvalue()


def table_from_json(data, graph: CausalGraph | None = None) -> DistributionTable:
    t = {k: int(v) for k, v in data.get("t", {}).items()}
    mode = data.get("mode", EXACT)
    entries = {}
    for row in data["entries"]:
        v = {k: int(val) for k, val in row["v"].items()}
        key = graph.assignment_key(v) if graph else tuple(sorted(v.items()))
        entries[key] = _parse_probability(str(row["p"]))
    if graph is not None:
        request = DistributionRequest.of(graph, t)
    else:
        request = DistributionRequest(tuple(sorted(t.items())))
    return DistributionTable(request, entries, mode).validate(graph)


def table_from_csv(text: str, graph: CausalGraph, t: dict | None = None, mode=EXACT) -> DistributionTable:
    lines = text.splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            marker = line[1:].strip()
            if marker.startswith("intervention:") and t is None:
                spec = marker.split(":", 1)[1].strip()
                t = parse_intervention(spec)
        elif line.strip():
            body.append(line)
    if t is None:
        t = {}
    reader = csv.reader(body)
    header = next(reader)
    if header[-1] != "p":
        raise CausalImplicitsError("last CSV column must be 'p'")
    names = header[:-1]
    entries = {}
    for row in reader:
        v = {n: int(x) for n, x in zip(names, row)}
        entries[graph.assignment_key(v)] = _parse_probability(row[-1])
    request = DistributionRequest.of(graph, t)
    return DistributionTable(request, entries, mode).validate(graph)


def parse_intervention(spec: str) -> dict:
    """Parse ``V1=1,V3=2``; the empty string means the observational request."""
    spec = spec.strip()
    if not spec:
        return {}
    out = {}
    for item in spec.split(","):
        name, _, value = item.partition("=")
        if not value:
            raise CausalImplicitsError(f"bad intervention fragment {item!r}")
        out[name.strip()] = int(value)
    return out


def _parse_probability(text: str) -> Fraction:
    text = text.strip()
    try:
        return Fraction(text)  # handles "3/4", "0.25", "1e-3", "1"
    except ValueError:
        raise CausalImplicitsError(f"unparseable probability {text!r}") from None


def exact_distribution(graph: CausalGraph, point: ModelPoint, t: dict) -> DistributionTable:
    """Truncated factorization (mixture over hidden assignments) at exact rationals."""
    point.validate(graph)
    graph.check_assignment(t)
    request = DistributionRequest.of(graph, t)
    free = [n for n in graph.observed if n not in t]
    entries = {}
    for w in graph.assignments(free):
        v = {**t, **w}
        total = Fraction(0)
        for u in graph.assignments(graph.hidden):
            context = {**v, **u}
            prob = Fraction(1)
            for name in free:
                prob *= point.values[q_param(graph, name, v[name], context)]
            for h in graph.hidden:
                prob *= point.values[ModelRParam(h, u[h])]
            total += prob
        entries[graph.assignment_key(v)] = total
    return DistributionTable(request, entries, EXACT).validate(graph)


def evaluate(f: Polynomial, tables) -> Fraction:
    """Substitute table probabilities for the joint-space parameters of ``f``."""
    by_request = {}
    for table in tables:
        by_request[table.request.t] = table
    total = Fraction(0)
    for mono, coeff in f.terms.items():
        prod = Fraction(coeff)
        for i, e in enumerate(mono):
            if not e:
                continue
            param = f.ctx.params[i]
            if not isinstance(param, JointSpaceParam):
                raise MissingParameterError(param.text())
            table = by_request.get(param.t)
            if table is None or param.v not in table.entries:
                raise MissingParameterError(param.text())
            prod *= table.entries[param.v] ** e
        total += prod
    return total


@dataclass(frozen=True)
class CheckRow:
    generator: str
    value: Fraction
    passed: bool


@dataclass(frozen=True)
class CheckReport:
    rows: tuple[CheckRow, ...]
    tolerance: Fraction
    exact: bool
    vacuous: bool

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_json(self):
        return {
            "passed": self.passed,
            "exact": self.exact,
            "vacuous": self.vacuous,
            "tolerance": str(self.tolerance),
            "rows": [
                {"generator": r.generator, "value": str(r.value), "passed": r.passed}
                for r in self.rows
            ],
        }

    def render_text(self) -> str:
        lines = []
        if self.vacuous:
            lines.append("no constraints: vacuous pass")
        for r in self.rows:
            mark = "pass" if r.passed else "FAIL"
            shown = str(r.value) if self.exact else repr(float(r.value))
            lines.append(f"[{mark}] value={shown}  {r.generator}")
        verdict = "ALL PASS" if self.passed else "VIOLATIONS FOUND"
        mode = "exact" if self.exact else f"tolerance {float(self.tolerance)}"
        lines.append(f"{verdict} ({len(self.rows)} generators, {mode})")
        return "\n".join(lines) + "\n"


def check(constraints: ConstraintSet, tables, tolerance=Fraction(1, 10**9)) -> CheckReport:
    """Evaluate every generator; exact tables force a zero tolerance."""
    exact = all(t.mode == EXACT for t in tables)
    tol = Fraction(0) if exact else Fraction(tolerance)
    rows = []
    for gen in constraints.generators:
        value = evaluate(gen, tables)
        rows.append(CheckRow(gen.render(), value, abs(value) <= tol))
    return CheckReport(
        rows=tuple(rows),
        tolerance=tol,
        exact=exact,
        vacuous=not constraints.generators,
    )


def member(candidate: Polynomial, constraints: ConstraintSet, budget: Budget = None) -> bool:
    """Ideal membership of a candidate constraint in a derived set."""
    return contains(constraints.ideal, candidate, budget=budget)
