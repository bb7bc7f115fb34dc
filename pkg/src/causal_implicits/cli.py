"""Batch command-line surface.

Subcommands: ``derive`` (constraints), ``reduce`` (relation ledger),
``simulate`` (exact tables from a seeded random model), ``check`` (tables
against constraints), ``components`` (structural report).

Exit codes: 0 success / all checks pass, 1 constraint violation,
2 input error, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetExceededError, CausalImplicitsError, PreconditionError
from .graph import CausalGraph, parse_graph
from .kernels import (
    METHOD_DIRECT,
    METHOD_EQ19,
    METHOD_LEMMA1,
    METHOD_PROP1,
    METHOD_PROP2,
    METHOD_REDUCED,
    METHOD_TWO_STEP,
    ConstraintSet,
    constraint_set_from_json,
    kernel_antichain_pair,
    kernel_direct,
    kernel_marginal_pair,
    kernel_product_form,
    kernel_saturation,
    kernel_two_step,
)
from .params import DistributionRequest, all_requests, sorted_requests
from .reduction import decompose_by_c_components, poly_relations, reduced_kernel
from .ring import DEFAULT_BUDGET, Budget
from .verify import (
    check as run_check,
    exact_distribution,
    parse_intervention,
    random_model,
    table_from_csv,
    table_from_json,
)

BUDGET_ENV = "CAUSAL_IMPLICITS_BUDGET"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


@dataclass
class RunConfig:
    graph_path: str
    intervene: list[str] = field(default_factory=list)
    all_interventions: bool = False
    method: str = "auto"
    max_pairs: int | None = None
    max_degree: int | None = None
    seed: int = 0
    tol: str = "1e-9"
    out: str | None = None
    fmt: str = "text"
    workers: int = 1
    constraints: str | None = None
    tables: list[str] = field(default_factory=list)

    def budget(self) -> Budget:
        max_pairs = DEFAULT_BUDGET.max_pairs
        max_degree = DEFAULT_BUDGET.max_degree
        env = os.environ.get(BUDGET_ENV)
        if env:
            for item in env.split(","):
                key, _, value = item.partition("=")
                key = key.strip()
                if key == "max_pairs":
                    max_pairs = int(value)
                elif key == "max_degree":
                    max_degree = int(value)
                elif key:
                    raise CausalImplicitsError(f"{BUDGET_ENV}: unknown key {key!r}")
        if self.max_pairs is not None:
            max_pairs = self.max_pairs
        if self.max_degree is not None:
            max_degree = self.max_degree
        return Budget(max_pairs=max_pairs, max_degree=max_degree)

    def load_graph(self) -> CausalGraph:
        return parse_graph(Path(self.graph_path).read_text())

    def requests(self, graph: CausalGraph):
        if self.all_interventions:
            return list(all_requests(graph))
        if not self.intervene:
            raise CausalImplicitsError(
                "no distributions requested: pass --intervene SPEC "
                "(empty string for the observational distribution) or --all-interventions"
            )
        return [DistributionRequest.of(graph, parse_intervention(s)) for s in self.intervene]


def _emit(config: RunConfig, text: str):
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)


def _derive_auto(graph, requests, budget, workers) -> ConstraintSet:
    """Cheapest applicable method: relations first, then closed forms, then elimination."""
    notes = []
    ledger = poly_relations(graph, requests)
    if len(ledger.residual) < len(ledger.universe):
        out = reduced_kernel(graph, requests, budget, workers)
        return _with_notes(out, ["auto: relations apply, using reduce"] + list(out.notes))
    notes.append("auto: no relations apply")
    reqs = sorted_requests(graph, requests)
    if not graph.hidden:
        if len(reqs) == 1:
            out = kernel_saturation(graph, reqs[0].as_dict(), budget, workers)
            return _with_notes(out, notes + ["auto: single request, using prop1"])
        if len(reqs) == 2 and not reqs[0].t:
            t = reqs[1].as_dict()
            free = [n for n in graph.observed if n not in t]
            if graph.is_ancestral(free):
                out = kernel_marginal_pair(graph, t, budget, workers)
                return _with_notes(out, notes + ["auto: ancestral free set, using prop2"])
            try:
                out = kernel_antichain_pair(graph, t, budget, workers)
                return _with_notes(out, notes + ["auto: antichain free set, using lemma1"])
            except PreconditionError:
                notes.append("auto: no closed form applies")
    if graph.hidden:
        out = kernel_two_step(graph, requests, budget, workers)
        return _with_notes(out, notes + ["auto: hidden variables, using two-step"])
    out = kernel_direct(graph, requests, budget, workers)
    return _with_notes(out, notes + ["auto: falling back to direct elimination"])


def _with_notes(cs: ConstraintSet, notes) -> ConstraintSet:
    return ConstraintSet(
        ideal=cs.ideal,
        method=cs.method,
        graph_digest=cs.graph_digest,
        requests=cs.requests,
        notes=tuple(notes),
    )


def cmd_derive(config: RunConfig) -> int:
    graph = config.load_graph()
    requests = config.requests(graph)
    budget = config.budget()
    method = config.method
    if method == "auto":
        cs = _derive_auto(graph, requests, budget, config.workers)
    elif method == METHOD_DIRECT:
        cs = kernel_direct(graph, requests, budget, config.workers)
    elif method == METHOD_TWO_STEP:
        cs = kernel_two_step(graph, requests, budget, config.workers)
    elif method == METHOD_PROP1:
        (req,) = sorted_requests(graph, requests)
        cs = kernel_saturation(graph, req.as_dict(), budget, config.workers)
    elif method == METHOD_EQ19:
        cs = kernel_product_form(graph, budget)
    elif method in (METHOD_PROP2, METHOD_LEMMA1):
        reqs = sorted_requests(graph, requests)
        if len(reqs) != 2 or reqs[0].t:
            raise CausalImplicitsError(
                f"method {method} needs exactly the observational request plus one treatment"
            )
        t = reqs[1].as_dict()
        fn = kernel_marginal_pair if method == METHOD_PROP2 else kernel_antichain_pair
        cs = fn(graph, t, budget, config.workers)
    elif method == "reduce":
        cs = reduced_kernel(graph, requests, budget, config.workers)
    else:
        raise CausalImplicitsError(f"unknown method {method!r}")
    _emit(config, cs.dump(config.fmt))
    return EXIT_OK


def cmd_reduce(config: RunConfig) -> int:
    graph = config.load_graph()
    requests = config.requests(graph)
    ledger = poly_relations(graph, requests)
    _emit(config, ledger.dump(config.fmt))
    return EXIT_OK


def cmd_simulate(config: RunConfig) -> int:
    graph = config.load_graph()
    requests = config.requests(graph)
    point = random_model(graph, config.seed)
    tables = [exact_distribution(graph, point, r.as_dict()) for r in sorted_requests(graph, requests)]
    if config.out:
        outdir = Path(config.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "model_point.json").write_text(json.dumps(point.to_json(), indent=2) + "\n")
        for table in tables:
            slug = table.request.label().replace(",", "_") if table.request.t else "obs"
            if config.fmt == "csv":
                (outdir / f"table_{slug}.csv").write_text(table.to_csv(graph))
            else:
                (outdir / f"table_{slug}.json").write_text(
                    json.dumps(table.to_json(), indent=2) + "\n"
                )
    else:
        payload = [t.to_json() for t in tables]
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_check(config: RunConfig) -> int:
    graph = config.load_graph() if config.graph_path else None
    if not config.constraints:
        raise CausalImplicitsError("check requires --constraints FILE")
    if not config.tables:
        raise CausalImplicitsError("check requires at least one table file")
    constraints = constraint_set_from_json(
        json.loads(Path(config.constraints).read_text()), graph
    )
    tables = []
    for path in config.tables:
        text = Path(path).read_text()
        if path.endswith(".csv"):
            if graph is None:
                raise CausalImplicitsError("CSV tables require --graph")
            tables.append(table_from_csv(text, graph))
        else:
            tables.append(table_from_json(json.loads(text), graph))
    report = run_check(constraints, tables, Fraction(config.tol))
    if config.fmt == "json":
        _emit(config, json.dumps(report.to_json(), indent=2) + "\n")
    else:
        _emit(config, report.render_text())
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_components(config: RunConfig) -> int:
    graph = config.load_graph()
    comps = graph.c_components()
    try:
        subs = decompose_by_c_components(graph)
        eligible = True
        sub_lines = [
            {"component": list(s.component), "request_families": len(s.requests)} for s in subs
        ]
    except PreconditionError as exc:
        eligible = False
        sub_lines = str(exc)
    requests = []
    if config.intervene or config.all_interventions:
        for req in config.requests(graph):
            t = req.as_dict()
            free = [n for n in graph.observed if n not in t]
            requests.append(
                {
                    "intervention": req.label(),
                    "free_ancestral": graph.is_ancestral(free),
                    "free_c_components": [
                        list(c) for c in graph.induced_subgraph(free).c_components()
                    ],
                }
            )
    payload = {
        "c_components": [list(c) for c in comps],
        "component_split_eligible": eligible,
        "subproblems": sub_lines,
        "requests": requests,
    }
    if config.fmt == "json":
        _emit(config, json.dumps(payload, indent=2) + "\n")
    else:
        lines = [f"c-components: {'; '.join(','.join(c) for c in comps)}"]
        lines.append(f"component split eligible: {'yes' if eligible else 'no'}")
        if eligible:
            for s in payload["subproblems"]:
                lines.append(
                    f"  subproblem {','.join(s['component'])}: {s['request_families']} request families"
                )
        else:
            lines.append(f"  {sub_lines}")
        for r in requests:
            lines.append(
                f"request {r['intervention']}: ancestral={r['free_ancestral']} "
                f"free c-components={'; '.join(','.join(c) for c in r['free_c_components'])}"
            )
        _emit(config, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-implicits",
        description="Polynomial equality constraints on interventional distributions.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph_required=True):
        p.add_argument("--graph", required=graph_required, help="graph file (obs/hidden/edge lines)")
        p.add_argument(
            "--intervene",
            action="append",
            default=[],
            metavar="SPEC",
            help="treatment like 'V1=1,V3=2'; empty string = observational; repeatable",
        )
        p.add_argument("--all-interventions", action="store_true", help="every proper-subset treatment")
        p.add_argument("--max-pairs", type=int, default=None, help="S-pair budget")
        p.add_argument("--max-degree", type=int, default=None, help="total-degree budget")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", default="1e-9", help="empirical-mode tolerance")
        p.add_argument("--out", default=None, help="output path (stdout if omitted)")
        p.add_argument("--format", dest="fmt", choices=["text", "json", "csv"], default="text")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("derive", help="derive constraints for the requested distributions")
    common(p)
    p.add_argument(
        "--method",
        choices=["auto", METHOD_DIRECT, METHOD_TWO_STEP, METHOD_PROP1, METHOD_EQ19, METHOD_PROP2, METHOD_LEMMA1, "reduce"],
        default="auto",
    )

    p = sub.add_parser("reduce", help="list product/sum relations and the residual families")
    common(p)

    p = sub.add_parser("simulate", help="exact tables from a seeded random model")
    common(p)

    p = sub.add_parser("check", help="evaluate constraints against distribution tables")
    common(p, graph_required=False)
    p.add_argument("--constraints", required=True, help="constraint JSON from derive")
    p.add_argument("tables", nargs="*", help="table files (JSON or CSV)")

    p = sub.add_parser("components", help="c-components, ancestral checks, split eligibility")
    common(p)
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        graph_path=getattr(args, "graph", None),
        intervene=list(args.intervene),
        all_interventions=args.all_interventions,
        method=getattr(args, "method", "auto"),
        max_pairs=args.max_pairs,
        max_degree=args.max_degree,
        seed=args.seed,
        tol=args.tol,
        out=args.out,
        fmt=args.fmt,
        workers=args.workers,
        constraints=getattr(args, "constraints", None),
        tables=list(getattr(args, "tables", [])),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    commands = {
        "derive": cmd_derive,
        "reduce": cmd_reduce,
        "simulate": cmd_simulate,
        "check": cmd_check,
        "components": cmd_components,
    }
    try:
        return commands[args.command](config)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CausalImplicitsError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
