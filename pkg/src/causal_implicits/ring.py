"""Exact sparse multivariate polynomials, monomial orders and the ideal toolkit.

Coefficients are arbitrary-precision rationals throughout; no floating
point enters any ideal computation.  Monomials are dense exponent tuples
aligned with a :class:`RingContext`, which fixes the variable order:
auxiliary variables first, then model parameters, then joint-space
parameters, each class sorted canonically.  That layout makes the default
block order eliminate auxiliaries and model parameters.

The Groebner engine is Buchberger's algorithm with Gebauer-Moeller pair
pruning and the normal selection strategy.  Internally it works over
content-normalized integer polynomials (cross-multiplication instead of
rational division) and converts the final basis to the unique monic
reduced form.  Pair batches sharing the minimal lcm are reduced against a
basis snapshot and committed in a fixed order, so the result is identical
for any worker count.
"""

from __future__ import annotations

import heapq
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import BudgetExceededError, CausalImplicitsError, GraphError
from .graph import CausalGraph, IndependenceStatement
from .params import (
    AuxParam,
    DistributionRequest,
    JointSpaceParam,
    ModelQParam,
    ModelRParam,
    joint_param,
    joint_space_params,
    param_sort_key,
    parse_param,
)


@dataclass(frozen=True)
class Budget:
    """Resource limits for a single Groebner run."""

    max_pairs: int = 200_000
    max_degree: int = 40


DEFAULT_BUDGET = Budget()


class RingContext:
    """An ordered variable list shared by a family of polynomials."""

    __slots__ = ("graph", "params", "index")

    def __init__(self, graph: CausalGraph | None, params):
        uniq = {p: None for p in params}
        ordered = sorted(uniq, key=lambda p: param_sort_key(graph, p))
        self.graph = graph
        self.params = tuple(ordered)
        self.index = {p: i for i, p in enumerate(self.params)}

    def __len__(self):
        return len(self.params)

    def __contains__(self, param):
        return param in self.index

    def __eq__(self, other):
        return isinstance(other, RingContext) and self.params == other.params

    def __hash__(self):
        return hash(self.params)

    def extend(self, new_params) -> "RingContext":
        return RingContext(self.graph, self.params + tuple(new_params))

    def restrict(self, keep) -> "RingContext":
        keep = set(keep)
        return RingContext(self.graph, [p for p in self.params if p in keep])

    def fresh_aux(self, stem="sat") -> AuxParam:
        n = 0
        while AuxParam(f"{stem}{n}") in self.index:
            n += 1
        return AuxParam(f"{stem}{n}")

    def joint_params(self):
        return [p for p in self.params if isinstance(p, JointSpaceParam)]

    def model_params(self):
        return [p for p in self.params if isinstance(p, (ModelQParam, ModelRParam))]


# --- monomial orders ---------------------------------------------------------


class MonomialOrder:
    name = "order"

    def key(self, mono):  # pragma: no cover - interface
        raise NotImplementedError


class Lex(MonomialOrder):
    name = "lex"

    def key(self, mono):
        return mono


class GrevLex(MonomialOrder):
    name = "grevlex"

    def key(self, mono):
        neg = tuple(-e for e in reversed(mono))
        return (sum(mono), neg)


class BlockOrder(MonomialOrder):
    """Compare the eliminated block first, then the rest.

    Both sub-comparisons default to graded reverse lexicographic order;
    any monomial mentioning an eliminated variable outranks every monomial
    that does not, which is what makes elimination work.
    """

    def __init__(self, ctx: RingContext, eliminate, inner=None, outer=None):
        drop = {ctx.index[p] for p in eliminate}
        self.drop_ix = tuple(sorted(drop))
        self.keep_ix = tuple(i for i in range(len(ctx)) if i not in drop)
        self.inner = inner or GrevLex()
        self.outer = outer or GrevLex()
        self.name = f"block[{','.join(map(str, self.drop_ix))}|{self.inner.name},{self.outer.name}]"

    def key(self, mono):
        inner = tuple(mono[i] for i in self.drop_ix)
        outer = tuple(mono[i] for i in self.keep_ix)
        return (self.inner.key(inner), self.outer.key(outer))


GREVLEX = GrevLex()
LEX = Lex()


# --- polynomials -------------------------------------------------------------


class Polynomial:
    """Immutable sparse polynomial: dict from exponent tuple to Fraction."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms=None):
        self.ctx = ctx
        clean = {}
        for mono, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                clean[mono] = coeff
        self.terms = clean

    # constructors

    @staticmethod
    def zero(ctx):
        return Polynomial(ctx)

    @staticmethod
    def constant(ctx, value):
        value = Fraction(value)
        if not value:
            return Polynomial(ctx)
        return Polynomial(ctx, {(0,) * len(ctx): value})

    @staticmethod
    def variable(ctx, param):
        if param not in ctx.index:
            raise GraphError(f"parameter {param} not in ring context")
        mono = [0] * len(ctx)
        mono[ctx.index[param]] = 1
        return Polynomial(ctx, {tuple(mono): Fraction(1)})

    # predicates / views

    @property
    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def mentioned_indices(self):
        out = set()
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e:
                    out.add(i)
        return out

    def mentions_any(self, indices):
        indices = set(indices)
        return any(e and i in indices for mono in self.terms for i, e in enumerate(mono))

    def lead(self, order: MonomialOrder):
        if self.is_zero:
            raise CausalImplicitsError("zero polynomial has no leading term")
        mono = max(self.terms, key=order.key)
        return mono, self.terms[mono]

    # arithmetic

    def _check(self, other):
        if self.ctx.params != other.ctx.params:
            raise CausalImplicitsError("polynomials live in different ring contexts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ctx, other)
        self._check(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = terms.get(mono, 0) + coeff
            if acc:
                terms[mono] = acc
            else:
                terms.pop(mono, None)
        return Polynomial(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ctx, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Polynomial(self.ctx, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                acc = out.get(mono, 0) + c1 * c2
                if acc:
                    out[mono] = acc
                else:
                    out.pop(mono, None)
        return Polynomial(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise CausalImplicitsError("negative powers are not polynomials")
        out = Polynomial.constant(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ctx.params == other.ctx.params
            and self.terms == other.terms
        )

    __hash__ = None

    def __repr__(self):
        return f"Polynomial({self.render()})"

    # context movement

    def transport(self, new_ctx: RingContext) -> "Polynomial":
        """Re-express in another context; every mentioned variable must exist there."""
        if new_ctx.params == self.ctx.params:
            return Polynomial(new_ctx, self.terms)
        mapping = []
        for param in self.ctx.params:
            mapping.append(new_ctx.index.get(param, -1))
        width = len(new_ctx)
        out = {}
        for mono, coeff in self.terms.items():
            new = [0] * width
            for i, e in enumerate(mono):
                if not e:
                    continue
                j = mapping[i]
                if j < 0:
                    raise CausalImplicitsError(
                        f"cannot transport: {self.ctx.params[i]} missing from target context"
                    )
                new[j] = e
            out[tuple(new)] = coeff
        return Polynomial(new_ctx, out)

    # rendering

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)

    def render(self, order: MonomialOrder = GREVLEX) -> str:
        if self.is_zero:
            return "0"
        chunks = []
        for pos, (mono, coeff) in enumerate(self.sorted_terms(order)):
            factors = []
            for i, e in enumerate(mono):
                if e:
                    name = self.ctx.params[i].text()
                    factors.append(name if e == 1 else f"{name}^{e}")
            mag = abs(coeff)
            body = "*".join(factors)
            if not factors:
                body = _frac_text(mag)
            elif mag != 1:
                body = f"{_frac_text(mag)}*{body}"
            if pos == 0:
                chunks.append(body if coeff > 0 else f"-{body}")
            else:
                chunks.append(f" + {body}" if coeff > 0 else f" - {body}")
        return "".join(chunks)

    def to_json(self, order: MonomialOrder = GREVLEX):
        out = []
        for mono, coeff in self.sorted_terms(order):
            factors = [
                {"param": self.ctx.params[i].text(), "exp": e}
                for i, e in enumerate(mono)
                if e
            ]
            out.append({"coef": _frac_text(coeff), "factors": factors})
        return out


def _frac_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def poly_from_json(data, ctx: RingContext) -> Polynomial:
    terms = {}
    for term in data:
        mono = [0] * len(ctx)
        for factor in term["factors"]:
            param = parse_param(factor["param"], ctx.graph)
            mono[ctx.index[param]] = int(factor.get("exp", 1))
        terms[tuple(mono)] = terms.get(tuple(mono), 0) + Fraction(term["coef"])
    return Polynomial(ctx, terms)


def parse_polynomial(text: str, ctx: RingContext) -> Polynomial:
    """Inverse of :meth:`Polynomial.render` (canonical text form)."""
    text = text.strip()
    if text == "0":
        return Polynomial.zero(ctx)
    pieces = text.replace(" - ", " + -").split(" + ")
    poly = Polynomial.zero(ctx)
    for piece in pieces:
        piece = piece.strip()
        negative = piece.startswith("-")
        if negative:
            piece = piece[1:]
        coeff = Fraction(1)
        mono = [0] * len(ctx)
        for factor in piece.split("*"):
            factor = factor.strip()
            if not factor:
                raise CausalImplicitsError(f"empty factor in {piece!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
                continue
            if "^" in factor:
                name, _, exp = factor.rpartition("^")
                power = int(exp)
            else:
                name, power = factor, 1
            param = parse_param(name, ctx.graph)
            if param not in ctx.index:
                raise CausalImplicitsError(f"parameter {name} not in ring context")
            mono[ctx.index[param]] += power
        if negative:
            coeff = -coeff
        poly = poly + Polynomial(ctx, {tuple(mono): coeff})
    return poly


# --- monomial helpers ---------------------------------------------------------


def _mono_lcm(a, b):
    return tuple(x if x >= y else y for x, y in zip(a, b))


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(sparse, mono):
    for i, e in sparse:
        if mono[i] < e:
            return False
    return True


def _sparse(mono):
    return tuple((i, e) for i, e in enumerate(mono) if e)


# --- division / normal form (rational) ----------------------------------------


def normal_form(f: Polynomial, basis, order: MonomialOrder = GREVLEX) -> Polynomial:
    """Remainder of ``f`` on division by ``basis``; fully reduced, deterministic.

    Terms are processed leading-first; the divisor is the first basis
    element (in the given sequence order) whose leading monomial divides
    the term.
    """
    binfo = []
    for g in basis:
        if g.is_zero:
            raise CausalImplicitsError("zero polynomial in division basis")
        lm, lc = g.lead(order)
        binfo.append((_sparse(lm), lm, lc, g.terms))
    key = order.key
    work = dict(f.terms)
    remainder = {}
    while work:
        mono = max(work, key=key)
        coeff = work.pop(mono)
        hit = None
        for sparse, lm, lc, gterms in binfo:
            if _mono_divides(sparse, mono):
                hit = (lm, lc, gterms)
                break
        if hit is None:
            remainder[mono] = coeff
            continue
        lm, lc, gterms = hit
        shift = tuple(a - b for a, b in zip(mono, lm))
        scale = coeff / lc
        for gm, gc in gterms.items():
            if gm == lm:
                continue
            target = _mono_mul(gm, shift)
            acc = work.get(target, 0) - scale * gc
            if acc:
                work[target] = acc
            else:
                work.pop(target, None)
    return Polynomial(f.ctx, remainder)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    lmf, lcf = f.lead(order)
    lmg, lcg = g.lead(order)
    lcm = _mono_lcm(lmf, lmg)
    mf = tuple(a - b for a, b in zip(lcm, lmf))
    mg = tuple(a - b for a, b in zip(lcm, lmg))
    tf = Polynomial(f.ctx, {mf: Fraction(1, 1) / lcf})
    tg = Polynomial(g.ctx, {mg: Fraction(1, 1) / lcg})
    return tf * f - tg * g


# --- integer core for Buchberger ----------------------------------------------


def _to_int_poly(poly: Polynomial):
    denom = 1
    for coeff in poly.terms.values():
        denom = denom * coeff.denominator // gcd(denom, coeff.denominator)
    terms = {m: int(c * denom) for m, c in poly.terms.items()}
    return _normalize_int(terms, None)


def _normalize_int(terms, lead_mono):
    """Strip content; make the coefficient of ``lead_mono`` (if given) positive."""
    if not terms:
        return terms
    content = 0
    for c in terms.values():
        content = gcd(content, abs(c))
        if content == 1:
            break
    if content > 1:
        terms = {m: c // content for m, c in terms.items()}
    if lead_mono is not None and terms.get(lead_mono, 1) < 0:
        terms = {m: -c for m, c in terms.items()}
    return terms


class _GBElem:
    __slots__ = ("terms", "lm", "lm_sparse", "lc", "deg")

    def __init__(self, terms, order):
        self.terms = terms
        self.lm = max(terms, key=order.key)
        terms2 = _normalize_int(terms, self.lm)
        self.terms = terms2
        self.lm_sparse = _sparse(self.lm)
        self.lc = terms2[self.lm]
        self.deg = sum(self.lm)


def _reduce_int(f_terms, basis, order, skip=None):
    """Full normal form over the integers via cross-multiplication.

    ``basis`` is a list of _GBElem; ``skip`` suppresses one index (used by
    autoreduction).  Returns a content-normalized dict (possibly empty).
    """
    key = order.key
    work = dict(f_terms)
    done = {}
    steps = 0
    while work:
        mono = max(work, key=key)
        coeff = work.pop(mono)
        hit = None
        for idx, g in enumerate(basis):
            if idx == skip or g is None:
                continue
            if _mono_divides(g.lm_sparse, mono):
                hit = g
                break
        if hit is None:
            done[mono] = coeff
            continue
        d = gcd(coeff, hit.lc)
        scale = hit.lc // d
        mult = coeff // d
        if scale != 1:
            if scale < 0:
                scale = -scale
                mult = -mult
            for k in work:
                work[k] *= scale
            for k in done:
                done[k] *= scale
        shift = tuple(a - b for a, b in zip(mono, hit.lm))
        for gm, gc in hit.terms.items():
            if gm == hit.lm:
                continue
            target = _mono_mul(gm, shift)
            acc = work.get(target, 0) - mult * gc
            if acc:
                work[target] = acc
            else:
                work.pop(target, None)
        steps += 1
        if steps % 64 == 0 and done:
            merged = dict(done)
            merged.update(work)
            merged = _normalize_int(merged, None)
            done = {m: merged[m] for m in done if m in merged}
            work = {m: merged[m] for m in merged if m not in done}
    return _normalize_int(done, None)


def _spoly_int(f: _GBElem, g: _GBElem):
    lcm = _mono_lcm(f.lm, g.lm)
    d = gcd(f.lc, g.lc)
    cf = g.lc // d
    cg = f.lc // d
    sf = tuple(a - b for a, b in zip(lcm, f.lm))
    sg = tuple(a - b for a, b in zip(lcm, g.lm))
    out = {}
    for m, c in f.terms.items():
        out[_mono_mul(m, sf)] = c * cf
    for m, c in g.terms.items():
        target = _mono_mul(m, sg)
        acc = out.get(target, 0) - c * cg
        if acc:
            out[target] = acc
        else:
            out.pop(target, None)
    return out


def _gm_update(basis, pairs, discarded, t, order):
    """Gebauer-Moeller pair update after appending basis[t]."""
    key = order.key
    lm_t = basis[t].lm
    cand = []
    for i in range(t):
        if basis[i] is None:
            continue
        cand.append((i, _mono_lcm(basis[i].lm, lm_t)))

    # prune pending pairs made redundant by the new element
    for entry in list(pairs):
        _, i, j, lcm_ij = entry
        if (i, j) in discarded:
            continue
        if (
            _mono_divides(basis[t].lm_sparse, lcm_ij)
            and _mono_lcm(basis[i].lm, lm_t) != lcm_ij
            and _mono_lcm(basis[j].lm, lm_t) != lcm_ij
        ):
            discarded.add((i, j))

    # M criterion: drop (i,t) when another candidate's lcm strictly divides its lcm
    kept = []
    for i, lcm_i in cand:
        sparse_i = _sparse(lcm_i)
        redundant = False
        for j, lcm_j in cand:
            if j == i or lcm_j == lcm_i:
                continue
            if _mono_divides(_sparse(lcm_j), lcm_i):
                redundant = True
                break
        if not redundant:
            kept.append((i, lcm_i))
    # F criterion: among equal lcms keep the first
    seen = {}
    kept2 = []
    for i, lcm_i in kept:
        if lcm_i in seen:
            continue
        seen[lcm_i] = i
        kept2.append((i, lcm_i))
    # B criterion: coprime leading monomials never contribute
    for i, lcm_i in kept2:
        if lcm_i == _mono_mul(basis[i].lm, lm_t):
            continue
        heapq.heappush(pairs, (key(lcm_i), i, t, lcm_i))


def buchberger(polys, order: MonomialOrder, budget: Budget = None, workers: int = 1):
    """Reduced Groebner basis of the given rational polynomials.

    Returns a tuple of monic Polynomials sorted by decreasing leading
    monomial; raises BudgetExceededError rather than truncating.
    """
    budget = budget or DEFAULT_BUDGET
    ctx = polys[0].ctx if polys else None
    ints = [_to_int_poly(p) for p in polys if not p.is_zero]
    ints = [t for t in ints if t]
    if not ints:
        return ()
    key = order.key

    basis: list[_GBElem] = []
    pairs: list = []
    discarded: set = set()
    # seed basis deterministically: ascending leading monomial, then insertion
    seeded = sorted(ints, key=lambda t: key(max(t, key=key)))
    for terms in seeded:
        reduced = _reduce_int(terms, basis, order)
        if not reduced:
            continue
        elem = _GBElem(reduced, order)
        basis.append(elem)
        _gm_update(basis, pairs, discarded, len(basis) - 1, order)

    processed = 0
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while pairs:
            entry = heapq.heappop(pairs)
            if (entry[1], entry[2]) in discarded:
                continue
            batch = [entry]
            while pairs and pairs[0][0] == entry[0]:
                nxt = heapq.heappop(pairs)
                if (nxt[1], nxt[2]) not in discarded:
                    batch.append(nxt)
            batch.sort(key=lambda e: (e[1], e[2]))
            processed += len(batch)
            if processed > budget.max_pairs:
                raise BudgetExceededError(
                    f"S-pair budget exceeded ({budget.max_pairs})", pairs_processed=processed
                )
            snapshot = list(basis)

            def reduce_one(e):
                _, i, j, _lcm = e
                return _reduce_int(_spoly_int(basis[i], basis[j]), snapshot, order)

            if pool is not None and len(batch) > 1:
                results = list(pool.map(reduce_one, batch))
            else:
                results = [reduce_one(e) for e in batch]
            for reduced in results:
                if not reduced:
                    continue
                reduced = _reduce_int(reduced, basis, order)
                if not reduced:
                    continue
                elem = _GBElem(reduced, order)
                if elem.deg > budget.max_degree:
                    raise BudgetExceededError(
                        f"degree budget exceeded ({budget.max_degree})",
                        pairs_processed=processed,
                        degree=elem.deg,
                    )
                basis.append(elem)
                _gm_update(basis, pairs, discarded, len(basis) - 1, order)
    finally:
        if pool is not None:
            pool.shutdown(wait=False)

    return _autoreduce(ctx, basis, order)


def _autoreduce(ctx, basis, order):
    """Minimalize then tail-reduce; emit the canonical monic reduced basis."""
    alive = [g for g in basis if g is not None]
    # unit ideal short-circuit
    for g in alive:
        if not any(g.lm):
            return (Polynomial.constant(ctx, 1),)
    # minimalize: drop elements whose lm is divisible by another's
    alive.sort(key=lambda g: (sum(g.lm), order.key(g.lm)))
    minimal: list[_GBElem] = []
    for g in alive:
        if any(_mono_divides(h.lm_sparse, g.lm) for h in minimal):
            continue
        minimal.append(g)
    # tail-reduce to fixpoint
    changed = True
    while changed:
        changed = False
        for idx in range(len(minimal)):
            g = minimal[idx]
            reduced = _reduce_int(g.terms, minimal, order, skip=idx)
            new = _GBElem(reduced, order)
            if new.terms != g.terms:
                if new.lm != g.lm:
                    raise CausalImplicitsError("tail reduction moved a leading monomial")
                minimal[idx] = new
                changed = True
    minimal.sort(key=lambda g: order.key(g.lm), reverse=True)
    out = []
    for g in minimal:
        lc = Fraction(g.lc)
        out.append(Polynomial(ctx, {m: Fraction(c) / lc for m, c in g.terms.items()}))
    return tuple(out)


# --- ideals -------------------------------------------------------------------


class Ideal:
    """Generator list with cached reduced Groebner bases, one per order."""

    def __init__(self, ctx: RingContext, generators):
        self.ctx = ctx
        gens = []
        for g in generators:
            if g.ctx.params != ctx.params:
                g = g.transport(ctx)
            if not g.is_zero:
                gens.append(g)
        self.generators = tuple(gens)
        self._gb: dict[str, tuple] = {}

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators over {len(self.ctx)} variables)"

    def groebner(self, order: MonomialOrder = GREVLEX, budget: Budget = None, workers: int = 1):
        cached = self._gb.get(order.name)
        if cached is None:
            cached = buchberger(list(self.generators), order, budget, workers)
            self._gb[order.name] = cached
        return cached

    def cache_basis(self, order: MonomialOrder, basis):
        self._gb[order.name] = tuple(basis)

    def transport(self, new_ctx: RingContext) -> "Ideal":
        out = Ideal(new_ctx, [g.transport(new_ctx) for g in self.generators])
        for name, basis in self._gb.items():
            if name == GREVLEX.name:  # grevlex leading terms survive context growth
                out._gb[name] = tuple(g.transport(new_ctx) for g in basis)
        return out


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    """Concatenated generators; contexts are unified if they differ."""
    if a.ctx.params == b.ctx.params:
        return Ideal(a.ctx, list(a.generators) + list(b.generators))
    ctx = RingContext(a.ctx.graph or b.ctx.graph, a.ctx.params + b.ctx.params)
    gens = [g.transport(ctx) for g in a.generators] + [g.transport(ctx) for g in b.generators]
    return Ideal(ctx, gens)


def groebner(ideal: Ideal, order: MonomialOrder = GREVLEX, budget: Budget = None, workers: int = 1) -> Ideal:
    basis = ideal.groebner(order, budget, workers)
    out = Ideal(ideal.ctx, basis)
    out.cache_basis(order, basis)
    return out


def elimination_ideal(ideal: Ideal, drop, budget: Budget = None, workers: int = 1) -> Ideal:
    """Generators of the ideal intersected with the subring without ``drop``."""
    drop = [p for p in drop if p in ideal.ctx.index]
    if not drop:
        basis = ideal.groebner(GREVLEX, budget, workers)
        out = Ideal(ideal.ctx, basis)
        out.cache_basis(GREVLEX, basis)
        return out
    order = BlockOrder(ideal.ctx, drop)
    basis = ideal.groebner(order, budget, workers)
    drop_ix = set(order.drop_ix)
    kept = [g for g in basis if not g.mentions_any(drop_ix)]
    out = Ideal(ideal.ctx, kept)
    # the retained block-order basis is a reduced grevlex basis of the
    # elimination ideal: eliminated variables are absent, so both orders
    # compare these monomials identically
    out.cache_basis(GREVLEX, sorted(kept, key=lambda g: GREVLEX.key(g.lead(GREVLEX)[0]), reverse=True))
    return out


def saturate(ideal: Ideal, f: Polynomial, budget: Budget = None, workers: int = 1) -> Ideal:
    """I : f^infinity via an auxiliary inverse variable and elimination."""
    if f.is_zero:
        raise CausalImplicitsError("cannot saturate by the zero polynomial")
    if f.total_degree() == 0:
        return Ideal(ideal.ctx, ideal.generators)
    aux = ideal.ctx.fresh_aux()
    ext = ideal.ctx.extend([aux])
    gens = [g.transport(ext) for g in ideal.generators]
    gens.append(f.transport(ext) * Polynomial.variable(ext, aux) - 1)
    eliminated = elimination_ideal(Ideal(ext, gens), [aux], budget, workers)
    back = [g.transport(ideal.ctx) for g in eliminated.generators]
    out = Ideal(ideal.ctx, back)
    out.cache_basis(GREVLEX, back)
    return out


def saturate_by_product(ideal: Ideal, factors, budget: Budget = None, workers: int = 1) -> Ideal:
    """Saturate successively by each factor; equals saturation by the product."""
    out = ideal
    for f in factors:
        out = saturate(out, f, budget, workers)
    return out


def contains(ideal: Ideal, f: Polynomial, order: MonomialOrder = GREVLEX, budget: Budget = None) -> bool:
    basis = ideal.groebner(order, budget)
    if f.ctx.params != ideal.ctx.params:
        f = f.transport(ideal.ctx)
    if not basis:
        return f.is_zero
    return normal_form(f, basis, order).is_zero


def ideal_equal(a: Ideal, b: Ideal, order: MonomialOrder = GREVLEX, budget: Budget = None) -> bool:
    """Mutual containment of generator sets (exact)."""
    if a.ctx.params != b.ctx.params:
        ctx = RingContext(a.ctx.graph or b.ctx.graph, a.ctx.params + b.ctx.params)
        a = a.transport(ctx)
        b = b.transport(ctx)
    return all(contains(a, g, order, budget) for g in b.generators) and all(
        contains(b, g, order, budget) for g in a.generators
    )


# --- independence ideals --------------------------------------------------------


def independence_ideal(
    stmt: IndependenceStatement,
    graph: CausalGraph,
    t: dict,
    ctx: RingContext | None = None,
) -> Ideal:
    """All 2x2 minors expressing ``stmt`` inside the t-interventional table.

    Each table cell is the marginal sum of joint-space parameters over the
    free variables the statement does not mention.
    """
    graph.check_assignment(t)
    free = [n for n in graph.observed if n not in t]
    named = {stmt.a} | set(stmt.b) | set(stmt.c)
    if not named <= set(free):
        raise GraphError("statement mentions intervened or unknown variables")
    if ctx is None:
        request = DistributionRequest(graph.assignment_key(t))
        ctx = RingContext(graph, joint_space_params(graph, [request]))
    others = [n for n in free if n not in named]

    def cell(a_val, b_assign, c_assign):
        total = Polynomial.zero(ctx)
        fixed = dict(t)
        fixed[stmt.a] = a_val
        fixed.update(b_assign)
        fixed.update(c_assign)
        for rest in graph.assignments(others):
            v = dict(fixed)
            v.update(rest)
            total = total + Polynomial.variable(ctx, joint_param(graph, t, v))
        return total

    a_vals = range(1, graph.cardinality(stmt.a) + 1)
    b_assigns = graph.assignments(graph.sort_names(stmt.b))
    c_assigns = graph.assignments(graph.sort_names(stmt.c))
    gens = []
    for c_assign in c_assigns:
        cells = {}
        for a_val in a_vals:
            for bi, b_assign in enumerate(b_assigns):
                cells[(a_val, bi)] = cell(a_val, b_assign, c_assign)
        for a1, a2 in itertools.combinations(a_vals, 2):
            for b1, b2 in itertools.combinations(range(len(b_assigns)), 2):
                gens.append(cells[(a1, b1)] * cells[(a2, b2)] - cells[(a2, b1)] * cells[(a1, b2)])
    return Ideal(ctx, gens)
