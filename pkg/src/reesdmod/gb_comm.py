"""Buchberger engine for ideals and submodules of free modules.

Elements are handled internally as dicts ``{(component, exponent): mpq}``.
The same core also drives left Gröbner bases over the Weyl algebra: the only
difference is the function used to multiply an element by a monomial, which
is passed in by :mod:`reesdmod.weyl`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from .poly_core import (
    ONE,
    ZERO,
    CommPoly,
    CommVector,
    ModuleOrder,
    MonomialOrder,
    RingContext,
    enumerate_monomials,
    exp_divides,
    exp_lcm,
    exp_sub,
)

Term = tuple[int, tuple[int, ...]]
Element = dict  # Term -> mpq
MulFn = Callable[[tuple[int, ...], Element], Element]


class GBBudgetExceeded(RuntimeError):
    pass


class DataViolation(ValueError):
    """The input ideal does not satisfy the standing hypotheses (three forms,
    equal degree, height two, minimally generated)."""


# ---------------------------------------------------------------------------
# core
# ---------------------------------------------------------------------------

class _Reducer:
    """Division by a fixed list of elements with cached leading terms."""

    def __init__(self, key, mul: MulFn | None):
        self.key = lru_cache(maxsize=None)(key)
        self.mul = mul
        self.elems: list[Element] = []
        self.leads: list[Term] = []
        self.by_comp: dict[int, list[int]] = {}

    def lead(self, f: Element) -> Term:
        return max(f, key=self.key)

    def add(self, g: Element) -> int:
        idx = len(self.elems)
        self.elems.append(g)
        lm = self.lead(g)
        self.leads.append(lm)
        self.by_comp.setdefault(lm[0], []).append(idx)
        return idx

    def find_divisor(self, t: Term, active=None) -> int | None:
        comp, e = t
        for i in self.by_comp.get(comp, ()):
            if active is not None and i not in active:
                continue
            le = self.leads[i][1]
            if all(a <= b for a, b in zip(le, e)):
                return i
        return None

    def subtract(self, f: Element, q, shift, g: Element) -> None:
        if self.mul is None:
            for (comp, e), v in g.items():
                t = (comp, tuple(a + b for a, b in zip(e, shift)))
                nv = f.get(t, ZERO) - q * v
                if nv:
                    f[t] = nv
                else:
                    del f[t]
        else:
            for t, v in self.mul(shift, g).items():
                nv = f.get(t, ZERO) - q * v
                if nv:
                    f[t] = nv
                else:
                    f.pop(t, None)

    def reduce(self, f: Element, full: bool = True, active=None) -> Element:
        f = dict(f)
        rem: Element = {}
        key = self.key
        while f:
            m = max(f, key=key)
            i = self.find_divisor(m, active)
            if i is None:
                if not full:
                    f.update(rem)
                    return f
                rem[m] = f.pop(m)
                continue
            g = self.elems[i]
            lm = self.leads[i]
            q = f[m] / g[lm]
            self.subtract(f, q, exp_sub(m[1], lm[1]), g)
            f.pop(m, None)
        return rem


def _monic(f: Element, key) -> Element:
    lc = f[max(f, key=key)]
    if lc == 1:
        return f
    inv = 1 / lc
    return {t: c * inv for t, c in f.items()}


def buchberger(gens: Iterable[Element], key, *, mul: MulFn | None = None,
               product_criterion: bool = False, budget: int | None = None) -> list[Element]:
    """Reduced Gröbner basis of the (left) submodule generated by ``gens``.

    Pairs are taken smallest-lcm first (degree, then order).  The product
    criterion is only sound for commutative ideals; the chain criterion is
    always applied.
    """
    red = _Reducer(key, mul)
    ck = red.key
    pending: set[tuple[int, int]] = set()
    heap: list = []

    def push_pairs(j: int) -> None:
        comp, ej = red.leads[j]
        for i in red.by_comp.get(comp, ()):
            if i == j:
                continue
            lcm = exp_lcm(red.leads[i][1], ej)
            pending.add((i, j))
            heapq.heappush(heap, (sum(lcm), ck((comp, lcm)), i, j))

    for f in gens:
        if not f:
            continue
        h = red.reduce(f)
        if h:
            push_pairs(red.add(_monic(h, ck)))

    steps = 0
    while heap:
        _, _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        comp, ei = red.leads[i]
        ej = red.leads[j][1]
        lcm = exp_lcm(ei, ej)
        if product_criterion and all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue
        if _chain_skip(red, pending, i, j, comp, lcm):
            continue
        gi, gj = red.elems[i], red.elems[j]
        s: Element = {}
        red.subtract(s, -ONE / gi[red.leads[i]], exp_sub(lcm, ei), gi)
        red.subtract(s, ONE / gj[red.leads[j]], exp_sub(lcm, ej), gj)
        h = red.reduce(s)
        steps += 1
        if h:
            push_pairs(red.add(_monic(h, ck)))
            if budget is not None and len(red.elems) > budget:
                raise GBBudgetExceeded(f"basis grew beyond {budget} elements")

    return _interreduce(red, key, mul)


def _chain_skip(red: _Reducer, pending, i, j, comp, lcm) -> bool:
    for k in red.by_comp.get(comp, ()):
        if k == i or k == j:
            continue
        if not exp_divides(red.leads[k][1], lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _interreduce(red: _Reducer, key, mul) -> list[Element]:
    ck = red.key
    n = len(red.elems)
    keep = []
    for i in range(n):
        ti = red.leads[i]
        dominated = False
        for j in range(n):
            if j == i:
                continue
            tj = red.leads[j]
            if tj[0] != ti[0] or not exp_divides(tj[1], ti[1]):
                continue
            if tj != ti or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(i)
    out_red = _Reducer(key, mul)
    for i in keep:
        out_red.add(red.elems[i])
    result = []
    active_all = set(range(len(keep)))
    for idx in range(len(keep)):
        g = out_red.elems[idx]
        lm = out_red.leads[idx]
        tail = dict(g)
        lc = tail.pop(lm)
        others = active_all - {idx}
        tail = out_red.reduce(tail, active=others)
        tail[lm] = lc
        result.append(_monic(tail, ck))
    result.sort(key=lambda f: ck(max(f, key=ck)), reverse=True)
    return result


def spoly_residues(elems: Sequence[Element], key, mul: MulFn | None = None) -> list[Element]:
    """Normal forms of all S-pairs (for post-hoc verification of a basis)."""
    red = _Reducer(key, mul)
    for g in elems:
        red.add(g)
    out = []
    for i, j in combinations(range(len(elems)), 2):
        (ci, ei), (cj, ej) = red.leads[i], red.leads[j]
        if ci != cj:
            continue
        lcm = exp_lcm(ei, ej)
        s: Element = {}
        red.subtract(s, -ONE / elems[i][red.leads[i]], exp_sub(lcm, ei), elems[i])
        red.subtract(s, ONE / elems[j][red.leads[j]], exp_sub(lcm, ej), elems[j])
        out.append(red.reduce(s))
    return out


# ---------------------------------------------------------------------------
# public commutative API
# ---------------------------------------------------------------------------

def _to_element(v) -> Element:
    if isinstance(v, CommPoly):
        return {(0, e): c for e, c in v.terms.items()}
    if isinstance(v, CommVector):
        return v.to_terms()
    raise TypeError(f"expected CommPoly or CommVector, got {type(v).__name__}")


@dataclass
class GroebnerBasis:
    generators: list
    order: MonomialOrder | ModuleOrder
    reduced: bool = True
    ctx: RingContext | None = None
    rank: int | None = None  # None for ideals
    _elements: list = field(default_factory=list, repr=False)
    _reducer: _Reducer | None = field(default=None, repr=False)

    @property
    def is_module(self) -> bool:
        return self.rank is not None

    def _term_key(self):
        if isinstance(self.order, ModuleOrder):
            return self.order.key
        k = self.order.key
        return lambda t: k(t[1])

    def reducer(self) -> _Reducer:
        if self._reducer is None:
            red = _Reducer(self._term_key(), None)
            for g in self._elements:
                red.add(g)
            self._reducer = red
        return self._reducer

    def _wrap(self, elem: Element):
        if self.rank is None:
            return CommPoly(self.ctx, {e: c for (_, e), c in elem.items()}, _trusted=True)
        return CommVector.from_terms(self.ctx, self.rank, elem)

    def normal_form(self, v):
        return self._wrap(self.reducer().reduce(_to_element(v)))

    def contains(self, v) -> bool:
        return not self.reducer().reduce(_to_element(v))

    def leading_terms(self) -> list[Term]:
        return list(self.reducer().leads)

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [t[1] for t in self.reducer().leads]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def groebner_basis(gens: Sequence, order: MonomialOrder | ModuleOrder | None = None,
                   budget: int | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of an ideal (CommPoly list) or submodule (CommVector list)."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    first = gens[0]
    ctx = first.ctx
    if any(g.ctx != ctx for g in gens):
        raise ValueError("generators live in different rings")
    if isinstance(first, CommVector):
        rank = first.rank
        if any(g.rank != rank for g in gens):
            raise ValueError("generators have different ranks")
        if order is None:
            order = ModuleOrder(MonomialOrder.degrevlex(), "top", rank=rank)
        if not isinstance(order, ModuleOrder):
            order = ModuleOrder(order, "top", rank=rank)
        key = order.key
        prod = False
    else:
        rank = None
        order = order or MonomialOrder.degrevlex()
        if isinstance(order, ModuleOrder):
            raise ValueError("ideal generators need a monomial order")
        k = order.key
        key = lambda t: k(t[1])  # noqa: E731
        prod = True
    elems = buchberger((_to_element(g) for g in gens), key, product_criterion=prod, budget=budget)
    gb = GroebnerBasis([], order, True, ctx, rank, elems)
    gb.generators = [gb._wrap(e) for e in elems]
    return gb


def normal_form(v, gb: GroebnerBasis):
    return gb.normal_form(v)


def is_groebner(gb: GroebnerBasis) -> bool:
    """Re-check Buchberger's criterion on every S-pair."""
    return all(not r for r in spoly_residues(gb._elements, gb._term_key()))


# ---------------------------------------------------------------------------
# syzygies
# ---------------------------------------------------------------------------

def syzygy_module(row: Sequence[CommPoly]) -> list[list[CommPoly]]:
    """Minimal homogeneous generators of the syzygies of a row of forms.

    Uses a POT-ordered basis of the graph module generated by
    ``f_i e_0 + e_i``; basis elements without an ``e_0`` part are syzygies.
    They are then pruned to a minimal generating set, degree by degree.
    Columns come back sorted by degree (lowest first).
    """
    r = len(row)
    ctx = row[0].ctx
    zero = CommPoly.zero(ctx)
    one = CommPoly.constant(ctx, 1)
    gens = []
    for i, f in enumerate(row):
        comps = [f] + [one if j == i else zero for j in range(r)]
        gens.append(CommVector(tuple(comps)))
    order = ModuleOrder(MonomialOrder.degrevlex(), "pot", rank=r + 1)
    gb = groebner_basis(gens, order)
    degs = [f.total_degree() for f in row]
    syz = []
    for v in gb.generators:
        if v.components[0].is_zero():
            col = list(v.components[1:])
            syz.append(col)
    for col in syz:
        if not _is_homogeneous_column(col, degs):
            raise DataViolation("syzygies of an inhomogeneous row are not graded")
    syz.sort(key=lambda c: _column_degree(c, degs))
    kept: list[list[CommPoly]] = []
    for col in syz:
        if kept:
            sub = groebner_basis([CommVector(tuple(c)) for c in kept],
                                 ModuleOrder(MonomialOrder.degrevlex(), "top", rank=r))
            if sub.contains(CommVector(tuple(col))):
                continue
        kept.append(col)
    return kept


def _column_degree(col, degs) -> int:
    for c, d in zip(col, degs):
        if c:
            return c.total_degree() + d
    return -1


def _is_homogeneous_column(col, degs) -> bool:
    target = None
    for c, d in zip(col, degs):
        for e in c.terms:
            deg = sum(e) + d
            if target is None:
                target = deg
            elif deg != target:
                return False
    return True


def column_degree(col: Sequence[CommPoly]) -> int:
    """Polynomial degree of the entries of a homogeneous column."""
    for c in col:
        if c:
            return c.total_degree()
    return -1


# ---------------------------------------------------------------------------
# elimination, saturation, intersection
# ---------------------------------------------------------------------------

def eliminate(ideal: Sequence[CommPoly], block: Sequence[str],
              rest_order: MonomialOrder | None = None) -> list[CommPoly]:
    """Generators of the ideal intersected with the subring free of ``block``.

    Uses a block order with the eliminated variables first; the result lives
    in the context obtained by deleting the block.
    """
    ctx = ideal[0].ctx
    if not block:
        return [g for g in groebner_basis(ideal).generators]
    elim = [ctx.index(n) for n in block]
    keep = [i for i in range(ctx.nvars) if i not in elim]
    perm_ctx_names = tuple(ctx.names[i] for i in elim + keep)
    bideg = None
    if ctx.bidegrees is not None:
        bideg = tuple(ctx.bidegrees[i] for i in elim + keep)
    pctx = RingContext(perm_ctx_names, bideg)
    mapping = [None] * ctx.nvars
    for pos, i in enumerate(elim + keep):
        mapping[i] = pos
    moved = [g.recontext(pctx, mapping) for g in ideal]
    order = MonomialOrder.block([len(elim), len(keep)],
                                [MonomialOrder.degrevlex(), rest_order or MonomialOrder.degrevlex()])
    gb = groebner_basis(moved, order)
    target_names = tuple(ctx.names[i] for i in keep)
    tbideg = None if ctx.bidegrees is None else tuple(ctx.bidegrees[i] for i in keep)
    tctx = RingContext(target_names, tbideg)
    back = [None] * len(elim) + list(range(len(keep)))
    out = []
    for g in gb.generators:
        if any(any(e[:len(elim)]) for e in g.terms):
            continue
        out.append(g.recontext(tctx, back))
    return out


def _is_standard_homogeneous(gens: Sequence[CommPoly]) -> bool:
    return all(g.is_homogeneous() for g in gens)


def _saturate_by_variable(ideal: Sequence[CommPoly], var: int) -> list[CommPoly]:
    """Bayer's trick: for homogeneous ideals, degrevlex with ``var`` last."""
    ctx = ideal[0].ctx
    perm = [i for i in range(ctx.nvars) if i != var] + [var]
    order = MonomialOrder.degrevlex(perm=perm)
    gb = groebner_basis(ideal, order)
    out = []
    for g in gb.generators:
        k = min(e[var] for e in g.terms)
        if k:
            shift = [0] * ctx.nvars
            shift[var] = k
            g = CommPoly(ctx, {exp_sub(e, tuple(shift)): c for e, c in g.terms.items()},
                         _trusted=True)
        out.append(g)
    return groebner_basis(out).generators


def _saturate_by_poly(ideal: Sequence[CommPoly], f: CommPoly) -> list[CommPoly]:
    ctx = ideal[0].ctx
    if len(f.terms) == 1 and _is_standard_homogeneous(ideal):
        (e, _), = f.terms.items()
        if sum(e) == 1:
            return _saturate_by_variable(ideal, e.index(1))
    name = "_u"
    while name in ctx.names:
        name += "_"
    bctx = ctx.extend([name], [(0, 0)] if ctx.bidegrees is not None else None, front=True)
    lift = list(range(1, ctx.nvars + 1))
    u = bctx.gen(name)
    gens = [g.recontext(bctx, lift) for g in ideal]
    gens.append(CommPoly.constant(bctx, 1) - u * f.recontext(bctx, lift))
    elim = eliminate(gens, [name])
    return [g.recontext(ctx, list(range(ctx.nvars))) for g in elim] if elim else [CommPoly.zero(ctx)]


def ideal_contains(a: Sequence[CommPoly], b: Sequence[CommPoly]) -> bool:
    """True when the ideal generated by ``b`` lies in the one generated by ``a``."""
    gb = groebner_basis(a)
    return all(gb.contains(g) for g in b if g)


def intersect(a: Sequence[CommPoly], b: Sequence[CommPoly]) -> list[CommPoly]:
    if ideal_contains(b, a):
        return groebner_basis(a).generators
    if ideal_contains(a, b):
        return groebner_basis(b).generators
    ctx = a[0].ctx
    name = "_t"
    while name in ctx.names:
        name += "_"
    bctx = ctx.extend([name], [(0, 0)] if ctx.bidegrees is not None else None, front=True)
    lift = list(range(1, ctx.nvars + 1))
    t = bctx.gen(name)
    one = CommPoly.constant(bctx, 1)
    gens = [t * g.recontext(bctx, lift) for g in a] + [(one - t) * g.recontext(bctx, lift) for g in b]
    elim = eliminate(gens, [name])
    return [g.recontext(ctx, list(range(ctx.nvars))) for g in elim]


def saturate(ideal: Sequence[CommPoly], by: Sequence[CommPoly]) -> list[CommPoly]:
    """The saturation ``ideal : (by)^inf`` as a reduced Gröbner basis."""
    ideal = [g for g in ideal if g]
    if not ideal:
        return []
    parts = [_saturate_by_poly(ideal, f) for f in by if f]
    if not parts:
        return groebner_basis(ideal).generators
    out = parts[0]
    for other in parts[1:]:
        out = intersect(out, other)
    return groebner_basis(out).generators


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

@dataclass
class GradedDims:
    dims: dict = field(default_factory=dict)

    def __getitem__(self, deg):
        return self.dims.get(deg, 0)

    def support(self) -> list:
        return sorted(k for k, v in self.dims.items() if v)

    def end(self):
        sup = self.support()
        return sup[-1] if sup else None


def standard_monomials(leads: Sequence[tuple[int, ...]], candidates: Iterable[tuple[int, ...]]):
    return [m for m in candidates if not any(exp_divides(l, m) for l in leads)]


def bigraded_dim(gb: GroebnerBasis, bidegree: tuple[int, int]) -> int:
    """dim of the quotient ring in the given bidegree (standard monomial count)."""
    if gb.is_module:
        raise ValueError("bigraded_dim expects an ideal basis")
    leads = [m for m in gb.leading_monomials()]
    mons = enumerate_monomials(gb.ctx, bidegree)
    return len(standard_monomials(leads, mons))


def monomial_quotient_krull_dim(leads: Sequence, nvars: int, rank: int | None = None):
    """Krull dimension of a monomial quotient, from its generating monomials.

    For modules pass terms ``(component, exponent)`` and the rank; the result
    is the maximum over components, with ``-1`` standing for the zero module.
    Also returns the per-component list in the module case.
    """
    if rank is None:
        return _krull_monomial([tuple(m) for m in leads], nvars)
    per = []
    for c in range(rank):
        mons = [tuple(e) for comp, e in leads if comp == c]
        per.append(_krull_monomial(mons, nvars))
    return max(per) if per else -1, per


def _krull_monomial(mons: list[tuple[int, ...]], nvars: int) -> int:
    if any(not any(m) for m in mons):
        return -1
    supports = [frozenset(i for i, v in enumerate(m) if v) for m in mons]
    best = 0
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    return best
