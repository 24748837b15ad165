"""Arithmetic in A_2(Q)[T1,T2,T3] and left Gröbner bases over A_2(Q).

A :class:`WeylOp` is stored in normal order, all ``x`` to the left of all
``d``, as a map from 7-tuples ``(a1, a2, b1, b2, g1, g2, g3)`` to
coefficients, meaning ``x1^a1 x2^a2 d1^b1 d2^b2 T1^g1 T2^g2 T3^g3``.
The ``T`` variables are central.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .gb_comm import Element, GroebnerBasis, _Reducer, buchberger, spoly_residues
from .poly_core import (
    ONE,
    ZERO,
    CommPoly,
    ModuleOrder,
    MonomialOrder,
    QQ,
    R_CTX,
    S_CTX,
    format_terms,
    rational_str,
)

NAMES = ("x1", "x2", "D1", "D2", "T1", "T2", "T3")
WExp = tuple[int, int, int, int, int, int, int]
_ZERO7 = (0,) * 7


@lru_cache(maxsize=None)
def _commute(b: int, a: int) -> tuple[tuple[int, int], ...]:
    """d^b x^a = sum_k coeff * x^(a-k) d^(b-k); returns ((k, coeff), ...)."""
    return tuple((k, comb(b, k) * comb(a, k) * factorial(k)) for k in range(min(a, b) + 1))


@lru_cache(maxsize=65536)
def _mono_mul(m1: WExp, m2: WExp) -> tuple[tuple[WExp, int], ...]:
    """Product of two normal-ordered monomials as ((exp, int coeff), ...)."""
    a1, a2, b1, b2, g1, g2, g3 = m1
    c1, c2, e1, e2, h1, h2, h3 = m2
    t = (g1 + h1, g2 + h2, g3 + h3)
    if (b1 == 0 or c1 == 0) and (b2 == 0 or c2 == 0):
        return (((a1 + c1, a2 + c2, b1 + e1, b2 + e2) + t, 1),)
    out = []
    for k1, w1 in _commute(b1, c1):
        for k2, w2 in _commute(b2, c2):
            out.append(((a1 + c1 - k1, a2 + c2 - k2, b1 + e1 - k1, b2 + e2 - k2) + t, w1 * w2))
    return tuple(out)


def _mul_terms(f: dict, g: dict) -> dict:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            c = c1 * c2
            for m, w in _mono_mul(m1, m2):
                v = out.get(m, ZERO) + c * w
                if v:
                    out[m] = v
                else:
                    del out[m]
    return out


class WeylOp:
    """Immutable element of A_2(Q)[T1,T2,T3] in normal order."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None, _trusted: bool = False):
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for e, c in (terms or {}).items():
                e = tuple(int(v) for v in e)
                if len(e) != 7 or min(e) < 0:
                    raise ValueError(f"bad Weyl exponent {e}")
                c = QQ(c)
                if c:
                    v = clean.get(e, ZERO) + c
                    if v:
                        clean[e] = v
                    else:
                        clean.pop(e, None)
            self.terms = clean
        self._hash = None

    # generators ---------------------------------------------------------------
    @classmethod
    def const(cls, c) -> "WeylOp":
        c = QQ(c)
        return cls({_ZERO7: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, name: str) -> "WeylOp":
        e = [0] * 7
        e[NAMES.index(name)] = 1
        return cls({tuple(e): ONE}, _trusted=True)

    @classmethod
    def x(cls, i: int) -> "WeylOp":
        return cls.var(f"x{i}")

    @classmethod
    def d(cls, i: int) -> "WeylOp":
        return cls.var(f"D{i}")

    @classmethod
    def T(cls, i: int) -> "WeylOp":
        return cls.var(f"T{i}")

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "WeylOp":
        return cls({tuple(exp): c})

    @classmethod
    def from_commpoly(cls, p: CommPoly, derivative: bool = False) -> "WeylOp":
        """Embed a polynomial of R or S; with ``derivative`` the x_i become d_i."""
        names = p.ctx.names
        out = {}
        for e, c in p.terms.items():
            w = [0] * 7
            for n, k in zip(names, e):
                if n in ("x1", "x2"):
                    idx = int(n[1]) - 1 + (2 if derivative else 0)
                elif n in ("d1", "d2", "D1", "D2"):
                    idx = int(n[1]) + 1
                elif n in ("T1", "T2", "T3"):
                    idx = int(n[1]) + 3
                else:
                    raise ValueError(f"variable {n} has no Weyl counterpart")
                w[idx] += k
            out[tuple(w)] = c
        return cls(out, _trusted=True)

    # arithmetic ---------------------------------------------------------------
    def _coerce(self, other) -> "WeylOp":
        if isinstance(other, WeylOp):
            return other
        return WeylOp.const(other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return WeylOp(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp({e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, WeylOp):
            return weyl_mul(self, other)
        try:
            c = QQ(other)
        except TypeError:
            return NotImplemented
        if not c:
            return WeylOp({}, _trusted=True)
        return WeylOp({e: v * c for e, v in self.terms.items()}, _trusted=True)

    def __rmul__(self, other):
        # scalar on the left; Weyl products always dispatch through __mul__
        return self.__mul__(other)

    def __pow__(self, n: int):
        out = WeylOp.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, WeylOp):
            return self.terms == other.terms
        try:
            return self.terms == WeylOp.const(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure ----------------------------------------------------------------
    def weights(self) -> set[int]:
        return {e[0] + e[1] - e[2] - e[3] for e in self.terms}

    def is_weight_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def t_degree(self) -> set[int]:
        return {e[4] + e[5] + e[6] for e in self.terms}

    def is_pure_derivative(self) -> bool:
        return all(e[0] == e[1] == 0 for e in self.terms)

    def coefficient_of_T(self, gamma: Sequence[int]) -> "WeylOp":
        """Coefficient (in D) of T^gamma."""
        g = tuple(gamma)
        return WeylOp({e[:4] + (0, 0, 0): c for e, c in self.terms.items() if e[4:] == g},
                      _trusted=True)

    def to_str(self) -> str:
        items = sorted(self.terms.items(), key=lambda t: _display_key(t[0]), reverse=True)
        return format_terms(((_display_exp(e), c) for e, c in items), _DISPLAY_NAMES)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"WeylOp({self.to_str()!r})"


# display: lex with T first, so that L1 reads T2*D2^2 - T3*D1^2
_DISPLAY_NAMES = ("T1", "T2", "T3", "x1", "x2", "D1", "D2")


def _display_exp(e: WExp) -> tuple[int, ...]:
    return e[4:] + e[:4]


def _display_key(e: WExp) -> tuple[int, ...]:
    return e[4:] + e[:4]


def weyl_mul(a: WeylOp, b: WeylOp) -> WeylOp:
    return WeylOp(_mul_terms(a.terms, b.terms), _trusted=True)


def fourier(a: WeylOp) -> WeylOp:
    """x_i -> d_i, d_i -> -x_i, T_i -> T_i."""
    out: dict = {}
    for (a1, a2, b1, b2, g1, g2, g3), c in a.terms.items():
        sign = -1 if (b1 + b2) % 2 else 1
        left = (0, 0, a1, a2, g1, g2, g3)
        right = (b1, b2, 0, 0, 0, 0, 0)
        for m, w in _mono_mul(left, right):
            v = out.get(m, ZERO) + c * sign * w
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return WeylOp(out, _trusted=True)


def inverse_fourier(a: WeylOp) -> WeylOp:
    """x_i -> -d_i, d_i -> x_i."""
    return fourier(fourier(fourier(a)))


def transpose_std(a: WeylOp) -> WeylOp:
    """Standard transposition x^a d^b -> (-d)^b x^a, T fixed (an anti-automorphism)."""
    out: dict = {}
    for (a1, a2, b1, b2, g1, g2, g3), c in a.terms.items():
        sign = -1 if (b1 + b2) % 2 else 1
        left = (0, 0, b1, b2, g1, g2, g3)
        right = (a1, a2, 0, 0, 0, 0, 0)
        for m, w in _mono_mul(left, right):
            v = out.get(m, ZERO) + c * sign * w
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return WeylOp(out, _trusted=True)


@dataclass(frozen=True)
class WeightSpec:
    """Weights on (x1, x2) and (d1, d2); fixed here to +1 on x and -1 on d."""

    x: tuple[int, int] = (1, 1)
    d: tuple[int, int] = (-1, -1)

    def __post_init__(self):
        if any(u + v != 0 for u, v in zip(self.x, self.d)):
            raise ValueError("only weights with x-weight + d-weight = 0 are supported")

    def vector(self) -> tuple[int, ...]:
        return self.x + self.d + (0, 0, 0)

    def of(self, e: WExp) -> int:
        return sum(w * k for w, k in zip(self.vector(), e))


PAPER_WEIGHT = WeightSpec()


def initial_form(a: WeylOp, w: WeightSpec = PAPER_WEIGHT) -> WeylOp:
    """Sum of the terms of ``a`` of maximal weight."""
    if not a.terms:
        raise ValueError("initial form of zero is undefined")
    top = max(w.of(e) for e in a.terms)
    return WeylOp({e: c for e, c in a.terms.items() if w.of(e) == top}, _trusted=True)


def euler_s() -> WeylOp:
    """s = -x1 d1 - x2 d2."""
    return WeylOp({(1, 0, 1, 0, 0, 0, 0): -ONE, (0, 1, 0, 1, 0, 0, 0): -ONE}, _trusted=True)


def poly_in_s(coeffs) -> WeylOp:
    """P(s) for ascending coefficient list ``coeffs``."""
    s = euler_s()
    out = WeylOp.const(0)
    power = WeylOp.const(1)
    for c in coeffs:
        if c:
            out = out + power * QQ(c)
        power = power * s
    return out


# ---------------------------------------------------------------------------
# action on polynomials
# ---------------------------------------------------------------------------

def act(a: WeylOp, f: CommPoly) -> CommPoly:
    """The natural action on R = Q[x1,x2] or on S = R[T1,T2,T3].

    x acts by multiplication, d by differentiation and T by multiplication
    (T only when ``f`` lives in S).
    """
    ctx = f.ctx
    if ctx == R_CTX:
        tpos = None
    elif ctx == S_CTX:
        tpos = (2, 3, 4)
    else:
        raise ValueError("the action is defined on R and S only")
    out = CommPoly.zero(ctx)
    for (a1, a2, b1, b2, g1, g2, g3), c in a.terms.items():
        if tpos is None and (g1 or g2 or g3):
            raise ValueError("T-variables do not act on R")
        h = f
        for _ in range(b1):
            h = h.derivative(0)
        for _ in range(b2):
            h = h.derivative(1)
        if not h:
            continue
        shift = [0] * ctx.nvars
        shift[0], shift[1] = a1, a2
        if tpos is not None:
            shift[2], shift[3], shift[4] = g1, g2, g3
        out = out + h.mul_term(tuple(shift), c)
    return out


# ---------------------------------------------------------------------------
# left modules
# ---------------------------------------------------------------------------

WeylVector = tuple  # tuple of WeylOp


def weyl_order(weighted: bool = False, weight: WeightSpec = PAPER_WEIGHT) -> MonomialOrder:
    """Degrevlex on (d1, d2, x1, x2, T1, T2, T3), optionally refined from a weight."""
    tb = MonomialOrder.degrevlex(perm=(2, 3, 0, 1, 4, 5, 6))
    if not weighted:
        return tb
    return MonomialOrder.weighted(weight.vector(), tb)


def _left_mul_elem(shift: WExp, g: Element) -> Element:
    out: dict = {}
    for (comp, e), c in g.items():
        for m, w in _mono_mul(shift, e):
            t = (comp, m)
            v = out.get(t, ZERO) + c * w
            if v:
                out[t] = v
            else:
                del out[t]
    return out


def _check_admissible(order: MonomialOrder) -> bool:
    """Term orders are fine; weight orders need x-weight + d-weight = 0."""
    if order.kind != "weighted":
        return order.is_global
    w = order.weights
    if len(w) != 7 or w[0] + w[2] != 0 or w[1] + w[3] != 0 or any(w[4:]):
        return False
    return order.tiebreak.is_global


class NonAdmissibleOrder(ValueError):
    pass


def _vec_to_elem(v) -> Element:
    if isinstance(v, WeylOp):
        return {(0, e): c for e, c in v.terms.items()}
    return {(i, e): c for i, comp in enumerate(v) for e, c in comp.terms.items()}


class WeylGroebnerBasis(GroebnerBasis):
    """Left Gröbner basis of a submodule of D^r (r = rank, or an ideal if None)."""

    def reducer(self) -> _Reducer:
        if self._reducer is None:
            red = _Reducer(self._term_key(), _left_mul_elem)
            for g in self._elements:
                red.add(g)
            self._reducer = red
        return self._reducer

    def _wrap(self, elem: Element):
        if self.rank is None:
            return WeylOp({e: c for (_, e), c in elem.items()}, _trusted=True)
        parts = [dict() for _ in range(self.rank)]
        for (i, e), c in elem.items():
            parts[i][e] = c
        return tuple(WeylOp(p, _trusted=True) for p in parts)

    def normal_form(self, v):
        return self._wrap(self.reducer().reduce(_vec_to_elem(v)))

    def contains(self, v) -> bool:
        return not self.reducer().reduce(_vec_to_elem(v))

    def is_groebner(self) -> bool:
        return all(not r for r in spoly_residues(self._elements, self._term_key(), _left_mul_elem))


def weyl_module_gb(gens: Sequence, order: MonomialOrder | ModuleOrder | None = None,
                   budget: int | None = None) -> WeylGroebnerBasis:
    """Left Gröbner basis of the submodule of D^r (or left ideal) spanned by ``gens``.

    ``gens`` are WeylOps (left ideal) or equal-length tuples of WeylOps.
    Weight-refined orders require weight-homogeneous generators, which keeps
    every reduction inside one weight space where the tiebreak order is
    well-founded.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    is_ideal = isinstance(gens[0], WeylOp)
    rank = None if is_ideal else len(gens[0])
    if order is None:
        order = weyl_order()
    mono = order.order if isinstance(order, ModuleOrder) else order
    if not _check_admissible(mono):
        raise NonAdmissibleOrder(f"{mono!r} is not admissible for the Weyl algebra")
    if mono.kind == "weighted":
        wv = mono.weights
        for g in gens:
            comps = [g] if is_ideal else list(g)
            ws = {sum(a * b for a, b in zip(wv, e)) for c in comps for e in c.terms}
            if len(ws) > 1:
                raise NonAdmissibleOrder("weight orders need weight-homogeneous generators")
    if is_ideal:
        if isinstance(order, ModuleOrder):
            raise ValueError("left ideals take a monomial order")
        k = order.key
        key = lambda t: k(t[1])  # noqa: E731
    else:
        if not isinstance(order, ModuleOrder):
            order = ModuleOrder(order, "top", rank=rank)
        key = order.key
    elems = buchberger((_vec_to_elem(g) for g in gens), key, mul=_left_mul_elem, budget=budget)
    gb = WeylGroebnerBasis([], order, True, None, rank, elems)
    gb.generators = [gb._wrap(e) for e in elems]
    return gb


def weyl_normal_form(v, gb: WeylGroebnerBasis):
    return gb.normal_form(v)


def matrix_str(rows: Sequence[Sequence[WeylOp]]) -> list[list[str]]:
    return [[str(e) for e in row] for row in rows]


def coefficient_str(c) -> str:
    return rational_str(c)
