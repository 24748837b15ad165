"""Sparse exact-rational polynomials over the small commutative rings used here.

Coefficients are ``gmpy2.mpq`` values, which stay reduced with a positive
denominator after every operation.  A polynomial is a map from exponent
tuples to nonzero coefficients, tied to a :class:`RingContext` that names
the variables and carries their bidegrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

import gmpy2
from gmpy2 import mpq

Rational = type(mpq(0))
ExpVec = tuple[int, ...]

ZERO = mpq(0)
ONE = mpq(1)


def QQ(value) -> Rational:
    """Coerce ints, strings like ``"3/4"``, Fractions and mpq to an mpq."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int) or type(value).__name__ == "mpz":
        return mpq(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to a rational")


def rational_str(c: Rational) -> str:
    """Render as ``num`` or ``num/den``."""
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class ContextMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    pass


class UndefinedBidegree(ValueError):
    pass


@dataclass(frozen=True)
class RingContext:
    names: tuple[str, ...]
    bidegrees: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if self.bidegrees is not None and len(self.bidegrees) != len(self.names):
            raise ValueError("one bidegree per variable is required")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def bidegree(self, exp: ExpVec) -> tuple[int, int]:
        if self.bidegrees is None:
            raise UndefinedBidegree("context carries no bigrading")
        p = q = 0
        for e, (a, b) in zip(exp, self.bidegrees):
            p += e * a
            q += e * b
        return p, q

    def gen(self, name: str) -> "CommPoly":
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return CommPoly(self, {tuple(exp): ONE})

    def gens(self) -> list["CommPoly"]:
        return [self.gen(n) for n in self.names]

    def extend(self, names: Sequence[str], bidegrees=None, front: bool = False) -> "RingContext":
        if self.bidegrees is None or bidegrees is None:
            bideg = None
        else:
            bideg = tuple(bidegrees) + self.bidegrees if front else self.bidegrees + tuple(bidegrees)
        new = tuple(names) + self.names if front else self.names + tuple(names)
        return RingContext(new, bideg)


R_CTX = RingContext(("x1", "x2"), ((0, 1), (0, 1)))
U_CTX = RingContext(("T1", "T2", "T3"), ((1, 0), (1, 0), (1, 0)))
S_CTX = RingContext(("x1", "x2", "T1", "T2", "T3"), ((0, 1), (0, 1), (1, 0), (1, 0), (1, 0)))
B_CTX = RingContext(("x1", "x2", "d1", "d2"))
UNIVARIATE_S = RingContext(("s",))


# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------

class MonomialOrder:
    """A monomial order on exponent tuples, exposed through a sort key.

    ``key(m1) < key(m2)`` iff ``m1 < m2``.  ``perm`` lists variable indices
    from most to least significant, so ``degrevlex(perm=(1, 0))`` treats the
    second variable as the first one.
    """

    KINDS = ("lex", "degrevlex", "weighted", "block")

    def __init__(self, kind: str, *, perm: Sequence[int] | None = None,
                 weights: Sequence[int] | None = None,
                 tiebreak: "MonomialOrder | None" = None,
                 blocks: Sequence[int] | None = None,
                 orders: Sequence["MonomialOrder"] | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown order kind {kind!r}")
        self.kind = kind
        self.perm = tuple(perm) if perm is not None else None
        self.weights = tuple(weights) if weights is not None else None
        self.tiebreak = tiebreak
        self.blocks = tuple(blocks) if blocks is not None else None
        self.orders = tuple(orders) if orders is not None else None
        if kind == "weighted" and (self.weights is None or tiebreak is None):
            raise ValueError("weighted order needs weights and a tiebreak order")
        if kind == "block":
            if not self.blocks or self.orders is None or len(self.orders) != len(self.blocks):
                raise ValueError("block order needs block sizes and one order per block")
        self.key = self._make_key()

    @classmethod
    def lex(cls, perm=None) -> "MonomialOrder":
        return cls("lex", perm=perm)

    @classmethod
    def degrevlex(cls, perm=None) -> "MonomialOrder":
        return cls("degrevlex", perm=perm)

    @classmethod
    def weighted(cls, weights, tiebreak=None) -> "MonomialOrder":
        return cls("weighted", weights=weights, tiebreak=tiebreak or cls.degrevlex())

    @classmethod
    def block(cls, blocks, orders=None) -> "MonomialOrder":
        if orders is None:
            orders = [cls.degrevlex() for _ in blocks]
        return cls("block", blocks=blocks, orders=orders)

    def _make_key(self):
        perm = self.perm
        if self.kind == "lex":
            if perm is None:
                return lambda e: e
            return lambda e: tuple(e[i] for i in perm)
        if self.kind == "degrevlex":
            if perm is None:
                return lambda e: (sum(e), tuple(-v for v in reversed(e)))
            rperm = tuple(reversed(perm))
            return lambda e: (sum(e), tuple(-e[i] for i in rperm))
        if self.kind == "weighted":
            w = self.weights
            tb = self.tiebreak.key
            return lambda e: (sum(a * b for a, b in zip(w, e)), tb(e))
        cuts = []
        start = 0
        for size in self.blocks:
            cuts.append((start, start + size))
            start += size
        keys = [o.key for o in self.orders]
        parts = list(zip(cuts, keys))
        return lambda e: tuple(k(e[a:b]) for (a, b), k in parts)

    def compare(self, m1: ExpVec, m2: ExpVec) -> int:
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    @property
    def is_global(self) -> bool:
        """True when 1 is the smallest monomial (a term order)."""
        if self.kind == "weighted":
            return all(w >= 0 for w in self.weights) and self.tiebreak.is_global
        if self.kind == "block":
            return all(o.is_global for o in self.orders)
        return True

    def __repr__(self):
        extra = []
        if self.perm is not None:
            extra.append(f"perm={self.perm}")
        if self.weights is not None:
            extra.append(f"weights={self.weights}, tiebreak={self.tiebreak!r}")
        if self.blocks is not None:
            extra.append(f"blocks={self.blocks}, orders={list(self.orders)!r}")
        return f"MonomialOrder({self.kind}{', ' if extra else ''}{', '.join(extra)})"


class ModuleOrder:
    """Order on terms ``(component, exponent)`` of a free module.

    ``priority`` lists components from most to least significant; by default
    component 0 is the largest.
    """

    def __init__(self, order: MonomialOrder, strategy: str = "pot",
                 priority: Sequence[int] | None = None, rank: int | None = None):
        if strategy not in ("pot", "top"):
            raise ValueError("strategy must be 'pot' or 'top'")
        self.order = order
        self.strategy = strategy
        if priority is None:
            if rank is None:
                raise ValueError("give either a priority permutation or the rank")
            priority = range(rank)
        self.priority = tuple(priority)
        n = len(self.priority)
        if sorted(self.priority) != list(range(n)):
            raise ValueError("priority must be a permutation of the components")
        rank_of = [0] * n
        for pos, comp in enumerate(self.priority):
            rank_of[comp] = n - pos
        self.rank_of = tuple(rank_of)
        tkey = order.key
        if strategy == "pot":
            self.key = lambda t: (rank_of[t[0]], tkey(t[1]))
        else:
            self.key = lambda t: (tkey(t[1]), rank_of[t[0]])

    def compare(self, t1, t2) -> int:
        k1, k2 = self.key(t1), self.key(t2)
        return (k1 > k2) - (k1 < k2)

    def __repr__(self):
        return f"ModuleOrder({self.order!r}, {self.strategy!r}, priority={self.priority})"


def monomial_compare(order: MonomialOrder, m1: ExpVec, m2: ExpVec) -> str:
    c = order.compare(m1, m2)
    return {-1: "lt", 0: "eq", 1: "gt"}[c]


# ---------------------------------------------------------------------------
# Exponent helpers
# ---------------------------------------------------------------------------

def exp_add(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x - y for x, y in zip(a, b))


def exp_divides(a: ExpVec, b: ExpVec) -> bool:
    return all(x <= y for x, y in zip(a, b))


def exp_lcm(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x if x > y else y for x, y in zip(a, b))


def monomials_of_degree(nvars: int, degree: int) -> list[ExpVec]:
    """All exponent tuples of the given total degree, lexicographically descending."""
    if degree < 0:
        return []
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

_DEFAULT_ORDER = MonomialOrder.degrevlex()


class CommPoly:
    """Immutable sparse polynomial ``{exponent tuple: mpq}`` over a context."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: RingContext, terms: Mapping[ExpVec, object] | None = None,
                 _trusted: bool = False):
        self.ctx = ctx
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            n = ctx.nvars
            for e, c in (terms or {}).items():
                e = tuple(int(v) for v in e)
                if len(e) != n or any(v < 0 for v in e):
                    raise ValueError(f"bad exponent {e} for context {ctx.names}")
                c = QQ(c)
                if c:
                    clean[e] = clean.get(e, ZERO) + c
                    if not clean[e]:
                        del clean[e]
            self.terms = clean
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def constant(cls, ctx: RingContext, c) -> "CommPoly":
        c = QQ(c)
        return cls(ctx, {(0,) * ctx.nvars: c} if c else {}, _trusted=True)

    @classmethod
    def monomial(cls, ctx: RingContext, exp: ExpVec, c=1) -> "CommPoly":
        c = QQ(c)
        return cls(ctx, {tuple(exp): c} if c else {}, _trusted=True)

    @classmethod
    def zero(cls, ctx: RingContext) -> "CommPoly":
        return cls(ctx, {}, _trusted=True)

    # basic predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[ExpVec, Rational]]:
        return iter(self.terms.items())

    def _check(self, other: "CommPoly"):
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx.names} vs {other.ctx.names}")

    def _coerce(self, other) -> "CommPoly":
        if isinstance(other, CommPoly):
            self._check(other)
            return other
        return CommPoly.constant(self.ctx, other)

    # arithmetic ---------------------------------------------------------------
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
        return CommPoly(self.ctx, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return CommPoly(self.ctx, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CommPoly):
            self._check(other)
            out: dict[ExpVec, Rational] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    v = out.get(e, ZERO) + c1 * c2
                    if v:
                        out[e] = v
                    else:
                        out.pop(e, None)
            return CommPoly(self.ctx, out, _trusted=True)
        try:
            c = QQ(other)
        except TypeError:
            return NotImplemented
        if not c:
            return CommPoly.zero(self.ctx)
        return CommPoly(self.ctx, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = CommPoly.constant(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_term(self, exp: ExpVec, c) -> "CommPoly":
        c = QQ(c)
        if not c:
            return CommPoly.zero(self.ctx)
        return CommPoly(self.ctx, {exp_add(e, exp): v * c for e, v in self.terms.items()},
                        _trusted=True)

    def divide(self, other: "CommPoly", order: MonomialOrder = _DEFAULT_ORDER) -> "CommPoly":
        """Exact quotient; raises :class:`NotDivisible` when the remainder is nonzero."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        lm, lc = other.leading_term(order)
        rem = dict(self.terms)
        quo: dict[ExpVec, Rational] = {}
        key = order.key
        while rem:
            m = max(rem, key=key)
            if not exp_divides(lm, m):
                raise NotDivisible(f"{other} does not divide {self}")
            q = rem[m] / lc
            shift = exp_sub(m, lm)
            quo[shift] = q
            for e, c in other.terms.items():
                t = exp_add(e, shift)
                v = rem.get(t, ZERO) - q * c
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return CommPoly(self.ctx, quo, _trusted=True)

    def __eq__(self, other):
        if isinstance(other, CommPoly):
            return self.ctx == other.ctx and self.terms == other.terms
        try:
            return self == CommPoly.constant(self.ctx, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    # structure ----------------------------------------------------------------
    def leading_term(self, order: MonomialOrder = _DEFAULT_ORDER) -> tuple[ExpVec, Rational]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder = _DEFAULT_ORDER) -> ExpVec:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = _DEFAULT_ORDER) -> "CommPoly":
        if not self.terms:
            return self
        return self * (1 / self.leading_term(order)[1])

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        if not self.terms:
            return True
        w = weights or (1,) * self.ctx.nvars
        degs = {sum(a * b for a, b in zip(w, e)) for e in self.terms}
        return len(degs) == 1

    def bidegree(self) -> tuple[int, int] | str:
        """The common bidegree of all terms, or ``"inhomogeneous"``."""
        if not self.terms:
            raise UndefinedBidegree("the zero polynomial has no bidegree")
        degs = {self.ctx.bidegree(e) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return "inhomogeneous"

    def variables(self) -> set[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, v in enumerate(e) if v)
        return used

    def coefficient(self, exp: ExpVec) -> Rational:
        return self.terms.get(tuple(exp), ZERO)

    def derivative(self, i: int) -> "CommPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return CommPoly(self.ctx, out, _trusted=True)

    def evaluate(self, values: Mapping[int, "CommPoly"], target: RingContext) -> "CommPoly":
        """Substitute variable ``i`` by ``values[i]`` (a polynomial over ``target``).

        Variables absent from ``values`` must not occur.
        """
        result = CommPoly.zero(target)
        for e, c in self.terms.items():
            term = CommPoly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * values[i] ** k
            result = result + term
        return result

    def recontext(self, target: RingContext, mapping: Sequence[int | None]) -> "CommPoly":
        """Move into ``target``; ``mapping[i]`` is the target index of variable ``i``.

        A ``None`` entry drops a variable, which must then not occur.
        """
        out = {}
        for e, c in self.terms.items():
            ne = [0] * target.nvars
            for i, k in enumerate(e):
                if k:
                    j = mapping[i]
                    if j is None:
                        raise ValueError(f"variable {self.ctx.names[i]} cannot be dropped")
                    ne[j] += k
            out[tuple(ne)] = c
        return CommPoly(target, out, _trusted=True)

    # printing -----------------------------------------------------------------
    def sorted_terms(self, order: MonomialOrder = _DEFAULT_ORDER) -> list[tuple[ExpVec, Rational]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def to_str(self, names: Sequence[str] | None = None,
               order: MonomialOrder = _DEFAULT_ORDER) -> str:
        return format_terms(self.sorted_terms(order), names or self.ctx.names)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"CommPoly({self.to_str()!r})"


def format_monomial(exp: ExpVec, names: Sequence[str]) -> str:
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_terms(terms: Iterable[tuple[ExpVec, Rational]], names: Sequence[str]) -> str:
    out = []
    for exp, c in terms:
        mono = format_monomial(exp, names)
        mag = abs(c)
        if not mono:
            body = rational_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{rational_str(mag)}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out) if out else "0"


@dataclass(frozen=True)
class CommVector:
    """Element of a free module over a CommPoly ring, with per-component shifts."""

    components: tuple[CommPoly, ...]
    shifts: tuple[tuple[int, int], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a vector needs at least one component")
        ctx = comps[0].ctx
        if any(c.ctx != ctx for c in comps):
            raise ContextMismatch("vector components must share a context")
        if self.shifts is not None and len(self.shifts) != len(comps):
            raise ValueError("one shift per component")

    @property
    def ctx(self) -> RingContext:
        return self.components[0].ctx

    @property
    def rank(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "CommVector") -> "CommVector":
        return CommVector(tuple(a + b for a, b in zip(self.components, other.components)), self.shifts)

    def __sub__(self, other: "CommVector") -> "CommVector":
        return CommVector(tuple(a - b for a, b in zip(self.components, other.components)), self.shifts)

    def scale(self, f) -> "CommVector":
        return CommVector(tuple(c * f for c in self.components), self.shifts)

    def to_terms(self) -> dict[tuple[int, ExpVec], Rational]:
        return {(i, e): c for i, comp in enumerate(self.components) for e, c in comp.terms.items()}

    @classmethod
    def from_terms(cls, ctx: RingContext, rank: int, terms, shifts=None) -> "CommVector":
        parts: list[dict] = [{} for _ in range(rank)]
        for (i, e), c in terms.items():
            parts[i][e] = c
        return cls(tuple(CommPoly(ctx, p, _trusted=True) for p in parts), shifts)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.components) + "]"


def enumerate_monomials(ctx: RingContext, bidegree: tuple[int, int],
                        order: MonomialOrder = _DEFAULT_ORDER) -> list[ExpVec]:
    """All monomials of ``ctx`` of exactly the given bidegree, sorted descending.

    Each variable must have bidegree (1,0) or (0,1).
    """
    if ctx.bidegrees is None:
        raise UndefinedBidegree("context carries no bigrading")
    p, q = bidegree
    if p < 0 or q < 0:
        return []
    first = [i for i, b in enumerate(ctx.bidegrees) if b == (1, 0)]
    second = [i for i, b in enumerate(ctx.bidegrees) if b == (0, 1)]
    if len(first) + len(second) != ctx.nvars:
        raise ValueError("enumeration needs every variable of bidegree (1,0) or (0,1)")
    out = []
    for ea in monomials_of_degree(len(first), p):
        for eb in monomials_of_degree(len(second), q):
            e = [0] * ctx.nvars
            for i, v in zip(first, ea):
                e[i] = v
            for i, v in zip(second, eb):
                e[i] = v
            out.append(tuple(e))
    out.sort(key=order.key, reverse=True)
    return out


def count_bigraded_monomials(p: int, q: int) -> int:
    """dim S_{p,q} for S = Q[x1,x2,T1,T2,T3]."""
    if p < 0 or q < 0:
        return 0
    return comb(p + 2, 2) * (q + 1)


def poly_gcd_content(values: Iterable[Rational]) -> Rational:
    vals = [v for v in values if v]
    if not vals:
        return ZERO
    num = reduce(gmpy2.gcd, (v.numerator for v in vals))
    den = reduce(gmpy2.lcm, (v.denominator for v in vals))
    return mpq(num, den)
