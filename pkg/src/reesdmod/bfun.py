"""Restriction systems, component ideals and b-functions.

For a T-degree p the operators L1, L2 restrict to n x m matrices [L1], [L2]
of constant-coefficient operators between the spans of the T-monomials of
degrees p-2 (columns) and p-1 (rows), both listed lexicographically with
T1 > T2 > T3.  N = D^{2n} H is the row module of H = ([L1]; [L2]) inside D^m
and J_i = pi_i(N cap D e_i).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import univariate as uv
from .gb_comm import monomial_quotient_krull_dim
from .poly_core import ZERO, CommPoly, ModuleOrder, MonomialOrder, QQ, R_CTX, UNIVARIATE_S, monomials_of_degree
from .rees import HilbertBurchData
from .weyl import (
    PAPER_WEIGHT,
    NonAdmissibleOrder,
    WeightSpec,
    WeylGroebnerBasis,
    WeylOp,
    euler_s,
    weyl_module_gb,
    weyl_order,
)


class BFunctionCapExceeded(RuntimeError):
    pass


class TheoremBViolation(RuntimeError):
    pass


def t_monomials(degree: int) -> list[tuple[int, int, int]]:
    """T-exponents of the given degree, lexicographic with T1 > T2 > T3 (descending)."""
    if degree < 0:
        return []
    return monomials_of_degree(3, degree)


def _split_operator(L: WeylOp) -> list[WeylOp]:
    """Coefficients (a1, a2, a3) of L = a1 T1 + a2 T2 + a3 T3."""
    units = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    return [L.coefficient_of_T(u) for u in units]


@dataclass
class RestrictionSystem:
    p: int
    m: int
    n: int
    L1: list[list[WeylOp]]
    L2: list[list[WeylOp]]
    F: list[list[CommPoly]]
    cols: list[tuple[int, int, int]]
    rows: list[tuple[int, int, int]]
    d: int
    mu: int

    @property
    def H(self) -> list[list[WeylOp]]:
        return self.L1 + self.L2

    def row_vectors(self) -> list[tuple[WeylOp, ...]]:
        return [tuple(r) for r in self.H if any(not e.is_zero() for e in r)]

    def display(self) -> list[list[str]]:
        return [[str(e) if not e.is_zero() else "0" for e in row] for row in self.H]


def _restrict(coeffs: list[WeylOp], rows, cols) -> list[list[WeylOp]]:
    pos = {r: j for j, r in enumerate(rows)}
    zero = WeylOp.const(0)
    mat = [[zero for _ in cols] for _ in rows]
    for i, src in enumerate(cols):
        for k in range(3):
            dest = list(src)
            dest[k] += 1
            mat[pos[tuple(dest)]][i] = coeffs[k]
    return mat


def _dual_entry(a: WeylOp) -> CommPoly:
    """Inverse Fourier image of a pure-derivative entry: d_i -> x_i."""
    out = {}
    for e, c in a.terms.items():
        if e[0] or e[1] or any(e[4:]):
            raise ValueError("restriction entries must be pure derivative operators")
        out[(e[2], e[3])] = c
    return CommPoly(R_CTX, out, _trusted=True)


def restriction_matrices(hb: HilbertBurchData, p: int) -> RestrictionSystem:
    if p < 2:
        raise ValueError("restriction systems need p >= 2")
    cols = t_monomials(p - 2)
    rows = t_monomials(p - 1)
    l1 = _restrict(_split_operator(hb.L1), rows, cols)
    l2 = _restrict(_split_operator(hb.L2), rows, cols)
    F = [[_dual_entry(e) for e in row] for row in l1 + l2]
    return RestrictionSystem(p, len(cols), len(rows), l1, l2, F, cols, rows, hb.d, hb.mu)


# ---------------------------------------------------------------------------
# component ideals
# ---------------------------------------------------------------------------

def _pot_order(m: int, last: int) -> ModuleOrder:
    prio = [c for c in range(m) if c != last] + [last]
    return ModuleOrder(weyl_order(), "pot", priority=prio)


def component_ideal(sys: RestrictionSystem, i: int) -> list[WeylOp]:
    """Generators of J_i (``i`` is 0-based) from a POT basis with e_i last."""
    if not 0 <= i < sys.m:
        raise IndexError(f"component {i} out of range for m = {sys.m}")
    gens = sys.row_vectors()
    if sys.m == 1:
        return [v[0] for v in gens]
    gb = weyl_module_gb(gens, _pot_order(sys.m, i))
    out = []
    for v in gb.generators:
        if all(c.is_zero() for j, c in enumerate(v) if j != i):
            out.append(v[i])
    return out


def component_ideals(sys: RestrictionSystem) -> list[list[WeylOp]]:
    return [component_ideal(sys, i) for i in range(sys.m)]


# ---------------------------------------------------------------------------
# b-functions
# ---------------------------------------------------------------------------

def initial_ideal_basis(J: list[WeylOp], w: WeightSpec = PAPER_WEIGHT) -> WeylGroebnerBasis:
    """A Gröbner basis of in(J) for a weight-homogeneous J (then in(J) = J)."""
    J = [g for g in J if not g.is_zero()]
    if not J:
        raise ValueError("the zero ideal is not holonomic")
    for g in J:
        if len({w.of(e) for e in g.terms}) > 1:
            raise NonAdmissibleOrder(
                "initial ideals of weight-inhomogeneous ideals need the homogenized Weyl algebra")
    return weyl_module_gb(J, weyl_order())


def ideal_bfunction(J: list[WeylOp], w: WeightSpec = PAPER_WEIGHT, cap: int = 32) -> list:
    """Monic generator of in(J) cap Q[s], as ascending coefficients.

    Normal forms of 1, s, s^2, ... modulo a basis of in(J) are collected
    until the first linear dependence.
    """
    gb = initial_ideal_basis(J, w)
    if gb.contains(WeylOp.const(1)):
        return [QQ(1)]
    s = euler_s()
    power = WeylOp.const(1)
    basis: list[tuple[dict, list]] = []  # (reduced vector, combination of s-powers)
    for k in range(cap + 1):
        nf = dict(gb.normal_form(power).terms)
        combo = [ZERO] * k + [QQ(1)]
        for vec, comb_ in basis:
            piv = max(vec)
            c = nf.get(piv)
            if c:
                for t, v in vec.items():
                    nv = nf.get(t, ZERO) - c * v
                    if nv:
                        nf[t] = nv
                    else:
                        nf.pop(t, None)
                for j, v in enumerate(comb_):
                    combo[j] -= c * v
        if not nf:
            return uv._monic(combo)
        piv = max(nf)
        inv = 1 / nf[piv]
        nf = {t: v * inv for t, v in nf.items()}
        combo = [v * inv for v in combo]
        basis.append((nf, combo))
        power = power * s
    raise BFunctionCapExceeded(f"b-function degree cap exceeded (cap = {cap})")


@dataclass
class BFunctionResult:
    p: int
    components: list[list]
    b: list
    roots: list[tuple[int, int]] = field(default_factory=list)

    @property
    def factored(self) -> str:
        return uv.format_factored(self.b)

    def component_factored(self) -> list[str]:
        return [uv.format_factored(c) for c in self.components]

    def as_poly(self) -> CommPoly:
        return uv.from_coeffs(self.b, UNIVARIATE_S)


def module_bfunction(sys: RestrictionSystem, cap: int | None = None, jobs: int = 1) -> BFunctionResult:
    """b_M = lcm of the component b-functions."""
    if cap is None:
        cap = 4 * (sys.d + sys.p)
    ideals = component_ideals(sys)
    comps = [ideal_bfunction(J, cap=cap) for J in ideals]
    b = uv.lcm_many(comps)
    roots, rest = uv.rational_roots(b)
    int_roots = [(int(r), k) for r, k in roots if r.denominator == 1]
    return BFunctionResult(sys.p, comps, b, int_roots)


def module_gb_top(sys: RestrictionSystem) -> WeylGroebnerBasis:
    return weyl_module_gb(sys.row_vectors(), ModuleOrder(weyl_order(), "top", rank=sys.m))


def holonomicity_check(sys: RestrictionSystem | None = None, gens=None,
                       rank: int | None = None) -> tuple[bool, int]:
    """Bernstein dimension of D^m/N from the leading module of a degree-compatible basis.

    Returns (holonomic, dimension); holonomic means every nonzero component
    quotient of the associated graded module has dimension 2.
    """
    if sys is not None:
        gens, rank = sys.row_vectors(), sys.m
    if rank is None:
        rank = 1
    vecs = [g if isinstance(g, tuple) else (g,) for g in gens]
    gb = weyl_module_gb(vecs, ModuleOrder(weyl_order(), "top", rank=rank))
    leads = [(c, e[:4]) for c, e in gb.leading_terms()]
    if any(any(e[4:]) for _, e in gb.leading_terms()):
        raise ValueError("holonomicity is checked on T-free systems only")
    dim, per = monomial_quotient_krull_dim(leads, 4, rank)
    ok = dim == 2 and all(v in (2, -1) for v in per)
    return ok, dim


# ---------------------------------------------------------------------------
# support formula
# ---------------------------------------------------------------------------

@dataclass
class SupportVerdict:
    support: set[int]
    in_range: bool
    simple: bool
    diagnostic: str = ""


def theorem_b_support(b: BFunctionResult | list, d: int) -> SupportVerdict:
    """{q : b_M(-d+2+q) = 0}, plus whether the roots sit in [-(d-2), 0] and are simple."""
    coeffs = b.b if isinstance(b, BFunctionResult) else b
    roots, rest = uv.rational_roots(coeffs)
    support = set()
    in_range = len(rest) <= 1
    simple = True
    bad = []
    for r, mult in roots:
        if r.denominator != 1 or not -(d - 2) <= r <= 0:
            in_range = False
            bad.append(str(r))
        if mult > 1:
            simple = False
        if r.denominator == 1:
            support.add(int(r) + d - 2)
    diag = ""
    if bad or len(rest) > 1:
        diag = f"Theorem B violation: roots outside the integers in [-(d-2), 0]: {bad or 'irrational factor'}"
    return SupportVerdict(support, in_range, simple, diag)


@dataclass
class TheoremBVerdict:
    passed: bool
    table_support: list[int]
    b_support: list[int]
    expected: list
    detail: str


def verify_theorem_b(table, b: BFunctionResult, p: int) -> TheoremBVerdict:
    """Compare the table support with the b-function roots and the product formula."""
    d = table.d
    tsup = table.support(p)
    sv = theorem_b_support(b, d)
    expected = uv.product_of_shifts(d - 2 - q for q in tsup)
    ok = set(tsup) == sv.support and sv.in_range and sv.simple and uv._trim(b.b) == uv._trim(expected)
    detail = "" if ok else (f"support from table {tsup} vs roots {sorted(sv.support)}; "
                            f"b = {uv.format_factored(b.b)}, expected {uv.format_factored(expected)}")
    return TheoremBVerdict(ok, tsup, sorted(sv.support), expected, detail)


def corollary_divisibility(b: BFunctionResult, q_min: int, d: int) -> bool:
    """s(s+1)...(s+d-2-q_min) divides b_M."""
    need = uv.product_of_shifts(range(d - 2 - q_min + 1))
    return not uv._divmod(b.b, need)[1]


def expected_family_b(p: int) -> list:
    """prod_{k=0}^{p-2} (s + k)."""
    return uv.product_of_shifts(range(p - 1))


def column_count(p: int) -> int:
    return comb(p, 2)
