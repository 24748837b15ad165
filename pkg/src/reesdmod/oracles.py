"""Independent checks on dim K_{p,q}.

* ``local_cohomology_solution_dim``: solutions of g1 w = g2 w = 0 in the
  inverse-polynomial model of H^2_m(R) tensored with U_{p-2}.
* ``polynomial_solution_dim``: polynomial solutions of the restricted
  differential system [L1] h = [L2] h = 0 in degree k = d - 2 - q.
* ``dual_module_graded_dims``: graded pieces of L = R^m / R^{2n} F.
* ``derham_h0_truncated``: the joint kernel of d1, d2 on a presentation of
  Q_p, truncated by total operator degree.

The first two are plain linear algebra over Q; no Gröbner basis is involved.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb

from .bfun import RestrictionSystem, t_monomials
from .gb_comm import GradedDims, groebner_basis, monomial_quotient_krull_dim
from .linalg import IntEchelon
from .poly_core import ZERO, CommVector, ModuleOrder, MonomialOrder, R_CTX, monomials_of_degree
from .rees import HilbertBurchData
from .weyl import WeylOp, weyl_module_gb, weyl_order


class InfiniteLength(RuntimeError):
    pass


class TruncationBudgetExceeded(RuntimeError):
    def __init__(self, msg, trace):
        super().__init__(msg)
        self.trace = trace


def inverse_monomials(j: int) -> list[tuple[int, int]]:
    """Exponents a with x^{-a} spanning H^2_m(R)_j: a_i >= 1, a1 + a2 = -j."""
    return [(a, -j - a) for a in range(1, -j)]


def _kernel_dim(columns: list[dict]) -> int:
    ech = IntEchelon()
    for c in columns:
        ech.add(c)
    return len(columns) - ech.rank


# ---------------------------------------------------------------------------
# local cohomology
# ---------------------------------------------------------------------------

def local_cohomology_solution_dim(hb: HilbertBurchData, p: int, q: int) -> int:
    """dim {w in H^2_m(R)_{q-d} (x) U_{p-2} : g1 w = g2 w = 0}."""
    if p < 2:
        return 0
    inv = inverse_monomials(q - hb.d)
    if not inv:
        return 0
    gammas = t_monomials(p - 2)
    gterms = [list(hb.g1.terms.items()), list(hb.g2.terms.items())]
    columns = []
    for a in inv:
        for gam in gammas:
            col: dict = {}
            for w, terms in enumerate(gterms):
                for e, c in terms:
                    b1, b2 = a[0] - e[0], a[1] - e[1]
                    if b1 < 1 or b2 < 1:
                        continue  # x^c kills x^{-a} unless both exponents stay negative
                    key = (w, b1, b2, gam[0] + e[2], gam[1] + e[3], gam[2] + e[4])
                    v = col.get(key, ZERO) + c
                    if v:
                        col[key] = v
                    else:
                        col.pop(key)
            columns.append(col)
    return _kernel_dim(columns)


# ---------------------------------------------------------------------------
# polynomial solutions
# ---------------------------------------------------------------------------

def _falling(a: int, b: int) -> int:
    out = 1
    for t in range(b):
        out *= a - t
    return out


def polynomial_solution_dim(hb_or_sys, p: int | None = None, k: int = 0) -> int:
    """dim of degree-k vectors h in R^m with [L1] h = [L2] h = 0."""
    sys = hb_or_sys
    if isinstance(hb_or_sys, HilbertBurchData):
        from .bfun import restriction_matrices
        sys = restriction_matrices(hb_or_sys, p)
    if k < 0:
        return 0
    mons = monomials_of_degree(2, k)
    columns = []
    H = sys.H
    for i in range(sys.m):
        for a in mons:
            col: dict = {}
            for j, row in enumerate(H):
                op = row[i]
                for e, c in op.terms.items():
                    b = (e[2], e[3])
                    if b[0] > a[0] or b[1] > a[1]:
                        continue
                    w = c * _falling(a[0], b[0]) * _falling(a[1], b[1])
                    key = (j, a[0] - b[0], a[1] - b[1])
                    v = col.get(key, ZERO) + w
                    if v:
                        col[key] = v
                    else:
                        col.pop(key)
            columns.append(col)
    return _kernel_dim(columns)


# ---------------------------------------------------------------------------
# dual module
# ---------------------------------------------------------------------------

@dataclass
class DualModule:
    dims: GradedDims
    end: int | None
    fourier_ok: bool


def fourier_structure_ok(sys: RestrictionSystem) -> bool:
    """F is H with every d_i replaced by x_i (inverse Fourier image, entrywise)."""
    for hrow, frow in zip(sys.H, sys.F):
        for h, f in zip(hrow, frow):
            back = WeylOp({(0, 0, e[0], e[1], 0, 0, 0): c for e, c in f.terms.items()})
            if back != h:
                return False
    return True


def dual_module_graded_dims(sys: RestrictionSystem) -> DualModule:
    rows = [CommVector(tuple(r)) for r in sys.F if any(not c.is_zero() for c in r)]
    gb = groebner_basis(rows, ModuleOrder(MonomialOrder.degrevlex(), "top", rank=sys.m))
    leads = gb.leading_terms()
    _, per = monomial_quotient_krull_dim(leads, 2, sys.m)
    if any(v > 0 for v in per):
        raise InfiniteLength("unexpected infinite length: L has positive Krull dimension")
    # every component contains pure powers of x1 and x2, which bound the degree
    top = 0
    for c in range(sys.m):
        p1 = min((e[0] for cc, e in leads if cc == c and e[1] == 0), default=0)
        p2 = min((e[1] for cc, e in leads if cc == c and e[0] == 0), default=0)
        top = max(top, p1 + p2)
    by_comp: dict[int, list] = {}
    for c, e in leads:
        by_comp.setdefault(c, []).append(e)
    dims = {}
    for k in range(top + 1):
        n = 0
        for c in range(sys.m):
            ls = by_comp.get(c, [])
            for mono in monomials_of_degree(2, k):
                if not any(l[0] <= mono[0] and l[1] <= mono[1] for l in ls):
                    n += 1
        if n:
            dims[k] = n
    gd = GradedDims(dims)
    return DualModule(gd, gd.end(), fourier_structure_ok(sys))


# ---------------------------------------------------------------------------
# de Rham
# ---------------------------------------------------------------------------

@dataclass
class DeRhamPresentation:
    """Q_p = D^r / D-span of the rows T^gamma L1, T^gamma L2 (|gamma| = p - 1)."""

    p: int
    r: int
    gb: object
    leads: dict  # component -> list of d-exponents
    _nf_cache: dict = field(default_factory=dict)

    def is_standard(self, j: int, b: tuple[int, int]) -> bool:
        return not any(l[0] <= b[0] and l[1] <= b[1] for l in self.leads.get(j, ()))

    def standard(self, beta: int) -> list[tuple[int, tuple[int, int]]]:
        return [(j, b) for j in range(self.r) for b in monomials_of_degree(2, beta)
                if self.is_standard(j, b)]

    def nf(self, j: int, b: tuple[int, int]) -> dict:
        """Normal form of d^b e_j as {(comp, d-exponent): coeff}."""
        key = (j, b)
        hit = self._nf_cache.get(key)
        if hit is None:
            vec = [WeylOp.const(0)] * self.r
            vec[j] = WeylOp.monomial((0, 0, b[0], b[1], 0, 0, 0))
            red = self.gb.normal_form(tuple(vec))
            hit = {}
            for c, op in enumerate(red):
                for e, v in op.terms.items():
                    hit[(c, (e[2], e[3]))] = v
            self._nf_cache[key] = hit
        return hit


def derham_presentation(sys: RestrictionSystem, hb: HilbertBurchData,
                        budget: int | None = None) -> DeRhamPresentation:
    p = sys.p
    deltas = t_monomials(p)
    gammas = t_monomials(p - 1)
    pos = {dlt: j for j, dlt in enumerate(deltas)}
    zero = WeylOp.const(0)
    units = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    gens = []
    for L in (hb.L1, hb.L2):
        coeffs = [L.coefficient_of_T(u) for u in units]
        for gam in gammas:
            row = [zero] * len(deltas)
            for k in range(3):
                dest = list(gam)
                dest[k] += 1
                row[pos[tuple(dest)]] = coeffs[k]
            gens.append(tuple(row))
    gb = weyl_module_gb(gens, ModuleOrder(weyl_order(), "top", rank=len(deltas)), budget=budget)
    leads: dict = {}
    for c, e in gb.leading_terms():
        if e[0] or e[1] or any(e[4:]):
            raise ValueError("presentation basis left the pure-derivative subring")
        leads.setdefault(c, []).append((e[2], e[3]))
    return DeRhamPresentation(p, len(deltas), gb, leads)


def derham_h0_dim(pres: DeRhamPresentation, N: int, size_budget: int | None = None) -> int:
    """dim of the joint kernel of d1, d2 on classes with a representative of degree <= N.

    The span V_N of standard words x^a d^b e_j with |a| + |b| <= N is mapped
    into itself by d_i, and d_i lowers the weight |a| - |b| by one, so the
    kernel is computed one weight at a time.
    """
    if N < 0:
        return 0
    words_by_weight: dict[int, list] = {}
    total = 0
    for beta in range(N + 1):
        std = pres.standard(beta)
        for alpha in range(N - beta + 1):
            for a in monomials_of_degree(2, alpha):
                for j, b in std:
                    words_by_weight.setdefault(alpha - beta, []).append((a, j, b))
                    total += 1
    if size_budget is not None and total > size_budget:
        raise TruncationBudgetExceeded(f"truncation budget exceeded: {total} words at N = {N}", [])
    dim = 0
    for w, words in words_by_weight.items():
        cols = []
        for a, j, b in words:
            col: dict = {}
            for i in (0, 1):
                b2 = (b[0] + (i == 0), b[1] + (i == 1))
                for (c, bb), v in pres.nf(j, b2).items():
                    key = (i, a, c, bb)
                    nv = col.get(key, ZERO) + v
                    if nv:
                        col[key] = nv
                    else:
                        col.pop(key)
                if a[i]:
                    a2 = (a[0] - (i == 0), a[1] - (i == 1))
                    key = (i, a2, j, b)
                    nv = col.get(key, ZERO) + a[i]
                    if nv:
                        col[key] = nv
                    else:
                        col.pop(key)
            cols.append(col)
        dim += _kernel_dim(cols)
    return dim


@dataclass
class DeRhamResult:
    dim: int
    stabilized: bool
    N: int
    verified: bool
    trace: list  # (N, dim)
    seconds: float


def derham_h0_truncated(sys: RestrictionSystem, hb: HilbertBurchData, N: int,
                        pres: DeRhamPresentation | None = None) -> tuple[int, bool]:
    """(dim at N, whether it equals the dim at N - 1)."""
    pres = pres or derham_presentation(sys, hb)
    a = derham_h0_dim(pres, N)
    b = derham_h0_dim(pres, N - 1)
    return a, a == b


def derham_schedule(sys: RestrictionSystem, hb: HilbertBurchData, target: int,
                    size_budget: int = 60000, N0: int | None = None) -> DeRhamResult:
    """Start at N = d + p and double until the dimension is stable and hits the target."""
    t0 = time.perf_counter()
    pres = derham_presentation(sys, hb)
    N = N0 if N0 is not None else hb.d + sys.p
    trace = []
    while True:
        try:
            prev = derham_h0_dim(pres, N - 1, size_budget)
            cur = derham_h0_dim(pres, N, size_budget)
        except TruncationBudgetExceeded as exc:
            raise TruncationBudgetExceeded(str(exc), trace) from None
        trace.append((N - 1, prev))
        trace.append((N, cur))
        stable = prev == cur
        if stable and cur == target:
            return DeRhamResult(cur, True, N, True, trace, time.perf_counter() - t0)
        N *= 2


# ---------------------------------------------------------------------------
# aggregate
# ---------------------------------------------------------------------------

@dataclass
class OracleReport:
    dims: dict = field(default_factory=dict)  # (p,q) -> {"table":..,"thD":..,"thA":..,"dual":..}
    flags: dict = field(default_factory=dict)
    derham: dict = field(default_factory=dict)


def expected_top_row(p: int) -> int:
    return comb(p, 2)
