"""Commutative side: input validation, Hilbert-Burch data, Rees ideal and the K table.

For I = (f1, f2, f3) in R = Q[x1, x2] of height two, generated by three forms
of degree d, the syzygy matrix phi has column degrees mu <= d - mu and the
symmetric algebra is S/(g1, g2) with [g1, g2] = [T1, T2, T3] * phi.  The
kernel K of Sym(I) -> Rees(I) is REQ/(g1, g2), bigraded by (T-degree,
x-degree).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .gb_comm import (
    DataViolation,
    GroebnerBasis,
    eliminate,
    groebner_basis,
    monomial_quotient_krull_dim,
    saturate,
    syzygy_module,
)
from .linalg import IntEchelon, rank
from .poly_core import (
    CommPoly,
    MonomialOrder,
    R_CTX,
    RingContext,
    S_CTX,
    enumerate_monomials,
    monomials_of_degree,
)
from .weyl import WeylOp, fourier

PRNG_LABEL = "mt19937-v1"
_DEGREVLEX = MonomialOrder.degrevlex()


@dataclass
class HilbertBurchData:
    """Validated input together with its presentation data.

    ``phi`` is a 3x2 list of lists in R with column degrees ``mu`` and
    ``d - mu``; ``g`` and ``L`` hold the two linear equations and their
    Fourier images.
    """

    f: tuple[CommPoly, CommPoly, CommPoly]
    d: int
    phi: list[list[CommPoly]] | None = None
    mu: int | None = None
    g1: CommPoly | None = None
    g2: CommPoly | None = None
    L1: WeylOp | None = None
    L2: WeylOp | None = None

    @property
    def complete(self) -> bool:
        return self.phi is not None

    def coefficient(self, which: int, k: int) -> CommPoly:
        """The coefficient of T_k (0-based) in g_which, as a form in R."""
        g = self.g1 if which == 1 else self.g2
        out = {}
        for e, c in g.terms.items():
            if e[2 + k] == 1:
                out[e[:2]] = c
        return CommPoly(R_CTX, out, _trusted=True)


# ---------------------------------------------------------------------------
# validation and presentation
# ---------------------------------------------------------------------------

def validate_input(f1: CommPoly, f2: CommPoly, f3: CommPoly) -> HilbertBurchData:
    """Check the standing hypotheses and return the partial data (f, d).

    Raises
    ------
    DataViolation
        "not equigenerated", "height < 2" or "not minimally generated by three".
    """
    fs = (f1, f2, f3)
    for f in fs:
        if f.ctx != R_CTX:
            raise DataViolation("input polynomials must live in Q[x1,x2]")
        if f.is_zero():
            raise DataViolation("not minimally generated by three: zero generator")
    if not all(f.is_homogeneous() for f in fs):
        raise DataViolation("not equigenerated: inhomogeneous generator")
    degs = {f.total_degree() for f in fs}
    if len(degs) != 1:
        raise DataViolation(f"not equigenerated: degrees {[f.total_degree() for f in fs]}")
    d = degs.pop()
    if d < 1:
        raise DataViolation("not equigenerated: generators must have positive degree")
    gb = groebner_basis(list(fs))
    if monomial_quotient_krull_dim(gb.leading_monomials(), 2) > 0:
        raise DataViolation("height < 2: the generators share a common factor")
    # equal degrees: minimal generation is linear independence
    if rank([dict(f.terms) for f in fs]) < 3:
        raise DataViolation("not minimally generated by three: a degree-0 syzygy exists")
    return HilbertBurchData(f=fs, d=d)


def _g_from_column(col: Sequence[CommPoly]) -> CommPoly:
    out = CommPoly.zero(S_CTX)
    lift = [0, 1]
    for k, c in enumerate(col):
        t = S_CTX.gen(f"T{k + 1}")
        out = out + c.recontext(S_CTX, lift) * t
    return out


def _column_from_g(g: CommPoly) -> list[CommPoly]:
    cols: list[dict] = [{}, {}, {}]
    for e, c in g.terms.items():
        k = e[2:].index(1)
        cols[k][e[:2]] = c
    return [CommPoly(R_CTX, t, _trusted=True) for t in cols]


def _rref_polys(polys: Sequence[CommPoly]) -> list[CommPoly]:
    """Reduced echelon form of a span of polynomials, pivots = degrevlex leading terms."""
    basis: list[CommPoly] = []
    for p in polys:
        for b in basis:
            lm = b.leading_monomial()
            c = p.coefficient(lm)
            if c:
                p = p - b * c
        if p.is_zero():
            continue
        p = p.monic()
        lm = p.leading_monomial()
        basis = [b - p * b.coefficient(lm) if b.coefficient(lm) else b for b in basis]
        basis.append(p)
    basis.sort(key=lambda b: _DEGREVLEX.key(b.leading_monomial()), reverse=True)
    return basis


def _reduce_by_span(p: CommPoly, basis: Sequence[CommPoly]) -> CommPoly:
    for b in basis:
        c = p.coefficient(b.leading_monomial())
        if c:
            p = p - b * c
    return p


def hilbert_burch(hb: HilbertBurchData) -> HilbertBurchData:
    """Fill phi, mu, g1, g2, L1, L2 with the canonical normalization.

    g1 is monic under degrevlex on (x1, x2, T1, T2, T3).  When mu < d - mu,
    g2 is reduced modulo R_{d-2mu} * g1 and made monic.  When mu = d - mu the
    pair is the reduced echelon basis of span(g1, g2), larger leading term
    first.
    """
    cols = syzygy_module(list(hb.f))
    if len(cols) != 2:
        raise DataViolation(f"syzygy module has {len(cols)} generators, expected 2")
    degs = [max(c.total_degree() for c in col) for col in cols]
    if min(degs) <= 0 or sum(degs) != hb.d:
        raise DataViolation(f"column degrees {degs} do not split d = {hb.d}")
    mu = degs[0]
    g1, g2 = _g_from_column(cols[0]), _g_from_column(cols[1])
    if mu < hb.d - mu:
        g1 = g1.monic()
        shifts = monomials_of_degree(2, hb.d - 2 * mu)
        span = [g1.mul_term((a, b, 0, 0, 0), 1) for a, b in shifts]
        g2 = _reduce_by_span(g2, _rref_polys(span)).monic()
    else:
        g1, g2 = _rref_polys([g1, g2])
    hb.mu = mu
    hb.g1, hb.g2 = g1, g2
    c1, c2 = _column_from_g(g1), _column_from_g(g2)
    hb.phi = [[c1[i], c2[i]] for i in range(3)]
    hb.L1 = fourier(WeylOp.from_commpoly(g1))
    hb.L2 = fourier(WeylOp.from_commpoly(g2))
    _check_presentation(hb)
    return hb


def _check_presentation(hb: HilbertBurchData) -> None:
    f = hb.f
    for j in range(2):
        s = sum((f[i] * hb.phi[i][j] for i in range(3)), CommPoly.zero(R_CTX))
        if not s.is_zero():
            raise DataViolation("phi does not annihilate the generators")
    m = hb.phi
    minors = [m[1][0] * m[2][1] - m[2][0] * m[1][1],
              m[2][0] * m[0][1] - m[0][0] * m[2][1],
              m[0][0] * m[1][1] - m[1][0] * m[0][1]]
    # Hilbert-Burch: the signed minors are a common unit multiple of f
    ratio = None
    for fi, mi in zip(f, minors):
        lm = fi.leading_monomial()
        r = mi.coefficient(lm) / fi.coefficient(lm)
        if ratio is None:
            ratio = r
        if r != ratio or mi != fi * r or not r:
            raise DataViolation("the 2x2 minors of phi do not generate the ideal")


def analyze_input(f1: CommPoly, f2: CommPoly, f3: CommPoly) -> HilbertBurchData:
    return hilbert_burch(validate_input(f1, f2, f3))


def symmetric_equations(hb: HilbertBurchData) -> tuple[CommPoly, CommPoly]:
    if not hb.complete:
        hilbert_burch(hb)
    return hb.g1, hb.g2


# ---------------------------------------------------------------------------
# Rees ideal
# ---------------------------------------------------------------------------

_ELIM_CTX = RingContext(("t",) + S_CTX.names)


def rees_ideal(hb: HilbertBurchData, route: str = "saturation") -> GroebnerBasis:
    """Reduced degrevlex basis of REQ, by elimination of t or by saturation."""
    if not hb.complete:
        hilbert_burch(hb)
    if route == "elimination":
        t = _ELIM_CTX.gen("t")
        gens = []
        for k, f in enumerate(hb.f):
            fl = f.recontext(_ELIM_CTX, [1, 2])
            gens.append(_ELIM_CTX.gen(f"T{k + 1}") - t * fl)
        polys = eliminate(gens, ["t"])
        # eliminate() drops t and keeps the remaining names in order
        polys = [CommPoly(S_CTX, p.terms, _trusted=True) for p in polys]
    elif route == "saturation":
        polys = saturate([hb.g1, hb.g2], [S_CTX.gen("x1"), S_CTX.gen("x2")])
    else:
        raise ValueError(f"unknown route {route!r}")
    return groebner_basis(polys)


def same_ideal(a: GroebnerBasis, b: GroebnerBasis) -> bool:
    return sorted(map(str, a.generators)) == sorted(map(str, b.generators))


# ---------------------------------------------------------------------------
# K table and minimal generators
# ---------------------------------------------------------------------------

@dataclass
class BigradedTable:
    dims: dict[tuple[int, int], int]
    min_gens: list[tuple[int, int]]
    p_range: tuple[int, int]
    d: int

    def support(self, p: int) -> list[int]:
        return sorted(q for (pp, q), v in self.dims.items() if pp == p and v)

    def row(self, p: int) -> list[int]:
        return [self.dims.get((p, q), 0) for q in range(self.d - 1)]


def _quotient_dim(gb: GroebnerBasis, bideg: tuple[int, int]) -> int:
    leads = gb.leading_monomials()
    n = 0
    for m in enumerate_monomials(S_CTX, bideg):
        if not any(all(a <= b for a, b in zip(l, m)) for l in leads):
            n += 1
    return n


def k_dim(sym_gb: GroebnerBasis, req_gb: GroebnerBasis, p: int, q: int) -> int:
    """dim K_{p,q} = dim (S/(g1,g2))_{p,q} - dim (S/REQ)_{p,q}."""
    return _quotient_dim(sym_gb, (p, q)) - _quotient_dim(req_gb, (p, q))


def _graded_piece(gb: GroebnerBasis, bideg) -> list[CommPoly]:
    """A basis of the ideal's (p,q) piece: m - NF(m) over non-standard monomials."""
    leads = gb.leading_monomials()
    out = []
    for m in enumerate_monomials(S_CTX, bideg):
        if any(all(a <= b for a, b in zip(l, m)) for l in leads):
            mono = CommPoly.monomial(S_CTX, m)
            out.append(mono - gb.normal_form(mono))
    return out


def minimal_generator_bidegrees(gb: GroebnerBasis) -> list[tuple[int, int]]:
    """Bidegrees (with multiplicity) of a minimal bigraded generating set.

    Only bidegrees carrying an element of the reduced basis can host minimal
    generators; at each one the count is dim I_{p,q} - dim (m*I)_{p,q}.
    """
    cands = sorted({g.bidegree() for g in gb.generators})
    out = []
    xs = [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)]
    ts = [(0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)]
    for p, q in cands:
        piece = _graded_piece(gb, (p, q))
        ech = IntEchelon()
        for g in _graded_piece(gb, (p, q - 1)) if q > 0 else []:
            for x in xs:
                ech.add(g.mul_term(x, 1).terms)
        for g in _graded_piece(gb, (p - 1, q)) if p > 0 else []:
            for t in ts:
                ech.add(g.mul_term(t, 1).terms)
        out.extend([(p, q)] * (len(piece) - ech.rank))
    return sorted(out)


def k_table(hb: HilbertBurchData, req: GroebnerBasis, p_max: int | None = None,
            p_min: int = 2) -> BigradedTable:
    if p_max is None:
        p_max = hb.d
    if p_max < 2:
        raise ValueError("p_max must be at least 2")
    sym = groebner_basis([hb.g1, hb.g2])
    dims = {}
    for p in range(p_min, p_max + 1):
        for q in range(0, hb.d - 1):
            dims[(p, q)] = k_dim(sym, req, p, q)
    return BigradedTable(dims, minimal_generator_bidegrees(req), (p_min, p_max), hb.d)


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

class GenerationFailed(RuntimeError):
    pass


def _random_form(rng: random.Random, degree: int, bound: int) -> CommPoly:
    choices = [c for c in range(-bound, bound + 1) if c]
    return CommPoly(R_CTX, {(degree - j, j): rng.choice(choices) for j in range(degree + 1)})


@dataclass
class RandomInstance:
    f: tuple[CommPoly, CommPoly, CommPoly]
    rejections: int
    phi: list[list[CommPoly]] = field(default_factory=list)


def random_hb_ideal(mu: int, d: int, seed: int, coeff_bound: int = 9,
                    max_tries: int = 100) -> RandomInstance:
    """Ideal of 2x2 minors of a random 3x2 matrix with column degrees (mu, d-mu).

    Coefficients are drawn uniformly from [-bound, bound] minus {0} with
    ``random.Random(seed)``; draws are retried until validation accepts the
    ideal and the recovered mu matches.
    """
    if not 0 < mu <= d - mu:
        raise ValueError("need 0 < mu <= d - mu")
    if coeff_bound < 1:
        raise ValueError("coefficient bound must be positive")
    rng = random.Random(seed)
    rejections = 0
    for _ in range(max_tries):
        phi = [[_random_form(rng, mu, coeff_bound), _random_form(rng, d - mu, coeff_bound)]
               for _ in range(3)]
        f = (phi[1][0] * phi[2][1] - phi[2][0] * phi[1][1],
             phi[2][0] * phi[0][1] - phi[0][0] * phi[2][1],
             phi[0][0] * phi[1][1] - phi[1][0] * phi[0][1])
        try:
            hb = analyze_input(*f)
        except DataViolation:
            rejections += 1
            continue
        if hb.mu != mu:
            rejections += 1
            continue
        return RandomInstance(f, rejections, phi)
    raise GenerationFailed(f"could not generate an ideal after {rejections} rejections")


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def corollary_bounds_hold(table: BigradedTable, sym: GroebnerBasis, req: GroebnerBasis,
                          extra_q: int = 2) -> bool:
    """K_{p,q} = 0 above q = d-2 (checked for a few extra q) and dim K_{p,d-2} = C(p,2)."""
    d = table.d
    lo, hi = table.p_range
    for p in range(lo, hi + 1):
        if table.dims.get((p, d - 2), 0) != comb(p, 2):
            return False
        for q in range(d - 1, d - 1 + extra_q):
            if k_dim(sym, req, p, q) != 0:
                return False
    return True

