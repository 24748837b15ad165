from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from conftest import comm_polys
from reesdmod.parser import parse_polynomial
from reesdmod.poly_core import (
    CommPoly,
    ContextMismatch,
    MonomialOrder,
    NotDivisible,
    QQ,
    R_CTX,
    S_CTX,
    U_CTX,
    UndefinedBidegree,
    enumerate_monomials,
    monomial_compare,
)

x, y = R_CTX.gens()


def P(s):
    return parse_polynomial(s)


def dense_mul(a: CommPoly, b: CommPoly) -> dict:
    """Schoolbook reference on a dense exponent grid."""
    n = a.ctx.nvars
    out = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            e = tuple(ea[i] + eb[i] for i in range(n))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


class TestRingOps:
    def test_difference_of_squares(self):
        assert (x + y) * (x - y) == x ** 2 - y ** 2

    def test_additive_identity(self):
        p = P("3x^2 - y")
        assert p + CommPoly.zero(R_CTX) == p

    def test_monomial_division(self):
        assert (x ** 2 * y ** 3).divide(x * y) == x * y ** 2

    def test_inexact_division(self):
        with pytest.raises(NotDivisible):
            (x ** 2 + y).divide(x)

    def test_context_mismatch(self):
        with pytest.raises(ContextMismatch):
            _ = x + S_CTX.gen("T1")

    def test_rationals_stay_reduced(self):
        c = QQ("6/4")
        assert (c.numerator, c.denominator) == (3, 2)
        assert QQ(0).denominator == 1


class TestBidegree:
    def test_g1_of_example(self):
        g1 = S_CTX.gen("x2") ** 2 * S_CTX.gen("T2") - S_CTX.gen("x1") ** 2 * S_CTX.gen("T3")
        assert g1.bidegree() == (1, 2)

    def test_generator(self):
        assert S_CTX.gen("T1").bidegree() == (1, 0)

    def test_inhomogeneous(self):
        assert (S_CTX.gen("x1") + S_CTX.gen("T1")).bidegree() == "inhomogeneous"

    def test_zero(self):
        with pytest.raises(UndefinedBidegree):
            CommPoly.zero(S_CTX).bidegree()


class TestEnumerate:
    def test_small_cases(self):
        assert len(enumerate_monomials(S_CTX, (1, 1))) == 6
        assert enumerate_monomials(S_CTX, (0, 0)) == [(0, 0, 0, 0, 0)]
        assert len(enumerate_monomials(S_CTX, (2, 0))) == comb(4, 2)
        assert enumerate_monomials(S_CTX, (-1, 2)) == []

    @given(st.integers(0, 6), st.integers(0, 6))
    def test_count(self, p, q):
        mons = enumerate_monomials(S_CTX, (p, q))
        assert len(mons) == len(set(mons)) == comb(p + 2, 2) * (q + 1)
        assert all(S_CTX.bidegree(m) == (p, q) for m in mons)

    def test_u_context(self):
        assert len(enumerate_monomials(U_CTX, (3, 0))) == 10


class TestOrders:
    def test_examples(self):
        assert monomial_compare(MonomialOrder.lex(), (1, 0), (0, 1)) == "gt"
        assert monomial_compare(MonomialOrder.degrevlex(), (2, 1), (1, 2)) == "gt"
        w = MonomialOrder.weighted((1, 1), MonomialOrder.lex(perm=(1, 0)))
        # equal weight; lex with y > x puts x*y above x^2
        assert monomial_compare(w, (1, 1), (2, 0)) == "gt"
        w2 = MonomialOrder.weighted((1, 1), MonomialOrder.lex())
        assert monomial_compare(w2, (1, 1), (2, 0)) == "lt"

    orders = [MonomialOrder.lex(), MonomialOrder.degrevlex(), MonomialOrder.degrevlex(perm=(2, 0, 1)),
              MonomialOrder.weighted((2, 1, 0), MonomialOrder.degrevlex()),
              MonomialOrder.block([1, 2])]
    mono = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))

    @pytest.mark.parametrize("order", orders, ids=repr)
    @given(a=mono, b=mono, m=mono)
    def test_total_multiplicative_antisymmetric(self, order, a, b, m):
        c = order.compare(a, b)
        assert c == -order.compare(b, a)
        assert (c == 0) == (a == b)
        am = tuple(i + j for i, j in zip(a, m))
        bm = tuple(i + j for i, j in zip(b, m))
        assert order.compare(am, bm) == c
        assert order.compare(a, (0, 0, 0)) >= 0

    @given(a=mono, b=mono)
    def test_degree_compatible(self, a, b):
        o = MonomialOrder.degrevlex()
        if sum(a) < sum(b):
            assert o.compare(a, b) < 0


class TestAxioms:
    @settings(max_examples=60)
    @given(comm_polys(), comm_polys(), comm_polys())
    def test_ring_axioms(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert (a * b).terms == dense_mul(a, b)
        assert a - a == CommPoly.zero(R_CTX)

    @settings(max_examples=30)
    @given(comm_polys(S_CTX, max_deg=2), comm_polys(S_CTX, max_deg=2))
    def test_dense_reference_five_vars(self, a, b):
        assert (a * b).terms == dense_mul(a, b)

    @given(comm_polys())
    def test_print_parse_roundtrip(self, p):
        assert parse_polynomial(str(p)) == p
