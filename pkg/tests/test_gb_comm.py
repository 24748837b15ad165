import pytest
from hypothesis import given, settings, strategies as st

from conftest import MONOMIAL_CORPUS, comm_polys, monomial_ideal
from reesdmod.gb_comm import (
    GBBudgetExceeded,
    bigraded_dim,
    eliminate,
    groebner_basis,
    intersect,
    is_groebner,
    monomial_quotient_krull_dim,
    normal_form,
    saturate,
    syzygy_module,
)
from reesdmod.parser import parse_polynomial
from reesdmod.poly_core import CommPoly, CommVector, MonomialOrder, R_CTX, RingContext, S_CTX
from reesdmod.rees import analyze_input, rees_ideal, same_ideal

x, y = R_CTX.gens()


def S(text):
    return parse_polynomial(text, S_CTX)


class TestGroebner:
    def test_already_a_basis(self):
        gb = groebner_basis([x ** 2, x * y])
        assert sorted(map(str, gb.generators)) == sorted(["x1^2", "x1*x2"])
        assert is_groebner(gb)

    def test_lex_normal_form(self):
        gb = groebner_basis([x - y], MonomialOrder.lex())
        assert normal_form(x ** 2, gb) == y ** 2

    def test_binomials_already_reduced(self):
        g = [S("x2*T1 - x1*T2"), S("x2*T2 - x1*T3")]
        gb = groebner_basis(g)
        assert len(gb.generators) == 3  # the cross S-pair adds the T-quadric
        assert all(gb.contains(h) for h in g)
        assert gb.contains(S("T2^2 - T1*T3") * S("x2"))

    def test_nf_of_zero(self):
        gb = groebner_basis([x ** 3 - y ** 3])
        assert normal_form(CommPoly.zero(R_CTX), gb).is_zero()

    def test_budget(self):
        gens = [parse_polynomial(s) for s in ("x^7 + 3x*y^6 - 2y^7", "x^4*y^3 + y^7")]
        with pytest.raises(GBBudgetExceeded):
            groebner_basis(gens, MonomialOrder.lex(), budget=1)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(comm_polys(max_deg=3, max_terms=3), min_size=1, max_size=3))
    def test_invariants(self, gens):
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            return
        for order in (MonomialOrder.degrevlex(), MonomialOrder.lex()):
            gb = groebner_basis(gens, order)
            assert is_groebner(gb)
            assert all(gb.contains(g) for g in gens)
            back = groebner_basis(gb.generators, order)
            assert all(back.contains(g) for g in gens)
            for g in gens:
                nf = gb.normal_form(g * (x + 1) + x * y)
                assert gb.normal_form(nf) == nf

    def test_module_basis(self):
        v = [CommVector((x, y)), CommVector((y, x))]
        gb = groebner_basis(v)
        assert gb.is_module and is_groebner(gb)
        assert gb.contains(CommVector((x * x - y * y, CommPoly.zero(R_CTX))))


class TestSyzygies:
    def test_example_columns(self):
        cols = syzygy_module([x ** 5, x ** 2 * y ** 3, y ** 5])
        assert len(cols) == 2
        assert [max(c.total_degree() for c in col if c) for col in cols] == [2, 3]
        for col in cols:
            assert (x ** 5 * col[0] + x ** 2 * y ** 3 * col[1] + y ** 5 * col[2]).is_zero()

    def test_linear(self):
        cols = syzygy_module([x ** 2, x * y, y ** 2])
        assert len(cols) == 2
        assert all(max(c.total_degree() for c in col if c) == 1 for col in cols)


class TestEliminate:
    ctx = RingContext(("t", "x", "y", "T1", "T2"))

    def P(self, s):
        return parse_polynomial(s, self.ctx)

    def test_graph(self):
        out = eliminate([self.P("T1 - t*x"), self.P("T2 - t*y")], ["t"])
        assert len(out) == 1
        ref = parse_polynomial("y*T1 - x*T2", out[0].ctx)
        assert out[0] == ref or out[0] == -ref

    def test_nothing(self):
        g = [self.P("x^2 - y"), self.P("x*y")]
        assert groebner_basis(eliminate(g, [])).generators == groebner_basis(g).generators

    def test_only_t(self):
        assert eliminate([self.P("t")], ["t"]) == []


class TestSaturate:
    def test_monomial(self):
        assert saturate([S("x1*T1")], [S("x1")]) == [S("T1")]
        # x2^k*T1 never lands in (x1*T1), so the irrelevant ideal changes nothing
        assert saturate([S("x1*T1")], [S("x1"), S("x2")]) == [S("x1*T1")]

    def test_prime(self):
        p = [S("T2^2 - T1*T3")]
        assert saturate(p, [S("x1"), S("x2")]) == groebner_basis(p).generators

    def test_intersect(self):
        out = intersect([x], [y])
        assert out == [x * y]

    @pytest.mark.parametrize("d,a", MONOMIAL_CORPUS)
    def test_routes_agree(self, d, a):
        hb = analyze_input(*monomial_ideal(d, a))
        assert same_ideal(rees_ideal(hb, "saturation"), rees_ideal(hb, "elimination"))


class TestCounting:
    def test_nothing_below(self):
        # an ideal living far above (1,1) leaves all six monomials standard
        assert bigraded_dim(groebner_basis([S("x1*x2*T1*T2*T3^9")]), (1, 1)) == 6

    def test_all_variables(self):
        gb = groebner_basis([S(v) for v in S_CTX.names])
        assert bigraded_dim(gb, (0, 0)) == 1
        assert bigraded_dim(gb, (1, 0)) == 0

    def test_example_sym(self, d5):
        gb = groebner_basis([d5.g1, d5.g2])
        # g1 spans the whole (1,2) part of the ideal; oracle: 9 - 1
        assert bigraded_dim(gb, (1, 2)) == 8

    def test_krull(self):
        assert monomial_quotient_krull_dim([(1, 0)], 2) == 1
        assert monomial_quotient_krull_dim([], 7) == 7
        assert monomial_quotient_krull_dim([(0, 0, 1, 0), (0, 0, 0, 1)], 4) == 2
        assert monomial_quotient_krull_dim([(0, 0)], 2) == -1

    def test_krull_module(self):
        top, per = monomial_quotient_krull_dim([(0, (1, 0)), (1, (0, 0))], 2, rank=2)
        assert (top, per) == (1, [1, -1])
