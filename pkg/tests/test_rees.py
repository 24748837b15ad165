from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from conftest import MONOMIAL_CORPUS, monomial_ideal
from reesdmod.gb_comm import DataViolation, groebner_basis
from reesdmod.parser import parse_polynomial
from reesdmod.poly_core import S_CTX
from reesdmod.rees import (
    GenerationFailed,
    analyze_input,
    corollary_bounds_hold,
    hilbert_burch,
    k_table,
    minimal_generator_bidegrees,
    random_hb_ideal,
    rees_ideal,
    same_ideal,
    symmetric_equations,
    validate_input,
)

D5_REQ = ["y^2*T2 - x^2*T3", "y^3*T1 - x^3*T2", "x*T2^2 - y*T1*T3",
            "y*T2^3 - x*T1*T3^2", "T2^5 - T1^2*T3^3"]

# frozen from the k_table computation, cross-checked by the module oracles
D5_ROWS = {2: [0, 1, 2, 1], 3: [0, 4, 6, 3], 4: [0, 9, 12, 6], 5: [1, 16, 20, 10]}


def P(text):
    return parse_polynomial(text)


def S(text):
    return parse_polynomial(text.replace("x", "x1").replace("y", "x2"), S_CTX)


@pytest.fixture(scope="module")
def d5_req(d5):
    return rees_ideal(d5)


class TestValidation:
    def test_accepts_example(self):
        hb = validate_input(P("x^5"), P("x^2*y^3"), P("y^5"))
        assert hb.d == 5 and not hb.complete

    @pytest.mark.parametrize("polys,msg", [
        (("x^2", "x*y", "x*(x+y)"), "height < 2"),
        (("x^2", "x*y", "y^3"), "not equigenerated"),
        (("x^2 + y", "x*y", "y^2"), "not equigenerated"),
        (("x", "y", "x+y"), "not minimally generated by three"),
        (("x^2", "x*y", "0"), "not minimally generated by three"),
    ])
    def test_rejections(self, polys, msg):
        with pytest.raises(DataViolation, match=msg):
            validate_input(*map(P, polys))


class TestHilbertBurch:
    def test_example_mu(self, d5):
        assert d5.mu == 2
        assert d5.g1 == S("y^2*T2 - x^2*T3")
        assert d5.g2 == S("y^3*T1 - x^3*T2")

    def test_linear_case(self):
        hb = analyze_input(P("x^2"), P("x*y"), P("y^2"))
        assert hb.mu == 1 == hb.d - hb.mu
        assert (hb.g1, hb.g2) == (S("y*T1 - x*T2"), S("y*T2 - x*T3"))

    def test_symmetric_equations(self, d5):
        g1, g2 = symmetric_equations(d5)
        assert g1.bidegree() == (1, d5.mu)
        assert g2.bidegree() == (1, d5.d - d5.mu)

    def test_coefficients(self, d5):
        assert d5.coefficient(1, 1) == P("y^2")
        assert d5.coefficient(1, 2) == P("-x^2")
        assert d5.coefficient(2, 2).is_zero()

    def test_incomplete_roundtrip(self):
        hb = hilbert_burch(validate_input(P("x^3"), P("x*y^2"), P("y^3")))
        assert hb.complete and hb.mu == 1

    @settings(max_examples=15, deadline=None)
    @given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 10 ** 6))
    def test_presentation(self, mu, extra, seed):
        d = 2 * mu + extra
        hb = analyze_input(*random_hb_ideal(mu, d, seed).f)
        assert hb.mu == mu <= d - mu
        for col in range(2):
            total = sum((hb.f[i] * hb.phi[i][col] for i in range(3)), P("0"))
            assert total.is_zero()


class TestReesIdeal:
    def test_example_generators(self, d5_req):
        mine = sorted(str(g) for g in d5_req.generators)
        assert mine == sorted(str(S(g)) for g in D5_REQ)

    def test_linear_case(self):
        hb = analyze_input(P("x^2"), P("x*y"), P("y^2"))
        req = rees_ideal(hb)
        expected = groebner_basis([S("y*T1 - x*T2"), S("y*T2 - x*T3"), S("T2^2 - T1*T3")])
        assert same_ideal(req, expected)

    def test_contains_syzygies(self, d5, d5_req):
        assert d5_req.contains(d5.g1) and d5_req.contains(d5.g2)

    def test_routes(self, d5, d5_req):
        assert same_ideal(d5_req, rees_ideal(d5, "elimination"))

    def test_bad_route(self, d5):
        with pytest.raises(ValueError):
            rees_ideal(d5, "guess")


class TestTable:
    def test_example(self, d5, d5_req):
        t = k_table(d5, d5_req, p_max=5)
        for p in (2, 3, 4):
            assert t.support(p) == [1, 2, 3]
        assert t.support(5) == [0, 1, 2, 3]
        assert {p: t.row(p) for p in range(2, 6)} == D5_ROWS
        assert t.min_gens == [(1, 2), (1, 3), (2, 1), (3, 1), (5, 0)]

    def test_min_gens_independent_of_pmax(self, d5, d5_req):
        assert k_table(d5, d5_req, p_max=2).min_gens == minimal_generator_bidegrees(d5_req)

    def test_pmax_guard(self, d5, d5_req):
        with pytest.raises(ValueError):
            k_table(d5, d5_req, p_max=1)

    @pytest.mark.parametrize("d,a", MONOMIAL_CORPUS)
    def test_corollary_bounds(self, d, a):
        hb = analyze_input(*monomial_ideal(d, a))
        req = rees_ideal(hb)
        t = k_table(hb, req)
        sym = groebner_basis([hb.g1, hb.g2])
        assert corollary_bounds_hold(t, sym, req)
        assert all(t.dims[(p, d - 2)] == comb(p, 2) for p in range(2, d + 1))
        # the two syzygies sit in T-degree 1; everything else is of higher T-degree
        assert [g for g in t.min_gens if g[0] < 2] == sorted([(1, hb.mu), (1, d - hb.mu)])


class TestRandom:
    def test_deterministic(self):
        a = random_hb_ideal(1, 7, 42)
        b = random_hb_ideal(1, 7, 42)
        assert a.f == b.f
        assert random_hb_ideal(1, 7, 43).f != a.f

    def test_seed_42(self):
        inst = random_hb_ideal(1, 7, 42)
        hb = analyze_input(*inst.f)
        assert hb.mu == 1 and hb.d == 7
        assert all(f.total_degree() == 7 for f in inst.f)

    def test_bound_one(self):
        inst = random_hb_ideal(2, 5, 3, coeff_bound=1)
        assert all(abs(c) <= 1 for row in inst.phi for e in row for c in e.terms.values())

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            random_hb_ideal(4, 7, 1)
        with pytest.raises(ValueError):
            random_hb_ideal(1, 7, 1, coeff_bound=0)

    def test_exhaustion(self):
        with pytest.raises(GenerationFailed):
            random_hb_ideal(1, 2, 0, max_tries=0)
