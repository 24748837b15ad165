import random

import pytest
from hypothesis import strategies as st

from reesdmod.poly_core import CommPoly, R_CTX
from reesdmod.rees import analyze_input
from reesdmod.weyl import WeylOp

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_acceptance():
    def record(tag: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'} {tag}" + (f": {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def monomial_ideal(d: int, a: int):
    x, y = R_CTX.gens()
    return (x ** d, x ** a * y ** (d - a), y ** d)


@pytest.fixture(scope="session")
def d5():
    return analyze_input(*monomial_ideal(5, 2))


MONOMIAL_CORPUS = [(d, a) for d in range(3, 6) for a in range(1, d)]

# ---------------------------------------------------------------------------
# hypothesis strategies
# ---------------------------------------------------------------------------

small_coeff = st.integers(-5, 5)


def comm_polys(ctx=R_CTX, max_deg=3, max_terms=4):
    exps = st.tuples(*[st.integers(0, max_deg)] * ctx.nvars)
    return st.dictionaries(exps, small_coeff, max_size=max_terms).map(lambda t: CommPoly(ctx, t))


def weyl_ops(max_exp=2, max_terms=3, with_t=False):
    t_part = st.integers(0, 1) if with_t else st.just(0)
    exps = st.tuples(*[st.integers(0, max_exp)] * 4, t_part, t_part, t_part)
    return st.dictionaries(exps, small_coeff, max_size=max_terms).map(WeylOp)


def random_weyl(rng: random.Random, max_exp=2, terms=3, with_t=True) -> WeylOp:
    out = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, max_exp) for _ in range(4))
        e += tuple(rng.randint(0, 1) if with_t else 0 for _ in range(3))
        out[e] = rng.randint(-4, 4)
    return WeylOp(out)


def random_form(rng: random.Random, degree: int, ctx=R_CTX) -> CommPoly:
    return CommPoly(ctx, {(degree - j, j): rng.randint(-5, 5) for j in range(degree + 1)})



def s_product(k: int) -> WeylOp:
    """s(s+1)...(s+k) by repeated multiplication."""
    from reesdmod.weyl import euler_s
    s = euler_s()
    out = WeylOp.const(1)
    for j in range(k + 1):
        out = out * (s + j)
    return out


def s_product_closed_form(k: int) -> WeylOp:
    """(-1)^(k+1) sum_j C(k+1,j) x1^j x2^(k+1-j) D1^j D2^(k+1-j)."""
    from math import comb
    n = k + 1
    sign = -1 if n % 2 else 1
    return WeylOp({(j, n - j, j, n - j, 0, 0, 0): sign * comb(n, j) for j in range(n + 1)})
