"""Univariate helpers for b-functions: gcd/lcm, rational roots, factored display."""

from __future__ import annotations

from gmpy2 import mpq

from .poly_core import ONE, UNIVARIATE_S, ZERO, CommPoly, QQ, Rational, format_terms

Coeffs = list[Rational]  # ascending: coeffs[k] multiplies s^k


def coeffs_of(p: CommPoly) -> Coeffs:
    if p.is_zero():
        return []
    n = max(e[0] for e in p.terms)
    out = [ZERO] * (n + 1)
    for (k,), c in p.terms.items():
        out[k] = c
    return out


def from_coeffs(coeffs, ctx=UNIVARIATE_S) -> CommPoly:
    return CommPoly(ctx, {(k,): QQ(c) for k, c in enumerate(coeffs) if c})


def _trim(a: Coeffs) -> Coeffs:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _divmod(a: Coeffs, b: Coeffs) -> tuple[Coeffs, Coeffs]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [ZERO] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    lb = b[-1]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        q = rem[-1] / lb
        quo[shift] = q
        for i, c in enumerate(b):
            rem[i + shift] -= q * c
        rem = _trim(rem)
    return quo, rem


def _monic(a: Coeffs) -> Coeffs:
    a = _trim(a)
    if not a:
        return a
    lead = QQ(a[-1])
    return [QQ(c) / lead for c in a]


def gcd(a: Coeffs, b: Coeffs) -> Coeffs:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _divmod(a, b)[1]
    return _monic(a)


def mul(a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def lcm(a: Coeffs, b: Coeffs) -> Coeffs:
    if not _trim(a) or not _trim(b):
        return []
    g = gcd(a, b)
    return _monic(_divmod(mul(a, b), g)[0])


def lcm_many(polys) -> Coeffs:
    out = [ONE]
    for p in polys:
        out = lcm(out, p)
    return out


def evaluate(a: Coeffs, x) -> Rational:
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def rational_roots(a: Coeffs) -> tuple[list[tuple[Rational, int]], Coeffs]:
    """Rational roots with multiplicity, plus the monic cofactor without rational roots.

    Roots are returned in decreasing order.
    """
    a = _monic(a)
    if not a:
        raise ValueError("the zero polynomial has no finite root set")
    roots: dict[Rational, int] = {}
    # pull out s^k first
    while len(a) > 1 and not a[0]:
        a = a[1:]
        roots[ZERO] = roots.get(ZERO, 0) + 1
    changed = True
    while changed and len(a) > 1:
        changed = False
        # integer coefficients for the rational root test
        den = 1
        for c in a:
            den = den * c.denominator // _gcd_int(den, c.denominator)
        ints = [int(c * den) for c in a]
        cands = set()
        for p in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                cands.add(mpq(p, q))
                cands.add(mpq(-p, q))
        for r in sorted(cands, reverse=True):
            if not evaluate(a, r):
                a = _divmod(a, [-r, ONE])[0]
                roots[r] = roots.get(r, 0) + 1
                changed = True
                break
    return sorted(roots.items(), key=lambda t: t[0], reverse=True), a


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def format_factored(a: Coeffs, var: str = "s") -> str:
    """Factored display in the style ``(s)(s + 1)(s + 2)``.

    Rational roots become linear factors (with ``^k`` for repeats); any
    remaining factor without rational roots is printed expanded.
    """
    a = _monic(a)
    if not a:
        return "0"
    roots, rest = rational_roots(a)
    parts = []
    for r, mult in sorted(roots, key=lambda t: t[0], reverse=True):
        if r == 0:
            body = f"({var})"
        else:
            shift = -r
            sign = "+" if shift > 0 else "-"
            mag = abs(shift)
            mag_s = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            body = f"({var} {sign} {mag_s})"
        parts.append(body if mult == 1 else f"{body}^{mult}")
    if len(rest) > 1:
        terms = [((k,), c) for k, c in enumerate(rest) if c]
        terms.reverse()
        parts.append("(" + format_terms(terms, (var,)) + ")")
    if not parts:
        return "1"
    return "".join(parts)


def product_of_shifts(shifts) -> Coeffs:
    """prod (s + k) over the given k."""
    out = [ONE]
    for k in shifts:
        out = mul(out, [QQ(k), ONE])
    return out
