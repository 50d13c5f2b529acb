"""Dense univariate polynomials over Q(i) as coefficient lists.

``[c0, c1, ..., cd]`` stands for ``c0 + c1*t + ... + cd*t^d``; the
canonical form has no trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .scalar import Gaussian, Scalar, div, im_part, re_part

UPoly = list


def trim(p: Sequence) -> UPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def monic(p: Sequence) -> UPoly:
    p = trim(p)
    if not p:
        return p
    lc = p[-1]
    return [div(c, lc) for c in p]


def add(p: Sequence, q: Sequence) -> UPoly:
    n = max(len(p), len(q))
    return trim([(p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(n)])


def scale(p: Sequence, c: Scalar) -> UPoly:
    return trim([c * v for v in p])


def mul(p: Sequence, q: Sequence) -> UPoly:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_(p: Sequence, q: Sequence):
    p, q = trim(p), trim(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(p)
    quo = [0] * max(len(p) - len(q) + 1, 0)
    lc = q[-1]
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        c = div(rem[-1], lc)
        quo[shift] = c
        for k, v in enumerate(q):
            rem[shift + k] = rem[shift + k] - c * v
        rem = trim(rem)
    return trim(quo), rem


def ugcd(p: Sequence, q: Sequence) -> UPoly:
    """Monic gcd (``[]`` only if both inputs vanish)."""
    a, b = trim(p), trim(q)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def derivative(p: Sequence) -> UPoly:
    return trim([k * c for k, c in enumerate(p)][1:])


def squarefree_part(p: Sequence) -> UPoly:
    p = trim(p)
    if len(p) <= 1:
        return monic(p)
    g = ugcd(p, derivative(p))
    return monic(divmod_(p, g)[0])


def evaluate(p: Sequence, t: Scalar) -> Scalar:
    acc = 0
    for c in reversed(trim(p)):
        acc = acc * t + c
    return acc


def _divisors(m: int) -> list:
    m = abs(m)
    small = [d for d in range(1, isqrt(m) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def _integer_coefficients(p: Sequence) -> list:
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    return [int(Fraction(c) * den) for c in p]


def rational_roots(p: Sequence) -> list:
    """All rational roots of ``p`` (sorted, without multiplicity).

    Real coefficients use the rational-root theorem; Gaussian coefficients
    are split into real and imaginary parts, whose common rational roots are
    exactly the rational roots of ``p``.
    """
    p = trim(p)
    if not p:
        raise ValueError("the zero polynomial has every root")
    if any(isinstance(c, Gaussian) for c in p):
        re = trim([re_part(c) for c in p])
        im = trim([im_part(c) for c in p])
        return rational_roots(ugcd(re, im)) if re else rational_roots(im)
    roots = set()
    while p and p[0] == 0:
        roots.add(0)
        p = p[1:]
    if len(p) <= 1:
        return sorted(roots)
    ints = _integer_coefficients(p)
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for sign in (1, -1):
                r = Fraction(sign * num, den)
                if evaluate(p, r) == 0:
                    roots.add(r if r.denominator != 1 else int(r))
    return sorted(roots)


def from_coeffs(coeffs: dict) -> UPoly:
    """Dense list from ``{power: coefficient}``."""
    if not coeffs:
        return []
    out = [0] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] = c
    return trim(out)
