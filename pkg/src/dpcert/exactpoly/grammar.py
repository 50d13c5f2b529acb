"""Text syntax for polynomials: a recursive-descent parser and the canonical
printer.

Grammar (whitespace is ignored)::

    expression := term (('+'|'-') term)*
    term       := factor ('*' factor)*
    factor     := base ('^' natural)?
    base       := rational | 'i' | 'x' | 'y' | 'z' natural | '(' expression ')'
    rational   := integer ('/' positive-integer)?

A unary minus may precede any term.  Extra indeterminates of the VarSet
(for example ``alpha``) are accepted as bases.  In Laurent mode the
exponent of ``x`` may be negative (``x^-2``).
"""

from __future__ import annotations

from fractions import Fraction

from .poly import X, LaurentPoly, Poly, VarSet, _Sparse
from .scalar import Gaussian, I, Scalar, format_scalar


class PolySyntaxError(ValueError):
    """Malformed polynomial text; ``pos`` is the offending character index."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class _Parser:
    def __init__(self, text: str, vs: VarSet, laurent: bool):
        self.text = text
        self.vs = vs
        self.laurent = laurent
        self.cls = LaurentPoly if laurent else Poly
        # keep original positions for error messages
        self.chars = [(k, ch) for k, ch in enumerate(text) if not ch.isspace()]
        self.k = 0

    def error(self, message):
        pos = self.chars[self.k][0] if self.k < len(self.chars) else len(self.text)
        raise PolySyntaxError(message, pos, self.text)

    def peek(self):
        return self.chars[self.k][1] if self.k < len(self.chars) else ""

    def take(self):
        ch = self.peek()
        self.k += 1
        return ch

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.k += 1

    def digits(self) -> int:
        start = self.k
        while self.peek().isdigit():
            self.k += 1
        if self.k == start:
            self.error("expected a digit")
        return int("".join(c for _, c in self.chars[start:self.k]))

    def identifier(self) -> str:
        start = self.k
        while self.peek().isalnum() or self.peek() == "_":
            self.k += 1
        return "".join(c for _, c in self.chars[start:self.k])

    def parse(self):
        if not self.chars:
            raise PolySyntaxError("empty expression", 0, self.text)
        result = self.expression()
        if self.k != len(self.chars):
            self.error(f"unexpected {self.peek()!r}")
        return result

    def expression(self):
        total = self.signed_term()
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.signed_term()
            total = total + t if op == "+" else total - t
        return total

    def signed_term(self):
        if self.peek() == "-":
            self.take()
            return -self.signed_term()
        if self.peek() == "+" and self.k == 0:
            self.take()
        return self.term()

    def term(self):
        value = self.factor()
        while self.peek() == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        start = self.k
        base = self.base()
        if self.peek() != "^":
            return base
        self.take()
        negative = False
        if self.peek() == "-":
            negative = True
            self.take()
        k = self.digits()
        if negative:
            if not self.laurent or not _is_x_monomial(base):
                self.k = start
                self.error("negative exponent is only allowed on x in Laurent mode")
            return base ** (-k)
        return base ** k

    def base(self):
        ch = self.peek()
        vs = self.vs
        if ch.isdigit():
            num = self.digits()
            if self.peek() == "/":
                self.take()
                den = self.digits()
                if den == 0:
                    self.k -= 1
                    self.error("zero denominator")
                return self.cls.const(vs, Fraction(num, den))
            return self.cls.const(vs, num)
        if ch == "(":
            self.take()
            inner = self.expression()
            self.expect(")")
            return inner
        if ch.isalpha():
            start = self.k
            name = self.identifier()
            if name == "i":
                return self.cls.const(vs, I)
            if name == "z":
                self.error("z needs an index")
            if name == "y" and self.laurent:
                self.k = start
                self.error("y is not allowed in a Laurent polynomial")
            if name not in vs.names:
                self.k = start
                self.error(f"unknown variable {name!r}")
            return self.cls.var(vs, name)
        if ch == "":
            self.error("unexpected end of input")
        self.error(f"unexpected {ch!r}")


def _is_x_monomial(p) -> bool:
    if len(p) != 1:
        return False
    (e, _), = p.items()
    return all(k == 0 for i, k in enumerate(e) if i != X)


def parse(text: str, vs: VarSet) -> Poly:
    """Parse ``text`` into a canonical :class:`Poly` over ``vs``."""
    return _Parser(text, vs, laurent=False).parse()


def parse_laurent(text: str, vs: VarSet) -> LaurentPoly:
    return _Parser(text, vs, laurent=True).parse()


def parse_scalar(text: str) -> Scalar:
    """Parse a constant expression such as ``"-3/4"`` or ``"1+2*i"``."""
    p = _Parser(text, VarSet(0), laurent=False).parse()
    if not p.is_constant():
        raise PolySyntaxError("expected a constant", 0, text)
    return p.constant_term()


# -- printing -----------------------------------------------------------------


def format_monomial(vs: VarSet, e: tuple) -> str:
    parts = []
    for name, k in zip(vs.names, e):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _split_sign(c: Scalar):
    """Return (negative, magnitude) so that ``c == -magnitude`` if negative."""
    if isinstance(c, Gaussian):
        if c.re == 0 and c.im < 0:
            return True, -c
        return False, c
    if c < 0:
        return True, -c
    return False, c


def format_term(vs: VarSet, e: tuple, c: Scalar) -> str:
    mono = format_monomial(vs, e)
    if not mono:
        return format_scalar(c)
    if c == 1:
        return mono
    return f"{format_scalar(c)}*{mono}"


def format_poly(p: _Sparse) -> str:
    terms = p.sorted_terms(descending=True)
    if not terms:
        return "0"
    out = []
    for k, (e, c) in enumerate(terms):
        negative, mag = _split_sign(c)
        body = format_term(p.vs, e, mag)
        if k == 0:
            out.append(("-" if negative else "") + body)
        else:
            out.append((" - " if negative else " + ") + body)
    return "".join(out)
