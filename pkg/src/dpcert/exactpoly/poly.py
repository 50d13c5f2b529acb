"""Sparse multivariate polynomials and x-Laurent polynomials over Q(i).

Every polynomial belongs to a :class:`VarSet`, the ordered variables
``x, y, z0, ..., zn`` optionally followed by extra commuting indeterminates
(surface parameters such as ``alpha``/``beta`` or formal units).  Terms live
in a dict from exponent tuples (in ``VarSet.names`` order) to nonzero
scalars.  Values are never mutated after construction.

The monomial order is graded lexicographic with ``y > x > z0 > ... > zn``;
the grading counts only the geometric variables, extra indeterminates break
ties last.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .scalar import Gaussian, Scalar, as_scalar, div

X = 0
Y = 1

PARAMS = ("alpha", "beta")


@dataclass(frozen=True)
class VarSet:
    n: int
    extra: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        object.__setattr__(self, "extra", tuple(self.extra))
        names = ["x", "y"] + [f"z{i}" for i in range(self.n + 1)] + list(self.extra)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "_names", tuple(names))
        object.__setattr__(self, "_index", {name: k for k, name in enumerate(names)})

    @classmethod
    def with_params(cls, n: int = 0) -> "VarSet":
        return cls(n, PARAMS)

    @property
    def names(self) -> tuple:
        return self._names

    @property
    def size(self) -> int:
        return len(self._names)

    @property
    def geo(self) -> int:
        """Number of geometric variables (x, y and the z's)."""
        return self.n + 3

    @property
    def has_params(self) -> bool:
        return all(p in self._index for p in PARAMS)

    def z(self, i: int) -> int:
        if not 0 <= i <= self.n:
            raise IndexError(f"z{i} is not a variable of {self}")
        return 2 + i

    @property
    def z_indices(self) -> range:
        return range(2, self.n + 3)

    def index(self, var) -> int:
        if isinstance(var, int):
            if not 0 <= var < self.size:
                raise IndexError(f"variable index {var} out of range")
            return var
        try:
            return self._index[var]
        except KeyError:
            raise KeyError(f"unknown variable {var!r}") from None

    def zero_exp(self) -> tuple:
        return (0,) * self.size

    def unit_exp(self, var, power: int = 1) -> tuple:
        e = [0] * self.size
        e[self.index(var)] = power
        return tuple(e)

    def order_key(self, e: tuple) -> tuple:
        g = self.n + 3
        return (sum(e[:g]), e[1], e[0]) + e[2:]

    def __str__(self):
        return "VarSet(" + ", ".join(self._names) + ")"


def _add_into(out: dict, e: tuple, c) -> None:
    v = out.get(e)
    if v is None:
        out[e] = c
    else:
        v = v + c
        if v == 0:
            del out[e]
        else:
            out[e] = v


class _Sparse:
    __slots__ = ("vs", "_terms", "_hash")

    laurent = False

    def __init__(self, vs: VarSet, terms: Mapping | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != vs.size:
                    raise ValueError(f"exponent {e} has wrong length for {vs}")
                self._check_exp(vs, e)
                c = as_scalar(c)
                if c != 0:
                    _add_into(clean, e, c)
        self.vs = vs
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, vs: VarSet, terms: dict):
        # trusted constructor: no zero coefficients, exponents valid
        obj = object.__new__(cls)
        obj.vs = vs
        obj._terms = terms
        obj._hash = None
        return obj

    @staticmethod
    def _check_exp(vs, e):
        if any(k < 0 for k in e):
            raise ValueError(f"negative exponent in {e}")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, vs: VarSet):
        return cls._make(vs, {})

    @classmethod
    def const(cls, vs: VarSet, c) -> "_Sparse":
        c = as_scalar(c)
        return cls._make(vs, {vs.zero_exp(): c} if c != 0 else {})

    @classmethod
    def var(cls, vs: VarSet, name) -> "_Sparse":
        return cls._make(vs, {vs.unit_exp(name): 1})

    @classmethod
    def monomial(cls, vs: VarSet, e, c=1) -> "_Sparse":
        return cls(vs, {tuple(e): c})

    # -- basic protocol -------------------------------------------------------

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vs, frozenset(self._terms.items())))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, _Sparse):
            return self.vs == other.vs and self._terms == other._terms
        if isinstance(other, (int, Gaussian)) or _is_fraction(other):
            if other == 0:
                return not self._terms
            return self._terms == {self.vs.zero_exp(): other}
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def __str__(self):
        from .grammar import format_poly

        return format_poly(self)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, _Sparse):
            if other.vs != self.vs:
                raise ValueError(f"variable sets differ: {self.vs} vs {other.vs}")
            return other
        try:
            c = as_scalar(other)
        except TypeError:
            return None
        return type(self).const(self.vs, c)

    def _result_cls(self, other):
        if self.laurent or other.laurent:
            return LaurentPoly
        return Poly

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            _add_into(out, e, c)
        return self._result_cls(other)._make(self.vs, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._make(self.vs, {e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            _add_into(out, e, -c)
        return self._result_cls(other)._make(self.vs, out)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if not isinstance(other, _Sparse):
            try:
                c = as_scalar(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        other = self._coerce(other)
        cls = self._result_cls(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return cls._make(self.vs, {})
        if len(b) == 1:
            (e, c), = b.items()
            return cls._make(self.vs, _shift(a, e, c))
        if len(a) == 1:
            (e, c), = a.items()
            return cls._make(self.vs, _shift(b, e, c))
        out = {}
        add = operator.add
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                _add_into(out, tuple(map(add, e1, e2)), c1 * c2)
        return cls._make(self.vs, out)

    __rmul__ = __mul__

    def scale(self, c) -> "_Sparse":
        c = as_scalar(c)
        if c == 0:
            return type(self)._make(self.vs, {})
        if c == 1:
            return self
        return type(self)._make(self.vs, {e: v * c for e, v in self._terms.items()})

    def mul_term(self, e: tuple, c=1) -> "_Sparse":
        """Multiply by the single term ``c * monomial(e)``."""
        if c == 0:
            return type(self)._make(self.vs, {})
        cls = LaurentPoly if (self.laurent or min(e) < 0) else type(self)
        return cls._make(self.vs, _shift(self._terms, tuple(e), c))

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self._negative_power(k)
        result = type(self).const(self.vs, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def _negative_power(self, k):
        raise ValueError("negative powers need a LaurentPoly monomial in x")

    # -- structure ------------------------------------------------------------

    def degree(self) -> int:
        """Total degree in the geometric variables (``-1`` for zero)."""
        if not self._terms:
            return -1
        g = self.vs.geo
        return max(sum(e[:g]) for e in self._terms)

    def degree_in(self, var) -> int:
        k = self.vs.index(var)
        if not self._terms:
            return -1
        return max(e[k] for e in self._terms)

    def min_degree_in(self, var) -> int:
        k = self.vs.index(var)
        return min((e[k] for e in self._terms), default=0)

    def variables(self) -> set:
        out = set()
        for e in self._terms:
            out.update(k for k, p in enumerate(e) if p)
        return out

    def involves(self, var) -> bool:
        k = self.vs.index(var)
        return any(e[k] for e in self._terms)

    def sorted_terms(self, descending: bool = True) -> list:
        key = self.vs.order_key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=descending)

    def leading_term(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = self.vs.order_key
        e = max(self._terms, key=key)
        return e, self._terms[e]

    def coefficient(self, e) -> Scalar:
        return self._terms.get(tuple(e), 0)

    def constant_term(self) -> Scalar:
        return self._terms.get(self.vs.zero_exp(), 0)

    def is_constant(self) -> bool:
        z = self.vs.zero_exp()
        return all(e == z for e in self._terms)

    def without_constant(self):
        z = self.vs.zero_exp()
        if z not in self._terms:
            return self
        out = dict(self._terms)
        del out[z]
        return type(self)._make(self.vs, out)

    def coefficients_in(self, var) -> dict:
        """Split by the power of ``var``: ``{k: coefficient polynomial}``."""
        k = self.vs.index(var)
        parts: dict = {}
        for e, c in self._terms.items():
            p = e[k]
            e2 = e[:k] + (0,) + e[k + 1:]
            parts.setdefault(p, {})[e2] = c
        return {p: type(self)._make(self.vs, t) for p, t in parts.items()}

    # -- calculus -------------------------------------------------------------

    def partial(self, var):
        k = self.vs.index(var)
        out = {}
        for e, c in self._terms.items():
            p = e[k]
            if p:
                e2 = e[:k] + (p - 1,) + e[k + 1:]
                out[e2] = c * p
        return type(self)._make(self.vs, out)

    def subs(self, bindings: Mapping):
        """Substitute polynomials (or scalars) for variables."""
        binds = {}
        for var, val in bindings.items():
            k = self.vs.index(var)
            if not isinstance(val, _Sparse):
                val = type(self).const(self.vs, as_scalar(val))
            elif val.vs != self.vs:
                raise ValueError("substituted value lives in a different VarSet")
            binds[k] = val
        if not binds:
            return self
        any_laurent = self.laurent or any(v.laurent for v in binds.values())
        cls = LaurentPoly if any_laurent else Poly
        powers: dict = {}

        def power(k, p):
            key = (k, p)
            r = powers.get(key)
            if r is None:
                base = binds[k]
                if p < 0:
                    r = _monomial_inverse(base, -p)
                else:
                    r = base ** p
                powers[key] = r
            return r

        out: dict = {}
        for e, c in self._terms.items():
            rest = list(e)
            factor = None
            for k in binds:
                p = e[k]
                rest[k] = 0
                if p:
                    f = power(k, p)
                    factor = f if factor is None else factor * f
            if factor is None:
                _add_into(out, tuple(rest), c)
                continue
            prod = _shift(factor._terms, tuple(rest), c)
            for e2, c2 in prod.items():
                _add_into(out, e2, c2)
        return cls._make(self.vs, out)

    def evaluate(self, values: Mapping) -> Scalar:
        """Evaluate at a point given as ``{variable: scalar}``; all variables
        occurring in the polynomial must be bound."""
        vals = {self.vs.index(k): as_scalar(v) for k, v in values.items()}
        total = 0
        for e, c in self._terms.items():
            t = c
            for k, p in enumerate(e):
                if p:
                    if k not in vals:
                        raise KeyError(f"no value for {self.vs.names[k]}")
                    v = vals[k]
                    if p < 0:
                        t = div(t, v ** (-p))
                    else:
                        t = t * v ** p
            total = total + t
        return total

    def map_coefficients(self, f):
        out = {}
        for e, c in self._terms.items():
            v = f(c)
            if v != 0:
                out[e] = v
        return type(self)._make(self.vs, out)


def _is_fraction(v) -> bool:
    from fractions import Fraction

    return isinstance(v, Fraction)


def _shift(terms: dict, e: tuple, c) -> dict:
    add = operator.add
    if c == 1:
        return {tuple(map(add, t, e)): v for t, v in terms.items()}
    return {tuple(map(add, t, e)): v * c for t, v in terms.items()}


def _monomial_inverse(base: "_Sparse", p: int) -> "LaurentPoly":
    if len(base._terms) != 1:
        raise ValueError("only a monomial in x can be raised to a negative power")
    (e, c), = base._terms.items()
    if any(k != 0 for i, k in enumerate(e) if i != X):
        raise ValueError("only a monomial in x can be raised to a negative power")
    inv_e = tuple(-k * p for k in e)
    return LaurentPoly._make(base.vs, {inv_e: div(1, c ** p)})


class Poly(_Sparse):
    """Polynomial with nonnegative exponents."""

    __slots__ = ()

    def to_laurent(self) -> "LaurentPoly":
        return LaurentPoly._make(self.vs, dict(self._terms))


class LaurentPoly(_Sparse):
    """Polynomial in which only the x-exponent may be negative; the
    y-exponent is always zero (y is eliminated on the chart)."""

    __slots__ = ()

    laurent = True

    @staticmethod
    def _check_exp(vs, e):
        if e[Y] != 0:
            raise ValueError("LaurentPoly terms must not contain y")
        if any(k < 0 for i, k in enumerate(e) if i != X):
            raise ValueError(f"only the x-exponent may be negative in {e}")

    @classmethod
    def x_power(cls, vs: VarSet, k: int, c=1) -> "LaurentPoly":
        return cls(vs, {vs.unit_exp(X, k): c})

    def shift_x(self, k: int) -> "LaurentPoly":
        return self.mul_term(self.vs.unit_exp(X, k))

    def _negative_power(self, k):
        return _monomial_inverse(self, -k)

    def to_laurent(self) -> "LaurentPoly":
        return self

    def is_polynomial(self) -> bool:
        return all(e[X] >= 0 for e in self._terms)

    def to_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("negative x-exponent present")
        return Poly._make(self.vs, dict(self._terms))


# -- functional surface -------------------------------------------------------


def partial(p: _Sparse, var) -> _Sparse:
    return p.partial(var)


def substitute(p: _Sparse, bindings: Mapping) -> _Sparse:
    return p.subs(bindings)


def arith(op: str, *operands):
    """Dispatch ``add, sub, mul, pow, neg, scale`` by name."""
    if op == "add":
        out = operands[0]
        for q in operands[1:]:
            out = out + q
        return out
    if op == "sub":
        a, b = operands
        return a - b
    if op == "mul":
        out = operands[0]
        for q in operands[1:]:
            out = out * q
        return out
    if op == "pow":
        a, k = operands
        return a ** k
    if op == "neg":
        (a,) = operands
        return -a
    if op == "scale":
        a, c = operands
        return a.scale(c)
    raise ValueError(f"unknown operation {op!r}")


def poly_sum(polys: Iterable[_Sparse], vs: VarSet) -> _Sparse:
    out: dict = {}
    laurent = False
    for p in polys:
        laurent = laurent or p.laurent
        for e, c in p._terms.items():
            _add_into(out, e, c)
    return (LaurentPoly if laurent else Poly)._make(vs, out)
