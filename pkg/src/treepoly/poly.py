"""Exact sparse polynomials in x, y, z, and rational univariate polynomials.

:class:`MultiPoly` maps exponent triples ``(a, b, c)`` to nonzero Python ints
(the monomial ``x^a y^b z^c``).  :class:`UniRatPoly` holds
:class:`fractions.Fraction` coefficients indexed by degree.  Nothing here ever
touches floating point.

Printed form (also accepted by :func:`parse_poly`)::

    poly   := "0" | term (" + " term | " - " term)*
    term   := [coeff] [factors]
    factors:= var["^"exp] ("*" var["^"exp])*

Terms appear by descending total degree, ties broken by descending exponent
triple.  A coefficient of 1 is omitted when factors follow, an exponent of 1
is omitted, and a coefficient is joined to its factors by ``*``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

__all__ = [
    "PolyParseError",
    "MultiPoly",
    "UniRatPoly",
    "MINUS_INFINITY",
    "VARS",
    "X",
    "Y",
    "Z",
    "ONE",
    "ZERO",
    "add",
    "mul",
    "neg",
    "substitute",
    "partial_derivative",
    "integrate_unit_interval",
    "degree",
    "coefficient_of",
    "serialize_poly",
    "parse_poly",
]

Exponent = Tuple[int, int, int]
VARS = ("x", "y", "z")
_VAR_INDEX = {v: i for i, v in enumerate(VARS)}

#: Degree of the zero polynomial.
MINUS_INFINITY = float("-inf")


class PolyParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def _var_index(var: Union[str, int]) -> int:
    if isinstance(var, int):
        if var not in (0, 1, 2):
            raise ValueError(f"unknown variable index {var}")
        return var
    try:
        return _VAR_INDEX[var]
    except KeyError:
        raise ValueError(f"unknown variable {var!r}; expected one of x, y, z") from None


class MultiPoly:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: Dict[Exponent, int] = {}
        for exp, c in items:
            if c:
                exp = tuple(exp)
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms: Dict[Exponent, int] = clean
        self._hash = None

    @classmethod
    def _trusted(cls, terms: Dict[Exponent, int]) -> MultiPoly:
        # terms must already be free of zero coefficients
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: int) -> MultiPoly:
        return cls._trusted({(0, 0, 0): c} if c else {})

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, c: int = 0, coeff: int = 1) -> MultiPoly:
        return cls._trusted({(a, b, c): coeff} if coeff else {})

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for e, c in small.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._trusted(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._trusted({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if not a or not b:
            return ZERO
        if len(a) > len(b):
            a, b = b, a
        out: Dict[Exponent, int] = {}
        get = out.get
        for (a1, b1, c1), k1 in a.items():
            for (a2, b2, c2), k2 in b.items():
                e = (a1 + a2, b1 + b2, c1 + c2)
                out[e] = get(e, 0) + k1 * k2
        return MultiPoly._trusted({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"MultiPoly({serialize_poly(self)!r})"

    def __str__(self):
        return serialize_poly(self)

    def __reduce__(self):
        return (MultiPoly, (self.terms,))

    # -- queries ------------------------------------------------------------

    def is_constant(self) -> bool:
        return all(e == (0, 0, 0) for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0, 0, 0), 0)

    def variables(self) -> set[str]:
        return {VARS[i] for e in self.terms for i in range(3) if e[i]}

    def evaluate(self, x=0, y=0, z=0):
        """Evaluate at a point; works for ints and Fractions alike."""
        point = (x, y, z)
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(point, e):
                if k:
                    term *= v**k
            total += term
        return total


ZERO = MultiPoly._trusted({})
ONE = MultiPoly._trusted({(0, 0, 0): 1})
X = MultiPoly.monomial(1, 0, 0)
Y = MultiPoly.monomial(0, 1, 0)
Z = MultiPoly.monomial(0, 0, 1)


def _coerce(value) -> MultiPoly:
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, int):
        return MultiPoly.constant(value)
    return NotImplemented


def add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


def neg(p: MultiPoly) -> MultiPoly:
    return -p


def substitute(p: MultiPoly, assignment: Mapping[str, MultiPoly | int]) -> MultiPoly:
    """Simultaneously replace variables by polynomials.

    Variables missing from ``assignment`` are kept as they are.
    """
    images = [None, None, None]
    for var, image in assignment.items():
        images[_var_index(var)] = _coerce(image)
    if all(img is None for img in images):
        return p
    power_cache: list[dict[int, MultiPoly]] = [{0: ONE}, {0: ONE}, {0: ONE}]

    def power(i: int, k: int) -> MultiPoly:
        cache = power_cache[i]
        if k not in cache:
            cache[k] = power(i, k - 1) * images[i]
        return cache[k]

    # Group by the exponents of substituted variables so each product is built once.
    groups: Dict[Exponent, Dict[Exponent, int]] = {}
    for e, c in p.terms.items():
        subst_key = tuple(e[i] if images[i] is not None else 0 for i in range(3))
        kept = tuple(0 if images[i] is not None else e[i] for i in range(3))
        groups.setdefault(subst_key, {})[kept] = c
    out = ZERO
    for subst_key, kept_terms in groups.items():
        factor = ONE
        for i in range(3):
            if images[i] is not None and subst_key[i]:
                factor = factor * power(i, subst_key[i])
        out = out + factor * MultiPoly._trusted(kept_terms)
    return out


def partial_derivative(p: MultiPoly, var: Union[str, int]) -> MultiPoly:
    i = _var_index(var)
    out = {}
    for e, c in p.terms.items():
        k = e[i]
        if k:
            ne = list(e)
            ne[i] = k - 1
            out[tuple(ne)] = c * k
    return MultiPoly._trusted(out)


def degree(p: MultiPoly, var: Union[str, int]):
    """Degree in ``var``; the zero polynomial has degree ``MINUS_INFINITY``."""
    i = _var_index(var)
    if not p.terms:
        return MINUS_INFINITY
    return max(e[i] for e in p.terms)


def coefficient_of(p: MultiPoly, var: Union[str, int], k: int) -> MultiPoly:
    """The polynomial multiplying ``var**k`` (with ``var`` eliminated)."""
    i = _var_index(var)
    out = {}
    for e, c in p.terms.items():
        if e[i] == k:
            ne = list(e)
            ne[i] = 0
            out[tuple(ne)] = c
    return MultiPoly._trusted(out)


def integrate_unit_interval(p: MultiPoly) -> UniRatPoly:
    """Integrate over the z slot on [0, 1], leaving a polynomial in x.

    ``p`` must not involve y.
    """
    coeffs: Dict[int, Fraction] = {}
    for (a, b, c), k in p.terms.items():
        if b:
            raise ValueError("integrand must be free of y; found a term with y-exponent %d" % b)
        coeffs[a] = coeffs.get(a, Fraction(0)) + Fraction(k, c + 1)
    if not coeffs:
        return UniRatPoly([])
    top = max(coeffs)
    return UniRatPoly([coeffs.get(i, Fraction(0)) for i in range(top + 1)])


class UniRatPoly:
    """Univariate polynomial in x over the rationals."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[Union[Fraction, int]]):
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients: tuple[Fraction, ...] = tuple(coeffs)

    def degree(self):
        return len(self.coefficients) - 1 if self.coefficients else MINUS_INFINITY

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return Fraction(0)

    def evaluate(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, UniRatPoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"UniRatPoly({str(self)!r})"

    def __str__(self):
        terms = [((k, 0, 0), c) for k, c in enumerate(self.coefficients) if c]
        return _format_terms(terms)


# -- text form -----------------------------------------------------------------

def _sort_key(e: Exponent):
    return (sum(e), e)


def _format_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def _format_terms(terms: list[tuple[Exponent, object]]) -> str:
    if not terms:
        return "0"
    terms = sorted(terms, key=lambda t: _sort_key(t[0]), reverse=True)
    pieces = []
    for idx, (e, c) in enumerate(terms):
        negative = c < 0
        mag = -c if negative else c
        factors = "*".join(
            VARS[i] if e[i] == 1 else f"{VARS[i]}^{e[i]}" for i in range(3) if e[i]
        )
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = factors
        else:
            body = f"{_format_coeff(mag)}*{factors}"
        if idx == 0:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append((" - " if negative else " + ") + body)
    return "".join(pieces)


def serialize_poly(p: MultiPoly) -> str:
    return _format_terms(list(p.terms.items()))


class _PolyParser:
    """Recursive-descent reader for sums of monomials.

    Accepts the canonical output plus looser input such as extra spaces and
    implicit multiplication (``2x^3y``).
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise PolyParseError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def term(self) -> tuple[Exponent, int]:
        self.skip()
        coeff = 1
        seen = False
        if self.peek().isdigit():
            coeff = self.integer()
            seen = True
            self.skip()
        exps = [0, 0, 0]
        while True:
            ch = self.peek()
            if ch == "*":
                if not seen:
                    self.error("unexpected '*'")
                self.pos += 1
                self.skip()
                ch = self.peek()
                if ch not in _VAR_INDEX:
                    self.error("expected a variable after '*'")
            if ch in _VAR_INDEX:
                self.pos += 1
                self.skip()
                k = 1
                if self.peek() == "^":
                    self.pos += 1
                    self.skip()
                    k = self.integer()
                    self.skip()
                exps[_VAR_INDEX[ch]] += k
                seen = True
                continue
            break
        if not seen:
            self.error("expected a term")
        return tuple(exps), coeff

    def parse(self) -> MultiPoly:
        self.skip()
        if not self.text.strip():
            self.error("empty polynomial")
        terms: Dict[Exponent, int] = {}
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            e, c = self.term()
            terms[e] = terms.get(e, 0) + sign * c
            self.skip()
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return MultiPoly(terms)


def parse_poly(text: str) -> MultiPoly:
    return _PolyParser(text).parse()
