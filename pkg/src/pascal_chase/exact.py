"""Exact weights: sparse multivariate polynomials with rational coefficients.

Integers and rationals are constant polynomials, so the rewrite engine never
has to distinguish numeric from symbolic weights. Coefficients are stored as
``int`` when integral and as :class:`fractions.Fraction` otherwise; both are
arbitrary precision.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Tuple, Union

Monomial = Tuple[Tuple[str, int], ...]
Rational = Union[int, Fraction]

_ONE: Monomial = ()


def _norm(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _mono_mul(x: Monomial, y: Monomial) -> Monomial:
    if not x:
        return y
    if not y:
        return x
    exps = dict(x)
    for name, e in y:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _term_key(m: Monomial):
    # total degree descending, then lexicographic on the expanded name sequence
    expanded = tuple(name for name, e in m for _ in range(e))
    return (-_mono_degree(m), expanded)


class Weight:
    """Immutable exact polynomial ``sum(coeff * monomial)``.

    >>> (Weight.var("a") + 1) ** 2
    Weight('a^2+2*a+1')
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if not isinstance(c, (int, Fraction)) or isinstance(c, bool):
                    raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")
                if c:
                    mono = tuple(sorted((n, e) for n, e in mono if e))
                    if any(e < 0 for _, e in mono):
                        raise ValueError("monomial exponents must be nonnegative")
                    clean[mono] = _norm(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> Weight:
        w = object.__new__(cls)
        w._terms = terms
        w._hash = None
        return w

    # -- constructors --------------------------------------------------------

    @classmethod
    def const(cls, c: Rational | str) -> Weight:
        if isinstance(c, str):
            c = Fraction(c)
        return cls._raw({_ONE: _norm(c)} if c else {})

    @classmethod
    def var(cls, name: str) -> Weight:
        return cls._raw({((name, 1),): 1})

    @classmethod
    def coerce(cls, x: Weight | Rational) -> Weight:
        if isinstance(x, Weight):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return cls.const(x)
        raise TypeError(f"cannot interpret {x!r} as a Weight")

    # -- inspection ------------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Rational]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Rational]]:
        """Terms in canonical order."""
        for mono in sorted(self._terms, key=_term_key):
            yield mono, self._terms[mono]

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _ONE in self._terms)

    def constant(self) -> Rational:
        """The value of a constant weight; raises if the weight is symbolic."""
        if not self.is_constant():
            raise ValueError(f"weight {self} is not constant")
        return self._terms.get(_ONE, 0)

    def indeterminates(self) -> set[str]:
        return {name for mono in self._terms for name, _ in mono}

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self._terms), default=0)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other) -> Weight:
        try:
            other = Weight.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = _norm(s)
            else:
                out.pop(mono, None)
        return Weight._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Weight:
        return Weight._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Weight:
        try:
            other = Weight.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Weight:
        return Weight.coerce(other) - self

    def __mul__(self, other) -> Weight:
        try:
            other = Weight.coerce(other)
        except TypeError:
            return NotImplemented
        if not self._terms or not other._terms:
            return Weight._raw({})
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = _norm(s)
                else:
                    out.pop(m, None)
        return Weight._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Weight:
        if not isinstance(e, int) or isinstance(e, bool):
            return NotImplemented
        if e < 0:
            raise ValueError(f"negative exponent {e} is not supported")
        result = ONE
        base = self
        # square-and-multiply; 0**0 == 1 by convention
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Weight):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return not self._terms
            return self.is_constant() and self._terms.get(_ONE) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self._terms.get(_ONE, 0))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        return format_weight(self)

    def __repr__(self) -> str:
        return f"Weight({format_weight(self)!r})"


ZERO = Weight()
ONE = Weight.const(1)


def weight_add(x: Weight, y: Weight) -> Weight:
    return Weight.coerce(x) + Weight.coerce(y)


def weight_mul(x: Weight, y: Weight) -> Weight:
    return Weight.coerce(x) * Weight.coerce(y)


def weight_pow(x: Weight, e: int) -> Weight:
    return Weight.coerce(x) ** e


def weight_sum(ws: Iterable[Weight | Rational]) -> Weight:
    total = ZERO
    for w in ws:
        total = total + w
    return total


def contains(outer: Weight, inner: Weight) -> bool:
    """True if ``inner`` can be taken out of ``outer`` without overdrawing.

    Term by term, every coefficient of ``inner`` must share the sign of the
    matching coefficient of ``outer`` and not exceed it in magnitude.
    """
    for mono, c in inner._terms.items():
        have = outer._terms.get(mono, 0)
        if c > 0:
            if not have >= c:
                return False
        elif not have <= c:
            return False
    return True


# -- text codec ------------------------------------------------------------------


class WeightParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


def _format_rational(c: Rational) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _format_mono(m: Monomial) -> str:
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in m)


def format_weight(w: Weight) -> str:
    """Canonical text, e.g. ``"1/2*a^2*b"`` or ``"a^2+2*a*b+b^2"``."""
    w = Weight.coerce(w)
    if w.is_zero():
        return "0"
    parts = []
    for i, (mono, c) in enumerate(w.items()):
        neg = c < 0
        mag = -c if neg else c
        if not mono:
            body = _format_rational(mag)
        elif mag == 1:
            body = _format_mono(mono)
        else:
            body = f"{_format_rational(mag)}*{_format_mono(mono)}"
        if i == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(("-" if neg else "+") + body)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))")


def parse_weight(text: str) -> Weight:
    """Inverse of :func:`format_weight`.

    Accepts the certificate grammar plus a leading sign directly before a
    monomial (``"-a"``), which :func:`format_weight` emits.
    """
    raw = text.encode("utf-8")
    if len(raw) != len(text):
        bad = next(i for i, ch in enumerate(text) if ord(ch) > 127)
        raise WeightParseError("non-ASCII character", len(text[:bad].encode("utf-8")))
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise WeightParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    i = 0

    def peek():
        return tokens[i]

    def take(kind, value=None):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise WeightParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        i += 1
        return tok

    def uint():
        return int(take("int")[1])

    def mono() -> Monomial:
        exps: dict[str, int] = {}
        while True:
            _, name, at = take("ident")
            e = 1
            if peek()[:2] == ("op", "^"):
                take("op", "^")
                e = uint()
                if e == 0:
                    raise WeightParseError("zero exponent is not canonical", tokens[i - 1][2])
            exps[name] = exps.get(name, 0) + e
            if peek()[:2] == ("op", "*") and tokens[i + 1][0] == "ident":
                take("op", "*")
                continue
            return tuple(sorted(exps.items()))

    def term(sign: int) -> tuple[Monomial, Rational]:
        kind, value, _ = peek()
        if kind == "ident":
            return mono(), sign
        num = uint()
        c: Rational = num
        if peek()[:2] == ("op", "/"):
            take("op", "/")
            at = peek()[2]
            den = uint()
            if den == 0:
                raise WeightParseError("zero denominator", at)
            c = Fraction(num, den)
        m: Monomial = ()
        if peek()[:2] == ("op", "*"):
            take("op", "*")
            m = mono()
        return m, sign * c

    terms: dict[Monomial, Rational] = {}

    def add(m: Monomial, c: Rational):
        s = terms.get(m, 0) + c
        if s:
            terms[m] = s
        else:
            terms.pop(m, None)

    sign = 1
    if peek()[:2] == ("op", "-"):
        take("op", "-")
        sign = -1
    add(*term(sign))
    while peek()[0] == "op" and peek()[1] in "+-":
        op = take("op")[1]
        add(*term(-1 if op == "-" else 1))
    if peek()[0] != "end":
        raise WeightParseError(f"unexpected {peek()[1]!r}", peek()[2])
    return Weight(terms)
