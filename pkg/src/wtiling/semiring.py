"""Commutative semirings with exact arithmetic.

Every evaluator in the package goes through a :class:`Semiring` instance, so
weights never leave their carrier.  Integers are Python ints, rationals are
:class:`fractions.Fraction`, booleans are ``bool`` and the tropical
semirings use ints plus one of the two :data:`NEG_INF` / :data:`POS_INF`
tokens as their zero.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable


class SemiringError(ValueError):
    """Unknown semiring identifier or a value outside the carrier."""


class _Infinity:
    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "-inf" if self.sign < 0 else "+inf"

    def __reduce__(self):
        return (_infinity, (self.sign,))


def _infinity(sign):
    return NEG_INF if sign < 0 else POS_INF


NEG_INF = _Infinity(-1)
POS_INF = _Infinity(+1)

SEMIRING_IDS = (
    "boolean",
    "natural",
    "integer",
    "rational",
    "rational-nonneg",
    "max-plus-nat",
    "max-plus-int",
    "min-plus-nat",
    "min-plus-int",
)

_INT_RE = re.compile(r"-?[0-9]+\Z")
_FRAC_RE = re.compile(r"(-?[0-9]+)/([0-9]+)\Z")


@dataclass(frozen=True)
class Semiring:
    """A commutative semiring given by its operations.

    ``check`` validates (and normalises) a carrier element, ``sample`` draws a
    small random element for property tests.  The built-in instances come from
    :func:`make_semiring`; ad-hoc instances (e.g. deliberately broken ones for
    law checking) can be built directly.
    """

    name: str
    zero_value: Any
    one_value: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    parse: Callable[[str], Any]
    render: Callable[[Any], str]
    sample: Callable[[random.Random], Any] = field(repr=False)
    check: Callable[[Any], Any] = field(default=lambda v: v, repr=False)

    def zero(self):
        return self.zero_value

    def one(self):
        return self.one_value

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return a == self.zero_value

    def sum(self, values):
        acc = self.zero_value
        for v in values:
            acc = self.add(acc, v)
        return acc

    def prod(self, values):
        acc = self.one_value
        for v in values:
            acc = self.mul(acc, v)
        return acc


# -- parsing helpers ---------------------------------------------------------

def _parse_int(text: str) -> int:
    text = text.strip()
    if not _INT_RE.match(text):
        raise SemiringError(f"not an integer weight: {text!r}")
    return int(text)


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if _INT_RE.match(text):
        return Fraction(int(text))
    m = _FRAC_RE.match(text)
    if not m:
        raise SemiringError(f"not a rational weight: {text!r}")
    den = int(m.group(2))
    if den == 0:
        raise SemiringError(f"zero denominator: {text!r}")
    return Fraction(int(m.group(1)), den)


def _render_fraction(v: Fraction) -> str:
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


# -- concrete semirings ------------------------------------------------------

def _boolean() -> Semiring:
    def parse(text):
        text = text.strip()
        if text == "1":
            return True
        if text == "0":
            return False
        raise SemiringError(f"not a boolean weight: {text!r}")

    def check(v):
        if isinstance(v, bool):
            return v
        if _is_int(v) and v in (0, 1):
            return bool(v)
        raise SemiringError(f"not a boolean: {v!r}")

    return Semiring(
        "boolean", False, True,
        add=lambda a, b: a or b,
        mul=lambda a, b: a and b,
        parse=parse,
        render=lambda v: "1" if v else "0",
        sample=lambda rng: rng.random() < 0.5,
        check=check,
    )


def _integers(name: str, nonneg: bool) -> Semiring:
    def check(v):
        if isinstance(v, Fraction) and v.denominator == 1:
            v = v.numerator
        if not _is_int(v):
            raise SemiringError(f"{name}: not an integer: {v!r}")
        if nonneg and v < 0:
            raise SemiringError(f"{name}: negative value {v}")
        return v

    lo = 0 if nonneg else -5
    return Semiring(
        name, 0, 1,
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        parse=lambda text: check(_parse_int(text)),
        render=str,
        sample=lambda rng: rng.randint(lo, 5),
        check=check,
    )


def _rationals(name: str, nonneg: bool) -> Semiring:
    def check(v):
        if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
            raise SemiringError(f"{name}: not a rational: {v!r}")
        v = Fraction(v)
        if nonneg and v < 0:
            raise SemiringError(f"{name}: negative value {v}")
        return v

    def sample(rng):
        num = rng.randint(0 if nonneg else -6, 6)
        return Fraction(num, rng.randint(1, 4))

    return Semiring(
        name, Fraction(0), Fraction(1),
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        parse=lambda text: check(_parse_fraction(text)),
        render=_render_fraction,
        sample=sample,
        check=check,
    )


def _tropical(name: str, use_max: bool, nonneg: bool) -> Semiring:
    inf = NEG_INF if use_max else POS_INF
    token = repr(inf)

    def check(v):
        if v is inf:
            return v
        if isinstance(v, Fraction) and v.denominator == 1:
            v = v.numerator
        if not _is_int(v):
            raise SemiringError(f"{name}: not a tropical value: {v!r}")
        if nonneg and v < 0:
            raise SemiringError(f"{name}: negative value {v}")
        return v

    if use_max:
        def add(a, b):
            if a is inf:
                return b
            if b is inf:
                return a
            return a if a >= b else b
    else:
        def add(a, b):
            if a is inf:
                return b
            if b is inf:
                return a
            return a if a <= b else b

    def mul(a, b):
        if a is inf or b is inf:
            return inf
        return a + b

    def parse(text):
        text = text.strip()
        if text == token:
            return inf
        return check(_parse_int(text))

    def sample(rng):
        if rng.random() < 0.1:
            return inf
        return rng.randint(0 if nonneg else -5, 6)

    return Semiring(
        name, inf, 0,
        add=add, mul=mul, parse=parse,
        render=lambda v: token if v is inf else str(v),
        sample=sample, check=check,
    )


_FACTORIES = {
    "boolean": _boolean,
    "natural": lambda: _integers("natural", nonneg=True),
    "integer": lambda: _integers("integer", nonneg=False),
    "rational": lambda: _rationals("rational", nonneg=False),
    "rational-nonneg": lambda: _rationals("rational-nonneg", nonneg=True),
    "max-plus-nat": lambda: _tropical("max-plus-nat", use_max=True, nonneg=True),
    "max-plus-int": lambda: _tropical("max-plus-int", use_max=True, nonneg=False),
    "min-plus-nat": lambda: _tropical("min-plus-nat", use_max=False, nonneg=True),
    "min-plus-int": lambda: _tropical("min-plus-int", use_max=False, nonneg=False),
}

_CACHE: dict[str, Semiring] = {}


def make_semiring(name: str) -> Semiring:
    """Return the built-in semiring called ``name`` (see ``SEMIRING_IDS``)."""
    if isinstance(name, Semiring):
        return name
    try:
        factory = _FACTORIES[name]
    except (KeyError, TypeError):
        raise SemiringError(
            f"unknown semiring {name!r}; expected one of {', '.join(SEMIRING_IDS)}"
        ) from None
    if name not in _CACHE:
        _CACHE[name] = factory()
    return _CACHE[name]


# -- law checking ------------------------------------------------------------

@dataclass
class LawReport:
    semiring: str
    samples: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed


_LAWS = (
    ("add-commutative", lambda S, a, b, c: (S.add(a, b), S.add(b, a))),
    ("mul-commutative", lambda S, a, b, c: (S.mul(a, b), S.mul(b, a))),
    ("add-associative",
     lambda S, a, b, c: (S.add(S.add(a, b), c), S.add(a, S.add(b, c)))),
    ("mul-associative",
     lambda S, a, b, c: (S.mul(S.mul(a, b), c), S.mul(a, S.mul(b, c)))),
    ("left-distributive",
     lambda S, a, b, c: (S.mul(a, S.add(b, c)), S.add(S.mul(a, b), S.mul(a, c)))),
    ("right-distributive",
     lambda S, a, b, c: (S.mul(S.add(b, c), a), S.add(S.mul(b, a), S.mul(c, a)))),
    ("add-identity", lambda S, a, b, c: (S.add(a, S.zero()), a)),
    ("mul-identity", lambda S, a, b, c: (S.mul(a, S.one()), a)),
    ("annihilation", lambda S, a, b, c: (S.mul(a, S.zero()), S.zero())),
)

LAW_NAMES = tuple(name for name, _ in _LAWS)


def check_semiring_laws(S: Semiring, samples: int = 1000, seed: int = 0,
                        max_failures: int = 10) -> LawReport:
    """Check the commutative-semiring axioms on ``samples`` random triples.

    Each failure is recorded as ``(law, (a, b, c), lhs, rhs)``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    report = LawReport(S.name, samples)
    for _ in range(samples):
        a, b, c = S.sample(rng), S.sample(rng), S.sample(rng)
        for law, fn in _LAWS:
            lhs, rhs = fn(S, a, b, c)
            if not S.eq(lhs, rhs):
                report.failures.append((law, (a, b, c), lhs, rhs))
                if len(report.failures) >= max_failures:
                    return report
    return report
