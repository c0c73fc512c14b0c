"""Exact multivariate polynomials over the rationals.

Coefficients are kept as ``int`` whenever they are integral and as
``fractions.Fraction`` otherwise, which keeps the common integer case fast.
"""

from __future__ import annotations

import random
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]
Monomial = tuple[int, ...]


def normalize(c) -> Scalar:
    """Canonical exact scalar: ``int`` if integral, otherwise ``Fraction``."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return normalize(Fraction(c.numerator, c.denominator))
    raise TypeError(f"inexact or unsupported coefficient {c!r}")


class Polynomial:
    """Sparse polynomial in ``nvars`` variables ``x1 .. x_nvars``.

    Instances are immutable; ``terms`` maps exponent tuples to nonzero
    exact scalars.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Scalar] | None = None):
        self.nvars = nvars
        clean: dict[Monomial, Scalar] = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != nvars:
                    raise ValueError(f"exponent {mono} does not have {nvars} entries")
                c = normalize(c)
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = normalize(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        if not 1 <= i <= nvars:
            raise IndexError(f"variable x{i} out of range 1..{nvars}")
        mono = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls._raw(nvars, {mono: 1})

    @classmethod
    def monomial(cls, nvars: int, exponents: Monomial, c=1) -> "Polynomial":
        return cls(nvars, {tuple(exponents): c})

    @classmethod
    def parse(cls, text: str, nvars: int) -> "Polynomial":
        from .syntax import parse_polynomial

        return parse_polynomial(text, nvars)

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, 0)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(self.nvars, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(
                    f"variable count mismatch: {self.nvars} vs {other.nvars}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = normalize(s)
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = normalize(c)
        if not c:
            return Polynomial.zero(self.nvars)
        if c == 1:
            return self
        return Polynomial._raw(
            self.nvars, {m: normalize(v * c) for m, v in self.terms.items()}
        )

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        out: dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw(
            self.nvars, {m: normalize(c) for m, c in out.items() if c}
        )

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def partial(self, i: int) -> "Polynomial":
        """Formal derivative with respect to ``x_i`` (1-based)."""
        if not 1 <= i <= self.nvars:
            raise IndexError(f"variable x{i} out of range 1..{self.nvars}")
        k = i - 1
        out = {}
        for m, c in self.terms.items():
            e = m[k]
            if e:
                out[m[:k] + (e - 1,) + m[k + 1:]] = c * e
        return Polynomial._raw(self.nvars, out)

    def evaluate(self, point: Iterable) -> Scalar:
        point = [normalize(v) for v in point]
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in zip(point, m):
                if e:
                    t *= v**e
            total += t
        return normalize(total)

    # -- printing --------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        """Terms by descending total degree, then descending lex exponent."""
        return sorted(self.terms.items(), key=lambda mc: (-sum(mc[0]), [-e for e in mc[0]]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            parts.append(_format_term(m, c))
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {str(self)!r})"


def _format_term(mono: Monomial, c: Scalar) -> str:
    factors = []
    for i, e in enumerate(mono, start=1):
        if e == 1:
            factors.append(f"x{i}")
        elif e > 1:
            factors.append(f"x{i}^{e}")
    sign = "-" if c < 0 else ""
    mag = abs(c)
    if not factors:
        return f"{sign}{mag}"
    body = "*".join(factors)
    if mag == 1:
        return f"{sign}{body}"
    return f"{sign}{mag}*{body}"


def random_polynomial(nvars: int, rng: random.Random, max_degree: int = 2, terms: int = 3,
                      coeff_range: int = 3) -> Polynomial:
    """Sum of ``terms`` random monomials of degree ``<= max_degree`` with small integer coefficients."""
    out: dict[Monomial, int] = {}
    for _ in range(terms):
        e = [0] * nvars
        for _ in range(rng.randint(0, max_degree)):
            e[rng.randrange(nvars)] += 1
        out[tuple(e)] = out.get(tuple(e), 0) + rng.randint(-coeff_range, coeff_range)
    return Polynomial(nvars, out)
