"""Multivector fields and differential forms with polynomial coefficients.

Both live on the free module spanned by ``d1 .. dN`` (partial derivatives)
and its dual spanned by ``dx1 .. dxN``.  A basis wedge is an ascending index
tuple; reordering signs are absorbed into coefficients on construction.

Grading.  A q-vector has tensor degree ``+q`` and a p-form has tensor degree
``-p``.  Every sign exponent elsewhere in the package consumes tensor
degrees, obtained through :func:`tensor_degree`.

Conventions.
    pairing      <dx^I, d_J> = delta_IJ on ascending tuples (determinant rule)
    i_x f        <i_x f, y> = <f, x ^ y>, hence i_{x^y} = i_y i_x
    j_f x        <g, j_f x> = <g ^ f, x>, hence j_{f^g} = j_f j_g
    L_x f        d i_x f - (-1)^|x| i_x d f
    [x, y]       graded commutator; on vector fields XY - YX, [X, a] = X(a)
"""

from __future__ import annotations

from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable, Mapping, TypeVar

from .coefficients import Polynomial, _format_term, normalize

Index = tuple[int, ...]
E = TypeVar("E", bound="_Exterior")


@lru_cache(maxsize=None)
def merge_sign(a: Index, b: Index) -> int:
    """Sign of sorting the concatenation ``a + b`` (both ascending); 0 on overlap."""
    if not a or not b:
        return 1
    inversions = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        if j < len(b) and b[j] == x:
            return 0
        inversions += j
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def merge(a: Index, b: Index) -> Index:
    return tuple(sorted(a + b))


@lru_cache(maxsize=None)
def sort_with_sign(idx: Index) -> tuple[int, Index]:
    """Sign and ascending tuple for an arbitrary index tuple (sign 0 on repeats)."""
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    items = list(idx)
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


@lru_cache(maxsize=None)
def _complement(big: Index, small: Index) -> Index:
    return tuple(i for i in big if i not in small)


class _Exterior:
    """Shared storage for tensors and cotensors."""

    __slots__ = ("nvars", "terms")
    _symbol = "?"

    def __init__(self, nvars: int, terms: Mapping[Iterable[int], object] | None = None):
        self.nvars = nvars
        clean: dict[Index, Polynomial] = {}
        for idx, coeff in (terms or {}).items():
            idx = tuple(idx)
            if any(not 1 <= i <= nvars for i in idx):
                raise IndexError(f"basis index out of range in {idx}")
            sign, idx = sort_with_sign(idx)
            if not sign:
                continue
            coeff = _as_poly(coeff, nvars)
            if sign < 0:
                coeff = -coeff
            total = clean.get(idx)
            coeff = coeff if total is None else total + coeff
            if coeff:
                clean[idx] = coeff
            else:
                clean.pop(idx, None)
        self.terms = clean

    @classmethod
    def _raw(cls: type[E], nvars: int, terms: dict) -> E:
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls: type[E], nvars: int) -> E:
        return cls._raw(nvars, {})

    @classmethod
    def scalar(cls: type[E], nvars: int, a) -> E:
        a = _as_poly(a, nvars)
        return cls._raw(nvars, {(): a} if a else {})

    @classmethod
    def basis(cls: type[E], nvars: int, *indices: int, coeff=1) -> E:
        return cls(nvars, {tuple(indices): coeff})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def form_degrees(self) -> set[int]:
        """Set of wedge lengths present."""
        return {len(i) for i in self.terms}

    def homogeneous_parts(self: E) -> dict[int, E]:
        """Split by wedge length; keys are wedge lengths (not tensor degrees)."""
        parts: dict[int, dict] = {}
        for idx, c in self.terms.items():
            parts.setdefault(len(idx), {})[idx] = c
        return {k: type(self)._raw(self.nvars, v) for k, v in sorted(parts.items())}

    def is_homogeneous(self) -> bool:
        return len(self.form_degrees()) <= 1

    def coefficient_degree(self) -> int:
        """Largest total degree among the coefficient polynomials (-1 if zero)."""
        return max((c.degree() for c in self.terms.values()), default=-1)

    def coefficient(self, *indices: int) -> Polynomial:
        sign, idx = sort_with_sign(tuple(indices))
        c = self.terms.get(idx)
        if c is None or not sign:
            return Polynomial.zero(self.nvars)
        return c if sign > 0 else -c

    def term_count(self) -> int:
        """Number of (basis wedge, monomial) pairs with nonzero coefficient."""
        return sum(len(c.terms) for c in self.terms.values())

    def __eq__(self, other) -> bool:
        if type(other) is type(self):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.nvars, frozenset(self.terms.items())))

    # -- linear structure --------------------------------------------------

    def _check(self, other: "_Exterior") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self: E, other: E) -> E:
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            prev = out.get(idx)
            s = c if prev is None else prev + c
            if s:
                out[idx] = s
            else:
                out.pop(idx, None)
        return type(self)._raw(self.nvars, out)

    def __radd__(self: E, other) -> E:
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self: E) -> E:
        return type(self)._raw(self.nvars, {i: -c for i, c in self.terms.items()})

    def __sub__(self: E, other: E) -> E:
        return self + (-other)

    def scale(self: E, a) -> E:
        """Multiply every coefficient by a scalar or polynomial."""
        if isinstance(a, (int, Fraction)):
            a = normalize(a)
            if a == 1:
                return self
            if not a:
                return type(self).zero(self.nvars)
            return type(self)._raw(self.nvars, {i: c.scale(a) for i, c in self.terms.items()})
        a = _as_poly(a, self.nvars)
        out = {}
        for idx, c in self.terms.items():
            p = a * c
            if p:
                out[idx] = p
        return type(self)._raw(self.nvars, out)

    def __mul__(self: E, a) -> E:
        if isinstance(a, (int, Fraction, Polynomial)):
            return self.scale(a)
        return NotImplemented

    __rmul__ = __mul__

    def wedge(self: E, other: E) -> E:
        self._check(other)
        out: dict[Index, Polynomial] = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                s = merge_sign(i, j)
                if not s:
                    continue
                k = merge(i, j)
                p = a * b
                if s < 0:
                    p = -p
                prev = out.get(k)
                out[k] = p if prev is None else prev + p
        return type(self)._raw(self.nvars, {k: c for k, c in out.items() if c})

    def __xor__(self: E, other: E) -> E:
        return self.wedge(other)

    def map_coefficients(self: E, fn: Callable[[Polynomial], Polynomial]) -> E:
        out = {}
        for idx, c in self.terms.items():
            p = fn(c)
            if p:
                out[idx] = p
        return type(self)._raw(self.nvars, out)

    # -- printing ----------------------------------------------------------

    def _basis_name(self, idx: Index) -> str:
        return "^".join(f"{self._symbol}{i}" for i in idx)

    def sorted_terms(self) -> list[tuple[Index, Polynomial]]:
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for idx, c in self.sorted_terms():
            if not idx:
                pieces.extend(_format_term(m, v) for m, v in c.sorted_terms())
                continue
            basis = self._basis_name(idx)
            if len(c.terms) == 1:
                (mono, val), = c.terms.items()
                if not any(mono) and abs(val) == 1:
                    pieces.append(("-" if val < 0 else "") + basis)
                else:
                    pieces.append(f"{c} {basis}")
            else:
                pieces.append(f"({c}) {basis}")
        text = pieces[0]
        for p in pieces[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.nvars}, {str(self)!r})"


class Tensor(_Exterior):
    """Multivector field: sum of ``a * d_{i1}^...^d_{iq}``."""

    __slots__ = ()
    _symbol = "d"

    @classmethod
    def parse(cls, text: str, nvars: int) -> "Tensor":
        from .syntax import parse_tensor

        return parse_tensor(text, nvars)


class Cotensor(_Exterior):
    """Differential form: sum of ``a * dx^{i1}^...^dx^{ip}``."""

    __slots__ = ()
    _symbol = "dx"

    @classmethod
    def parse(cls, text: str, nvars: int) -> "Cotensor":
        from .syntax import parse_cotensor

        return parse_cotensor(text, nvars)


def _as_poly(a, nvars: int) -> Polynomial:
    if isinstance(a, Polynomial):
        if a.nvars != nvars:
            raise ValueError(f"variable count mismatch: {a.nvars} vs {nvars}")
        return a
    if isinstance(a, (int, Fraction)):
        return Polynomial.constant(nvars, a)
    raise TypeError(f"not a coefficient: {a!r}")


# -- grading -------------------------------------------------------------


def tensor_degree(obj: _Exterior) -> int | None:
    """Tensor degree of a homogeneous element: +q for q-vectors, -p for p-forms.

    Returns ``None`` for zero and raises for inhomogeneous input.
    """
    degs = obj.form_degrees()
    if not degs:
        return None
    if len(degs) > 1:
        raise ValueError(f"inhomogeneous element with wedge lengths {sorted(degs)}")
    (d,) = degs
    return -d if isinstance(obj, Cotensor) else d


def sign(exponent: int) -> int:
    """``(-1)^exponent`` for any integer exponent."""
    return -1 if exponent % 2 else 1


def wedge_tensor(x: Tensor, y: Tensor) -> Tensor:
    return x.wedge(y)


def wedge_cotensor(f: Cotensor, g: Cotensor) -> Cotensor:
    return f.wedge(g)


# -- pairing and contractions ----------------------------------------------


def natural_pairing(f: Cotensor, x: Tensor) -> Polynomial:
    """Determinant pairing; zero between different wedge lengths."""
    if f.nvars != x.nvars:
        raise ValueError("variable count mismatch")
    total = Polynomial.zero(f.nvars)
    small, big = (f.terms, x.terms) if len(f.terms) <= len(x.terms) else (x.terms, f.terms)
    for idx, c in small.items():
        other = big.get(idx)
        if other is not None:
            total = total + c * other
    return total


def contract_right(x: Tensor, f: Cotensor) -> Cotensor:
    """Right contraction ``i_x f``."""
    if x.nvars != f.nvars:
        raise ValueError("variable count mismatch")
    out: dict[Index, Polynomial] = {}
    for j, a in x.terms.items():
        sj = set(j)
        for i, b in f.terms.items():
            if len(j) > len(i) or not sj.issubset(i):
                continue
            rest = _complement(i, j)
            s = merge_sign(j, rest)
            p = a * b
            if s < 0:
                p = -p
            prev = out.get(rest)
            out[rest] = p if prev is None else prev + p
    return Cotensor._raw(x.nvars, {k: c for k, c in out.items() if c})


def contract_left(f: Cotensor, x: Tensor) -> Tensor:
    """Left contraction ``j_f x``."""
    if x.nvars != f.nvars:
        raise ValueError("variable count mismatch")
    out: dict[Index, Polynomial] = {}
    for i, a in f.terms.items():
        si = set(i)
        for j, b in x.terms.items():
            if len(i) > len(j) or not si.issubset(j):
                continue
            rest = _complement(j, i)
            s = merge_sign(rest, i)
            p = a * b
            if s < 0:
                p = -p
            prev = out.get(rest)
            out[rest] = p if prev is None else prev + p
    return Tensor._raw(x.nvars, {k: c for k, c in out.items() if c})


# -- differential calculus ---------------------------------------------------


def de_rham(f: Cotensor) -> Cotensor:
    out: dict[Index, Polynomial] = {}
    for idx, a in f.terms.items():
        for v in range(1, f.nvars + 1):
            if v in idx:
                continue
            da = a.partial(v)
            if not da:
                continue
            s = merge_sign((v,), idx)
            k = merge((v,), idx)
            if s < 0:
                da = -da
            prev = out.get(k)
            out[k] = da if prev is None else prev + da
    return Cotensor._raw(f.nvars, {k: c for k, c in out.items() if c})


def lie_derivative(x: Tensor, f: Cotensor) -> Cotensor:
    """``L_x f = d i_x f - (-1)^|x| i_x d f``, extended linearly over degrees of ``x``."""
    total = Cotensor.zero(f.nvars)
    df = None
    for q, part in x.homogeneous_parts().items():
        first = de_rham(contract_right(part, f))
        if df is None:
            df = de_rham(f)
        second = contract_right(part, df)
        total = total + first - second.scale(sign(q))
    return total


def _right_derivatives(idx: Index):
    # d/dtheta_i acting from the right: theta_I = +-theta_{I\i} theta_i
    p = len(idx)
    for pos, i in enumerate(idx):
        yield i, sign(p - 1 - pos), idx[:pos] + idx[pos + 1:]


def schouten(x: Tensor, y: Tensor) -> Tensor:
    """Schouten bracket of multivector fields.

    Computed from the odd-coordinate formula
    ``[P, Q] = sum_i P<d_i Q  -  (-1)^{(p-1)(q-1)} sum_i Q<d_i P``
    where ``P<`` is the right derivative in the odd variable ``theta_i``
    followed by the ordinary partial derivative of the other factor.
    """
    if x.nvars != y.nvars:
        raise ValueError("variable count mismatch")
    out: dict[Index, Polynomial] = {}

    def accumulate(idx: Index, p: Polynomial) -> None:
        prev = out.get(idx)
        out[idx] = p if prev is None else prev + p

    def half(src: Tensor, dst: Tensor, outer_sign) -> None:
        for i_idx, a in src.terms.items():
            for i, s_r, rest in _right_derivatives(i_idx):
                for j_idx, b in dst.terms.items():
                    db = b.partial(i)
                    if not db:
                        continue
                    s = merge_sign(rest, j_idx)
                    if not s:
                        continue
                    s *= s_r * outer_sign(len(i_idx), len(j_idx))
                    p = a * db
                    accumulate(merge(rest, j_idx), p if s > 0 else -p)

    half(x, y, lambda p, q: 1)
    half(y, x, lambda q, p: -sign((p - 1) * (q - 1)))
    return Tensor._raw(x.nvars, {k: c for k, c in out.items() if c})
