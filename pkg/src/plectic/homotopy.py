"""Homotopy Poisson brackets and Leibniz operators on Poisson cotensors.

Every operation takes verified :class:`PoissonCotensor` bundles, splits them
into homogeneous parts, applies the sign-bearing formula to each combination
and sums.  Results come back as :class:`BracketResult` bundles whose
witnesses are checked before they are returned.

Degrees.  For a homogeneous Poisson cotensor ``f`` of tensor degree ``|f|``
the Hamilton witness has degree ``|x| = |f| + n`` and the constraint witness
``|x| + 1``.  Shifted degrees only ever enter sign exponents, always through
:func:`decalage_sign`.

Arguments named ``left`` sit before the double bar of a Leibniz operator
(they behave like bracket arguments), ``right`` after it (they behave like
factors of the wedge product).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Callable, Sequence

from .combinatorics import enumerate_block_shuffles, enumerate_shuffles, koszul_sign, parity
from .graded_algebra import (
    Cotensor,
    Tensor,
    contract_left,
    contract_right,
    de_rham,
    lie_derivative,
    schouten,
    sign,
    tensor_degree,
)
from .nplectic import (
    NotPoissonWithinBound,
    NPlecticStructure,
    PoissonCotensor,
    WitnessError,
    solve_constraint,
    solve_hamilton,
)

log = logging.getLogger(__name__)

MAX_ARITY = 6


@dataclass(frozen=True)
class BracketResult:
    value: Cotensor
    hamilton: Tensor
    constraint: Tensor

    @classmethod
    def zero(cls, nvars: int) -> "BracketResult":
        return cls(Cotensor.zero(nvars), Tensor.zero(nvars), Tensor.zero(nvars))

    def __add__(self, other: "BracketResult") -> "BracketResult":
        return BracketResult(
            self.value + other.value,
            self.hamilton + other.hamilton,
            self.constraint + other.constraint,
        )

    def bundle(self, S: NPlecticStructure) -> PoissonCotensor:
        return PoissonCotensor(S, self.value, self.hamilton, self.constraint)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of an identity check.

    ``residual`` is left minus right; it is ``None`` when some intermediate
    term could not be formed, in which case ``detail`` says why.
    """

    name: str
    residual: Cotensor | None
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        if self.residual is None:
            tail = self.detail
        else:
            tail = f"residual terms: {self.residual.term_count()}"
        return f"{self.name}: {status} ({tail})"


# -- signs -----------------------------------------------------------------


def decalage_sign(sigma: Sequence[int], degrees: Sequence[int], shift: int = 1, antisymmetric: bool = True) -> int:
    """``sgn(sigma) * e(sigma; s^shift v)`` for vectors of the given degrees.

    With ``antisymmetric=False`` the permutation parity is left out.  All
    shuffle sums in this package use ``shift=1`` applied to Hamilton degrees,
    i.e. the degrees ``|sx| = |x| + 1``.
    """
    e = koszul_sign(sigma, [d + shift for d in degrees])
    return parity(sigma) * e if antisymmetric else e


# -- homogeneous views -------------------------------------------------------


def _fdeg(p: PoissonCotensor) -> int:
    return tensor_degree(p.f)


def _xdeg(p: PoissonCotensor) -> int:
    return tensor_degree(p.f) + p.structure.n


def _structure(args: Sequence[PoissonCotensor]) -> NPlecticStructure:
    if not args:
        raise ValueError("at least one argument is required")
    S = args[0].structure
    for a in args[1:]:
        if a.structure != S:
            raise ValueError("arguments live on different n-plectic structures")
    return S


def _pick(items: Sequence, sigma: Sequence[int]) -> list:
    return [items[s - 1] for s in sigma]


def _chain(xs: Sequence[Tensor], g: Cotensor) -> Cotensor:
    """``i_{x_1} i_{x_2} ... i_{x_m} g``."""
    for x in reversed(xs):
        g = contract_right(x, g)
    return g


def _certify(S, name, value, x, y, fallback: bool) -> BracketResult:
    """Check both witnesses; optionally replace failing ones by solver output."""
    ham_ok = S.is_hamilton(x, value)
    con_ok = S.is_constraint(y, value)
    if ham_ok and con_ok:
        return BracketResult(value, x, y)
    failed = [w for w, ok in (("hamilton", ham_ok), ("constraint", con_ok)) if not ok]
    if not fallback:
        raise WitnessError(f"{name}: closed-form {' and '.join(failed)} witness does not verify")
    log.info("%s: closed-form %s witness rejected, solving instead", name, "/".join(failed))
    if not ham_ok:
        report = solve_hamilton(S, value)
        if not report.found:
            raise NotPoissonWithinBound("hamilton", value, S.degree_bound)
        x = report.solution
    if not con_ok:
        report = solve_constraint(S, value)
        if not report.found:
            raise NotPoissonWithinBound("constraint", value, S.degree_bound)
        y = report.solution
    return BracketResult(value, x, y)


def _solved(S, name, value) -> BracketResult:
    """Both witnesses from the bounded solver."""
    ham = solve_hamilton(S, value)
    if not ham.found:
        raise NotPoissonWithinBound("hamilton", value, S.degree_bound)
    con = solve_constraint(S, value)
    if not con.found:
        raise NotPoissonWithinBound("constraint", value, S.degree_bound)
    return BracketResult(value, ham.solution, con.solution)


def _expand(impl: Callable[..., BracketResult], args: Sequence[PoissonCotensor]) -> BracketResult:
    """Multilinear extension of a formula stated for homogeneous arguments."""
    S = _structure(args)
    total = BracketResult.zero(S.nvars)
    for parts in cartesian(*(a.homogeneous_parts() for a in args)):
        total = total + impl(*parts)
    return total


def _check_degree(name: str, value: Cotensor, expected: int) -> None:
    if value and tensor_degree(value) != expected:
        raise ArithmeticError(f"{name}: degree {tensor_degree(value)}, expected {expected}")


# -- dg-commutative structure ------------------------------------------------


def _product_formula(p1: PoissonCotensor, p2: PoissonCotensor) -> tuple[Cotensor, Tensor, Tensor]:
    a, b = _fdeg(p1), _fdeg(p2)
    value = p1.f ^ p2.f
    x = contract_left(p1.f, p2.x).scale(sign(a)) + contract_left(p2.f, p1.x).scale(sign((a - 1) * b))
    y = contract_left(p1.f, p2.y)
    return value, x, y


@lru_cache(maxsize=4096)
def _product_h(p1, p2, fallback):
    value, x, y = _product_formula(p1, p2)
    return _certify(p1.structure, "product", value, x, y, fallback)


def product(p1: PoissonCotensor, p2: PoissonCotensor) -> BracketResult:
    """Wedge product with its closed-form witnesses.

    Raises :class:`WitnessError` when those witnesses do not verify, which
    happens for many pairs: the wedge of two Poisson cotensors need not be
    Poisson.
    """
    return _expand(lambda a, b: _product_h(a, b, False), (p1, p2))


def product_poisson(p1: PoissonCotensor, p2: PoissonCotensor) -> BracketResult:
    """Wedge product as a Poisson bundle, solving for witnesses the formulas miss.

    Raises :class:`NotPoissonWithinBound` when the product is not Poisson.
    """
    return _expand(lambda a, b: _product_h(a, b, True), (p1, p2))


def differential(p: PoissonCotensor) -> BracketResult:
    """``d f`` with Hamilton witness 0 and constraint witness ``x``."""
    S = p.structure
    value = de_rham(p.f)
    return _certify(S, "differential", value, Tensor.zero(S.nvars), p.x, False)


# -- brackets ------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _bracket2_h(p1, p2):
    S = p1.structure
    a1, a2 = _xdeg(p1), _xdeg(p2)
    s = sign((a1 - 1) * (a2 - 1))
    value = -lie_derivative(p1.x, p2.f) + lie_derivative(p2.x, p1.f).scale(s)
    _check_degree("bracket2", value, _fdeg(p1) + _fdeg(p2) + S.n - 1)
    y = schouten(p2.x, p1.y) - schouten(p1.x, p2.y).scale(s)
    x = schouten(p2.x, p1.x) - schouten(p1.x, p2.x).scale(s)
    return _certify(S, "bracket2", value, x, y, False)


def bracket2(p1: PoissonCotensor, p2: PoissonCotensor) -> BracketResult:
    return _expand(_bracket2_h, (p1, p2))


@lru_cache(maxsize=4096)
def _bracket3_h(p1, p2, p3):
    ps = (p1, p2, p3)
    S = p1.structure
    a = [_xdeg(p) for p in ps]
    nv = S.nvars
    value, y, x = Cotensor.zero(nv), Tensor.zero(nv), Tensor.zero(nv)
    for sigma in enumerate_shuffles(2, 1):
        c = decalage_sign(sigma, a)
        q1, q2, q3 = _pick(ps, sigma)
        b21 = schouten(q2.x, q1.x)
        value = value + contract_right(b21, q3.f).scale(c)
        y = y + (q3.y ^ b21).scale(c)
        x = x - (q3.x ^ b21).scale(c * sign(_xdeg(q1) + _xdeg(q2)))
    # the double-bracket part singles out the first letter: Sh(1,2)
    for sigma in enumerate_shuffles(1, 2):
        c = decalage_sign(sigma, a)
        q1, q2, q3 = _pick(ps, sigma)
        x = x + schouten(schouten(q3.x, q2.x), q1.y).scale(c)
    _check_degree("bracket3", value, sum(_fdeg(p) for p in ps) + 2 * S.n - 1)
    return _certify(S, "bracket3", value, x, y, True)


def bracket3(p1: PoissonCotensor, p2: PoissonCotensor, p3: PoissonCotensor) -> BracketResult:
    return _expand(_bracket3_h, (p1, p2, p3))


def _jacobi_sum(ps: Sequence[PoissonCotensor], j_range, k: int) -> Cotensor:
    """``sum_j sum_{Sh(j,k-j)} sgn(sigma) (-1)^{j(k-j)} e {{f..f_j}, f..}``."""
    S = ps[0].structure
    a = [_xdeg(p) for p in ps]
    total = Cotensor.zero(S.nvars)
    for j in j_range:
        for sigma in enumerate_shuffles(j, k - j):
            c = decalage_sign(sigma, a) * sign(j * (k - j))
            chosen = _pick(ps, sigma)
            inner = bracket(*chosen[:j])
            if not inner.value:
                continue
            outer = bracket(inner.bundle(S), *chosen[j:])
            total = total + outer.value.scale(c)
    return total


@lru_cache(maxsize=1024)
def _bracket_k_h(*ps):
    k = len(ps)
    S = ps[0].structure
    nv = S.nvars
    a = [_xdeg(p) for p in ps]
    value, y, x_tail = Cotensor.zero(nv), Tensor.zero(nv), Tensor.zero(nv)
    for sigma in enumerate_shuffles(k - 1, 1):
        c = decalage_sign(sigma, a)
        chosen = _pick(ps, sigma)
        head, last = chosen[:-1], chosen[-1]
        xin = bracket(*head).hamilton
        value = value + contract_right(xin, last.f).scale(c)
        y = y - (last.y ^ xin).scale(c * sign(k))
        x_tail = x_tail + (last.x ^ xin).scale(c * sign(sum(_xdeg(q) - 1 for q in head)))
    value = value.scale(sign(k - 1))
    _check_degree(f"bracket{k}", value, sum(_fdeg(p) for p in ps) + (k - 1) * S.n - 1)
    target = -_jacobi_sum(ps, range(2, k), k)
    report = solve_constraint(S, target)
    if not report.found:
        raise NotPoissonWithinBound("constraint", target, S.degree_bound)
    # the wedge part enters with a minus sign, as in the three-argument case
    x = report.solution - x_tail
    return _certify(S, f"bracket{k}", value, x, y, False)


def bracket_k(args: Sequence[PoissonCotensor], max_arity: int = MAX_ARITY) -> BracketResult:
    """k-ary bracket for ``4 <= k <= max_arity``, defined recursively."""
    k = len(args)
    if k < 4:
        raise ValueError("bracket_k needs at least four arguments; use bracket2/bracket3")
    if k > max_arity:
        raise ValueError(f"arity {k} exceeds the configured maximum {max_arity}")
    return _expand(_bracket_k_h, tuple(args))


def bracket(*args: PoissonCotensor) -> BracketResult:
    """Dispatch on arity; the one-argument bracket is the differential."""
    k = len(args)
    if k == 1:
        return differential(args[0])
    if k == 2:
        return bracket2(*args)
    if k == 3:
        return bracket3(*args)
    return bracket_k(args)


# -- Leibniz operators ----------------------------------------------------------


def _leibniz1_value(p1, p2, p3, x23: Tensor) -> Cotensor:
    n = p1.structure.n
    a1, a2, a3 = _xdeg(p1), _xdeg(p2), _xdeg(p3)
    b2, b3 = _fdeg(p2), _fdeg(p3)
    a23 = b2 + b3 + n
    u2 = contract_right(p1.x, p2.f) - contract_right(p2.x, p1.f).scale(sign((a1 - 1) * (a2 - 1)))
    u3 = contract_right(p1.x, p3.f) - contract_right(p3.x, p1.f).scale(sign((a1 - 1) * (a3 - 1)))
    return (
        -contract_right(p1.x, p2.f ^ p3.f)
        + contract_right(x23, p1.f).scale(sign((a1 - 1) * (a23 - 1)))
        + (u2 ^ p3.f)
        + (p2.f ^ u3).scale(sign(a1 * b2))
    )


def _leibniz1_constraint(p1, p2, p3, x23: Tensor) -> Tensor:
    n = p1.structure.n
    a1, a2, a3 = _xdeg(p1), _xdeg(p2), _xdeg(p3)
    b2, b3 = _fdeg(p2), _fdeg(p3)
    a23 = b2 + b3 + n
    u2 = contract_right(p1.x, p2.f) - contract_right(p2.x, p1.f).scale(sign((a1 - 1) * (a2 - 1)))
    u3 = contract_right(p1.x, p3.f) - contract_right(p3.x, p1.f).scale(sign((a1 - 1) * (a3 - 1)))
    return (
        -(contract_left(p2.f, p3.y) ^ p1.x)
        + (p1.y ^ x23).scale(sign((a1 - 1) * (a23 - 1)))
        + contract_left(u3, p2.y).scale(sign(a1 * b2 + b2 * (a1 + b3)))
        + contract_left(u2, p3.y)
    )


def _leibniz1_hamilton(p1, p2, p3) -> Tensor:
    """Closed-form Hamilton witness assembled from constraint formulas.

    Every constraint tensor is taken from its closed form, never solved for,
    so the result is checked by the caller.
    """
    S = p1.structure
    n = S.n
    a1 = _xdeg(p1)
    b2 = _fdeg(p2)
    _, x23, y23 = _product_formula(p2, p3)
    s = lambda u, v: sign((u - 1) * (v - 1))
    a23 = b2 + _fdeg(p3) + n
    # y of {f1, f2 ^ f3}
    t1 = schouten(x23, p1.y) - schouten(p1.x, y23).scale(s(a1, a23))
    # y of {f1, f2} ^ f3 and of f2 ^ {f1, f3}
    v12 = bracket2(p1, p2).value
    v13 = bracket2(p1, p3)
    t2 = contract_left(v12, p3.y)
    t3 = contract_left(p2.f, v13.constraint)
    out = t1 - t2 - t3.scale(sign((a1 - 1) * b2))
    # y of the operator with one differentiated argument
    d1, d2, d3 = (_diff_bundle(p) for p in (p1, p2, p3))
    for coeff, args in ((-1, (d1, p2, p3)), (sign(a1), (p1, d2, p3)), (sign(b2 + a1), (p1, p2, d3))):
        if any(q is None for q in args):
            continue
        q1, q2, q3 = args
        _, x, _ = _product_formula(q2, q3)
        out = out + _leibniz1_constraint(q1, q2, q3, x).scale(coeff)
    return out


def _diff_bundle(p: PoissonCotensor) -> PoissonCotensor | None:
    df = differential(p)
    return df.bundle(p.structure) if df.value else None


@lru_cache(maxsize=4096)
def _leibniz1_h(p1, p2, p3):
    S = p1.structure
    x23 = product_poisson(p2, p3).hamilton
    value = _leibniz1_value(p1, p2, p3, x23)
    _check_degree("leibniz1", value, _fdeg(p1) + _fdeg(p2) + _fdeg(p3) + S.n)
    y = _leibniz1_constraint(p1, p2, p3, x23)
    x = _leibniz1_hamilton(p1, p2, p3)
    return _certify(S, "leibniz1", value, x, y, True)


def leibniz1(p1: PoissonCotensor, p2: PoissonCotensor, p3: PoissonCotensor) -> BracketResult:
    """First Leibniz operator ``{f1 || f2, f3}``."""
    return _expand(_leibniz1_h, (p1, p2, p3))


def leibniz_value(left: Sequence[PoissonCotensor], right: Sequence[PoissonCotensor],
                  previous: Callable[[Sequence[PoissonCotensor]], Tensor]) -> Cotensor:
    """Five-term formula for ``{left || r1, r2}`` on homogeneous arguments.

    ``previous(sub)`` must return a Hamilton witness of the operator with
    one fewer left argument (for one left argument, of ``r1 ^ r2``).
    """
    r1, r2 = right
    S = r1.structure
    n = S.n
    k = len(left)
    a = [_xdeg(p) for p in left]
    fr1 = _fdeg(r1)
    ar1, ar2 = _xdeg(r1), _xdeg(r2)
    a12 = fr1 + _fdeg(r2) + n
    total = Cotensor.zero(S.nvars)

    def base(sigma):
        return sum((k - i) * (a[s - 1] - 1) for i, s in enumerate(sigma, start=1))

    for sigma in enumerate_shuffles(k - 1, 1):
        c = decalage_sign(sigma, a)
        chosen = _pick(left, sigma)
        X = previous(tuple(chosen[:-1]))
        total = total - contract_right(X, chosen[-1].f).scale(c * sign(k + (a12 - 1) * (a[sigma[-1] - 1] - 1)))

    for j1 in range(k + 1):
        for j2 in range(j1, k + 1):
            for sigma in enumerate_block_shuffles([j1, j2 - j1, k - j2]):
                c = decalage_sign(sigma, a)
                xs = [q.x for q in _pick(left, sigma)]
                ds = _pick(a, sigma)
                e = j1 + base(sigma) + sum(ds[j2:]) * fr1
                inner = _chain(xs[j1:j2], r1.f) ^ _chain(xs[j2:], r2.f)
                total = total + _chain(xs[:j1], inner).scale(c * sign(e))

    for j1 in range(k):
        for j2 in range(j1, k):
            for sigma in enumerate_block_shuffles([j1, j2 - j1, 1, k - 1 - j2]):
                c = decalage_sign(sigma, a)
                chosen = _pick(left, sigma)
                xs = [q.x for q in chosen]
                ds = _pick(a, sigma)
                e = j1 + base(sigma) + sum(ds[j2 + 1:]) * fr1 + (ds[j2] + 1) * (ar1 + 1)
                inner = _chain(xs[j1:j2], contract_right(r1.x, chosen[j2].f)) ^ _chain(xs[j2 + 1:], r2.f)
                total = total - _chain(xs[:j1], inner).scale(c * sign(e))

            for sigma in enumerate_block_shuffles([j1, j2 - j1, k - 1 - j2, 1]):
                c = decalage_sign(sigma, a)
                chosen = _pick(left, sigma)
                xs = [q.x for q in chosen]
                ds = _pick(a, sigma)
                e = j1 + base(sigma) + sum(ds[j2:]) * fr1 + (ds[k - 1] + 1) * (ar2 + 1)
                inner = _chain(xs[j1:j2], r1.f) ^ _chain(xs[j2:k - 1], contract_right(r2.x, chosen[k - 1].f))
                total = total - _chain(xs[:j1], inner).scale(c * sign(e))

    for j1 in range(k - 1):
        for j2 in range(j1, k - 1):
            for sigma in enumerate_block_shuffles([j1, j2 - j1, 1, k - 2 - j2, 1]):
                c = decalage_sign(sigma, a)
                chosen = _pick(left, sigma)
                xs = [q.x for q in chosen]
                ds = _pick(a, sigma)
                e = (j1 + base(sigma) + sum(ds[j2 + 1:]) * fr1
                     + (ds[j2] + 1) * (ar1 + 1) + (ds[k - 1] + 1) * (ar2 + 1))
                inner = (_chain(xs[j1:j2], contract_right(r1.x, chosen[j2].f))
                         ^ _chain(xs[j2 + 1:k - 1], contract_right(r2.x, chosen[k - 1].f)))
                total = total + _chain(xs[:j1], inner).scale(c * sign(e))
    return total


@lru_cache(maxsize=1024)
def _leibniz_k_h(k, *ps):
    left, right = ps[:k], ps[k:]
    S = ps[0].structure

    def previous(sub):
        return leibniz(sub, right).hamilton

    value = leibniz_value(left, right, previous)
    _check_degree(f"leibniz{k}", value, sum(_fdeg(p) for p in ps) + S.n * k)
    return _solved(S, f"leibniz{k}", value)


def leibniz_k(left: Sequence[PoissonCotensor], right: Sequence[PoissonCotensor],
              max_arity: int = MAX_ARITY) -> BracketResult:
    """k-th Leibniz operator ``{f1, ..., fk || g1, g2}`` for ``k >= 2``.

    Witnesses come from the bounded solver.
    """
    k = len(left)
    if k < 2:
        raise ValueError("leibniz_k needs at least two left arguments; use leibniz1")
    if len(right) != 2:
        raise ValueError("exactly two right arguments are required")
    if k > max_arity:
        raise ValueError(f"arity {k} exceeds the configured maximum {max_arity}")
    return _expand(lambda *ps: _leibniz_k_h(k, *ps), tuple(left) + tuple(right))


def leibniz(left: Sequence[PoissonCotensor], right: Sequence[PoissonCotensor]) -> BracketResult:
    """Dispatch on the number of left arguments; none gives the wedge product."""
    if len(right) != 2:
        raise ValueError("exactly two right arguments are required")
    if not left:
        return product_poisson(*right)
    if len(left) == 1:
        return leibniz1(left[0], *right)
    return leibniz_k(left, right)


# -- identity checkers ------------------------------------------------------------


def _run_check(name: str, impl: Callable[..., Cotensor], args: Sequence[PoissonCotensor]) -> CheckReport:
    S = _structure(args)
    residual = Cotensor.zero(S.nvars)
    try:
        for parts in cartesian(*(a.homogeneous_parts() for a in args)):
            residual = residual + impl(*parts)
    except (NotPoissonWithinBound, WitnessError) as exc:
        return CheckReport(name, None, False, f"not evaluable: {exc}")
    return CheckReport(name, residual, residual.is_zero())


def check_jacobi(k: int, args: Sequence[PoissonCotensor]) -> CheckReport:
    """Shifted homotopy Jacobi identity for ``k`` arguments; ``j = 1`` terms use ``d``."""
    if len(args) != k or k < 1:
        raise ValueError(f"expected {k} arguments, got {len(args)}")

    def impl(*ps):
        return _jacobi_sum(ps, range(1, k + 1), k)

    return _run_check(f"jacobi[k={k}]", impl, args)


def _bundle(r: BracketResult, S) -> PoissonCotensor:
    return r.bundle(S)


def check_leibniz_first(k: int, left: Sequence[PoissonCotensor], right: Sequence[PoissonCotensor]) -> CheckReport:
    """First Leibniz equation with ``k >= 1`` bracket-like arguments."""
    if len(left) != k or k < 1 or len(right) != 2:
        raise ValueError("need k >= 1 left arguments and a right pair")

    def impl(*ps):
        L, (r1, r2) = list(ps[:k]), ps[k:]
        S = r1.structure
        n = S.n
        a = [_xdeg(p) for p in L]
        fr1 = _fdeg(r1)
        a12 = fr1 + _fdeg(r2) + n
        shift_sum = sum(ai - 1 for ai in a)
        P = lambda r: _bundle(r, S)
        D = lambda p: differential(p).bundle(S)
        res = -bracket(*L, P(product_poisson(r1, r2))).value
        res += bracket(*L, r1).value ^ r2.f
        res += (r1.f ^ bracket(*L, r2).value).scale(sign((sum(a) - 1) * fr1))
        for sigma in enumerate_shuffles(1, k - 1):
            c = decalage_sign(sigma, a)
            ch = _pick(L, sigma)
            res += leibniz([D(ch[0])] + ch[1:], (r1, r2)).value.scale(c)
        res -= de_rham(leibniz(L, (r1, r2)).value).scale(sign(k))
        res += leibniz(L, (D(r1), r2)).value.scale(sign(shift_sum))
        res += leibniz(L, (r1, D(r2))).value.scale(sign(shift_sum + fr1))
        for j in range(2, k + 1):
            for sigma in enumerate_shuffles(j, k - j):
                c = decalage_sign(sigma, a) * sign((j + 1) * (k + 1 - j))
                ch = _pick(L, sigma)
                inner = bracket(*ch[:j])
                if inner.value:
                    res += leibniz([P(inner)] + ch[j:], (r1, r2)).value.scale(c)
        for j in range(1, k):
            for sigma in enumerate_shuffles(j, k - j):
                c = decalage_sign(sigma, a)
                ch = _pick(L, sigma)
                tail = sum(_xdeg(q) - 1 for q in ch[j:])
                inner = leibniz(ch[:j], (r1, r2))
                if inner.value:
                    e = j * (k - j) + k + (a12 - 1) * tail
                    res -= bracket(P(inner), *ch[j:]).value.scale(c * sign(e))
            for sigma in enumerate_shuffles(k - j, j):
                c = decalage_sign(sigma, a)
                ch = _pick(L, sigma)
                head_shift = sum(_xdeg(q) - 1 for q in ch[:k - j])
                tail_deg = sum(_xdeg(q) for q in ch[k - j:])
                inner = bracket(*ch[k - j:], r2)
                if inner.value:
                    e = (tail_deg - 1) * fr1 + (j - 1) * head_shift
                    res += leibniz(ch[:k - j], (r1, P(inner))).value.scale(c * sign(e))
                inner = bracket(*ch[k - j:], r1)
                if inner.value:
                    res += leibniz(ch[:k - j], (P(inner), r2)).value.scale(c * sign((j - 1) * head_shift))
        return res

    return _run_check(f"leibniz_first[k={k}]", impl, tuple(left) + tuple(right))


def check_leibniz_second(k: int, args: Sequence[PoissonCotensor]) -> CheckReport:
    """Second Leibniz equation: ``k`` bracket-like arguments then four factors.

    ``k = 0`` is the dimension-two instance.
    """
    if k < 0 or len(args) != k + 4:
        raise ValueError(f"expected {k + 4} arguments")

    def impl(*ps):
        L, (r1, r2, r3, r4) = list(ps[:k]), ps[k:]
        S = r1.structure
        n = S.n
        a = [_xdeg(p) for p in L]
        a12 = _fdeg(r1) + _fdeg(r2) + n
        a34 = _fdeg(r3) + _fdeg(r4) + n
        P = lambda r: r.bundle(S)
        res = Cotensor.zero(S.nvars)
        for j in range(k + 1):
            for sigma in enumerate_shuffles(j, k - j):
                c = decalage_sign(sigma, a) * sign(j * (k + 1 - j))
                ch = _pick(L, sigma)
                tail = sum(_xdeg(q) - 1 for q in ch[j:])
                inner = leibniz(ch[:j], (r1, r2))
                if inner.value:
                    res -= leibniz([P(inner)] + ch[j:], (r3, r4)).value.scale(c * sign(a12 * tail))
                inner = leibniz(ch[:j], (r3, r4))
                if inner.value:
                    res += leibniz([P(inner)] + ch[j:], (r1, r2)).value.scale(c * sign((tail + a12) * a34))
            for sigma in enumerate_shuffles(k - j, j):
                e0 = decalage_sign(sigma, a)
                ch = _pick(L, sigma)
                head, tail = ch[:k - j], ch[k - j:]
                hs = sum(_xdeg(q) - 1 for q in head)
                ts = sum(_xdeg(q) - 1 for q in tail)
                td = sum(_xdeg(q) for q in tail)
                inner = leibniz(tail + [r2], (r3, r4))
                if inner.value:
                    e = j * (hs + _fdeg(r1)) + ts * (_fdeg(r1) + 1)
                    res += leibniz(head, (r1, P(inner))).value.scale(e0 * sign(k + e))
                inner = leibniz(tail + [r1], (r3, r4))
                if inner.value:
                    e = j * hs + _fdeg(r2) * a34 + td
                    res += leibniz(head, (P(inner), r2)).value.scale(e0 * sign(k - j + e))
                inner = leibniz(tail + [r3], (r1, r2))
                if inner.value:
                    e = j * hs + a12 * _xdeg(r3) + td
                    res -= leibniz(head, (P(inner), r4)).value.scale(e0 * sign(k - j + e))
                inner = leibniz(tail + [r4], (r1, r2))
                if inner.value:
                    e = j * _fdeg(r3) + j * hs + (td + a12) * a34
                    res -= leibniz(head, (r3, P(inner))).value.scale(e0 * sign(k - j + e))
        return res

    return _run_check(f"leibniz_second[k={k}]", impl, args)


def check_leibniz_third(k: int, args: Sequence[PoissonCotensor]) -> CheckReport:
    """Third Leibniz equation: ``k`` bracket-like arguments then three factors.

    ``k = 1`` is the dimension-two instance, ``k = 0`` plain associativity.
    """
    if k < 0 or len(args) != k + 3:
        raise ValueError(f"expected {k + 3} arguments")

    def impl(*ps):
        L, (r1, r2, r3) = list(ps[:k]), ps[k:]
        if not L:
            # plain associativity only needs values; products need not be Poisson
            return ((r1.f ^ r2.f) ^ r3.f) - (r1.f ^ (r2.f ^ r3.f))
        S = r1.structure
        a = [_xdeg(p) for p in L]
        fr1 = _fdeg(r1)
        P = lambda r: r.bundle(S)
        res = leibniz(L, (P(product_poisson(r1, r2)), r3)).value
        res -= leibniz(L, (r1, P(product_poisson(r2, r3)))).value
        res += leibniz(L, (r1, r2)).value ^ r3.f
        res -= (r1.f ^ leibniz(L, (r2, r3)).value).scale(sign(sum(a) * fr1))
        for j in range(1, k):
            for sigma in enumerate_shuffles(k - j, j):
                c = decalage_sign(sigma, a)
                ch = _pick(L, sigma)
                head, tail = ch[:k - j], ch[k - j:]
                hs = sum(_xdeg(q) - 1 for q in head)
                inner = leibniz(tail, (r1, r2))
                if inner.value:
                    res += leibniz(head, (P(inner), r3)).value.scale(c * sign(j * hs))
                inner = leibniz(tail, (r2, r3))
                if inner.value:
                    e = j * hs + sum(_xdeg(q) for q in tail) * fr1
                    res -= leibniz(head, (r1, P(inner))).value.scale(c * sign(e))
        return res

    return _run_check(f"leibniz_third[k={k}]", impl, args)


def check_square_zero(p: PoissonCotensor) -> CheckReport:
    """``d d f = 0``."""
    return _run_check("square_zero", lambda q: de_rham(de_rham(q.f)), (p,))


def check_derivation(p1: PoissonCotensor, p2: PoissonCotensor) -> CheckReport:
    """Graded Leibniz rule of ``d`` over the wedge product."""

    def impl(q1, q2):
        lhs = de_rham(q1.f ^ q2.f)
        # a p-form has tensor degree -p, so the sign is (-1)^{|f1|}
        return lhs - (de_rham(q1.f) ^ q2.f) - (q1.f ^ de_rham(q2.f)).scale(sign(_fdeg(q1)))

    return _run_check("derivation", impl, (p1, p2))


def check_rogers(p1: PoissonCotensor, p2: PoissonCotensor) -> CheckReport:
    """Half the 2-bracket against the contraction of omega plus an exact term."""

    def impl(q1, q2):
        S = q1.structure
        a1, a2 = _xdeg(q1), _xdeg(q2)
        half = Fraction(1, 2)
        lhs = bracket2(q1, q2).value.scale(half)
        core = S.contract(q2.x ^ q1.x).scale(sign(a1))
        exact = contract_right(q1.x, q2.f) - contract_right(q2.x, q1.f).scale(sign((a1 - 1) * (a2 - 1)))
        return lhs - core + de_rham(exact).scale(half)

    return _run_check("rogers", impl, (p1, p2))


rogers_relation = check_rogers
