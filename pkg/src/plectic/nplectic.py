"""n-plectic structures and the two linear equations attached to them.

Given a closed (n+1)-form ``omega``, a cotensor ``f`` is *Poisson* when both

* the fundamental equation ``i_x omega = d f`` and
* the constraint equation ``i_y omega = f``

have solutions.  Solutions are searched in the finite-dimensional space of
tensors whose coefficients are polynomials of total degree at most
``degree_bound``; that makes each equation an exact linear system over Q.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from .coefficients import Polynomial, normalize, random_polynomial
from .graded_algebra import (
    Cotensor,
    Tensor,
    contract_right,
    de_rham,
    lie_derivative,
    tensor_degree,
)

log = logging.getLogger(__name__)

DEFAULT_DEGREE_BOUND = 4


class WitnessError(ArithmeticError):
    """A witness tensor failed its defining equation."""


class NotPoissonWithinBound(ValueError):
    """No witness exists within the degree bound.

    ``equation`` is ``"hamilton"`` or ``"constraint"``.
    """

    def __init__(self, equation: str, f: Cotensor, bound: int):
        super().__init__(f"no {equation} witness of degree <= {bound} for {f}")
        self.equation = equation
        self.cotensor = f
        self.bound = bound


@dataclass(frozen=True)
class NPlecticStructure:
    nvars: int
    n: int
    omega: Cotensor
    degree_bound: int = DEFAULT_DEGREE_BOUND

    def __post_init__(self):
        if self.omega.nvars != self.nvars:
            raise ValueError("omega lives on a different number of variables")
        degs = self.omega.form_degrees()
        if degs and degs != {self.n + 1}:
            raise ValueError(
                f"omega must be an ({self.n + 1})-form, found wedge lengths {sorted(degs)}"
            )
        if self.n < 0 or self.degree_bound < 0:
            raise ValueError("n and degree_bound must be non-negative")

    @classmethod
    def trivial(cls, nvars: int, n: int, degree_bound: int = DEFAULT_DEGREE_BOUND):
        return cls(nvars, n, Cotensor.zero(nvars), degree_bound)

    def with_bound(self, degree_bound: int) -> "NPlecticStructure":
        return NPlecticStructure(self.nvars, self.n, self.omega, degree_bound)

    def contract(self, z: Tensor) -> Cotensor:
        """``i_z omega``."""
        return contract_right(z, self.omega)

    def is_hamilton(self, x: Tensor, f: Cotensor) -> bool:
        return self.contract(x) == de_rham(f)

    def is_constraint(self, y: Tensor, f: Cotensor) -> bool:
        return self.contract(y) == f


def verify_cocycle(S: NPlecticStructure) -> bool:
    return de_rham(S.omega).is_zero()


# -- witness bundles -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PoissonCotensor:
    """A cotensor together with checked Hamilton and constraint witnesses."""

    structure: NPlecticStructure
    f: Cotensor
    x: Tensor
    y: Tensor

    def __post_init__(self):
        S = self.structure
        if not S.is_hamilton(self.x, self.f):
            raise WitnessError(f"i_x omega != d f for f = {self.f}")
        if not S.is_constraint(self.y, self.f):
            raise WitnessError(f"i_y omega != f for f = {self.f}")

    @property
    def degree(self) -> int | None:
        """Tensor degree of ``f`` (negative form degree)."""
        return tensor_degree(self.f)

    def homogeneous_parts(self) -> list["PoissonCotensor"]:
        """Split into homogeneous bundles; witness parts follow the degree relation."""
        n = self.structure.n
        xs = self.x.homogeneous_parts()
        ys = self.y.homogeneous_parts()
        parts = []
        for p, fp in self.f.homogeneous_parts().items():
            q = n - p
            x = xs.get(q, Tensor.zero(self.f.nvars))
            y = ys.get(q + 1, Tensor.zero(self.f.nvars))
            parts.append(PoissonCotensor(self.structure, fp, x, y))
        return parts

    def perturbed(self, dx: Tensor | None = None, dy: Tensor | None = None) -> "PoissonCotensor":
        """Same cotensor with witnesses shifted by kernel elements."""
        x = self.x if dx is None else self.x + dx
        y = self.y if dy is None else self.y + dy
        return PoissonCotensor(self.structure, self.f, x, y)

    def __eq__(self, other):
        if not isinstance(other, PoissonCotensor):
            return NotImplemented
        return (self.f, self.x, self.y) == (other.f, other.x, other.y)

    def __hash__(self):
        return hash((self.f, self.x, self.y))

    def __str__(self):
        return f"f = {self.f}; x = {self.x}; y = {self.y}"


# -- bounded-degree solver -----------------------------------------------------


@dataclass
class SolveReport:
    """Outcome of a bounded-degree solve.

    ``kernel_basis`` spans the solutions of the homogeneous equation inside
    the ansatz; it is built on first access because it can be large.
    """

    status: str
    solution: Tensor | None
    degree: int | None
    _systems: tuple = field(default=(), repr=False)

    @property
    def found(self) -> bool:
        return self.status == "found"

    @property
    def kernel_basis(self) -> list[Tensor]:
        out: list[Tensor] = []
        for system in self._systems:
            out.extend(system.kernel())
        return out

    def kernel_size(self) -> int:
        return sum(system.kernel_dim() for system in self._systems)


def monomials(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= ``max_degree``, graded order."""
    out = []
    for d in range(max_degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


class _Component:
    """Row-reduced block of the linear system."""

    __slots__ = ("cols", "rows", "transform", "pivots", "rank", "null")

    def __init__(self, cols: list, rows: list, matrix: list[list[Fraction]]):
        self.cols = cols
        self.rows = rows
        m, k = len(rows), len(cols)
        aug = [row[:] + [Fraction(int(i == r)) for i in range(m)] for r, row in enumerate(matrix)]
        pivots = []
        r = 0
        for c in range(k):
            piv = next((i for i in range(r, m) if aug[i][c]), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            inv = 1 / aug[r][c]
            aug[r] = [v * inv for v in aug[r]]
            for i in range(m):
                if i != r and aug[i][c]:
                    factor = aug[i][c]
                    aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
            pivots.append(c)
            r += 1
            if r == m:
                break
        self.rank = r
        self.pivots = pivots
        self.transform = [row[k:] for row in aug]
        reduced = [row[:k] for row in aug[:r]]
        free = [c for c in range(k) if c not in set(pivots)]
        null = []
        for fc in free:
            vec = [Fraction(0)] * k
            vec[fc] = Fraction(1)
            for i, pc in enumerate(pivots):
                vec[pc] = -reduced[i][fc]
            null.append(vec)
        self.null = null

    def solve(self, rhs: list[Fraction]) -> list[Fraction] | None:
        t = [sum((a * b for a, b in zip(row, rhs) if a and b), Fraction(0)) for row in self.transform]
        if any(t[self.rank:]):
            return None
        sol = [Fraction(0)] * len(self.cols)
        for i, pc in enumerate(self.pivots):
            sol[pc] = t[i]
        return sol


class _System:
    """The linear map ``z -> i_z omega`` on the degree-``q`` ansatz."""

    def __init__(self, S: NPlecticStructure, q: int):
        self.S = S
        self.q = q
        nv = S.nvars
        monos = monomials(nv, S.degree_bound)
        images = {J: contract_right(Tensor.basis(nv, *J), S.omega) for J in combinations(range(1, nv + 1), q)}
        columns: dict[tuple, dict] = {}
        for J, img in images.items():
            for m in monos:
                col: dict[tuple, int] = {}
                for I, c in img.terms.items():
                    for cm, cv in c.terms.items():
                        key = (I, tuple(a + b for a, b in zip(m, cm)))
                        col[key] = col.get(key, 0) + cv
                columns[(J, m)] = {k: v for k, v in col.items() if v}
        self.columns = columns
        self.components = self._split(columns)
        self.row_home = {row: comp for comp in self.components for row in comp.rows}

    @staticmethod
    def _split(columns: dict) -> list[_Component]:
        parent: dict = {}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        row_owner: dict = {}
        for key, col in columns.items():
            parent[key] = key
            for row in col:
                other = row_owner.setdefault(row, key)
                ra, rb = find(key), find(other)
                if ra != rb:
                    parent[ra] = rb
        groups: dict = {}
        for key in columns:
            groups.setdefault(find(key), []).append(key)
        comps = []
        for cols in groups.values():
            rows = sorted({row for key in cols for row in columns[key]})
            index = {row: i for i, row in enumerate(rows)}
            matrix = [[Fraction(0)] * len(cols) for _ in rows]
            for j, key in enumerate(cols):
                for row, v in columns[key].items():
                    matrix[index[row]][j] = Fraction(v)
            comps.append(_Component(cols, rows, matrix))
        return comps

    def solve(self, target: Cotensor) -> Tensor | None:
        nv = self.S.nvars
        wanted: dict[int, dict] = {}
        for I, c in target.terms.items():
            for m, v in c.terms.items():
                comp = self.row_home.get((I, m))
                if comp is None:
                    return None
                wanted.setdefault(id(comp), {})[(I, m)] = v
        coeffs: dict[tuple[int, ...], dict] = {}
        by_id = {id(c): c for c in self.components}
        for cid, entries in wanted.items():
            comp = by_id[cid]
            rhs = [Fraction(entries.get(row, 0)) for row in comp.rows]
            sol = comp.solve(rhs)
            if sol is None:
                return None
            for (J, m), v in zip(comp.cols, sol):
                if v:
                    coeffs.setdefault(J, {})[m] = v
        return Tensor(nv, {J: Polynomial(nv, t) for J, t in coeffs.items()})

    def kernel_dim(self) -> int:
        return sum(len(c.null) for c in self.components)

    def kernel(self) -> list[Tensor]:
        nv = self.S.nvars
        out = []
        for comp in self.components:
            for vec in comp.null:
                terms: dict = {}
                for (J, m), v in zip(comp.cols, vec):
                    if v:
                        terms.setdefault(J, {})[m] = v
                out.append(Tensor(nv, {J: Polynomial(nv, t) for J, t in terms.items()}))
        return out


@lru_cache(maxsize=64)
def _system(S: NPlecticStructure, q: int) -> _System:
    return _System(S, q)


def _solve(S: NPlecticStructure, target: Cotensor, shift: int) -> SolveReport:
    """Solve ``i_z omega = target`` part by part; ``|z| = -p + shift``."""
    nv = S.nvars
    if target.is_zero():
        return SolveReport("found", Tensor.zero(nv), None)
    total = Tensor.zero(nv)
    systems = []
    degree = None
    for p, part in target.homogeneous_parts().items():
        q = shift - p
        degree = q if degree is None else degree
        if q < 0 or q > nv:
            return SolveReport("no_solution_within_bound", None, q)
        system = _system(S, q)
        systems.append(system)
        sol = system.solve(part)
        if sol is None:
            return SolveReport("no_solution_within_bound", None, q, tuple(systems))
        total = total + sol
    return SolveReport("found", total, degree, tuple(systems))


def solve_hamilton(S: NPlecticStructure, f: Cotensor) -> SolveReport:
    """Solve ``i_x omega = d f`` with ``|x| = |f| + n``."""
    df = de_rham(f)
    if df.is_zero():
        # keep the degree of x attached to f even though the target vanishes
        report = SolveReport("found", Tensor.zero(S.nvars), None)
        degs = f.form_degrees()
        systems = tuple(_system(S, S.n - p) for p in sorted(degs) if 0 <= S.n - p <= S.nvars)
        report._systems = systems
        if len(degs) == 1:
            report.degree = S.n - next(iter(degs))
        return report
    return _solve(S, df, S.n + 1)


def solve_constraint(S: NPlecticStructure, f: Cotensor) -> SolveReport:
    """Solve ``i_y omega = f`` with ``|y| = |f| + n + 1``."""
    return _solve(S, f, S.n + 1)


def kernel_basis(S: NPlecticStructure, q: int) -> list[Tensor]:
    """Basis of ``{z : i_z omega = 0}`` among degree-``q`` tensors within the bound."""
    if q < 0 or q > S.nvars:
        return []
    return _system(S, q).kernel()


def make_poisson(S: NPlecticStructure, f: Cotensor) -> PoissonCotensor:
    ham = solve_hamilton(S, f)
    if not ham.found:
        raise NotPoissonWithinBound("hamilton", f, S.degree_bound)
    con = solve_constraint(S, f)
    if not con.found:
        raise NotPoissonWithinBound("constraint", f, S.degree_bound)
    return PoissonCotensor(S, f, ham.solution, con.solution)


def kernel_property_check(S: NPlecticStructure, p: PoissonCotensor, samples: int | None = None) -> bool:
    """Check ``i_z f = 0`` for kernel elements ``z`` of every degree up to deg f.

    With ``samples`` set, at most that many evenly spaced basis elements are
    tested per degree.
    """
    for form_deg in p.f.form_degrees():
        for q in range(0, form_deg + 1):
            basis = kernel_basis(S, q)
            if samples is not None and len(basis) > samples:
                step = len(basis) / samples
                basis = [basis[int(i * step)] for i in range(samples)]
            for z in basis:
                if not contract_right(z, p.f).is_zero():
                    return False
    return True


def witness_checks(p: PoissonCotensor) -> dict[str, bool]:
    """Corollary-level facts every bundle satisfies."""
    S = p.structure
    return {
        "L_x omega = 0": lie_derivative(p.x, S.omega).is_zero(),
        "d i_y omega = i_x omega": de_rham(S.contract(p.y)) == S.contract(p.x),
    }


def random_tensor(nvars: int, q: int, rng: random.Random, max_degree: int = 2, basis_terms: int = 2) -> Tensor:
    """Degree-``q`` tensor with ``basis_terms`` random basis directions."""
    directions = list(combinations(range(1, nvars + 1), q))
    terms: dict = {}
    for _ in range(basis_terms):
        J = rng.choice(directions)
        terms[J] = terms.get(J, Polynomial.zero(nvars)) + random_polynomial(nvars, rng, max_degree)
    return Tensor(nvars, terms)


def random_poisson(S: NPlecticStructure, rng: random.Random, degrees: Sequence[int] | None = None,
                   max_degree: int = 2, attempts: int = 200) -> PoissonCotensor:
    """Random Poisson cotensor built constraint-first.

    Draws ``y`` of a tensor degree from ``degrees`` (default ``1 .. n+1``),
    sets ``f = i_y omega`` and solves for the Hamilton witness.  Zero
    cotensors and cotensors without a Hamilton witness within the bound are
    redrawn.  Raises ``RuntimeError`` after ``attempts`` draws, which is what
    happens on the trivial structure.
    """
    choices = list(degrees) if degrees else list(range(1, min(S.n + 1, S.nvars) + 1))
    for _ in range(attempts):
        y = random_tensor(S.nvars, rng.choice(choices), rng, max_degree)
        f = S.contract(y)
        if f.is_zero():
            continue
        ham = solve_hamilton(S, f)
        if ham.found:
            return PoissonCotensor(S, f, ham.solution, y)
    raise RuntimeError(f"no nonzero Poisson cotensor found in {attempts} draws")
