"""Structure maps of the homotopy Poisson-n algebra on Poisson cotensors.

Inputs of a structure map ``D_{q_1...q_k}`` are ``k`` word blocks.  A block
of length ``p`` is a word ``s f_1 (x) ... (x) s f_p`` of shifted Poisson
cotensors taken modulo shuffle images, and then shifted by ``n - 2``.
Degrees used in signs:

* a letter ``s f`` has degree ``|f| + 1``;
* a block has degree ``n - 2`` plus the sum of its letter degrees;
* blocks are graded antisymmetric in a wedge, so reordering them costs
  :func:`~plectic.homotopy.decalage_sign` with ``shift=0``.

Only the maps with signature ``(1)``, ``(2)``, ``(1,...,1)`` and
``(1,...,1,2)`` are nonzero.  They are the differential, the wedge product,
the brackets and the Leibniz operators.

A map needs the witnesses of every argument it feeds into a bracket or a
Leibniz operator.  A letter obtained as a wedge product that is not Poisson
has no witnesses.  An evaluation that needs them raises
:class:`MissingWitness`, and the checker reports the instance as not
evaluable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product as cartesian
from typing import Callable, Iterable, Mapping, Sequence

from .combinatorics import (
    enumerate_shuffles,
    inverse,
    koszul_sign,
    permute,
    straight_unshuffles_with_splits,
)
from .graded_algebra import Cotensor, de_rham, sign, tensor_degree
from .homotopy import (
    CheckReport,
    bracket,
    check_derivation,
    check_jacobi,
    check_leibniz_first,
    check_leibniz_second,
    check_leibniz_third,
    check_square_zero,
    decalage_sign,
    differential,
    leibniz,
    product_poisson,
)
from .nplectic import NotPoissonWithinBound, NPlecticStructure, PoissonCotensor, WitnessError

MAX_BLOCKS = 3
MAX_BLOCK_LENGTH = 3


class MissingWitness(LookupError):
    """A structure map needs witnesses that a letter does not carry."""


@dataclass(frozen=True)
class Letter:
    """A shifted cotensor ``s f``, optionally with its Poisson witnesses."""

    value: Cotensor
    bundle: PoissonCotensor | None
    label: str

    @property
    def degree(self) -> int:
        return tensor_degree(self.value) + 1

    def require(self) -> PoissonCotensor:
        if self.bundle is None:
            raise MissingWitness(f"{self.label} is not a Poisson cotensor")
        return self.bundle

    def key(self) -> tuple:
        b = self.bundle
        return (self.label, str(self.value), "" if b is None else f"{b.x}|{b.y}")

    def __str__(self) -> str:
        return f"s{self.label}"


Word = tuple[Letter, ...]


def letters_of(p: PoissonCotensor, label: str) -> list[Letter]:
    """Homogeneous letters of a Poisson cotensor."""
    return [Letter(part.f, part, label) for part in p.homogeneous_parts()]


def block_degree(word: Word, n: int) -> int:
    return n - 2 + sum(letter.degree for letter in word)


# -- words modulo shuffle images -------------------------------------------------


def _shuffle_image(u: Word, v: Word) -> dict[Word, int]:
    """Graded shuffle product ``u ⧢ v`` as a signed sum of words."""
    letters = u + v
    degrees = [letter.degree for letter in letters]
    out: dict[Word, int] = {}
    for sigma in enumerate_shuffles(len(u), len(v)):
        listing = inverse(sigma)
        word = permute(listing, letters)
        out[word] = out.get(word, 0) + koszul_sign(listing, degrees)
    return {w: c for w, c in out.items() if c}


def _is_lyndon(keys: Sequence) -> bool:
    return all(tuple(keys) < tuple(keys[i:]) + tuple(keys[:i]) for i in range(1, len(keys)))


class _Quotient:
    """Row-reduced shuffle relations on all rearrangements of one multiset of letters.

    Columns are ordered with non-Lyndon words first, so pivots land on them
    and the normal form is spanned by Lyndon words wherever possible.
    """

    def __init__(self, letters: Sequence[Letter]):
        words = sorted(set(permutations(letters)), key=lambda w: [x.key() for x in w])
        lyndon = [w for w in words if _is_lyndon([x.key() for x in w])]
        others = [w for w in words if w not in set(lyndon)]
        self.columns = others + lyndon
        index = {w: i for i, w in enumerate(self.columns)}
        rows = []
        for w in words:
            for cut in range(1, len(w)):
                rel = _shuffle_image(w[:cut], w[cut:])
                row = [Fraction(0)] * len(self.columns)
                for word, c in rel.items():
                    row[index[word]] += c
                rows.append(row)
        self.pivots: list[tuple[int, list[Fraction]]] = []
        for row in rows:
            row = self._reduce(row)
            lead = next((i for i, c in enumerate(row) if c), None)
            if lead is None:
                continue
            inv = 1 / row[lead]
            row = [c * inv for c in row]
            self.pivots = [(pc, self._eliminate(prow, row, lead)) for pc, prow in self.pivots]
            self.pivots.append((lead, row))
        self.index = index

    @staticmethod
    def _eliminate(target: list[Fraction], row: list[Fraction], col: int) -> list[Fraction]:
        c = target[col]
        return [a - c * b for a, b in zip(target, row)] if c else target

    def _reduce(self, vec: list[Fraction]) -> list[Fraction]:
        for col, row in self.pivots:
            vec = self._eliminate(vec, row, col)
        return vec

    def normal_form(self, terms: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
        vec = [Fraction(0)] * len(self.columns)
        for w, c in terms.items():
            vec[self.index[w]] += c
        vec = self._reduce(vec)
        return {self.columns[i]: c for i, c in enumerate(vec) if c}


@dataclass(frozen=True)
class WordBlock:
    """Formal linear combination of words of shifted letters.

    Equality compares shuffle-quotient normal forms.
    """

    terms: Mapping[Word, Fraction] = field(default_factory=dict)

    @classmethod
    def word(cls, word: Iterable[Letter], coeff=1) -> "WordBlock":
        return cls({tuple(word): Fraction(coeff)})

    @classmethod
    def shuffle_image(cls, u: Word, v: Word) -> "WordBlock":
        return cls({w: Fraction(c) for w, c in _shuffle_image(tuple(u), tuple(v)).items()})

    def __add__(self, other: "WordBlock") -> "WordBlock":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return WordBlock({w: c for w, c in out.items() if c})

    def scale(self, c) -> "WordBlock":
        return WordBlock({w: v * c for w, v in self.terms.items() if v * c})

    def __neg__(self) -> "WordBlock":
        return self.scale(-1)

    def __sub__(self, other: "WordBlock") -> "WordBlock":
        return self + (-other)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: [x.key() for x in t[0]]))

    def is_zero(self) -> bool:
        return not self.terms

    def normal_form(self) -> dict[Word, Fraction]:
        groups: dict[tuple, dict[Word, Fraction]] = {}
        for w, c in self.terms.items():
            groups.setdefault(tuple(sorted(x.key() for x in w)), {})[w] = c
        out: dict[Word, Fraction] = {}
        for terms in groups.values():
            letters = next(iter(terms))
            out.update(_Quotient(letters).normal_form(terms))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, WordBlock):
            return NotImplemented
        return (self - other).normal_form() == {}

    def __hash__(self) -> int:
        return hash(frozenset(self.normal_form().items()))

    def total(self, nvars: int) -> Cotensor:
        """Sum of the values of length-one words."""
        out = Cotensor.zero(nvars)
        for w, c in self.terms.items():
            if len(w) != 1:
                raise ValueError("only length-one words have a cotensor value")
            out = out + w[0].value.scale(c)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})" + "(x)".join(str(x) for x in w) for w, c in self)


# -- structure maps --------------------------------------------------------------------


@dataclass(frozen=True)
class StructureMap:
    """``D_{q_1...q_k}``: ``evaluator`` takes one word per block and returns a :class:`WordBlock`."""

    signature: tuple[int, ...]
    evaluator: Callable[..., WordBlock]
    degree: int
    n: int
    zero: bool = False
    checks_degree: bool = True

    def __call__(self, *blocks) -> WordBlock:
        blocks = [b if isinstance(b, WordBlock) else WordBlock.word(b) for b in blocks]
        if len(blocks) != len(self.signature):
            raise ValueError(f"D{self.signature} takes {len(self.signature)} blocks")
        total = WordBlock()
        if self.zero:
            return total
        for combo in cartesian(*(list(b) for b in blocks)):
            words = [w for w, _ in combo]
            if [len(w) for w in words] != list(self.signature):
                raise ValueError(f"D{self.signature} got word lengths {[len(w) for w in words]}")
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            out = self.evaluator(*words)
            self._check_degree(words, out)
            total = total + out.scale(coeff)
        return total

    def _check_degree(self, words: Sequence[Word], out: WordBlock) -> None:
        if not self.checks_degree:
            return
        expected = sum(block_degree(w, self.n) for w in words) + self.degree
        for w, _ in out:
            if len(w) != 1 or w[0].degree != expected:
                raise ArithmeticError(f"D{self.signature}: output {w} does not have degree {expected}")


def _letter_block(letter: Letter | None, coeff: int = 1) -> WordBlock:
    if letter is None or not letter.value:
        return WordBlock()
    return WordBlock.word((letter,), coeff)


class StructureMaps:
    """The family ``D_{q_1...q_k}`` on one n-plectic structure."""

    def __init__(self, S: NPlecticStructure, letters: Sequence[Letter] = ()):
        self.S = S
        self.n = S.n
        self.letters = list(letters)

    # nonzero maps on sorted signatures

    def _d1(self, w: Word) -> WordBlock:
        (a,) = w
        value = de_rham(a.value)
        bundle = differential(a.bundle).bundle(self.S) if a.bundle is not None else None
        return _letter_block(Letter(value, bundle, f"d{a.label}"))

    def _d2(self, w: Word) -> WordBlock:
        a, b = w
        bundle = None
        if a.bundle is not None and b.bundle is not None:
            try:
                bundle = product_poisson(a.bundle, b.bundle).bundle(self.S)
            except NotPoissonWithinBound:
                bundle = None
        letter = Letter(a.value ^ b.value, bundle, f"({a.label}^{b.label})")
        return _letter_block(letter, sign(a.degree))

    def _bracket(self, *ws: Word) -> WordBlock:
        args = [w[0].require() for w in ws]
        label = "{" + ",".join(w[0].label for w in ws) + "}"
        return _letter_block(Letter(bracket(*args).value, bracket(*args).bundle(self.S), label))

    def _leibniz(self, *ws: Word) -> WordBlock:
        left = [w[0].require() for w in ws[:-1]]
        a, b = ws[-1]
        result = leibniz(left, (a.require(), b.require()))
        label = "{" + ",".join(w[0].label for w in ws[:-1]) + "||" + f"{a.label},{b.label}" + "}"
        # the sign of the first factor, times the Koszul sign of the leading blocks
        c = sign(a.degree + sum(block_degree(w, self.n) for w in ws[:-1]))
        return _letter_block(Letter(result.value, result.bundle(self.S), label), c)

    def _sorted_evaluator(self, sig: tuple[int, ...]) -> Callable[..., WordBlock] | None:
        if sig == (1,):
            return self._d1
        if sig == (2,):
            return self._d2
        if len(sig) >= 2 and all(q == 1 for q in sig):
            return self._bracket
        if len(sig) >= 2 and all(q == 1 for q in sig[:-1]) and sig[-1] == 2:
            return self._leibniz
        return None

    def map(self, signature: Sequence[int]) -> StructureMap:
        """``D`` for any block order; unsorted signatures permute the blocks with their sign."""
        sig = tuple(signature)
        if not sig or any(q < 1 for q in sig):
            raise ValueError(f"invalid signature {sig}")
        k = len(sig)
        listing = tuple(sorted(range(1, k + 1), key=lambda i: sig[i - 1]))
        base = self._sorted_evaluator(permute(listing, sig))
        if base is None:
            return StructureMap(sig, lambda *ws: WordBlock(), k - self.n, self.n, zero=True)
        if listing == tuple(range(1, k + 1)):
            return StructureMap(sig, base, k - self.n, self.n)
        n = self.n

        def permuted(*ws: Word) -> WordBlock:
            c = decalage_sign(listing, [block_degree(w, n) for w in ws], shift=0)
            return base(*permute(listing, ws)).scale(c)

        return StructureMap(sig, permuted, k - self.n, self.n)


def build_structure_maps(S: NPlecticStructure, basis: Sequence[PoissonCotensor] = ()) -> StructureMaps:
    """Structure maps on ``S``; ``basis`` supplies labelled letters ``f1, f2, ...``."""
    letters = [x for i, p in enumerate(basis, start=1) for x in letters_of(p, f"f{i}")]
    return StructureMaps(S, letters)


# -- straight shuffle extension ---------------------------------------------------------


def straight_shuffle_extension(D: StructureMap, target: Sequence[int]) -> StructureMap:
    """Extend ``D_{q_1...q_k}`` to blocks of lengths ``p_j >= q_j``.

    Each straight unshuffle splits block ``j`` into left letters, a
    distinguished interval of length ``q_j`` fed to ``D``, and right letters.
    The output word is all left letters, the value of ``D``, then all right
    letters.
    """
    target = tuple(target)
    q = D.signature
    k = len(q)
    if len(target) != k or any(not 1 <= qj <= pj for qj, pj in zip(q, target)):
        raise ValueError(f"cannot extend D{q} to blocks of lengths {target}")
    if target == q:
        return D
    splits = straight_unshuffles_with_splits(list(zip(q, target)))
    # D and the k block shifts it strips move past the left letters
    passing = D.degree + k * (D.n - 2)

    def extended(*ws: Word) -> WordBlock:
        letters = [x for w in ws for x in w]
        degrees = [x.degree for x in letters]
        total = WordBlock()
        for listing, ls in splits:
            word = permute(listing, letters)
            L1 = sum(ls)
            mid = word[L1:L1 + sum(q)]
            middle, start = [], 0
            for qj in q:
                middle.append(mid[start:start + qj])
                start += qj
            c = koszul_sign(listing, degrees) * sign(passing * sum(x.degree for x in word[:L1]))
            for w, v in D(*middle):
                total = total + WordBlock.word(word[:L1] + w + word[L1 + sum(q):], v * c)
        return total

    # outputs are words, not letters; the inner D checks its own degree
    return StructureMap(target, extended, D.degree, D.n, zero=D.zero, checks_degree=False)


# -- structure equation ----------------------------------------------------------------------


def structure_terms(maps: StructureMaps, blocks: Sequence[Word]) -> list[Cotensor]:
    """Nonzero summands of the structure equation on homogeneous letter blocks."""
    k = len(blocks)
    n = maps.n
    nv = maps.S.nvars
    degrees = [block_degree(w, n) for w in blocks]
    terms = []
    for j in range(1, k + 1):
        for sigma in enumerate_shuffles(j, k - j):
            c = decalage_sign(sigma, degrees, shift=0) * sign(j * (k - j))
            chosen = permute(sigma, blocks)
            inner, outer = chosen[:j], chosen[j:]
            lengths = [len(w) for w in inner]
            for qs in cartesian(*(range(1, p + 1) for p in lengths)):
                D = maps.map(qs)
                if D.zero:
                    continue
                W = straight_shuffle_extension(D, lengths)(*inner)
                for w, v in W:
                    E = maps.map((len(w),) + tuple(len(o) for o in outer))
                    if E.zero:
                        continue
                    value = E(w, *outer).total(nv).scale(v * c)
                    if value:
                        terms.append(value)
    return terms


def structure_residual(maps: StructureMaps, blocks: Sequence[Word]) -> Cotensor:
    """Left side of the structure equation on homogeneous letter blocks."""
    return sum(structure_terms(maps, blocks), Cotensor.zero(maps.S.nvars))


def _validate_profile(k: int, profile: Sequence[int], args: Sequence[Sequence]) -> None:
    if not 1 <= k <= MAX_BLOCKS or len(profile) != k:
        raise ValueError(f"structure equations are supported for 1 <= k <= {MAX_BLOCKS}")
    if any(not 1 <= p <= MAX_BLOCK_LENGTH for p in profile):
        raise ValueError(f"block lengths must lie in 1..{MAX_BLOCK_LENGTH}")
    if [len(a) for a in args] != list(profile):
        raise ValueError(f"argument blocks {[len(a) for a in args]} do not match profile {tuple(profile)}")


def check_structure_equation(maps: StructureMaps, k: int, profile: Sequence[int],
                             args: Sequence[Sequence[PoissonCotensor]]) -> CheckReport:
    """Evaluate the structure equation on blocks of Poisson cotensors.

    Letters are labelled ``f1, f2, ...`` in reading order.  Inhomogeneous
    cotensors are split and the equation is applied multilinearly.
    """
    _validate_profile(k, profile, args)
    name = f"structure[k={k},p={tuple(profile)}]"
    flat = [p for block in args for p in block]
    choices = [letters_of(p, f"f{i}") for i, p in enumerate(flat, start=1)]
    residual = Cotensor.zero(maps.S.nvars)
    count = 0
    try:
        for letters in cartesian(*choices):
            blocks, start = [], 0
            for p in profile:
                blocks.append(tuple(letters[start:start + p]))
                start += p
            terms = structure_terms(maps, blocks)
            count += len(terms)
            residual = sum(terms, residual)
    except (MissingWitness, NotPoissonWithinBound, WitnessError) as exc:
        return CheckReport(name, None, False, f"not evaluable: {exc}")
    return CheckReport(name, residual, residual.is_zero(), f"{count} nonzero terms")


# -- comparison with the homotopy checkers ---------------------------------------------------


def homotopy_counterpart(profile: Sequence[int], args: Sequence[Sequence[PoissonCotensor]]) -> CheckReport | None:
    """The homotopy-module identity that a sorted profile encodes, or ``None``."""
    profile = tuple(profile)
    flat = [p for block in args for p in block]
    ones = sum(1 for p in profile if p == 1)
    rest = profile[ones:]
    if profile == (1,):
        return check_square_zero(flat[0])
    if profile == (2,):
        return check_derivation(*flat)
    if not rest:
        return check_jacobi(len(profile), flat)
    if rest == (2,):
        return check_leibniz_first(ones, flat[:ones], flat[ones:])
    if rest == (3,):
        return check_leibniz_third(ones, flat)
    if rest == (2, 2):
        return check_leibniz_second(ones, flat)
    return None


@dataclass(frozen=True)
class Equivalence:
    structure: CheckReport
    homotopy: CheckReport | None
    sign: int | None

    @property
    def matched(self) -> bool:
        if self.homotopy is None:
            return False
        s, h = self.structure, self.homotopy
        if s.residual is None or h.residual is None:
            return s.residual is None and h.residual is None
        return self.sign is not None

    def __str__(self) -> str:
        other = "none" if self.homotopy is None else str(self.homotopy)
        tag = "match" if self.matched else "MISMATCH"
        return f"{self.structure} vs {other}: {tag}"


def compare_with_homotopy(maps: StructureMaps, profile: Sequence[int],
                          args: Sequence[Sequence[PoissonCotensor]]) -> Equivalence:
    """Structure-equation residual next to its homotopy-module counterpart.

    ``sign`` is the factor ``c`` with ``structure = c * homotopy``, or
    ``None`` when no such sign exists.  Two zero residuals give ``+1``.
    """
    profile = tuple(profile)
    if list(profile) != sorted(profile):
        raise ValueError("compare_with_homotopy expects a sorted profile")
    s = check_structure_equation(maps, len(profile), profile, args)
    h = homotopy_counterpart(profile, args)
    c = None
    if h is not None and s.residual is not None and h.residual is not None:
        for candidate in (1, -1):
            if s.residual == h.residual.scale(candidate):
                c = candidate
                break
    return Equivalence(s, h, c)
