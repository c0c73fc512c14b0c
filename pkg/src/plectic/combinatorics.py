"""Permutations, shuffles and Koszul signs.

A permutation is stored in one-line notation as a tuple of 1-based images
``(s(1), ..., s(k))``.  The same tuple is read as a *word listing* when a
permutation acts on a sequence of graded vectors: ``permute(s, v)`` returns
``(v[s(1)], ..., v[s(k)])``.
"""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Iterator, Sequence

Permutation = tuple[int, ...]


def identity(k: int) -> Permutation:
    return tuple(range(1, k + 1))


def is_permutation(sigma: Sequence[int]) -> bool:
    return sorted(sigma) == list(range(1, len(sigma) + 1))


def _check(sigma: Sequence[int]) -> None:
    if not is_permutation(sigma):
        raise ValueError(f"not a permutation of 1..{len(sigma)}: {tuple(sigma)}")


def inverse(sigma: Sequence[int]) -> Permutation:
    _check(sigma)
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    return tuple(inv)


def compose(sigma: Sequence[int], tau: Sequence[int]) -> Permutation:
    """Return ``sigma o tau``, i.e. ``i -> sigma(tau(i))``."""
    if len(sigma) != len(tau):
        raise ValueError("permutations of different length")
    return tuple(sigma[t - 1] for t in tau)


def permute(sigma: Sequence[int], items: Sequence) -> tuple:
    """Word listing ``(items[sigma(1)], ..., items[sigma(k)])``."""
    if len(sigma) != len(items):
        raise ValueError("length mismatch between permutation and items")
    return tuple(items[s - 1] for s in sigma)


def parity(sigma: Sequence[int]) -> int:
    """Sign of the permutation, +1 or -1."""
    _check(sigma)
    sign = 1
    seen = [False] * len(sigma)
    for start in range(len(sigma)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = sigma[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def koszul_sign(sigma: Sequence[int], degrees: Sequence[int]) -> int:
    """Koszul sign ``e(sigma; v)`` with ``v_1...v_k = e * v_sigma(1)...v_sigma(k)``.

    Every pair of vectors whose relative order is reversed by the listing
    contributes ``(-1)^(|v_a| |v_b|)``.
    """
    _check(sigma)
    if len(sigma) != len(degrees):
        raise ValueError("length mismatch between permutation and degrees")
    odd = 0
    k = len(sigma)
    for a in range(k):
        da = degrees[sigma[a] - 1]
        if da % 2 == 0:
            continue
        for b in range(a + 1, k):
            if sigma[a] > sigma[b] and degrees[sigma[b] - 1] % 2:
                odd ^= 1
    return -1 if odd else 1


def antisym_koszul_sign(sigma: Sequence[int], degrees: Sequence[int]) -> int:
    """``sgn(sigma) * e(sigma; v)``."""
    return parity(sigma) * koszul_sign(sigma, degrees)


def enumerate_shuffles(p: int, q: int) -> list[Permutation]:
    """All (p,q)-shuffles: images increasing on ``1..p`` and on ``p+1..p+q``.

    Read as word listings these pick ``p`` letters in order followed by the
    remaining ``q`` letters in order.  Lexicographic on images.
    """
    if p < 0 or q < 0:
        raise ValueError("block sizes must be non-negative")
    k = p + q
    out = []
    for first in combinations(range(1, k + 1), p):
        rest = tuple(i for i in range(1, k + 1) if i not in first)
        out.append(first + rest)
    return sorted(out)


def is_shuffle(sigma: Sequence[int], blocks: Sequence[int]) -> bool:
    """True if the images of ``sigma`` increase inside each consecutive block."""
    if sum(blocks) != len(sigma):
        return False
    start = 0
    for size in blocks:
        chunk = sigma[start:start + size]
        if any(a >= b for a, b in zip(chunk, chunk[1:])):
            return False
        start += size
    return True


def is_unshuffle(sigma: Sequence[int], blocks: Sequence[int]) -> bool:
    """True if the inverse of ``sigma`` is a shuffle for ``blocks``.

    As a word listing this means the letters of every block keep their order.
    """
    return is_shuffle(inverse(sigma), blocks)


def enumerate_unshuffles(blocks: Sequence[int]) -> list[Permutation]:
    """All ``blocks``-unshuffles (interleavings of the blocks), lexicographic."""
    return sorted(inverse(s) for s in _shuffles_multi(blocks))


def enumerate_block_shuffles(blocks: Sequence[int]) -> list[Permutation]:
    """All ``Sh(b_1, ..., b_m)``: images increasing inside every block, lexicographic.

    Blocks of size zero are allowed.
    """
    if any(b < 0 for b in blocks):
        raise ValueError("block sizes must be non-negative")
    return sorted(_shuffles_multi(list(blocks)))


def _shuffles_multi(blocks: Sequence[int]) -> Iterator[Permutation]:
    total = sum(blocks)
    if not blocks:
        yield ()
        return
    first = blocks[0]
    for chosen in combinations(range(1, total + 1), first):
        rest = [i for i in range(1, total + 1) if i not in chosen]
        for tail in _shuffles_multi(blocks[1:]):
            yield chosen + tuple(rest[t - 1] for t in tail)


def _block_offsets(sizes: Sequence[int]) -> list[int]:
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    return offsets


def is_straight_unshuffle(
    sigma: Sequence[int], blocks: Sequence[tuple[int, int, int, int]]
) -> bool:
    """Check the straight ``(l_j, q_j, r_j, p_j)``-unshuffle condition.

    ``sigma`` is a word listing: position ``i`` holds letter ``sigma(i)``.
    Letters keep their order inside every block, and the distinguished
    interval of block ``j`` occupies positions ``L_j+1 .. L_{j+1}``.
    """
    sizes = [p for (_, _, _, p) in blocks]
    if any(l + q + r != p or q < 1 or l < 0 or r < 0 for (l, q, r, p) in blocks):
        raise ValueError(f"invalid block specification {blocks}")
    if len(sigma) != sum(sizes) or not is_unshuffle(sigma, sizes):
        return False
    offsets = _block_offsets(sizes)
    L = sum(l for (l, _, _, _) in blocks)
    for j, (l, q, _, _) in enumerate(blocks):
        want = tuple(range(offsets[j] + l + 1, offsets[j] + l + q + 1))
        if tuple(sigma[L:L + q]) != want:
            return False
        L += q
    return True


def straight_unshuffles_with_splits(
    blocks: Sequence[tuple[int, int]],
) -> list[tuple[Permutation, tuple[int, ...]]]:
    """Straight ``(q_j, p_j)``-unshuffles together with their left sizes ``l_j``.

    Each result is ``(sigma, ls)`` where ``sigma`` is the word listing and
    ``ls`` the chosen left counts.  The word consists of all left letters
    (interleaved, block order kept), then the distinguished intervals in
    block order, then all right letters (interleaved).
    """
    for q, p in blocks:
        if not 1 <= q <= p:
            raise ValueError(f"invalid block (q={q}, p={p})")
    sizes = [p for _, p in blocks]
    offsets = _block_offsets(sizes)
    results = []

    def splits(j: int) -> Iterator[tuple[int, ...]]:
        if j == len(blocks):
            yield ()
            return
        q, p = blocks[j]
        for l in range(p - q + 1):
            for tail in splits(j + 1):
                yield (l,) + tail

    for ls in splits(0):
        lefts, middle, rights = [], [], []
        for j, ((q, p), l) in enumerate(zip(blocks, ls)):
            letters = list(range(offsets[j] + 1, offsets[j + 1] + 1))
            lefts.append(letters[:l])
            middle.extend(letters[l:l + q])
            rights.append(letters[l + q:])
        for left in _interleavings(lefts):
            for right in _interleavings(rights):
                results.append((left + tuple(middle) + right, ls))
    results.sort()
    return results


def enumerate_straight_unshuffles(blocks: Sequence[tuple[int, int]]) -> list[Permutation]:
    """All straight ``(q_j, p_j)``-unshuffles as word listings, without duplicates."""
    return sorted({sigma for sigma, _ in straight_unshuffles_with_splits(blocks)})


def _interleavings(words: Sequence[Sequence[int]]) -> Iterator[tuple[int, ...]]:
    sizes = [len(w) for w in words]
    flat = [letter for w in words for letter in w]
    for sigma in _shuffles_multi(sizes):
        # sigma sends the i-th flat letter to position sigma(i)
        out = [0] * len(flat)
        for i, pos in enumerate(sigma):
            out[pos - 1] = flat[i]
        yield tuple(out)


def brute_force_permutations(k: int) -> Iterator[Permutation]:
    return permutations(range(1, k + 1))
