import random

import pytest

from plectic import make_poisson
from plectic.graded_algebra import de_rham, sign
from plectic.homotopy import bracket2, decalage_sign, leibniz1
from plectic.nplectic import NotPoissonWithinBound, WitnessError
from plectic.pinfty import (
    MissingWitness,
    Letter,
    WordBlock,
    block_degree,
    build_structure_maps,
    check_structure_equation,
    compare_with_homotopy,
    homotopy_counterpart,
    letters_of,
    straight_shuffle_extension,
    structure_terms,
)

from conftest import F1, F2, cot, one_form, r6_structure, rich

S6 = r6_structure()
N = S6.n
MAPS = build_structure_maps(S6)
NOT_EVALUABLE = (MissingWitness, NotPoissonWithinBound, WitnessError)


def letter(text, label):
    (x,) = letters_of(make_poisson(S6, cot(text)), label)
    return x


def random_letters(seed, count):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        gen = rich if i == 0 else one_form
        parts = letters_of(gen(S6, rng), f"f{i + 1}")
        out.append(parts[0])
    return out


def test_letter_and_block_degrees():
    a, b = letter("dx1", "a"), letter(F1, "b")
    assert (a.degree, b.degree) == (0, -1)
    assert block_degree((a, b), N) == N - 2 - 1


def test_shuffle_images_vanish_in_the_quotient():
    a, b, c = letter("dx1", "a"), letter(F1, "b"), letter("dx5", "c")
    assert WordBlock.shuffle_image((a,), (c,)) == WordBlock()
    assert WordBlock.shuffle_image((a, b), (c,)) == WordBlock()
    assert WordBlock.word((a, c)) != WordBlock()
    # a (x) c and c (x) a agree up to the Koszul sign of two even letters
    assert WordBlock.word((a, c)) == WordBlock.word((c, a)).scale(-1)


def test_wedge_map_respects_the_shuffle_relation():
    a, c = letter("dx1", "a"), letter("dx5", "c")
    D2 = MAPS.map((2,))
    assert D2((a, c)).total(6) == cot("dx1^dx5")
    assert D2(WordBlock.shuffle_image((a,), (c,))).total(6).is_zero()


def test_leibniz_map_respects_the_shuffle_relation():
    D12 = MAPS.map((1, 2))
    evaluated = 0
    for seed in range(10):
        f1, f2, f3 = random_letters(seed, 3)
        try:
            value = D12((f1,), WordBlock.shuffle_image((f2,), (f3,))).total(6)
        except NOT_EVALUABLE:
            continue
        assert value.is_zero()
        evaluated += 1
    assert evaluated >= 3


def test_bracket_map_is_graded_antisymmetric_in_blocks():
    D = MAPS.map((1, 1))
    for seed in range(6):
        f1, f2 = random_letters(seed, 2)
        A, B = block_degree((f1,), N), block_degree((f2,), N)
        assert D((f2,), (f1,)).total(6) == D((f1,), (f2,)).total(6).scale(-sign(A * B))


def test_bracket_map_is_the_two_bracket():
    a, b = letter(F1, "a"), letter(F2, "b")
    assert MAPS.map((1, 1))((a,), (b,)).total(6) == bracket2(a.bundle, b.bundle).value


def test_unsorted_signature_permutes_blocks():
    evaluated = 0
    for seed in range(10):
        f1, f2, f3 = random_letters(seed, 3)
        left, right = (f1,), (f2, f3)
        c = decalage_sign((2, 1), [block_degree(left, N), block_degree(right, N)], shift=0)
        try:
            sorted_value = MAPS.map((1, 2))(left, right).total(6)
        except NOT_EVALUABLE:
            continue
        assert MAPS.map((2, 1))(right, left).total(6) == sorted_value.scale(c)
        evaluated += 1
    assert evaluated >= 3


def test_leibniz_map_value():
    f1, f2, f3 = random_letters(3, 3)
    expected = leibniz1(f1.bundle, f2.bundle, f3.bundle).value
    c = sign(f2.degree + block_degree((f1,), N))
    assert MAPS.map((1, 2))((f1,), (f2, f3)).total(6) == expected.scale(c)


def test_vanishing_maps():
    for sig in [(3,), (1, 3), (2, 2), (1, 1, 3)]:
        assert MAPS.map(sig).zero
    assert not MAPS.map((1, 1, 2)).zero
    with pytest.raises(ValueError):
        MAPS.map((0, 1))


def test_map_degrees():
    for sig in [(1,), (2,), (1, 1), (1, 2), (1, 1, 1)]:
        assert MAPS.map(sig).degree == len(sig) - N


def test_extension_to_the_same_lengths_is_the_map():
    D = MAPS.map((1, 2))
    assert straight_shuffle_extension(D, (1, 2)) is D


def test_extension_of_a_zero_map_is_zero():
    E = straight_shuffle_extension(MAPS.map((3,)), (3,))
    assert E.zero
    f = random_letters(1, 3)
    assert straight_shuffle_extension(MAPS.map((2, 2)), (2, 3))(tuple(f[:2]), tuple(f)).is_zero()


def test_extension_rejects_shorter_blocks():
    with pytest.raises(ValueError):
        straight_shuffle_extension(MAPS.map((2,)), (1,))
    with pytest.raises(ValueError):
        straight_shuffle_extension(MAPS.map((1, 1)), (2,))


def test_extension_of_differential_to_two_letters():
    # written out by hand: D_1 on a length-two block acts on each letter in turn
    rng = random.Random(21)
    E = straight_shuffle_extension(MAPS.map((1,)), (2,))
    for _ in range(5):
        a = letters_of(rich(S6, rng), "a")[0]
        b = letters_of(rich(S6, rng), "b")[0]
        da = Letter(de_rham(a.value), None, "da")
        db = Letter(de_rham(b.value), None, "db")
        expected = WordBlock()
        if da.value:
            expected = expected + WordBlock.word((da, b))
        if db.value:
            expected = expected + WordBlock.word((a, db), sign(a.degree))
        got = E((a, b))
        as_values = lambda blk: sorted((tuple(str(x.value) for x in w), c) for w, c in blk)
        assert as_values(got) == as_values(expected)


def test_profile_validation():
    p = make_poisson(S6, cot(F1))
    with pytest.raises(ValueError):
        check_structure_equation(MAPS, 2, (1,), [[p]])
    with pytest.raises(ValueError):
        check_structure_equation(MAPS, 1, (4,), [[p] * 4])
    with pytest.raises(ValueError):
        check_structure_equation(MAPS, 1, (2,), [[p]])
    with pytest.raises(ValueError):
        compare_with_homotopy(MAPS, (2, 1), [[p, p], [p]])


def test_counterparts():
    p = make_poisson(S6, cot(F1))
    names = {
        (1,): "square_zero", (2,): "derivation", (1, 1): "jacobi[k=2]",
        (1, 2): "leibniz_first[k=1]", (1, 3): "leibniz_third[k=1]", (2, 2): "leibniz_second[k=0]",
    }
    for profile, name in names.items():
        args = [[p] * q for q in profile]
        assert homotopy_counterpart(profile, args).name == name
    assert homotopy_counterpart((3,), [[p] * 3]).name == "leibniz_third[k=0]"


def _bundles(seed, count):
    rng = random.Random(seed)
    return [rich(S6, rng)] + [one_form(S6, rng) for _ in range(count - 1)]


def _blocks(profile, flat):
    out, start = [], 0
    for q in profile:
        out.append(flat[start:start + q])
        start += q
    return out


@pytest.mark.parametrize("profile", [(1,), (2,), (3,), (1, 1), (1, 2), (1, 3)])
def test_structure_equation_matches_homotopy_checkers(profile):
    evaluated = 0
    for seed in range(12):
        flat = _bundles(100 + seed, sum(profile))
        e = compare_with_homotopy(MAPS, profile, _blocks(profile, flat))
        assert e.matched, str(e)
        if e.structure.residual is not None:
            assert e.structure.passed
            evaluated += 1
    assert evaluated >= 1


def test_named_pair_structure_equation():
    p1, p2 = make_poisson(S6, cot(F1)), make_poisson(S6, cot(F2))
    report = check_structure_equation(MAPS, 2, (1, 1), [[p1], [p2]])
    assert report.passed
    assert report.detail.endswith("nonzero terms")


def test_structure_terms_of_a_single_letter():
    f = letters_of(make_poisson(S6, cot(F1)), "f1")[0]
    # D_1 D_1 vanishes, so no term survives
    assert structure_terms(MAPS, [(f,)]) == []


def test_two_two_profile_can_disagree_with_the_homotopy_identity():
    texts = ["(-3*x1-2) dx5^dx6", "(-3*x1+1) dx6", "-2 dx5", "-3 dx3"]
    ps = [make_poisson(S6, cot(t)) for t in texts]
    e = compare_with_homotopy(MAPS, (2, 2), [ps[:2], ps[2:]])
    assert not e.matched
    assert e.structure.residual == cot("(-108*x1-72) dx5^dx6")
    assert e.homotopy.residual == cot("108 dx5^dx6")


def test_two_two_profile_passes_where_the_homotopy_identity_fails():
    texts = [
        "-7 dx5",
        "(-4*x5-2) dx1^dx3 + (-4*x5-2) dx2^dx4 + (-2*x3+x4) dx5^dx6",
        "(3*x1+3*x5-2) dx5",
        "-2 dx6",
    ]
    ps = [make_poisson(S6, cot(t)) for t in texts]
    e = compare_with_homotopy(MAPS, (2, 2), [ps[:2], ps[2:]])
    assert e.structure.passed
    assert not e.homotopy.passed
    assert not e.matched
