import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from plectic.coefficients import Polynomial
from plectic.combinatorics import parity
from plectic.graded_algebra import (
    Cotensor,
    Tensor,
    contract_left,
    contract_right,
    de_rham,
    lie_derivative,
    natural_pairing,
    schouten,
    sign,
    tensor_degree,
)

from conftest import F1, X1, X2, cot, random_element, ten

N = 4
seeds = st.integers(0, 10**6)


def rt(rng, q, max_degree=2):
    return random_element(Tensor, N, q, rng, max_degree)


def rf(rng, p, max_degree=2):
    return random_element(Cotensor, N, p, rng, max_degree)


def probes(cls, q):
    return [cls.basis(N, *J) for J in combinations(range(1, N + 1), q)]


def vector_bracket(X, Y):
    """Classical Lie bracket of vector fields, componentwise."""
    nv = X.nvars
    comps = {}
    for i in range(1, nv + 1):
        total = Polynomial.zero(nv)
        for j in range(1, nv + 1):
            xj = X.coefficient(j)
            yj = Y.coefficient(j)
            total = total + xj * Y.coefficient(i).partial(j) - yj * X.coefficient(i).partial(j)
        comps[(i,)] = total
    return Tensor(nv, comps)


# -- canonical form and grading -------------------------------------------------


def test_wedge_examples():
    assert ten("d3^d1") == -ten("d1^d3")
    assert cot("dx5^dx6") ^ cot("dx5") == Cotensor.zero(6)
    assert cot("dx1^dx3") ^ cot("dx5^dx6") == cot("dx1^dx3^dx5^dx6")


def test_tensor_degree():
    assert tensor_degree(ten("d1^d2")) == 2
    assert tensor_degree(cot("dx1^dx2^dx3")) == -3
    assert tensor_degree(Cotensor.zero(6)) is None
    with pytest.raises(ValueError):
        tensor_degree(cot("dx1 + dx1^dx2"))


def test_sign_helper():
    assert [sign(e) for e in (-3, -2, 0, 1, 2)] == [-1, 1, 1, -1, 1]


# -- pairing --------------------------------------------------------------------


def test_pairing_examples():
    assert natural_pairing(cot("dx1^dx2"), ten("d1^d2")) == Polynomial.constant(6, 1)
    assert natural_pairing(cot("dx1"), ten("d2")).is_zero()
    assert natural_pairing(cot("dx1"), ten("d1^d2")).is_zero()


@settings(max_examples=40)
@given(seeds, st.integers(1, 3))
def test_pairing_is_a_determinant(seed, k):
    rng = random.Random(seed)
    alphas = [rf(rng, 1, 1) for _ in range(k)]
    vs = [rt(rng, 1, 1) for _ in range(k)]
    f, x = alphas[0], vs[0]
    for a in alphas[1:]:
        f = f ^ a
    for v in vs[1:]:
        x = x ^ v
    entries = [[natural_pairing(a, v) for v in vs] for a in alphas]
    det = Polynomial.zero(N)
    for sigma in permutations(range(k)):
        term = Polynomial.constant(N, parity(tuple(s + 1 for s in sigma)))
        for i, s in enumerate(sigma):
            term = term * entries[i][s]
        det = det + term
    assert natural_pairing(f, x) == det


# -- contractions -------------------------------------------------------------------


def test_contraction_examples():
    assert contract_right(ten("d1"), cot("dx1^dx2")) == cot("dx2")
    assert contract_right(ten("d1^d2^d3"), cot("dx1^dx2")).is_zero()
    assert contract_left(cot("dx3", 3), ten("d1", 3)).is_zero()
    # fixed by the adjointness probe <dx2, j x> = <dx2^dx1, d1^d2> = -1
    assert contract_left(cot("dx1"), ten("d1^d2")) == -ten("d2")
    x = ten("x1 d1^d2 + d3")
    assert contract_left(Cotensor.scalar(6, 1), x) == x


@settings(max_examples=40)
@given(seeds, st.integers(0, 3), st.integers(0, 4))
def test_right_contraction_adjointness(seed, q, p):
    rng = random.Random(seed)
    x, f = rt(rng, q), rf(rng, p)
    lhs_deg = p - q
    if lhs_deg < 0:
        assert contract_right(x, f).is_zero()
        return
    g = contract_right(x, f)
    for z in probes(Tensor, lhs_deg):
        assert natural_pairing(g, z) == natural_pairing(f, x ^ z)


@settings(max_examples=40)
@given(seeds, st.integers(0, 3), st.integers(0, 4))
def test_left_contraction_adjointness(seed, p, q):
    rng = random.Random(seed)
    f, x = rf(rng, p), rt(rng, q)
    if q - p < 0:
        assert contract_left(f, x).is_zero()
        return
    z = contract_left(f, x)
    for g in probes(Cotensor, q - p):
        assert natural_pairing(g, z) == natural_pairing(g ^ f, x)


@settings(max_examples=40)
@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_contraction_of_wedges(seed, a, b):
    rng = random.Random(seed)
    x, y, f = rt(rng, a), rt(rng, b), rf(rng, 3)
    assert contract_right(x ^ y, f) == contract_right(y, contract_right(x, f))


@settings(max_examples=40)
@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_left_contraction_of_wedges(seed, a, b):
    rng = random.Random(seed)
    f, g, x = rf(rng, a), rf(rng, b), rt(rng, 4)
    assert contract_left(f ^ g, x) == contract_left(f, contract_left(g, x))


# -- de Rham differential -------------------------------------------------------------


def test_de_rham_examples():
    assert de_rham(Cotensor.scalar(6, Polynomial.variable(6, 1))) == cot("dx1")
    assert de_rham(cot("dx1^dx2")).is_zero()
    assert de_rham(cot(F1)) == cot("2*x1*x3 dx1^dx5^dx6 + x1^2 dx3^dx5^dx6 - dx4^dx5^dx6")


@settings(max_examples=40)
@given(seeds, st.integers(0, 3))
def test_d_squared_is_zero(seed, p):
    rng = random.Random(seed)
    assert de_rham(de_rham(rf(rng, p, 3))).is_zero()


@settings(max_examples=40)
@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_d_is_a_graded_derivation(seed, p, q):
    rng = random.Random(seed)
    f, g = rf(rng, p), rf(rng, q)
    assert de_rham(f ^ g) == (de_rham(f) ^ g) + (f ^ de_rham(g)).scale(sign(p))


# -- Lie derivative and Schouten bracket --------------------------------------------------


def test_lie_derivative_examples():
    assert lie_derivative(ten("d1"), cot("x1 dx2")) == cot("dx2")
    assert lie_derivative(ten("x2 d1 + d3"), Cotensor.scalar(6, 1)).is_zero()


def test_schouten_examples():
    assert schouten(ten("d1"), ten("d2")).is_zero()
    assert schouten(ten("d1"), ten("x1 d2")) == ten("d2")
    # on functions: [X, a] = X(a) and [a, X] = -X(a)
    a = Tensor.scalar(6, Polynomial.parse("x1^2*x2", 6))
    assert schouten(ten("d1"), a) == Tensor.scalar(6, Polynomial.parse("2*x1*x2", 6))
    assert schouten(a, ten("d1")) == Tensor.scalar(6, Polynomial.parse("-2*x1*x2", 6))


def test_schouten_on_vector_fields_is_the_commutator():
    x1, x2 = ten(X1), ten(X2)
    assert schouten(x2, x1) == vector_bracket(x2, x1)
    assert schouten(x2, x1) == ten("-2*x1 d1 - 2*x2 d2 + 2*x3 d3 + 2*x4 d4")


@settings(max_examples=40)
@given(seeds)
def test_schouten_matches_vector_oracle(seed):
    rng = random.Random(seed)
    X, Y = rt(rng, 1), rt(rng, 1)
    assert schouten(X, Y) == vector_bracket(X, Y)


@settings(max_examples=30)
@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_schouten_graded_antisymmetry(seed, p, q):
    rng = random.Random(seed)
    x, y = rt(rng, p), rt(rng, q)
    assert schouten(x, y) == -schouten(y, x).scale(sign((p - 1) * (q - 1)))


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_schouten_graded_jacobi(seed, p, q, r):
    rng = random.Random(seed)
    x, y, z = rt(rng, p, 1), rt(rng, q, 1), rt(rng, r, 2)
    lhs = schouten(x, schouten(y, z))
    rhs = schouten(schouten(x, y), z) + schouten(y, schouten(x, z)).scale(sign((p - 1) * (q - 1)))
    assert lhs == rhs


# -- Cartan calculus rules -----------------------------------------------------------------


@settings(max_examples=30)
@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_rule_d_commutes_with_lie_derivative(seed, q, p):
    rng = random.Random(seed)
    x, f = rt(rng, q), rf(rng, p)
    assert de_rham(lie_derivative(x, f)) == lie_derivative(x, de_rham(f)).scale(sign(q - 1))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 2), st.integers(0, 2), st.integers(0, 4))
def test_rule_contraction_of_bracket(seed, a, b, p):
    rng = random.Random(seed)
    x, y, f = rt(rng, a), rt(rng, b), rf(rng, p)
    lhs = contract_right(schouten(x, y), f)
    rhs = lie_derivative(x, contract_right(y, f)).scale(sign((a - 1) * b)) - contract_right(y, lie_derivative(x, f))
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 2), st.integers(0, 2), st.integers(0, 4))
def test_rule_lie_derivative_of_bracket(seed, a, b, p):
    rng = random.Random(seed)
    x, y, f = rt(rng, a), rt(rng, b), rf(rng, p)
    lhs = lie_derivative(schouten(x, y), f)
    rhs = (lie_derivative(x, lie_derivative(y, f)).scale(sign((a - 1) * (b - 1)))
           - lie_derivative(y, lie_derivative(x, f)))
    assert lhs == rhs


def test_rule_lie_derivative_of_bracket_needs_both_fields():
    # reading the first term as L_x L_x fails already for two vector fields
    x, y, f = ten("d1", 4), ten("x1 d2", 4), cot("x2 dx3", 4)
    lhs = lie_derivative(schouten(x, y), f)
    typo = lie_derivative(x, lie_derivative(x, f)) - lie_derivative(y, lie_derivative(x, f))
    assert lhs != typo


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 2), st.integers(0, 2), st.integers(0, 4))
def test_rule_lie_derivative_of_wedge(seed, a, b, p):
    rng = random.Random(seed)
    x, y, f = rt(rng, a), rt(rng, b), rf(rng, p)
    lhs = lie_derivative(x ^ y, f)
    rhs = contract_right(y, lie_derivative(x, f)).scale(sign(b)) + lie_derivative(y, contract_right(x, f))
    assert lhs == rhs


def test_wedge_contraction_rule_counterexample():
    # symplectic R^4, f = omega, y = d1, x = d3
    f = cot("dx1^dx2 + dx3^dx4", 4)
    y, x = ten("d1", 4), ten("d3", 4)
    iyf = contract_right(y, f)
    lhs = contract_right(contract_left(iyf, x), f)
    rhs = iyf ^ contract_right(x, f)
    assert lhs.is_zero()
    assert rhs == cot("dx2^dx4", 4)


@settings(max_examples=40)
@given(seeds, st.integers(0, 2))
def test_wedge_contraction_rule_when_iyf_is_a_function(seed, q):
    # with i_y f a function, j_{i_y f} x is just a multiple of x
    rng = random.Random(seed)
    f = rf(rng, 2)
    y = rt(rng, 2)
    x = rt(rng, q)
    iyf = contract_right(y, f)
    assert contract_right(contract_left(iyf, x), f) == iyf ^ contract_right(x, f)
