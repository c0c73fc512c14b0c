"""Acceptance criteria 1 to 10.

Each ``criterion_N`` returns ``(passed, detail)``.  Under pytest every
criterion is one test; the verdict lines are collected and printed in the
terminal summary.  Running this file directly prints the same lines.

Not-evaluable instances (an intermediate wedge product that is not Poisson
within the degree bound) count as failures.
"""

from __future__ import annotations

import random
import sys
import time
from itertools import permutations, product

import pytest

from plectic.coefficients import Polynomial, random_polynomial
from plectic.combinatorics import koszul_sign
from plectic.graded_algebra import (
    Cotensor,
    Tensor,
    contract_left,
    contract_right,
    lie_derivative,
    schouten,
    tensor_degree,
)
from plectic.homotopy import (
    bracket2,
    bracket3,
    bracket_k,
    check_jacobi,
    check_leibniz_first,
    check_leibniz_second,
    check_leibniz_third,
    check_rogers,
    leibniz1,
    leibniz_k,
)
from plectic.nplectic import (
    NPlecticStructure,
    kernel_basis,
    make_poisson,
    random_poisson,
    solve_constraint,
    verify_cocycle,
)
from plectic.pinfty import build_structure_maps, compare_with_homotopy

from conftest import F1, F2, F3, X1, X2, Y1, Y2, cot, one_form, r6_structure, random_element, rich, ten

S6 = r6_structure()


def _timed(limit):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t0
            within = dt < limit
            return ok and within, f"{detail}; {dt:.1f}s (limit {limit}s{'' if within else ', exceeded'})"
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _tally(reports):
    counts = {"pass": 0, "fail": 0, "not evaluable": 0}
    for r in reports:
        key = "not evaluable" if r.residual is None else ("pass" if r.passed else "fail")
        counts[key] += 1
    return counts


def _fmt(counts):
    return ", ".join(f"{v} {k}" for k, v in counts.items())


def _mixed(rng, count):
    """First argument of any form degree, the rest 1-forms (so that wedge products can be nonzero)."""
    return [rich(S6, rng)] + [one_form(S6, rng) for _ in range(count - 1)]


# -- criteria ------------------------------------------------------------------------------


@_timed(5)
def criterion_1():
    """Counterexample reproduction on R^6."""
    x1, x2, y1, y2 = ten(X1), ten(X2), ten(Y1), ten(Y2)
    f1, f2 = cot(F1), cot(F2)
    parts = {
        "a cocycle": verify_cocycle(S6),
        "b witnesses": all([S6.is_hamilton(x1, f1), S6.is_hamilton(x2, f2),
                            S6.is_constraint(y1, f1), S6.is_constraint(y2, f2)]),
        "c schouten": schouten(x2, x1) == ten("2*x1 d1 + 2*x2 d2 - 2*x3 d3 - 2*x4 d4"),
        "d lie derivative": lie_derivative(schouten(x2, x1), cot("dx1^dx2")) == cot("4 dx1^dx2"),
        "e f3 constraint": solve_constraint(S6, cot(F3)).status == "no_solution_within_bound",
    }
    detail = ", ".join(f"({k}) {'pass' if v else 'FAIL'}" for k, v in parts.items())
    return all(parts.values()), detail


@_timed(1)
def criterion_2():
    """Presymplectic counterexample on R^3."""
    omega = cot("dx1^dx2", 3)
    d1, dx3 = ten("d1", 3), cot("dx3", 3)
    lhs = contract_right(contract_left(dx3, d1), omega)
    rhs = dx3 ^ contract_right(d1, omega)
    ok = lhs.is_zero() and rhs == cot("dx3^dx2", 3) and not rhs.is_zero()
    return ok, f"lhs = {lhs}, rhs = {rhs}"


@_timed(60)
def criterion_3():
    """Wedge contraction rule for f = i_y omega on 200 random instances."""
    rng = random.Random(3)
    bad = nonzero = 0
    for _ in range(200):
        y = random_element(Tensor, 6, rng.randint(0, 3), rng, max_degree=2)
        x = random_element(Tensor, 6, rng.randint(0, 3), rng, max_degree=2)
        f = S6.contract(y)
        iyf = contract_right(y, f)
        lhs = contract_right(contract_left(iyf, x), f)
        rhs = iyf ^ contract_right(x, f)
        nonzero += bool(lhs or rhs)
        bad += lhs != rhs
    return bad == 0, f"{200 - bad} of 200 hold, {bad} fail ({nonzero} with a nonzero side)"


def _bubble(sigma, degrees):
    word, s = list(sigma), 1
    for end in range(len(word) - 1, 0, -1):
        for i in range(end):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                if degrees[word[i] - 1] % 2 and degrees[word[i + 1] - 1] % 2:
                    s = -s
    return s


@_timed(30)
def criterion_4():
    """Koszul sign against adjacent transpositions on S_5 x {0,1,2}^5."""
    cases = bad = 0
    for sigma in permutations(range(1, 6)):
        for degrees in product(range(3), repeat=5):
            cases += 1
            bad += koszul_sign(sigma, degrees) != _bubble(sigma, degrees)
    return bad == 0 and cases == 29160, f"{cases - bad} of {cases} agree"


@_timed(600)
def criterion_5():
    """Jacobi identities k = 2, 3 on 50 triples and k = 4 on 10 quadruples."""
    rng = random.Random(5)
    two, three, four = [], [], []
    for _ in range(50):
        ps = [random_poisson(S6, rng) for _ in range(3)]
        two.append(check_jacobi(2, ps[:2]))
        three.append(check_jacobi(3, ps))
    for _ in range(10):
        four.append(check_jacobi(4, _mixed(rng, 4)))
    tallies = [_tally(r) for r in (two, three, four)]
    ok = all(t["pass"] == n for t, n in zip(tallies, (50, 50, 10)))
    return ok, "; ".join(f"k={k}: {_fmt(t)}" for k, t in zip((2, 3, 4), tallies))


@_timed(600)
def criterion_6():
    """First Leibniz equation on 50 triples, second and third on 20 quadruples."""
    rng = random.Random(6)
    first = [check_leibniz_first(1, ps[:1], ps[1:]) for ps in (_mixed(rng, 3) for _ in range(50))]
    quads = [_mixed(rng, 4) for _ in range(20)]
    second = [check_leibniz_second(0, ps) for ps in quads]
    third = [check_leibniz_third(1, ps) for ps in quads]
    tallies = [_tally(r) for r in (first, second, third)]
    ok = all(t["pass"] == n for t, n in zip(tallies, (50, 20, 20)))
    names = ("first", "second", "third")
    return ok, "; ".join(f"{n}: {_fmt(t)}" for n, t in zip(names, tallies))


@_timed(120)
def criterion_7():
    """Rogers relation on 50 random pairs."""
    rng = random.Random(7)
    reports = [check_rogers(random_poisson(S6, rng), random_poisson(S6, rng)) for _ in range(50)]
    t = _tally(reports)
    return t["pass"] == 50, _fmt(t)


def _classical(a: Polynomial, b: Polynomial) -> Polynomial:
    return a.partial(1) * b.partial(2) - a.partial(2) * b.partial(1)


def _function(S, rng):
    while True:
        p = random_polynomial(2, rng, max_degree=3, terms=3)
        if p:
            return make_poisson(S, Cotensor.scalar(2, p))


@_timed(60)
def criterion_8():
    """Symplectic plane: doubled classical bracket, vanishing higher operators."""
    S = NPlecticStructure(2, 1, cot("dx1^dx2", 2), 4)
    rng = random.Random(8)
    doubled = vanish = 0
    for _ in range(20):
        a, b, c, e = (_function(S, rng) for _ in range(4))
        expected = Cotensor.scalar(2, _classical(a.f.terms[()], b.f.terms[()]).scale(2))
        doubled += bracket2(a, b).value == expected
        higher = [bracket3(a, b, c), bracket_k([a, b, c, e]), leibniz1(a, b, c), leibniz_k([a, b], [c, e])]
        vanish += all(r.value.is_zero() for r in higher)
    return doubled == 20 and vanish == 20, f"doubling {doubled}/20, higher operators vanish {vanish}/20"


def _perturb(p, rng):
    """Add two random multiples of kernel basis elements to each witness."""
    def extra(q):
        basis = kernel_basis(S6, q)
        out = Tensor.zero(6)
        for b in rng.sample(basis, min(2, len(basis))):
            out = out + b.scale(rng.choice((-3, -2, -1, 1, 2, 3)))
        return out
    xq = tensor_degree(p.f) + S6.n
    return p.perturbed(dx=extra(xq), dy=extra(xq + 1))


@_timed(120)
def criterion_9():
    """Kernel perturbations of the witnesses leave every bracket unchanged."""
    rng = random.Random(9)
    same = compared = 0
    for _ in range(20):
        ps = _mixed(rng, 3)
        qs = [_perturb(p, rng) for p in ps]
        pairs = [(bracket2(*ps[:2]), bracket2(*qs[:2])), (bracket3(*ps), bracket3(*qs))]
        try:
            pairs.append((leibniz1(*ps), leibniz1(*qs)))
        except (ArithmeticError, ValueError):
            pass
        compared += len(pairs)
        same += sum(a.value == b.value for a, b in pairs)
    return same == compared, f"{same} of {compared} bracket values unchanged over 20 instances"


PROFILES = [(1,), (2,), (3,), (1, 1), (1, 2), (1, 3), (2, 2)]


@_timed(300)
def criterion_10():
    """Structure equation against the homotopy checkers."""
    rng = random.Random(10)
    maps = build_structure_maps(S6)
    named = [make_poisson(S6, cot(F1)), make_poisson(S6, cot(F2))]
    parts, ok = [], True
    for profile in PROFILES:
        counts = {"pass": 0, "fail": 0, "not evaluable": 0, "mismatch": 0}
        instances = [named[:1] * sum(profile), (named * 3)[:sum(profile)]]
        instances += [_mixed(rng, sum(profile)) for _ in range(8)]
        for flat in instances:
            blocks, start = [], 0
            for q in profile:
                blocks.append(flat[start:start + q])
                start += q
            e = compare_with_homotopy(maps, profile, blocks)
            s = e.structure
            counts["not evaluable" if s.residual is None else ("pass" if s.passed else "fail")] += 1
            counts["mismatch"] += not e.matched
        ok = ok and counts["pass"] == len(instances) and counts["mismatch"] == 0
        parts.append(f"{','.join(map(str, profile))}: {_fmt(counts)}")
    return ok, "; ".join(parts)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def verdict_line(index, fn):
    ok, detail = fn()
    return ok, f"criterion {index}: {'PASS' if ok else 'FAIL'} - {fn.__doc__.strip()} {detail}"


@pytest.mark.parametrize("index", range(1, 11))
def test_criterion(index, acceptance_lines):
    ok, line = verdict_line(index, CRITERIA[index - 1])
    print(line)
    acceptance_lines.append(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for i, fn in enumerate(CRITERIA, start=1):
        ok, line = verdict_line(i, fn)
        print(line, flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
