"""On the symplectic plane the binary bracket is twice the classical Poisson bracket.

Run with ``python demos/symplectic_plane.py``.
"""

import random

from plectic import Cotensor, make_poisson
from plectic.cli import fixture_path, parse_structure
from plectic.coefficients import random_polynomial
from plectic.homotopy import bracket2, bracket3, leibniz1

S = parse_structure(fixture_path("symplectic_r2")).structure()
rng = random.Random(1)


def function(p):
    return make_poisson(S, Cotensor.scalar(2, p))


def nonconstant():
    while True:
        p = random_polynomial(2, rng, max_degree=2, terms=3)
        if p.degree() > 0:
            return p


print(f"{'f':<24}{'g':<24}{'{f,g}':<28}classical")
for _ in range(5):
    f, g = nonconstant(), nonconstant()
    classical = f.partial(1) * g.partial(2) - f.partial(2) * g.partial(1)
    value = bracket2(function(f), function(g)).value
    print(f"{str(f):<24}{str(g):<24}{str(value):<28}{classical}")

h, p, q = (function(nonconstant()) for _ in range(3))
print("\nhigher operators on functions")
print("  ternary bracket:", bracket3(h, p, q).value)
print("  first Leibniz operator:", leibniz1(h, p, q).value)
