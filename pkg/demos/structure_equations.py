"""Structure equations of the homotopy Poisson algebra next to the homotopy identities.

Run with ``python demos/structure_equations.py``.  Each line compares the
structure-equation residual of one block profile with the homotopy identity
it encodes.
"""

import random

from plectic import make_poisson, parse_cotensor
from plectic.cli import fixture_path, parse_structure
from plectic.homotopy import check_leibniz_second
from plectic.nplectic import random_poisson
from plectic.pinfty import build_structure_maps, compare_with_homotopy

S = parse_structure(fixture_path("r6_3plectic")).structure()
maps = build_structure_maps(S)
rng = random.Random(4)


def draw(count):
    # one cotensor of any degree, then 1-forms so that wedge products survive
    first = random_poisson(S, rng, degrees=range(1, S.n + 1))
    return [first] + [random_poisson(S, rng, degrees=(S.n,), max_degree=1) for _ in range(count - 1)]


for profile in [(1,), (2,), (3,), (1, 1), (1, 2), (1, 3), (2, 2)]:
    flat = draw(sum(profile))
    blocks, start = [], 0
    for q in profile:
        blocks.append(flat[start:start + q])
        start += q
    print(compare_with_homotopy(maps, profile, blocks))

print("\na quadruple where the second Leibniz equation leaves a residual")
texts = ["-7 dx5", "(-4*x5-2) dx1^dx3 + (-4*x5-2) dx2^dx4 + (-2*x3+x4) dx5^dx6", "(3*x1+3*x5-2) dx5", "-2 dx6"]
ps = [make_poisson(S, parse_cotensor(t, 6)) for t in texts]
report = check_leibniz_second(0, ps)
print(" ", report, "->", report.residual)
print(" ", compare_with_homotopy(maps, (2, 2), [ps[:2], ps[2:]]))
