"""Walk through the 3-plectic structure on R^6.

Run with ``python demos/r6_counterexample.py``.
"""

from plectic import make_poisson, parse_cotensor, parse_tensor, solve_constraint, solve_hamilton, verify_cocycle
from plectic.cli import fixture_path, parse_structure
from plectic.graded_algebra import lie_derivative, schouten
from plectic.homotopy import bracket2, product_poisson
from plectic.nplectic import NotPoissonWithinBound


def show(label, value):
    print(f"  {label:<34} {value}")


sf = parse_structure(fixture_path("r6_3plectic"))
S = sf.structure()
print("structure")
show("omega", S.omega)
show("closed (d omega = 0)", verify_cocycle(S))

print("\nwitnesses found by the bounded solver")
for name in ("f1", "f2"):
    f = sf.cotensor(name)
    show(f"{name}", f)
    show(f"  hamilton x  (i_x omega = d{name})", solve_hamilton(S, f).solution)
    show(f"  constraint y (i_y omega = {name})", solve_constraint(S, f).solution)

# A hand-written constraint witness with the opposite orientation
y1 = parse_tensor("(x1^2*x3 - x4) d3^d1", 6)
show("i_y omega for y = (x1^2*x3 - x4) d3^d1", S.contract(y1))

x1 = solve_hamilton(S, sf.cotensor("f1")).solution
x2 = solve_hamilton(S, sf.cotensor("f2")).solution
bracket = schouten(x2, x1)
print("\nSchouten bracket of the two Hamilton fields")
show("[x2, x1]", bracket)
show("L_[x2,x1] (dx1^dx2)", lie_derivative(bracket, parse_cotensor("dx1^dx2", 6)))

p1, p2 = (make_poisson(S, sf.cotensor(n)) for n in ("f1", "f2"))
r = bracket2(p1, p2)
print("\nbinary bracket of f1 and f2")
show("{f1, f2}", r.value)
show("hamilton witness", r.hamilton)

print("\ndx1 and dx2 are Poisson, their wedge product is not")
f3 = sf.cotensor("f3")
show("hamilton equation for dx1^dx2", solve_hamilton(S, f3).status)
show("constraint equation for dx1^dx2", solve_constraint(S, f3).status)
try:
    product_poisson(make_poisson(S, parse_cotensor("dx1", 6)), make_poisson(S, parse_cotensor("dx2", 6)))
except NotPoissonWithinBound as exc:
    show("product_poisson(dx1, dx2)", exc)
