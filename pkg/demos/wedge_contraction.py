"""Two places where contraction does not distribute over wedge products.

Run with ``python demos/wedge_contraction.py``.
"""

from plectic import parse_cotensor, parse_tensor
from plectic.graded_algebra import contract_left, contract_right

print("degenerate 2-form dx1^dx2 on R^3")
omega = parse_cotensor("dx1^dx2", 3)
d1, dx3 = parse_tensor("d1", 3), parse_cotensor("dx3", 3)
print("  i_{j_dx3 d1} omega =", contract_right(contract_left(dx3, d1), omega))
print("  dx3 ^ i_d1 omega   =", dx3 ^ contract_right(d1, omega))

print("\nsymplectic R^4 with f = dx1^dx2 + dx3^dx4")
f = parse_cotensor("dx1^dx2 + dx3^dx4", 4)
for ytext, xtext in (("d1", "d3"), ("d1", "d2")):
    y, x = parse_tensor(ytext, 4), parse_tensor(xtext, 4)
    iyf = contract_right(y, f)
    lhs = contract_right(contract_left(iyf, x), f)
    rhs = iyf ^ contract_right(x, f)
    print(f"  y = {ytext}, x = {xtext}:  i_(j_(i_y f) x) f = {lhs}   i_y f ^ i_x f = {rhs}")

print("\nwhen i_y f is a function the two sides agree")
g = parse_cotensor("x1 dx1^dx2", 4)
y, x = parse_tensor("d1^d2", 4), parse_tensor("x3 d1", 4)
iyf = contract_right(y, g)
print("  i_y f =", iyf)
print("  lhs =", contract_right(contract_left(iyf, x), g), "  rhs =", iyf ^ contract_right(x, g))
