"""
Order-2 symbols and the region they live in
===========================================
"""
from fractions import Fraction as F

from hybrid_csit import counting_dof, get_scheme, region_check, bound_check

d = counting_dof(get_scheme("order2_delivery"))
print("delivery tuple:", d)

# the tuple sits on a corner: all three inequalities are tight
r = region_check(d.values)
print("inside:", r.inside, "tight:", r.tight, "lhs:", [str(x) for x in r.lhs])

# a little more of anything falls outside
for bump in ((F(1, 8), 0, 0), (0, F(1, 8), 0), (0, 0, F(1, 8))):
    p = tuple(x + b for x, b in zip(d.values, bump))
    print(tuple(str(x) for x in p), "->", "inside" if region_check(p).inside else "outside")

# achieved sums against the known ceilings
for name, cfg in (("pdd23", "PDD(2,3)"), ("pdd33", "PDD(3,3)"), ("ppd33", "PPD(3,3)")):
    s = counting_dof(get_scheme(name)).sum
    b = bound_check(cfg, s)
    print(f"{name}: {s} <= {b.bound}  {b.ok}")
