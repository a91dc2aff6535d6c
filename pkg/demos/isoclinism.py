"""Isoclinism of algebras and of central extensions.

D4 and Q8 share their central quotient and derived ideal, so a witness
exists; D4 and C8 do not.  The same pair viewed as extensions over their
centres is isoclinic too, and the witness passes every structural check.
"""

from mlat import groups
from mlat.core import trivial_star_of_group
from mlat.isoclinism import find_extension_isoclinism, find_isoclinism, make_extension, verify_witness_properties

D4 = trivial_star_of_group(groups.dihedral(4)[0], name="D4")
Q8 = trivial_star_of_group(groups.quaternion()[0], name="Q8")
C8 = trivial_star_of_group(groups.cyclic(8)[0], name="C8")

w = find_isoclinism(D4, Q8)
print("D4 ~ Q8:", w is not None)
print("  lambda on central quotients:", w.lam.image.tolist())
print("  mu on derived ideals, as (source, target) pairs:", w.mu_on_parent().tolist())
print("D4 ~ C8:", find_isoclinism(D4, C8) is not None)

E1, E2 = make_extension(D4, [0, 2]), make_extension(Q8, [0, 2])
w = find_extension_isoclinism(E1, E2)
report = verify_witness_properties(w)
print("\nD4 over its centre ~ Q8 over its centre:", w is not None)
for name, ok in report.details["checks"].items():
    print(f"  {name:28s} {ok}")
