"""Reducing a central extension to an isoclinic stem extension.

D4 x C2 over its centre is not stem: the C2 factor sits in the kernel but
misses the derived ideal.  Cutting it away leaves D4 over its centre.
"""

from mlat import groups
from mlat.core import trivial_star_of_group
from mlat.isoclinism import is_stem, make_extension, stem_criterion, stem_reduce, verify_witness_properties
from mlat.morph import are_isomorphic
from mlat.structure import joint_center

mul, names = groups.group_product(groups.dihedral(4), groups.cyclic(2))
G = trivial_star_of_group(mul, name="D4xC2", names=names)
Z = joint_center(G)
E = make_extension(G, Z)
print(f"{G.name} over its centre {list(Z.members)}: stem = {is_stem(E)}")
ok, J0 = stem_criterion(E)
print("  criterion finds the obstruction", list(J0.members))

red = stem_reduce(E)
EJ = red.extension
print(f"cut away J = {list(red.ideal.members)}; reduced order {EJ.total.order}, kernel {list(EJ.kernel.members)}")
print("  reduced extension is stem:", is_stem(EJ))
print("  witness verified:", verify_witness_properties(red.witness).passed)
D4 = trivial_star_of_group(groups.dihedral(4)[0])
print("  reduced algebra is D4:", are_isomorphic(EJ.total, D4) is not None)
