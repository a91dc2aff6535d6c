"""Tensor squares of a few small algebras.

Cyclic groups square to themselves, the Klein four-group squares to an
elementary abelian group of order 16, and the non-abelian groups of order 8
reproduce the classical non-abelian tensor squares.
"""

from mlat import groups
from mlat.core import commutator_star_of_group, trivial_star_of_group
from mlat.structure import joint_center
from mlat.tensor import pair_ideal, tensor_square


def show(G, method="auto"):
    T = tensor_square(G, method=method)
    print(f"{G.name:>8}  |G| = {G.order:2d}   |G (x) G| = {T.algebra.order:3d}   via {T.method}")
    return T


print("Cyclic groups with trivial star")
for n in range(2, 7):
    show(trivial_star_of_group(groups.cyclic(n)[0], name=f"C{n}"))

print("\nKlein four-group")
V = trivial_star_of_group(groups.klein_four()[0], name="V4")
T = show(V)
print("  exponent:", int(T.algebra.element_orders.max()))
print("  centre of the square equals the pair ideal of the centre:",
      joint_center(T.algebra).members == pair_ideal(T, joint_center(V)).members)

print("\nNon-abelian groups, trivial star and commutator star")
for label, (mul, names) in [("S3", groups.symmetric(3)), ("D4", groups.dihedral(4)), ("Q8", groups.quaternion())]:
    show(trivial_star_of_group(mul, name=label, names=names))
    show(commutator_star_of_group(mul, name=f"{label}c", names=names)[0])
