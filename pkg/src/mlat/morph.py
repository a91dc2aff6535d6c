"""Homomorphism checks and isomorphism search between finite algebras."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .core import FiniteMla, MlaError


class MapSizeError(MlaError):
    pass


@dataclass(frozen=True, eq=False)
class MlaMap:
    """A total function ``source -> target`` given by its image array."""

    source: FiniteMla
    target: FiniteMla
    image: np.ndarray

    def __post_init__(self):
        image = np.asarray(self.image, dtype=np.intp).copy()
        if image.shape != (self.source.order,):
            raise MapSizeError(f"image has length {image.size}, source order is {self.source.order}")
        if image.size and (image.min() < 0 or image.max() >= self.target.order):
            raise MapSizeError("image contains ids outside the target")
        image.setflags(write=False)
        object.__setattr__(self, "image", image)

    def __call__(self, x):
        return self.image[x]

    def __repr__(self) -> str:
        return f"MlaMap({self.source.name}->{self.target.name}, {self.image.tolist()})"

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(np.unique(self.image)) == self.source.order

    def then(self, other: "MlaMap") -> "MlaMap":
        """Composite ``other ∘ self``."""
        return MlaMap(self.source, other.target, other.image[self.image])

    def inverse(self) -> "MlaMap":
        if not self.is_bijective():
            raise MlaError("map is not bijective")
        inv = np.empty_like(self.image)
        inv[self.image] = np.arange(self.source.order)
        return MlaMap(self.target, self.source, inv)

    def as_dict(self) -> dict:
        return {"source": self.source.name, "target": self.target.name, "image": self.image.tolist()}


def identity_map(G: FiniteMla) -> MlaMap:
    return MlaMap(G, G, np.arange(G.order))


def is_homomorphism(f: MlaMap) -> tuple[bool, Optional[tuple[str, int, int]]]:
    """Check both operations over all pairs.

    Returns ``(True, None)`` or ``(False, (op, x, y))`` with the least failing pair,
    ``op`` being ``"mul"`` or ``"star"``.
    """
    G, H, img = f.source, f.target, f.image
    for op, s_table, t_table in (("mul", G.mul, H.mul), ("star", G.star, H.star)):
        bad = np.argwhere(img[s_table] != t_table[np.ix_(img, img)])
        if len(bad):
            x, y = bad[0]
            return False, (op, int(x), int(y))
    return True, None


# --------------------------------------------------------------------------
# invariants


def element_invariants(G: FiniteMla) -> np.ndarray:
    """Per element: group order, size of its star-annihilator, conjugacy class size."""
    ann = (G.star == 0).sum(axis=1)
    cls = np.array([len(np.unique(G.conj[:, x])) for x in range(G.order)])
    return np.stack([G.element_orders, ann, cls], axis=1)


def fingerprint(G: FiniteMla) -> tuple:
    """Isomorphism invariant: order, sorted element invariants, global subset sizes."""
    from .structure import commutator_derived, group_center, lie_center, star_derived

    per = sorted(tuple(int(v) for v in row) for row in element_invariants(G))
    glob = (len(group_center(G)), len(lie_center(G)), len(star_derived(G)), len(commutator_derived(G)))
    return (G.order, tuple(per), glob)


def generating_sequence(G: FiniteMla) -> list[int]:
    """Least-id elements not yet generated, until the whole group is covered."""
    from .structure import closure_subgroup

    gens: list[int] = []
    covered = np.zeros(G.order, dtype=bool)
    covered[0] = True
    while not covered.all():
        g = int(np.flatnonzero(~covered)[0])
        gens.append(g)
        covered = closure_subgroup(G, np.flatnonzero(covered).tolist() + [g]).mask.copy()
    return gens


# --------------------------------------------------------------------------
# isomorphism search


def _extend(G1, G2, phi, used, gens, imgs) -> bool:
    """Grow ``phi`` over the subgroup generated by ``gens`` (in place); False on conflict."""
    stack = list(np.flatnonzero(phi >= 0))
    while stack:
        a = stack.pop()
        pa = phi[a]
        for g, h in zip(gens, imgs):
            b = G1.mul[a, g]
            v = G2.mul[pa, h]
            if phi[b] < 0:
                if used[v]:
                    return False
                phi[b] = v
                used[v] = True
                stack.append(b)
            elif phi[b] != v:
                return False
    dom = np.flatnonzero(phi >= 0)
    sub = G1.star[np.ix_(dom, dom)]
    inside = phi[sub] >= 0
    lhs = phi[sub][inside]
    rhs = G2.star[np.ix_(phi[dom], phi[dom])][inside]
    return bool(np.array_equal(lhs, rhs))


def iter_isomorphisms(G1: FiniteMla, G2: FiniteMla) -> Iterator[MlaMap]:
    """Yield every isomorphism ``G1 -> G2`` in lexicographic order of image arrays.

    Backtracks over the images of a generating sequence, pruning candidates
    whose element invariants differ.  The search is exhaustive.
    """
    if G1.order != G2.order:
        return
    inv1, inv2 = element_invariants(G1), element_invariants(G2)
    if sorted(map(tuple, inv1.tolist())) != sorted(map(tuple, inv2.tolist())):
        return
    gens = generating_sequence(G1)
    keys2 = [tuple(r) for r in inv2.tolist()]
    n = G1.order

    def search(depth, phi, used):
        if depth == len(gens):
            yield MlaMap(G1, G2, phi.copy())
            return
        want = tuple(inv1[gens[depth]].tolist())
        for c in range(n):
            if keys2[c] != want or used[c]:
                continue
            phi2, used2 = phi.copy(), used.copy()
            phi2[gens[depth]] = c
            used2[c] = True
            if _extend(G1, G2, phi2, used2, gens[: depth + 1], phi2[gens[: depth + 1]]):
                yield from search(depth + 1, phi2, used2)

    phi = np.full(n, -1, dtype=np.intp)
    used = np.zeros(n, dtype=bool)
    phi[0] = 0
    used[0] = True
    yield from search(0, phi, used)


def find_isomorphisms(G1: FiniteMla, G2: FiniteMla, limit: Optional[int] = None) -> list[MlaMap]:
    """Isomorphisms in lexicographic image order, at most ``limit`` of them (None = all)."""
    out = []
    for f in iter_isomorphisms(G1, G2):
        out.append(f)
        if limit is not None and len(out) >= limit:
            break
    return out


def are_isomorphic(G1: FiniteMla, G2: FiniteMla) -> Optional[MlaMap]:
    found = find_isomorphisms(G1, G2, limit=1)
    return found[0] if found else None


def hom_from_generators(G1: FiniteMla, G2: FiniteMla, pairs) -> Optional[MlaMap]:
    """The homomorphism sending each ``a`` to ``b`` over ``(a, b)`` in ``pairs``.

    Returns None when the assignment is inconsistent, does not generate ``G1``,
    or the resulting group homomorphism does not respect ``star``.
    """
    n = G1.order
    phi = np.full(n, -1, dtype=np.intp)
    phi[0] = 0
    gens = []
    for a, b in pairs:
        a, b = int(a), int(b)
        if phi[a] >= 0 and phi[a] != b:
            return None
        if phi[a] < 0:
            phi[a] = b
            gens.append(a)
    stack = list(np.flatnonzero(phi >= 0))
    while stack:
        x = stack.pop()
        for a in gens:
            y = G1.mul[x, a]
            v = G2.mul[phi[x], phi[a]]
            if phi[y] < 0:
                phi[y] = v
                stack.append(y)
            elif phi[y] != v:
                return None
    if (phi < 0).any():
        return None
    f = MlaMap(G1, G2, phi)
    ok, _ = is_homomorphism(f)
    return f if ok else None


def iter_homomorphisms(G1: FiniteMla, G2: FiniteMla) -> Iterator[MlaMap]:
    """Every homomorphism ``G1 -> G2``, in lexicographic order of generator images.

    Brute force over images of the generating sequence; meant for small orders.
    """
    gens = generating_sequence(G1)
    orders1, orders2 = G1.element_orders, G2.element_orders
    choices = [[c for c in range(G2.order) if orders1[g] % orders2[c] == 0] for g in gens]

    def search(depth, picked):
        if depth == len(gens):
            f = hom_from_generators(G1, G2, zip(gens, picked))
            if f is not None:
                yield f
            return
        for c in choices[depth]:
            yield from search(depth + 1, picked + [c])

    yield from search(0, [])
