"""Subalgebras, ideals, centres, derived ideals and quotients."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable
from weakref import WeakKeyDictionary

import numpy as np

from .core import FiniteMla, MlaError, OrderBoundError
from .morph import MlaMap

IDEAL_BOUND = 64


class NotAnIdealError(MlaError):
    pass


@dataclass(frozen=True, eq=False)
class SubSet:
    """A set of element ids of ``parent``; closure flags are computed on demand."""

    parent: FiniteMla
    members: tuple[int, ...]

    @classmethod
    def of(cls, parent: FiniteMla, members: Iterable[int]) -> "SubSet":
        return cls(parent, tuple(sorted({int(m) for m in members})))

    @classmethod
    def from_mask(cls, parent: FiniteMla, mask: np.ndarray) -> "SubSet":
        return cls(parent, tuple(int(i) for i in np.flatnonzero(mask)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubSet):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"SubSet({list(self.members)})"

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def index(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.intp)

    def issubset(self, other: "SubSet") -> bool:
        return bool(np.all(other.mask[self.index])) if self.members else True

    def intersection(self, other: "SubSet") -> "SubSet":
        return SubSet.from_mask(self.parent, self.mask & other.mask)

    def is_trivial(self) -> bool:
        return self.members == (0,)

    @cached_property
    def is_subgroup(self) -> bool:
        G, s = self.parent, self.index
        if not self.members or self.members[0] != 0:
            return False
        return bool(self.mask[G.mul[np.ix_(s, s)]].all() and self.mask[G.inv[s]].all())

    @cached_property
    def is_subalgebra(self) -> bool:
        s = self.index
        return self.is_subgroup and bool(self.mask[self.parent.star[np.ix_(s, s)]].all())

    @cached_property
    def is_ideal(self) -> bool:
        G, s = self.parent, self.index
        return (
            self.is_subalgebra
            and bool(self.mask[G.conj[:, s]].all())
            and bool(self.mask[G.star[:, s]].all())
        )

    def absorption_sides(self) -> tuple[bool, bool]:
        """Whether ``g⋆h`` and ``h⋆g`` land in the set for all g in G, h in the set."""
        G, s = self.parent, self.index
        return bool(self.mask[G.star[:, s]].all()), bool(self.mask[G.star[s, :]].all())


def _close(G: FiniteMla, mask: np.ndarray, *, star: bool, ideal: bool) -> np.ndarray:
    mask = mask.copy()
    mask[0] = True
    while True:
        s = np.flatnonzero(mask)
        new = mask.copy()
        new[G.mul[np.ix_(s, s)]] = True
        new[G.inv[s]] = True
        if star:
            new[G.star[np.ix_(s, s)]] = True
        if ideal:
            new[G.conj[:, s]] = True
            new[G.star[:, s]] = True
            new[G.star[s, :]] = True
        if np.array_equal(new, mask):
            return mask
        mask = new


def _seed_mask(G: FiniteMla, seed) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    seed = np.asarray(list(seed) if not isinstance(seed, np.ndarray) else seed, dtype=np.intp).ravel()
    mask[seed] = True
    return mask


def closure_subgroup(G: FiniteMla, seed) -> SubSet:
    return SubSet.from_mask(G, _close(G, _seed_mask(G, seed), star=False, ideal=False))


def closure_subalgebra(G: FiniteMla, seed) -> SubSet:
    """Least subalgebra containing ``seed``."""
    return SubSet.from_mask(G, _close(G, _seed_mask(G, seed), star=True, ideal=False))


def closure_ideal(G: FiniteMla, seed) -> SubSet:
    """Least ideal containing ``seed``: normal closure plus star absorption, to a fixpoint."""
    return SubSet.from_mask(G, _close(G, _seed_mask(G, seed), star=True, ideal=True))


# --------------------------------------------------------------------------
# centres and derived ideals


def group_center(G: FiniteMla) -> SubSet:
    return SubSet.from_mask(G, ~G.comm.any(axis=1))


def lie_center(G: FiniteMla) -> SubSet:
    return SubSet.from_mask(G, ~G.star.any(axis=1))


def joint_center(G: FiniteMla) -> SubSet:
    return SubSet.from_mask(G, ~G.comm.any(axis=1) & ~G.star.any(axis=1))


def star_derived(G: FiniteMla) -> SubSet:
    return closure_ideal(G, np.unique(G.star))


def commutator_derived(G: FiniteMla) -> SubSet:
    return closure_ideal(G, np.unique(G.comm))


def m_derived(G: FiniteMla) -> SubSet:
    """The ideal generated by all stars and all commutators."""
    return closure_ideal(G, np.union1d(np.unique(G.star), np.unique(G.comm)))


# --------------------------------------------------------------------------
# quotients


def coset_labels(G: FiniteMla, I: SubSet) -> np.ndarray:
    """Coset index of every element; cosets are numbered by their least member."""
    n = G.order
    labels = np.full(n, -1, dtype=np.intp)
    next_id = 0
    for g in range(n):
        if labels[g] < 0:
            labels[G.mul[g, I.index]] = next_id
            next_id += 1
    return labels


def quotient(G: FiniteMla, I: SubSet, name: str = "") -> tuple[FiniteMla, MlaMap]:
    """``G/I`` with canonical coset numbering, and the projection onto it."""
    if not I.is_ideal:
        raise NotAnIdealError(f"{list(I.members)} is not an ideal of {G.name or 'G'}")
    labels = coset_labels(G, I)
    m = int(labels.max()) + 1
    reps = np.zeros(m, dtype=np.intp)
    seen = np.zeros(m, dtype=bool)
    for g in range(G.order):
        if not seen[labels[g]]:
            reps[labels[g]] = g
            seen[labels[g]] = True
    mul = labels[G.mul[np.ix_(reps, reps)]]
    star = labels[G.star[np.ix_(reps, reps)]]
    names = None
    if G.names:
        names = [G.names[r] if len(I) == 1 else f"{G.names[r]}I" for r in reps]
    Q = FiniteMla(mul, star, name=name or f"{G.name}/I", names=names)
    return Q, MlaMap(G, Q, labels)


def image_subset(f: MlaMap, S: SubSet) -> SubSet:
    return SubSet.of(f.target, f.image[S.index])


def preimage_subset(f: MlaMap, S: SubSet) -> SubSet:
    return SubSet.from_mask(f.source, S.mask[f.image])


# --------------------------------------------------------------------------
# ideal lattice


def product_ideal(A: SubSet, B: SubSet) -> SubSet:
    """``AB`` for two ideals, itself an ideal."""
    G = A.parent
    return SubSet.of(G, np.unique(G.mul[np.ix_(A.index, B.index)]))


def enumerate_ideals(G: FiniteMla, bound: int = IDEAL_BOUND) -> list[SubSet]:
    """Every ideal of ``G``, sorted by (size, members).

    Every ideal is the join of the principal ideals of its elements, so
    repeatedly joining found ideals with principal ideals reaches them all.
    """
    if G.order > bound:
        raise OrderBoundError(f"order {G.order} exceeds the ideal-enumeration bound {bound}")
    cached = _IDEAL_CACHE.get(G)
    if cached is None:
        cached = _IDEAL_CACHE[G] = _ideal_lattice(G)
    return list(cached)


_IDEAL_CACHE: "WeakKeyDictionary[FiniteMla, tuple[SubSet, ...]]" = WeakKeyDictionary()


def _ideal_lattice(G: FiniteMla) -> tuple[SubSet, ...]:
    principal = {}
    for x in range(G.order):
        P = closure_ideal(G, [x])
        principal.setdefault(P.members, P)
    found = {(0,): SubSet(G, (0,))}
    frontier = [found[(0,)]]
    while frontier:
        nxt = []
        for I in frontier:
            for P in principal.values():
                if P.issubset(I):
                    continue
                J = product_ideal(I, P)
                if J.members not in found:
                    found[J.members] = J
                    nxt.append(J)
        frontier = nxt
    return tuple(sorted(found.values(), key=lambda S: (len(S), S.members)))


def ideals_by_subset_sweep(G: FiniteMla) -> list[SubSet]:
    """Every ideal by testing all subsets containing 0.  Only for small orders."""
    n = G.order
    if n > 16:
        raise OrderBoundError("subset sweep is limited to order 16")
    out = []
    for bits in range(1 << (n - 1)):
        members = [0] + [i + 1 for i in range(n - 1) if bits >> i & 1]
        S = SubSet(G, tuple(members))
        if S.is_ideal:
            out.append(S)
    return sorted(out, key=lambda S: (len(S), S.members))


# --------------------------------------------------------------------------
# quotient-centre checks


@dataclass(frozen=True)
class ClauseResult:
    name: str
    applicable: bool
    holds: bool | None  # None when not applicable

    @property
    def status(self) -> str:
        if not self.applicable:
            return "not-applicable"
        return "pass" if self.holds else "fail"

    def as_dict(self) -> dict:
        return {"clause": self.name, "status": self.status}


_CENTER_CLAUSES = (
    ("group-center", group_center, commutator_derived),
    ("lie-center", lie_center, star_derived),
    ("joint-center", joint_center, m_derived),
)


def check_quotient_center_lemma(G: FiniteMla, I: SubSet) -> list[ClauseResult]:
    """When ``I`` meets the matching derived ideal trivially, the centre of
    ``G/I`` is the image of the centre of ``G``.  One result per centre kind.
    """
    Q, proj = quotient(G, I)
    out = []
    for name, center, derived in _CENTER_CLAUSES:
        if not I.intersection(derived(G)).is_trivial():
            out.append(ClauseResult(name, False, None))
            continue
        lhs = center(Q)
        rhs = image_subset(proj, center(G))
        out.append(ClauseResult(name, True, lhs.members == rhs.members))
    return out
