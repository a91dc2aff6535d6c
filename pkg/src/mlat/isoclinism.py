"""Central extensions, isoclinism of algebras and extensions, stem reduction, pullbacks."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from .core import FiniteMla, MlaError, direct_product
from .morph import MlaMap, hom_from_generators, identity_map, is_homomorphism, iter_isomorphisms
from .structure import (
    NotAnIdealError,
    SubSet,
    enumerate_ideals,
    image_subset,
    joint_center,
    m_derived,
    quotient,
)
from .tensor import CheckReport


class NotCentralError(MlaError):
    pass


class NotSubalgebraError(MlaError):
    pass


class NotAMorphismError(MlaError):
    pass


class IllDefinedError(MlaError):
    """The commutator or star of lifts depends on the choice of lift."""


def restrict_to_subalgebra(G: FiniteMla, S: SubSet, name: str = "") -> tuple[FiniteMla, MlaMap]:
    """``S`` as a standalone algebra (members renumbered in ascending order) and its embedding."""
    if not S.is_subalgebra:
        raise NotSubalgebraError(f"{list(S.members)} is not a subalgebra of {G.name or 'G'}")
    pos = np.full(G.order, -1, dtype=np.intp)
    pos[S.index] = np.arange(len(S))
    ix = np.ix_(S.index, S.index)
    names = [G.names[m] for m in S.members] if G.names else None
    A = FiniteMla(pos[G.mul[ix]], pos[G.star[ix]], name=name or f"{G.name}|S", names=names)
    return A, MlaMap(A, G, S.index)


@dataclass(frozen=True, eq=False)
class CentralExtension:
    """``1 -> H -> G -> K -> 1`` with ``H`` inside the joint centre of ``G``.

    ``proj`` need not be the canonical quotient map, but it must be a surjective
    homomorphism with kernel exactly ``kernel``.  Checked on construction.
    """

    total: FiniteMla
    kernel: SubSet
    quotient: FiniteMla
    proj: MlaMap

    def __post_init__(self):
        G, H = self.total, self.kernel
        if H.parent is not G:
            raise MlaError("kernel is not a subset of the total algebra")
        if not H.is_ideal:
            raise NotAnIdealError(f"{list(H.members)} is not an ideal")
        if not H.issubset(joint_center(G)):
            raise NotCentralError(f"{list(H.members)} is not inside the joint centre")
        f = self.proj
        if f.source is not G or f.target is not self.quotient:
            raise MlaError("projection has the wrong source or target")
        if not is_homomorphism(f)[0]:
            raise MlaError("projection is not a homomorphism")
        if len(np.unique(f.image)) != self.quotient.order:
            raise MlaError("projection is not surjective")
        if tuple(np.flatnonzero(f.image == 0).tolist()) != H.members:
            raise MlaError("projection kernel differs from the given kernel")

    @property
    def name(self) -> str:
        return f"{self.total.name}/{list(self.kernel.members)}"

    @cached_property
    def derived(self) -> SubSet:
        return m_derived(self.total)

    @cached_property
    def derived_algebra(self) -> tuple[FiniteMla, MlaMap]:
        return restrict_to_subalgebra(self.total, self.derived, name=f"M[{self.total.name}]")

    @cached_property
    def derived_pos(self) -> np.ndarray:
        """Id inside the derived algebra of each element of ``total``, -1 outside it."""
        pos = np.full(self.total.order, -1, dtype=np.intp)
        pos[self.derived.index] = np.arange(len(self.derived))
        return pos

    @cached_property
    def lifts(self) -> np.ndarray:
        """Least preimage of each quotient element."""
        out = np.full(self.quotient.order, -1, dtype=np.intp)
        for g in range(self.total.order - 1, -1, -1):
            out[self.proj.image[g]] = g
        return out

    @cached_property
    def deltas(self) -> tuple[np.ndarray, np.ndarray]:
        """Tables ``k1, k2 -> [g1, g2]`` and ``k1, k2 -> g1⋆g2`` over lifts.

        Raises IllDefinedError if some other choice of lifts gives a different value.
        """
        G, b, L = self.total, self.proj.image, self.lifts
        dc = G.comm[np.ix_(L, L)]
        ds = G.star[np.ix_(L, L)]
        for label, table, full in (("commutator", dc, G.comm), ("star", ds, G.star)):
            bad = np.argwhere(table[np.ix_(b, b)] != full)
            if len(bad):
                x, y = bad[0]
                raise IllDefinedError(f"{label} of lifts not well defined at ({x}, {y})")
        return dc, ds

    def as_dict(self) -> dict:
        return {"total": self.total.name, "kernel": list(self.kernel.members), "quotient_order": self.quotient.order}


def make_extension(G: FiniteMla, H) -> CentralExtension:
    """The central extension of ``G/H`` by ``H`` with the canonical projection."""
    H = H if isinstance(H, SubSet) else SubSet.of(G, list(H) or [0])
    if not H.is_ideal:
        raise NotAnIdealError(f"{list(H.members)} is not an ideal of {G.name or 'G'}")
    if not H.issubset(joint_center(G)):
        raise NotCentralError(f"{list(H.members)} is not inside the joint centre of {G.name or 'G'}")
    K, proj = quotient(G, H, name=f"{G.name}/{list(H.members)}")
    return CentralExtension(G, H, K, proj)


def algebra_extension(G: FiniteMla) -> CentralExtension:
    """``G`` over its joint centre."""
    return make_extension(G, joint_center(G))


def is_stem(E: CentralExtension) -> bool:
    return E.kernel.issubset(E.derived)


def stem_criterion(E: CentralExtension) -> tuple[bool, Optional[SubSet]]:
    """Stem test through ideals: every non-trivial ideal inside the kernel must meet
    the derived ideal non-trivially.  Returns the first ideal that does not.
    """
    for I in enumerate_ideals(E.total):
        if I.is_trivial() or not I.issubset(E.kernel):
            continue
        if I.intersection(E.derived).is_trivial():
            return False, I
    return True, None


# --------------------------------------------------------------------------
# isoclinism witnesses


@dataclass(frozen=True, eq=False)
class IsoclinismWitness:
    """``lam`` maps quotients, ``mu`` maps derived algebras (standalone restrictions)."""

    lam: MlaMap
    mu: MlaMap
    kind: str
    source: CentralExtension = field(repr=False)
    target: CentralExtension = field(repr=False)

    def mu_on_parent(self) -> np.ndarray:
        """``mu`` as pairs of ids in the two total algebras."""
        e1 = self.source.derived.index
        e2 = self.target.derived.index
        return np.stack([e1, e2[self.mu.image]], axis=1)

    def inverse(self) -> "IsoclinismWitness":
        return IsoclinismWitness(self.lam.inverse(), self.mu.inverse(), self.kind, self.target, self.source)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lambda": self.lam.as_dict(),
            "mu": {**self.mu.as_dict(), "pairs": self.mu_on_parent().tolist()},
        }


def witness_failures(E1: CentralExtension, E2: CentralExtension, lam: MlaMap, mu: MlaMap) -> list[str]:
    """Everything wrong with ``(lam, mu)`` as an isoclinism; empty when it is one."""
    out = []
    A1, _ = E1.derived_algebra
    A2, _ = E2.derived_algebra
    if lam.source.order != E1.quotient.order or lam.target.order != E2.quotient.order:
        return ["lambda has the wrong shape"]
    if mu.source.order != A1.order or mu.target.order != A2.order:
        return ["mu has the wrong shape"]
    for label, f in (("lambda", lam), ("mu", mu)):
        if not f.is_bijective():
            out.append(f"{label} is not bijective")
        elif not is_homomorphism(f)[0]:
            out.append(f"{label} is not a homomorphism")
    dc1, ds1 = E1.deltas
    dc2, ds2 = E2.deltas
    p1, p2 = E1.derived_pos, E2.derived_pos
    li = lam.image
    for label, t1, t2 in (("commutator", dc1, dc2), ("star", ds1, ds2)):
        bad = np.argwhere(mu.image[p1[t1]] != p2[t2[np.ix_(li, li)]])
        if len(bad):
            k1, k2 = bad[0]
            out.append(f"{label} square fails at ({k1}, {k2})")
    return out


def _forced_mu(E1: CentralExtension, E2: CentralExtension, lam_image: np.ndarray) -> Optional[MlaMap]:
    """The unique ``mu`` compatible with ``lam`` on the delta values, if it is an isomorphism."""
    A1, _ = E1.derived_algebra
    A2, _ = E2.derived_algebra
    dc1, ds1 = E1.deltas
    dc2, ds2 = E2.deltas
    ix = np.ix_(lam_image, lam_image)
    src = np.concatenate([E1.derived_pos[dc1].ravel(), E1.derived_pos[ds1].ravel()])
    dst = np.concatenate([E2.derived_pos[dc2[ix]].ravel(), E2.derived_pos[ds2[ix]].ravel()])
    phi = np.full(A1.order, -1, dtype=np.intp)
    phi[src] = dst
    if not np.array_equal(phi[src], dst):
        return None
    keys = np.unique(src)
    mu = hom_from_generators(A1, A2, zip(keys.tolist(), phi[keys].tolist()))
    if mu is None or not mu.is_bijective():
        return None
    return mu


def _try_lambda(E1, E2, lam: MlaMap) -> Optional[tuple[MlaMap, MlaMap]]:
    mu = _forced_mu(E1, E2, lam.image)
    return None if mu is None else (lam, mu)


def find_extension_isoclinism(
    E1: CentralExtension, E2: CentralExtension, workers: int = 1, kind: str = "extension"
) -> Optional[IsoclinismWitness]:
    """First isoclinism in lexicographic order of ``lambda``, or None after an exhaustive search.

    The derived ideal is generated as a group by commutators and stars, so every
    ``lambda`` forces at most one ``mu``.  Candidates for ``lambda`` run over all
    isomorphisms of the quotients; with ``workers > 1`` they are tested in ordered
    batches and the least success is kept.
    """
    _ = E1.deltas, E2.deltas  # well-definedness check up front
    if len(E1.derived) != len(E2.derived) or E1.quotient.order != E2.quotient.order:
        return None
    candidates = iter_isomorphisms(E1.quotient, E2.quotient)
    found = None
    if workers <= 1:
        for lam in candidates:
            found = _try_lambda(E1, E2, lam)
            if found:
                break
    else:
        batch = []
        with ThreadPoolExecutor(max_workers=workers) as pool:
            exhausted = False
            while not exhausted and found is None:
                batch = [lam for _, lam in zip(range(64 * workers), candidates)]
                exhausted = len(batch) < 64 * workers
                for res in pool.map(lambda f: _try_lambda(E1, E2, f), batch):
                    if res:
                        found = res
                        break
    if found is None:
        return None
    lam, mu = found
    return IsoclinismWitness(lam, mu, kind, E1, E2)


def find_isoclinism(G1: FiniteMla, G2: FiniteMla, workers: int = 1) -> Optional[IsoclinismWitness]:
    """Isoclinism of algebras: extensions over the joint centres."""
    return find_extension_isoclinism(algebra_extension(G1), algebra_extension(G2), workers=workers, kind="algebra")


# --------------------------------------------------------------------------
# witness properties


def _mbracket(G: FiniteMla) -> np.ndarray:
    """``(x⋆y)[x,y]`` for all pairs."""
    return G.mul[G.star, G.comm]


def induced_algebra_isoclinism(w: IsoclinismWitness) -> tuple[Optional[MlaMap], list[str]]:
    """The map of central quotients induced by an extension isoclinism, checked
    as an algebra isoclinism together with the same ``mu``.
    """
    E1, E2 = w.source, w.target
    F1, F2 = algebra_extension(E1.total), algebra_extension(E2.total)
    # g1 -> lift of lam(beta1(g1)) in G2 -> its class mod the joint centre
    g2 = E2.lifts[w.lam.image[E1.proj.image]]
    cls = F2.proj.image[g2]
    lam_bar = np.full(F1.quotient.order, -1, dtype=np.intp)
    for g1 in range(E1.total.order):
        c = F1.proj.image[g1]
        if lam_bar[c] >= 0 and lam_bar[c] != cls[g1]:
            return None, [f"induced map not well defined at {g1}"]
        lam_bar[c] = cls[g1]
    if F1.quotient.order != F2.quotient.order:
        return None, ["central quotients differ in order"]
    lb = MlaMap(F1.quotient, F2.quotient, lam_bar)
    return lb, witness_failures(F1, F2, lb, w.mu)


def verify_witness_properties(w: IsoclinismWitness) -> CheckReport:
    E1, E2 = w.source, w.target
    G1, G2 = E1.total, E2.total
    checks: dict[str, bool] = {}
    findings: list[str] = []
    fails = witness_failures(E1, E2, w.lam, w.mu)
    checks["squares"] = not fails
    findings += fails
    M1 = E1.derived.index
    mu_par = np.full(G1.order, -1, dtype=np.intp)
    mu_par[M1] = E2.derived.index[w.mu.image]
    # images of the derived elements through either side of the square
    lhs = w.lam.image[E1.proj.image[M1]]
    rhs = E2.proj.image[mu_par[M1]]
    checks["images-commute"] = bool(np.array_equal(lhs, rhs))
    mb1, mb2 = _mbracket(G1), _mbracket(G2)
    g2 = E2.lifts[w.lam.image[E1.proj.image]]
    lhs = mu_par[mb1[M1, :]]
    rhs = mb2[np.ix_(mu_par[M1], g2)]
    checks["bracket-transport"] = bool(np.array_equal(lhs, rhs))
    k1 = E1.kernel.intersection(E1.derived)
    k2 = E2.kernel.intersection(E2.derived)
    checks["kernel-meet"] = tuple(sorted(mu_par[k1.index].tolist())) == k2.members
    lb, bar_fails = induced_algebra_isoclinism(w)
    checks["induced-algebra-isoclinism"] = lb is not None and not bar_fails
    findings += bar_fails
    is_z1 = E1.kernel.members == joint_center(G1).members
    is_z2 = E2.kernel.members == joint_center(G2).members
    checks["center-biconditional"] = is_z1 == is_z2
    for name, ok in checks.items():
        if not ok:
            findings.append(f"{name} failed")
    details = {
        "checks": checks,
        "findings": findings,
        "induced_lambda": None if lb is None else lb.image.tolist(),
        "kernels_are_centres": [is_z1, is_z2],
    }
    return CheckReport("witness-properties", "pass" if all(checks.values()) else "fail", details)


# --------------------------------------------------------------------------
# morphisms of extensions


@dataclass(frozen=True)
class MorphismVerdict:
    criterion: bool
    direct: bool
    reason: str
    image_covers: Optional[bool]  # (Im mu)H2 = G2, only evaluated when isoclinic

    @property
    def agree(self) -> bool:
        return self.criterion == self.direct

    def as_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "direct": self.direct,
            "agree": self.agree,
            "reason": self.reason,
            "image_covers": self.image_covers,
        }


def morphism_square_failures(E1: CentralExtension, E2: CentralExtension, lam, mu: MlaMap, nu: MlaMap) -> list[str]:
    """``lam`` is given as an array on kernel members (kernel of E1 -> kernel of E2 in total ids)."""
    out = []
    lam = np.asarray(lam, dtype=np.intp)
    if mu.source is not E1.total or mu.target is not E2.total:
        out.append("mu must map total algebras")
    if nu.source is not E1.quotient or nu.target is not E2.quotient:
        out.append("nu must map quotients")
    if out:
        return out
    for label, f in (("mu", mu), ("nu", nu)):
        ok, wit = is_homomorphism(f)
        if not ok:
            out.append(f"{label} is not a homomorphism: {wit}")
    if lam.shape != (len(E1.kernel),) or not np.all(E2.kernel.mask[lam]):
        out.append("lambda does not map kernel into kernel")
    elif not np.array_equal(mu.image[E1.kernel.index], lam):
        out.append("kernel square fails")
    if not np.array_equal(nu.image[E1.proj.image], E2.proj.image[mu.image]):
        g = int(np.flatnonzero(nu.image[E1.proj.image] != E2.proj.image[mu.image])[0])
        out.append(f"quotient square fails at {g}")
    return out


def is_isoclinic_morphism(E1: CentralExtension, E2: CentralExtension, lam, mu: MlaMap, nu: MlaMap) -> MorphismVerdict:
    """Criterion (``nu`` bijective, ``ker mu`` meets the derived ideal trivially)
    next to the definition (``nu`` with ``mu`` restricted is an isoclinism).
    """
    fails = morphism_square_failures(E1, E2, lam, mu, nu)
    if fails:
        raise NotAMorphismError("; ".join(fails))
    nu_iso = nu.is_bijective()
    ker = SubSet.from_mask(E1.total, mu.image == 0)
    meet_trivial = ker.intersection(E1.derived).is_trivial()
    criterion = nu_iso and meet_trivial
    reason = "ok" if criterion else ("nu" if not nu_iso else "kernel meets derived ideal")

    A1, _ = E1.derived_algebra
    A2, _ = E2.derived_algebra
    restricted = E2.derived_pos[mu.image[E1.derived.index]]
    direct = bool((restricted >= 0).all())
    if direct:
        mu_r = MlaMap(A1, A2, restricted)
        direct = not witness_failures(E1, E2, nu, mu_r)
    covers = None
    if direct:
        img = SubSet.of(E2.total, mu.image)
        covers = len(np.unique(E2.total.mul[np.ix_(img.index, E2.kernel.index)])) == E2.total.order
    return MorphismVerdict(criterion, direct, reason, covers)


def identity_morphism(E: CentralExtension) -> tuple[np.ndarray, MlaMap, MlaMap]:
    return E.kernel.index.copy(), identity_map(E.total), identity_map(E.quotient)


def induced_morphism(E1: CentralExtension, E2: CentralExtension, mu: MlaMap) -> Optional[tuple[np.ndarray, MlaMap, MlaMap]]:
    """Complete ``mu`` to a morphism of extensions, or None if it does not map kernel into kernel."""
    lam = mu.image[E1.kernel.index]
    if not np.all(E2.kernel.mask[lam]):
        return None
    nu = E2.proj.image[mu.image[E1.lifts]]
    return lam, mu, MlaMap(E1.quotient, E2.quotient, nu)


# --------------------------------------------------------------------------
# stem reduction and pullback


class StemReduction(NamedTuple):
    ideal: SubSet
    extension: CentralExtension
    witness: Optional[IsoclinismWitness]


def stem_reduce(E: CentralExtension) -> StemReduction:
    """Quotient by the largest ideal inside the kernel that misses the derived ideal.

    Ties in size go to the least member list.  The witness uses the map induced
    on quotients and is None only if that map fails to be an isoclinism.
    """
    G, H = E.total, E.kernel
    cands = [I for I in enumerate_ideals(G) if I.issubset(H) and I.intersection(E.derived).is_trivial()]
    J = max(cands, key=lambda I: (len(I), tuple(-m for m in I.members)))
    if J.is_trivial():
        EJ = E
        lam = identity_map(E.quotient)
    else:
        Q, pj = quotient(G, J, name=f"{G.name}/{list(J.members)}")
        EJ = make_extension(Q, image_subset(pj, H))
        lam = MlaMap(E.quotient, EJ.quotient, EJ.proj.image[pj.image[E.lifts]])
    mu = _forced_mu(E, EJ, lam.image) if lam.is_bijective() else None
    w = None
    if mu is not None and not witness_failures(E, EJ, lam, mu):
        w = IsoclinismWitness(lam, mu, "extension", E, EJ)
    return StemReduction(J, EJ, w)


def pullback_members(E1: CentralExtension, E2: CentralExtension, nu: MlaMap) -> np.ndarray:
    """Ids ``g1 * |G2| + g2`` of the pairs with ``nu(beta1(g1)) = beta2(g2)``, ascending."""
    n2 = E2.total.order
    a, b = np.divmod(np.arange(E1.total.order * n2), n2)
    return np.flatnonzero(nu.image[E1.proj.image[a]] == E2.proj.image[b])


def pullback_extension(E1: CentralExtension, E2: CentralExtension, nu: MlaMap) -> CentralExtension:
    """Fibre product of the totals over ``nu``, as an extension of ``K1``.

    Element ``i`` of the result is the ``i``-th matching pair in ascending product id.
    """
    if nu.source is not E1.quotient or nu.target is not E2.quotient:
        raise MlaError("nu must map the first quotient to the second")
    if not is_homomorphism(nu)[0]:
        raise MlaError("nu is not a homomorphism")
    G1, G2 = E1.total, E2.total
    P = direct_product(G1, G2, name=f"{G1.name}x{G2.name}")
    S = SubSet.of(P, pullback_members(E1, E2, nu))
    if not S.is_subalgebra:
        raise AssertionError("fibre product is not a subalgebra")
    A, emb = restrict_to_subalgebra(P, S, name=f"{G1.name}x_K{G2.name}")
    proj = MlaMap(A, E1.quotient, E1.proj.image[emb.image // G2.order])
    kernel = SubSet.from_mask(A, proj.image == 0)
    return CentralExtension(A, kernel, E1.quotient, proj)


def pullback_kernel_pairs(E1: CentralExtension, E2: CentralExtension, nu: MlaMap, PB: CentralExtension) -> set:
    """Kernel of the pullback ``PB`` as a set of ``(h1, h2)`` pairs."""
    n2 = E2.total.order
    members = pullback_members(E1, E2, nu)[PB.kernel.index]
    return {(int(m // n2), int(m % n2)) for m in members}
