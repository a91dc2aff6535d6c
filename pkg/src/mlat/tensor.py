"""Tensor squares of finite multiplicative Lie algebras and checks built on them.

The tensor square acts on itself by conjugation and uses ``star`` as the
bracket.  Its generators are the symbols ``x ⊗ y``; generator ``(x, y)`` has
index ``x * n + y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional
from weakref import WeakKeyDictionary

import numpy as np

from . import groups
from .coset import DEFAULT_BUDGET, EnumeratedGroup, dedup_relators, enumerate_presented_group, renumber
from .core import MAX_ORDER, FiniteMla, MlaError, OrderBoundError, ValidationReport, axiom_sides, validate_axioms
from .morph import MlaMap, are_isomorphic, generating_sequence, hom_from_generators
from .snf import smith_normal_form
from .structure import (
    SubSet,
    closure_ideal,
    coset_labels,
    group_center,
    joint_center,
    lie_center,
    quotient,
)

ENUMERATION_BOUND = 12
SNF_BOUND = 64


class PreconditionError(MlaError):
    pass


class AxiomFailure(MlaError):
    def __init__(self, report: ValidationReport, message: str = ""):
        super().__init__(message or f"extended star fails axioms {report.axioms_failed()}")
        self.report = report


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple[tuple[int, ...], ...]
    # star_on_generators[g, h] is a generator index, or -1 for the identity
    star_on_generators: np.ndarray
    raw_relator_count: int = 0


@dataclass(frozen=True, eq=False)
class TensorSquare:
    base: FiniteMla
    algebra: FiniteMla
    gen_map: np.ndarray
    method: str
    refinements: int = 0

    def symbol(self, x: int, y: int) -> int:
        return int(self.gen_map[x, y])

    def as_dict(self) -> dict:
        from .core import to_dict

        d = to_dict(self.algebra)
        d["gen_map"] = self.gen_map.tolist()
        d["method"] = self.method
        return d


# --------------------------------------------------------------------------
# presentation


def tensor_presentation(G: FiniteMla, bound: int = ENUMERATION_BOUND) -> Presentation:
    """Generators ``x ⊗ y`` and the four families of defining relators.

    Relator families, over all x, x', y, y' in G (``^a b = a b a^-1``):

    * ``x⊗(yy') = (x⊗y)(^y x ⊗ ^y y')``
    * ``(xx')⊗y = (^x x' ⊗ ^x y)(x⊗y)``
    * ``((x⋆x')⊗^x' y) (^y x ⊗ (x'⋆y))^-1 (^x x' ⊗ (x⋆y)^-1)^-1 = 1``
    * ``(^y' x ⊗ (y⋆y')) ((y⋆x)^-1 ⊗ ^y y')^-1 ((y'⋆x) ⊗ ^x y)^-1 = 1``

    and ``(x⊗y) ⋆ (x'⊗y') = (y⋆x)^-1 ⊗ (x'⋆y')`` on generators.
    """
    n = G.order
    if n > bound:
        raise OrderBoundError(f"order {n} exceeds the tensor enumeration bound {bound}")
    m, s, c, inv = G.mul, G.star, G.conj, G.inv

    def sym(a, b):
        return int(a) * n + int(b) + 1

    raw = []
    r = range(n)
    for x in r:
        for y in r:
            for y2 in r:
                # family 1 with (x, y, y'); family 4 with x, y, y'
                raw.append((-sym(x, m[y, y2]), sym(x, y), sym(c[y, x], c[y, y2])))
                raw.append((sym(c[y2, x], s[y, y2]), -sym(inv[s[y, x]], c[y, y2]), -sym(s[y2, x], c[x, y])))
    for x in r:
        for x2 in r:
            for y in r:
                raw.append((-sym(m[x, x2], y), sym(c[x, x2], c[x, y]), sym(x, y)))
                raw.append((sym(s[x, x2], c[x2, y]), -sym(c[y, x], s[x2, y]), -sym(c[x, x2], inv[s[x, y]])))
    star_gen = np.empty((n * n, n * n), dtype=np.intp)
    # (x⊗y)⋆(x'⊗y') = (y⋆x)^-1 ⊗ (x'⋆y')
    first = inv[s.T].reshape(-1)  # index x*n+y -> (y⋆x)^-1
    second = s.reshape(-1)  # index x'*n+y' -> x'⋆y'
    star_gen[:, :] = first[:, None] * n + second[None, :]
    star_gen.setflags(write=False)
    return Presentation(n * n, tuple(dedup_relators(raw)), star_gen, raw_relator_count=len(raw))


# --------------------------------------------------------------------------
# star extension


def _extended_star(group: EnumeratedGroup, star_gen: np.ndarray) -> np.ndarray:
    """Star on every element, expanding first words with the two Leibniz rules."""
    mul = group.mul
    n = group.order
    inv = np.argmin(mul, axis=1)
    conj = mul[mul, inv[:, None]]
    imgs = np.append(group.gen_images, 0)  # index -1 -> identity
    gen_star = imgs[star_gen]  # element of g⋆h for generator indices g, h
    letters = sorted(set(group.parent_gen[1:].tolist()))
    # left[g][v] = g⋆v via x⋆(uh) = (x⋆u) ^u(x⋆h)
    left = {}
    for g in letters:
        row = np.zeros(n, dtype=np.intp)
        for v in range(1, n):
            u, h = group.parent[v], group.parent_gen[v]
            row[v] = mul[row[u], conj[u, gen_star[g, h]]]
        left[g] = row
    # (bh)⋆v = ^b(h⋆v) (b⋆v)
    star = np.zeros((n, n), dtype=np.intp)
    for a in range(1, n):
        b, h = group.parent[a], group.parent_gen[a]
        star[a] = mul[conj[b, left[h]], star[b]]
    return star


def extend_star(group: EnumeratedGroup, star_gen: np.ndarray, name: str = "") -> FiniteMla:
    """Extend a star given on generators to the whole group and validate it.

    Raises `AxiomFailure` when the extension is not a multiplicative Lie algebra
    or disagrees with ``star_gen`` on some pair of generators.
    """
    star = _extended_star(group, star_gen)
    G = FiniteMla(group.mul, star, name=name)
    report = validate_axioms(G)
    if not report.valid:
        raise AxiomFailure(report)
    bad = _generator_defects(G, group.gen_images, star_gen)
    if len(bad):
        raise AxiomFailure(report, "extended star disagrees with the generator star table")
    return G


def _generator_defects(G: FiniteMla, images: np.ndarray, star_gen: np.ndarray) -> np.ndarray:
    imgs = np.append(images, 0)
    lhs = G.star[np.ix_(images, images)].reshape(-1)
    rhs = imgs[star_gen].reshape(-1)
    diff = lhs != rhs
    return np.unique(G.mul[lhs[diff], G.inv[rhs[diff]]])


def _axiom_defects(G: FiniteMla) -> np.ndarray:
    n = G.order
    ar = np.arange(n)
    out = [np.unique(G.star[ar, ar])]
    step = max(1, (1 << 20) // (n * n))
    for lo in range(0, n, step):
        x, y, z = ar[lo:lo + step, None, None], ar[None, :, None], ar[None, None, :]
        for axiom in (2, 3, 4, 5):
            lhs, rhs = axiom_sides(G, axiom, x, y, z)
            bad = lhs != rhs
            if bad.any():
                out.append(np.unique(G.mul[lhs[bad], G.inv[rhs[bad]]]))
    d = np.unique(np.concatenate(out))
    return d[d != 0]


def _normal_closure_quotient(group: EnumeratedGroup, elements: np.ndarray) -> EnumeratedGroup:
    mul = group.mul
    n = group.order
    inv = np.argmin(mul, axis=1)
    conj = mul[mul, inv[:, None]]
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    mask[elements] = True
    while True:
        s = np.flatnonzero(mask)
        new = mask.copy()
        new[mul[np.ix_(s, s)]] = True
        new[conj[:, s]] = True
        if np.array_equal(new, mask):
            break
        mask = new
    probe = FiniteMla(mul, np.zeros_like(mul))
    labels = coset_labels(probe, SubSet.from_mask(probe, mask))
    k = int(labels.max()) + 1
    reps = np.zeros(k, dtype=np.intp)
    for g in range(n - 1, -1, -1):
        reps[labels[g]] = g
    qmul = labels[mul[np.ix_(reps, reps)]]
    return renumber(qmul, labels[group.gen_images])


def presented_algebra(P: Presentation, budget: int = DEFAULT_BUDGET, name: str = "") -> tuple[FiniteMla, np.ndarray, int]:
    """The algebra presented by ``P``: enumerate the group, then extend the star.

    When the extended star is inconsistent, each failing identity exhibits two
    elements that must coincide in the presented algebra; their quotient is
    imposed and the extension retried.  Returns ``(algebra, generator images,
    number of refinement rounds)``.
    """
    group = enumerate_presented_group(P.generator_count, P.relators, budget=budget)
    rounds = 0
    while True:
        try:
            G = extend_star(group, P.star_on_generators, name=name)
            return G, group.gen_images, rounds
        except AxiomFailure:
            pass
        probe = FiniteMla(group.mul, _extended_star(group, P.star_on_generators))
        defects = np.union1d(
            _axiom_defects(probe),
            _generator_defects(probe, group.gen_images, P.star_on_generators),
        )
        if not len(defects):  # pragma: no cover - failure always leaves a defect
            raise AxiomFailure(validate_axioms(probe))
        group = _normal_closure_quotient(group, defects)
        rounds += 1


# --------------------------------------------------------------------------
# abelian fast path


def abelian_invariants(G: FiniteMla) -> tuple[list[int], np.ndarray]:
    """Cyclic decomposition of an abelian group.

    Returns the invariant factors ``d_1 | d_2 | ...`` (all > 1) and, per element,
    its coordinate vector in ``Z/d_1 x Z/d_2 x ...``.
    """
    if not G.is_abelian:
        raise PreconditionError("group is not abelian")
    n = G.order
    gens = generating_sequence(G)
    k = len(gens)
    if k == 0:
        return [], np.zeros((n, 0), dtype=np.int64)
    coef = [None] * n
    coef[0] = (0,) * k
    queue = [0]
    rels = set()
    for a in queue:
        for i, g in enumerate(gens):
            b = int(G.mul[a, g])
            vec = tuple(c + (j == i) for j, c in enumerate(coef[a]))
            if coef[b] is None:
                coef[b] = vec
                queue.append(b)
            else:
                diff = tuple(p - q for p, q in zip(vec, coef[b]))
                if any(diff):
                    rels.add(diff)
    R = sorted(rels)
    D, _, V = smith_normal_form(R)
    diag = [D[i][i] for i in range(min(len(D), k))] + [0] * max(0, k - len(D))
    Vn = np.array(V, dtype=np.int64)
    coords = np.array(coef, dtype=np.int64) @ Vn
    keep = [j for j, d in enumerate(diag) if d > 1]
    if any(d == 0 for d in diag):  # pragma: no cover - finite group
        raise MlaError("relation lattice is not of full rank")
    factors = [diag[j] for j in keep]
    coords = coords[:, keep] % np.array(factors, dtype=np.int64) if keep else np.zeros((n, 0), dtype=np.int64)
    return factors, coords


def abelian_tensor_snf(G: FiniteMla, bound: int = SNF_BOUND) -> TensorSquare:
    """Tensor square of an abelian algebra with trivial star.

    Here the tensor square is the ordinary tensor product of the group with
    itself: ``Z/d_i ⊗ Z/d_j = Z/gcd(d_i, d_j)`` over all factor pairs.
    """
    if G.order > bound:
        raise OrderBoundError(f"order {G.order} exceeds the snf bound {bound}")
    if not G.is_abelian or not G.has_trivial_star:
        raise PreconditionError("snf path needs an abelian group with trivial star")
    factors, coords = abelian_invariants(G)
    pairs = [(i, j) for i in range(len(factors)) for j in range(len(factors))]
    moduli = [gcd(factors[i], factors[j]) for i, j in pairs]
    size = int(np.prod(moduli, dtype=object)) if moduli else 1
    if size > MAX_ORDER:
        raise OrderBoundError(f"tensor square would have order {size}, above {MAX_ORDER}")
    mul, names = groups.abelian(*moduli)
    T = FiniteMla(mul, np.zeros_like(mul), name=f"{G.name}⊗{G.name}", names=names)
    n = G.order
    if not moduli:
        return TensorSquare(G, T, np.zeros((n, n), dtype=np.intp), "snf")
    radix = np.array([int(np.prod(moduli[t + 1:])) for t in range(len(moduli))], dtype=np.int64)
    mod = np.array(moduli, dtype=np.int64)
    ci = coords[:, [i for i, _ in pairs]]
    cj = coords[:, [j for _, j in pairs]]
    tcoords = (ci[:, None, :] * cj[None, :, :]) % mod
    gen_map = (tcoords @ radix).astype(np.intp)
    return TensorSquare(G, T, gen_map, "snf")


# --------------------------------------------------------------------------
# dispatcher


def tensor_square(
    G: FiniteMla,
    method: str = "auto",
    budget: int = DEFAULT_BUDGET,
    enumeration_bound: int = ENUMERATION_BOUND,
) -> TensorSquare:
    """``G ⊗ G`` by the abelian fast path or by enumerating its presentation."""
    if method not in ("auto", "snf", "enumeration"):
        raise ValueError(f"unknown method {method!r}")
    key = (method, budget, enumeration_bound)
    per_alg = _SQUARES.setdefault(G, {})
    if key not in per_alg:
        per_alg[key] = _tensor_square(G, method, budget, enumeration_bound)
    return per_alg[key]


# results are deterministic, so repeated requests share one computation
_SQUARES: "WeakKeyDictionary[FiniteMla, dict]" = WeakKeyDictionary()


def _tensor_square(G: FiniteMla, method: str, budget: int, enumeration_bound: int) -> TensorSquare:
    fast = G.is_abelian and G.has_trivial_star and G.order <= SNF_BOUND
    if method == "snf" or (method == "auto" and fast):
        return abelian_tensor_snf(G)
    P = tensor_presentation(G, bound=enumeration_bound)
    T, images, rounds = presented_algebra(P, budget=budget, name=f"{G.name}⊗{G.name}")
    n = G.order
    return TensorSquare(G, T, images.reshape(n, n).astype(np.intp), "enumeration", rounds)


def pair_ideal(T: TensorSquare, I: SubSet) -> SubSet:
    """Ideal of the tensor square generated by the symbols with a slot in ``I``."""
    seeds = np.union1d(T.gen_map[I.index, :].ravel(), T.gen_map[:, I.index].ravel())
    return closure_ideal(T.algebra, seeds)


def relation_defects(T: TensorSquare) -> list[tuple[str, tuple[int, ...]]]:
    """Evaluate every defining relation through ``gen_map``; return the failing tuples."""
    G, A, t = T.base, T.algebra, T.gen_map
    m, s, c, inv = G.mul, G.star, G.conj, G.inv
    M, S, Ai = A.mul, A.star, A.inv
    ar = np.arange(G.order)
    a, b, d = ar[:, None, None], ar[None, :, None], ar[None, None, :]
    out = []
    # x⊗(yy') = (x⊗y)(^y x ⊗ ^y y')   with (x, y, y') = (a, b, d)
    lhs = t[a, m[b, d]]
    rhs = M[t[a, b], t[c[b, a], c[b, d]]]
    out += [("1", tuple(map(int, w))) for w in np.argwhere(lhs != rhs)[:1]]
    # (xx')⊗y = (^x x' ⊗ ^x y)(x⊗y)   with (x, x', y) = (a, b, d)
    lhs = t[m[a, b], d]
    rhs = M[t[c[a, b], c[a, d]], t[a, d]]
    out += [("2", tuple(map(int, w))) for w in np.argwhere(lhs != rhs)[:1]]
    # family 3 with (x, x', y) = (a, b, d)
    p = t[s[a, b], c[b, d]]
    q = Ai[t[c[d, a], s[b, d]]]
    r = Ai[t[c[a, b], inv[s[a, d]]]]
    out += [("3", tuple(map(int, w))) for w in np.argwhere(M[M[p, q], r] != 0)[:1]]
    # family 4 with (x, y, y') = (a, b, d)
    p = t[c[d, a], s[b, d]]
    q = Ai[t[inv[s[b, a]], c[b, d]]]
    r = Ai[t[s[d, a], c[a, b]]]
    out += [("4", tuple(map(int, w))) for w in np.argwhere(M[M[p, q], r] != 0)[:1]]
    # (x⊗y)⋆(x'⊗y') = (y⋆x)^-1 ⊗ (x'⋆y')
    x, y = ar[:, None, None, None], ar[None, :, None, None]
    x2, y2 = ar[None, None, :, None], ar[None, None, None, :]
    lhs = S[t[x, y], t[x2, y2]]
    rhs = t[inv[s[y, x]], s[x2, y2]]
    out += [("5", tuple(map(int, w))) for w in np.argwhere(lhs != rhs)[:1]]
    return out


# --------------------------------------------------------------------------
# verifiers


@dataclass
class CheckReport:
    """Outcome of one verifier run; ``details`` holds JSON-ready values."""

    name: str
    status: str  # pass | fail | not-applicable | budget-exceeded
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def as_dict(self) -> dict:
        return {"check": self.name, "status": self.status, **self.details}


def natural_quotient_map(T: TensorSquare, TQ: TensorSquare, proj: MlaMap) -> Optional[MlaMap]:
    """The homomorphism ``x⊗y -> xI⊗yI`` from ``G⊗G`` onto ``G/I⊗G/I``, if well defined."""
    p = proj.image
    n = T.base.order
    pairs = [(int(T.gen_map[x, y]), int(TQ.gen_map[p[x], p[y]])) for x in range(n) for y in range(n)]
    return hom_from_generators(T.algebra, TQ.algebra, pairs)


def check_tensor_quotient_iso(G: FiniteMla, I: SubSet, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Compare ``G/I ⊗ G/I`` with ``(G⊗G)`` modulo the pair ideal of ``I``."""
    Q, proj = quotient(G, I)
    T = tensor_square(G, budget=budget)
    TQ = tensor_square(Q, budget=budget)
    N = pair_ideal(T, I)
    R, _ = quotient(T.algebra, N)
    iso = are_isomorphic(TQ.algebra, R)
    nat = natural_quotient_map(T, TQ, proj)
    nat_ok = nat is not None and sorted(np.flatnonzero(nat.image == 0).tolist()) == list(N.members)
    details = {
        "ideal": list(I.members),
        "left_order": TQ.algebra.order,
        "right_order": R.order,
        "isomorphism": None if iso is None else iso.image.tolist(),
        "natural_map_kernel_is_pair_ideal": bool(nat_ok),
    }
    return CheckReport("tensor-quotient", "pass" if iso is not None and nat_ok else "fail", details)


_CENTERS = (("group-center", group_center), ("lie-center", lie_center), ("joint-center", joint_center))


def check_center_containments(G: FiniteMla, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Pair ideal of each centre of ``G`` lies in the matching centre of ``G⊗G``."""
    T = tensor_square(G, budget=budget)
    clauses = {}
    ok = True
    for name, center in _CENTERS:
        P = pair_ideal(T, center(G))
        C = center(T.algebra)
        holds = P.issubset(C)
        ok &= holds
        clauses[name] = {"contained": holds, "equal": P.members == C.members, "sizes": [len(P), len(C)]}
    return CheckReport("center-containments", "pass" if ok else "fail", {"tensor_order": T.algebra.order, "clauses": clauses})


def center_equality_holds(T: TensorSquare) -> bool:
    """Whether the joint centre of ``G⊗G`` equals the pair ideal of the joint centre of ``G``."""
    return joint_center(T.algebra).members == pair_ideal(T, joint_center(T.base)).members


def check_capability_condition(E: FiniteMla, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """When the joint-centre equality holds for ``E``, rebuild ``G = E/𝒵(E)`` and
    exhibit ``G⊗G ≅ (E⊗E)/𝒵(E⊗E)``.
    """
    T = tensor_square(E, budget=budget)
    premise = center_equality_holds(T)
    details = {"premise": premise}
    if not premise:
        return CheckReport("capability", "not-applicable", details)
    G, _ = quotient(E, joint_center(E))
    TG = tensor_square(G, budget=budget)
    R, _ = quotient(T.algebra, joint_center(T.algebra))
    iso = are_isomorphic(TG.algebra, R)
    details.update({"quotient_order": G.order, "isomorphism": None if iso is None else iso.image.tolist()})
    return CheckReport("capability", "pass" if iso is not None else "fail", details)


def check_tensor_isoclinism(G1: FiniteMla, G2: FiniteMla, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Isoclinic algebras satisfying the joint-centre equality have isoclinic tensor squares."""
    from .isoclinism import find_isoclinism

    T1 = tensor_square(G1, budget=budget)
    T2 = tensor_square(G2, budget=budget)
    hyp_iso = find_isoclinism(G1, G2) is not None
    hyp_eq = (center_equality_holds(T1), center_equality_holds(T2))
    details = {"isoclinic": hyp_iso, "center_equality": list(hyp_eq), "orders": [T1.algebra.order, T2.algebra.order]}
    if not (hyp_iso and all(hyp_eq)):
        return CheckReport("tensor-isoclinism", "not-applicable", details)
    w = find_isoclinism(T1.algebra, T2.algebra)
    details["witness"] = None if w is None else w.as_dict()
    return CheckReport("tensor-isoclinism", "pass" if w is not None else "fail", details)
