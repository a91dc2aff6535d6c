"""Finite multiplicative Lie algebras as pairs of operation tables.

An algebra of order ``n`` lives on the element ids ``0..n-1``.  Id 0 is
always the group identity, ``mul[x, y]`` is the group product ``x*y`` and
``star[x, y]`` is the Lie product ``x * y`` written ``x⋆y`` below.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

MAX_ORDER = 4096

# element count of one vectorised slab in the O(n^3) sweeps
_SLAB = 1 << 21


class MlaError(Exception):
    """Base class for every error raised by this package."""


class ParseError(MlaError):
    pass


class StructureError(MlaError):
    pass


class OrderBoundError(MlaError):
    pass


def _as_table(obj, n: int, field_name: str) -> np.ndarray:
    try:
        table = np.asarray(obj, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"field {field_name!r} is not an integer table") from exc
    if table.shape != (n, n):
        raise ParseError(f"field {field_name!r} must be {n}x{n}, got shape {table.shape}")
    bad = np.argwhere((table < 0) | (table >= n))
    if len(bad):
        i, j = bad[0]
        raise StructureError(f"{field_name}[{i}][{j}] = {table[i, j]} is out of range [0, {n})")
    return table.astype(np.intp)


def check_group_table(mul: np.ndarray) -> np.ndarray:
    """Check that ``mul`` is a group table with identity 0 and return the inverse table.

    Raises `StructureError` naming the first offending row, column or cell.
    """
    n = mul.shape[0]
    ar = np.arange(n)
    for i in range(n):
        if len(np.unique(mul[i])) != n:
            raise StructureError(f"row {i} not a permutation")
    for j in range(n):
        if len(np.unique(mul[:, j])) != n:
            raise StructureError(f"column {j} not a permutation")
    if not np.array_equal(mul[0], ar):
        raise StructureError("row 0 is not the identity row (element 0 must be the identity)")
    if not np.array_equal(mul[:, 0], ar):
        raise StructureError("column 0 is not the identity column (element 0 must be the identity)")
    step = max(1, _SLAB // max(1, n * n))
    for lo in range(0, n, step):
        xs = ar[lo:lo + step, None, None]
        left = mul[mul[xs, ar[None, :, None]], ar[None, None, :]]
        right = mul[xs, mul[ar[:, None], ar[None, :]][None, :, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            x, y, z = bad[0]
            raise StructureError(f"not associative at (x, y, z) = ({x + lo}, {y}, {z})")
    inv = np.argmin(mul, axis=1)
    return inv.astype(np.intp)


@dataclass(frozen=True, eq=False)
class FiniteMla:
    """A finite group with a second binary operation, stored as tables.

    Instances are immutable.  Construction checks the group table but not the
    five identities for ``star``; call `validate_axioms` (or use a
    constructor that does) before handing the algebra to other modules.
    """

    mul: np.ndarray
    star: np.ndarray
    name: str = ""
    names: Optional[tuple[str, ...]] = None
    inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mul = np.ascontiguousarray(self.mul, dtype=np.intp)
        star = np.ascontiguousarray(self.star, dtype=np.intp)
        n = mul.shape[0]
        if n < 1 or mul.shape != (n, n):
            raise StructureError("mul must be a non-empty square table")
        if n > MAX_ORDER:
            raise OrderBoundError(f"order {n} exceeds the maximum supported order {MAX_ORDER}")
        if star.shape != (n, n):
            raise StructureError(f"star must be {n}x{n}")
        if mul.min() < 0 or mul.max() >= n:
            raise StructureError("mul table has out-of-range entries")
        inv = check_group_table(mul)
        if star.min() < 0 or star.max() >= n:
            raise StructureError("star table has out-of-range entries")
        if self.names is not None and len(self.names) != n:
            raise StructureError(f"names must have length {n}")
        mul.setflags(write=False)
        star.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "star", star)
        object.__setattr__(self, "inv", inv)
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteMla({self.name or '?'}, order={self.order})"

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[x, y] = x y x^-1``."""
        t = self.mul[self.mul, self.inv[:, None]]
        t.setflags(write=False)
        return t

    @cached_property
    def comm(self) -> np.ndarray:
        """``comm[x, y] = x y x^-1 y^-1``."""
        t = self.mul[self.conj, self.inv[None, :]]
        t.setflags(write=False)
        return t

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.intp)
        for x in range(n):
            k, y = 1, x
            while y != 0:
                y = self.mul[y, x]
                k += 1
            orders[x] = k
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def has_trivial_star(self) -> bool:
        return not self.star.any()

    def same_tables(self, other: "FiniteMla") -> bool:
        return (
            self.order == other.order
            and np.array_equal(self.mul, other.mul)
            and np.array_equal(self.star, other.star)
        )

    def label(self, x: int) -> str:
        return self.names[x] if self.names else str(x)


def conjugate(G: FiniteMla, x: int, y: int) -> int:
    return int(G.mul[G.mul[x, y], G.inv[x]])


def commutator(G: FiniteMla, x: int, y: int) -> int:
    return int(G.mul[G.mul[G.mul[x, y], G.inv[x]], G.inv[y]])


# --------------------------------------------------------------------------
# axiom validation

AXIOMS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class Violation:
    axiom: object  # 1..5, or "group"
    witness: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness)}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def axioms_failed(self) -> list:
        return [v.axiom for v in self.violations]

    def as_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.as_dict() for v in self.violations]}


def axiom_sides(G: FiniteMla, axiom: int, x, y=None, z=None):
    """Both sides of one identity, evaluated at (arrays of) element ids.

    Works elementwise on broadcastable index arrays, so the validator and the
    witness re-check use the same formulas.
    """
    m, s, c = G.mul, G.star, G.conj
    if axiom == 1:
        return s[x, x], np.zeros_like(np.asarray(x))
    if axiom == 2:
        return s[x, m[y, z]], m[s[x, y], c[y, s[x, z]]]
    if axiom == 3:
        return s[m[x, y], z], m[c[x, s[y, z]], s[x, z]]
    if axiom == 4:
        a = s[s[x, y], c[y, z]]
        b = s[s[y, z], c[z, x]]
        d = s[s[z, x], c[x, y]]
        return m[m[a, b], d], np.zeros_like(np.asarray(a))
    if axiom == 5:
        return c[z, s[x, y]], s[c[z, x], c[z, y]]
    raise ValueError(f"unknown axiom {axiom!r}")


def witness_fails(G: FiniteMla, violation: Violation) -> bool:
    """Re-evaluate a reported witness; True when the identity really fails there."""
    if violation.axiom == 1:
        lhs, rhs = axiom_sides(G, 1, violation.witness[0])
    else:
        lhs, rhs = axiom_sides(G, violation.axiom, *violation.witness)
    return bool(lhs != rhs)


def _slab_failures(G: FiniteMla, lo: int, hi: int) -> dict[int, tuple[int, int, int]]:
    n = G.order
    ar = np.arange(n)
    x = ar[lo:hi, None, None]
    y = ar[None, :, None]
    z = ar[None, None, :]
    found = {}
    for axiom in (2, 3, 4, 5):
        lhs, rhs = axiom_sides(G, axiom, x, y, z)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j, k = bad[0]
            found[axiom] = (int(i) + lo, int(j), int(k))
    return found


def validate_axioms(G: FiniteMla, workers: int = 1) -> ValidationReport:
    """Check the five defining identities over all element tuples.

    Reports, per failing identity, the lexicographically least witness.
    ``workers > 1`` splits the x-range across threads; the merged report is
    identical to the single-threaded one.
    """
    n = G.order
    violations = []
    diag = G.star[np.arange(n), np.arange(n)]
    bad = np.flatnonzero(diag)
    if len(bad):
        violations.append(Violation(1, (int(bad[0]),)))

    step = max(1, _SLAB // (n * n))
    bounds = [(lo, min(n, lo + step)) for lo in range(0, n, step)]
    if workers > 1 and len(bounds) < workers:
        step = max(1, -(-n // workers))
        bounds = [(lo, min(n, lo + step)) for lo in range(0, n, step)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _slab_failures(G, *b), bounds))
    else:
        parts = [_slab_failures(G, *b) for b in bounds]
    for axiom in (2, 3, 4, 5):
        hits = [p[axiom] for p in parts if axiom in p]
        if hits:
            violations.append(Violation(axiom, min(hits)))
    return ValidationReport(tuple(violations))


# --------------------------------------------------------------------------
# constructors


def trivial_star_of_group(mul, name: str = "", names=None) -> FiniteMla:
    """The group with ``x⋆y = 1`` for all x, y."""
    mul = np.asarray(mul)
    G = FiniteMla(mul, np.zeros_like(mul), name=name, names=names)
    report = validate_axioms(G)
    if not report.valid:  # pragma: no cover - cannot happen for a group table
        raise StructureError(f"trivial star failed validation: {report}")
    return G


def commutator_star_of_group(mul, name: str = "", names=None) -> tuple[FiniteMla, ValidationReport]:
    """The group with ``x⋆y = [x, y]``, returned with its validation report."""
    mul = np.asarray(mul)
    probe = FiniteMla(mul, np.zeros_like(mul))
    G = FiniteMla(mul, probe.comm, name=name, names=names)
    return G, validate_axioms(G)


def direct_product(G1: FiniteMla, G2: FiniteMla, name: str = "", max_order: int = MAX_ORDER) -> FiniteMla:
    """Componentwise product; pair ``(a, b)`` gets id ``a * |G2| + b``."""
    n1, n2 = G1.order, G2.order
    if n1 * n2 > max_order:
        raise OrderBoundError(f"product order {n1 * n2} exceeds {max_order}")

    def combine(t1, t2):
        big = t1[:, None, :, None] * n2 + t2[None, :, None, :]
        return big.reshape(n1 * n2, n1 * n2)

    names = None
    if G1.names or G2.names:
        names = [f"({G1.label(a)},{G2.label(b)})" for a in range(n1) for b in range(n2)]
    return FiniteMla(
        combine(G1.mul, G2.mul),
        combine(G1.star, G2.star),
        name=name or f"{G1.name}x{G2.name}",
        names=names,
    )


def relabel(G: FiniteMla, order: Sequence[int], name: Optional[str] = None) -> FiniteMla:
    """Renumber elements: new id ``i`` is old id ``order[i]``; ``order[0]`` must be 0."""
    order = np.asarray(order, dtype=np.intp)
    if order[0] != 0:
        raise StructureError("relabelling must keep the identity at 0")
    pos = np.empty_like(order)
    pos[order] = np.arange(len(order))
    mul = pos[G.mul[np.ix_(order, order)]]
    star = pos[G.star[np.ix_(order, order)]]
    names = [G.names[i] for i in order] if G.names else None
    return FiniteMla(mul, star, name=G.name if name is None else name, names=names)


# --------------------------------------------------------------------------
# serialisation


def to_dict(G: FiniteMla) -> dict:
    d = {
        "name": G.name,
        "order": G.order,
        "mul": G.mul.tolist(),
        "star": G.star.tolist(),
    }
    if G.names is not None:
        d["names"] = list(G.names)
    return d


def dump_algebra(G: FiniteMla) -> str:
    return json.dumps(to_dict(G), separators=(",", ":"))


def from_dict(d: dict) -> FiniteMla:
    if not isinstance(d, dict):
        raise ParseError("algebra must be a JSON object")
    for key in ("order", "mul", "star"):
        if key not in d:
            raise ParseError(f"missing field {key!r}")
    n = d["order"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("field 'order' must be a positive integer")
    if n > MAX_ORDER:
        raise OrderBoundError(f"order {n} exceeds the maximum supported order {MAX_ORDER}")
    mul = _as_table(d["mul"], n, "mul")
    star = _as_table(d["star"], n, "star")
    names = d.get("names")
    if names is not None:
        if not isinstance(names, list) or len(names) != n or not all(isinstance(s, str) for s in names):
            raise ParseError(f"field 'names' must be a list of {n} strings")
    name = d.get("name", "")
    if not isinstance(name, str):
        raise ParseError("field 'name' must be a string")
    return FiniteMla(mul, star, name=name, names=names)


def load_algebra(text: str) -> FiniteMla:
    """Parse an algebra from its JSON text.  Group checks run; axioms do not."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    return from_dict(d)


def read_algebra(path) -> FiniteMla:
    with open(path, encoding="utf-8") as fh:
        return load_algebra(fh.read())


def write_algebra(G: FiniteMla, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_algebra(G))
        fh.write("\n")
