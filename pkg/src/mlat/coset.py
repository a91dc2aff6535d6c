"""Coset enumeration over the trivial subgroup of a finitely presented group.

Words are sequences of signed generator indices: ``i + 1`` stands for
generator ``i`` and ``-(i + 1)`` for its inverse.  Internally every letter
becomes a coset-table column, generator ``i`` at ``2i`` and its inverse at
``2i + 1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import MlaError

Word = tuple[int, ...]

DEFAULT_BUDGET = 100_000


class BudgetExceeded(MlaError):
    """Enumeration did not close within the row budget.  Never a wrong answer."""


# --------------------------------------------------------------------------
# words


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def invert(word: Sequence[int]) -> Word:
    return tuple(-a for a in reversed(word))


def canonical_relator(word: Iterable[int]) -> Word:
    """Least rotation of the cyclically reduced word or of its inverse.

    All these words have the same normal closure, so they are interchangeable
    as relators.
    """
    w = cyclic_reduce(word)
    if not w:
        return w
    best = None
    for cand in (w, invert(w)):
        for k in range(len(cand)):
            r = cand[k:] + cand[:k]
            key = (tuple(abs(a) for a in r), r)
            if best is None or key < best[0]:
                best = (key, r)
    return best[1]


def dedup_relators(relators: Iterable[Iterable[int]]) -> list[Word]:
    """Free and cyclic reduction, canonical rotation, then sorted dedup."""
    seen = {canonical_relator(r) for r in relators}
    seen.discard(())
    return sorted(seen, key=lambda r: (len(r), tuple(abs(a) for a in r), r))


# --------------------------------------------------------------------------
# Tietze-style elimination of generators fixed by relators of length <= 2


class _Elimination:
    """Union-find over generators with signs; the pseudo-root ``-1`` is the identity."""

    def __init__(self, ngens: int):
        self.parent = list(range(ngens))
        self.sign = [1] * ngens

    def find(self, g: int) -> tuple[int, int]:
        s = 1
        path = []
        while g >= 0 and self.parent[g] != g:
            path.append(g)
            s *= self.sign[g]
            g = self.parent[g]
        root = g
        # path compression
        acc = s
        for h in path:
            hs = self.sign[h]
            self.parent[h] = root
            self.sign[h] = acc
            acc *= hs
        return root, s

    def letter(self, a: int) -> tuple[int, int] | None:
        """Current (root, exponent) of a signed letter; None if it is the identity."""
        g = abs(a) - 1
        r, s = self.find(g)
        if r < 0:
            return None
        return r, s * (1 if a > 0 else -1)

    def make_identity(self, root: int) -> None:
        self.parent[root] = -1
        self.sign[root] = 1

    def equate(self, r1: int, e1: int, r2: int, e2: int) -> bool:
        """Impose r1^e1 = r2^e2 for distinct roots; returns True on a merge."""
        if r1 == r2:
            return False
        hi, lo = max(r1, r2), min(r1, r2)
        # hi^ehi = lo^elo  =>  hi = lo^(elo * ehi)
        ehi, elo = (e1, e2) if hi == r1 else (e2, e1)
        self.parent[hi] = lo
        self.sign[hi] = elo * ehi
        return True

    def rewrite(self, word: Word) -> Word:
        out = []
        for a in word:
            lt = self.letter(a)
            if lt is not None:
                r, e = lt
                out.append((r + 1) * e)
        return tuple(out)


def simplify(ngens: int, relators: Sequence[Word]) -> tuple[_Elimination, list[Word]]:
    elim = _Elimination(ngens)
    rels = dedup_relators(relators)
    while True:
        changed = False
        for r in rels:
            if len(r) == 1:
                lt = elim.letter(r[0])
                if lt is not None:
                    elim.make_identity(lt[0])
                    changed = True
            elif len(r) == 2 and abs(r[0]) != abs(r[1]):
                a, b = elim.letter(r[0]), elim.letter(r[1])
                if a is None and b is None:
                    continue
                if a is None or b is None:
                    elim.make_identity((b or a)[0])
                    changed = True
                else:
                    # a b = 1  =>  a = b^-1
                    changed |= elim.equate(a[0], a[1], b[0], -b[1])
        if not changed:
            return elim, rels
        rels = dedup_relators(elim.rewrite(r) for r in rels)


# --------------------------------------------------------------------------
# HLT enumeration


class _CosetTable:
    def __init__(self, ncols: int, budget: int):
        self.ncols = ncols
        self.budget = budget
        self.table: list[list[int]] = [[-1] * ncols]
        self.p: list[int] = [0]
        self.live = 1

    def rep(self, c: int) -> int:
        p = self.p
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def define(self, a: int, x: int) -> None:
        if self.live >= self.budget:
            raise BudgetExceeded(f"coset enumeration exceeded {self.budget} live rows")
        b = len(self.table)
        self.table.append([-1] * self.ncols)
        self.p.append(b)
        self.live += 1
        self.table[a][x] = b
        self.table[b][x ^ 1] = a

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        k, l = min(k, l), max(k, l)
        self.p[l] = k
        self.live -= 1
        queue.append(l)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        table = self.table
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            row = table[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                table[d][x ^ 1] = -1
                mu, nu = self.rep(g), self.rep(d)
                if table[mu][x] >= 0:
                    self._merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] >= 0:
                    self._merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(self, alpha: int, word: Sequence[int]) -> None:
        table = self.table
        r = len(word)
        f, b = alpha, alpha
        i, j = 0, r - 1
        while True:
            while i <= j and table[f][word[i]] >= 0:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != alpha:
                    self.coincidence(f, alpha)
                return
            while j >= i and table[b][word[j] ^ 1] >= 0:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def run(self, relators: list[list[int]]) -> None:
        alpha = 0
        while alpha < len(self.table):
            if self.p[alpha] == alpha:
                for w in relators:
                    self.scan_and_fill(alpha, w)
                    if self.p[alpha] != alpha:
                        break
                if self.p[alpha] == alpha:
                    row = self.table[alpha]
                    for x in range(self.ncols):
                        if row[x] < 0:
                            self.define(alpha, x)
            alpha += 1


@dataclass(frozen=True)
class EnumeratedGroup:
    """Result of enumerating a presented finite group.

    ``mul`` is the full table; ``gen_images[i]`` is the element of generator
    ``i``.  Elements are numbered breadth-first from the identity along the
    generators in index order, and ``parent[v] * gen_images[parent_gen[v]] = v``
    records each element's first word.
    """

    mul: np.ndarray
    gen_images: np.ndarray
    parent: np.ndarray
    parent_gen: np.ndarray

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def word(self, v: int) -> list[int]:
        out = []
        while v != 0:
            out.append(int(self.parent_gen[v]))
            v = int(self.parent[v])
        return out[::-1]


def bfs_words(mul: np.ndarray, gen_images: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Breadth-first order of the elements along right multiplication by generators.

    Returns ``(order, parent, parent_gen)`` in the new numbering; ``order[i]`` is
    the old id of new element ``i``.  Generators with repeated or identity images
    are skipped in favour of the first index carrying that image.
    """
    n = mul.shape[0]
    firsts = []
    seen_img = {0}
    for g, e in enumerate(gen_images.tolist()):
        if e not in seen_img:
            seen_img.add(e)
            firsts.append((g, e))
    pos = np.full(n, -1, dtype=np.intp)
    order = [0]
    pos[0] = 0
    parent = [0]
    parent_gen = [-1]
    q = deque([0])
    while q:
        a = q.popleft()
        for g, e in firsts:
            b = int(mul[a, e])
            if pos[b] < 0:
                pos[b] = len(order)
                order.append(b)
                parent.append(int(pos[a]))
                parent_gen.append(g)
                q.append(b)
    if len(order) != n:
        raise MlaError("generators do not generate the group")
    return np.array(order, dtype=np.intp), np.array(parent, dtype=np.intp), np.array(parent_gen, dtype=np.intp)


def renumber(mul: np.ndarray, gen_images: np.ndarray) -> EnumeratedGroup:
    order, parent, parent_gen = bfs_words(mul, gen_images)
    pos = np.empty_like(order)
    pos[order] = np.arange(len(order))
    new_mul = pos[mul[np.ix_(order, order)]]
    return EnumeratedGroup(new_mul, pos[gen_images], parent, parent_gen)


def enumerate_presented_group(
    ngens: int, relators: Sequence[Sequence[int]], budget: int = DEFAULT_BUDGET
) -> EnumeratedGroup:
    """Multiplication table of ``<g_0..g_{ngens-1} | relators>``.

    Generators forced equal (up to inversion) or trivial by short relators are
    eliminated first; HLT enumeration then runs on the survivors with
    define-least-first row scanning.  Raises `BudgetExceeded` when more than
    ``budget`` live rows would be needed.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    for r in relators:
        for a in r:
            if a == 0 or abs(a) > ngens:
                raise ValueError(f"letter {a} out of range for {ngens} generators")
    elim, rels = simplify(ngens, [tuple(r) for r in relators])
    roots = sorted({elim.find(g)[0] for g in range(ngens)} - {-1})
    col_of = {r: k for k, r in enumerate(roots)}

    def letters(word):
        out = []
        for a in word:
            k = col_of[abs(a) - 1]
            out.append(2 * k if a > 0 else 2 * k + 1)
        return out

    ct = _CosetTable(2 * len(roots), budget)
    ct.run([letters(r) for r in rels])

    live = [c for c in range(len(ct.table)) if ct.p[c] == c]
    pos = {c: i for i, c in enumerate(live)}
    m = len(live)
    fwd = np.zeros((m, len(roots)), dtype=np.intp)
    for c in live:
        row = ct.table[c]
        for k in range(len(roots)):
            fwd[pos[c], k] = pos[ct.rep(row[2 * k])]
    # right-regular action: element v acts by tracing its word; build mul by BFS
    gen_el = fwd[0]  # image of each root generator
    mul = np.zeros((m, m), dtype=np.intp)
    seen = np.zeros(m, dtype=bool)
    seen[0] = True
    mul[:, 0] = np.arange(m)
    q = deque([0])
    while q:
        v = q.popleft()
        for k in range(len(roots)):
            u = fwd[v, k]
            if not seen[u]:
                seen[u] = True
                mul[:, u] = fwd[mul[:, v], k]
                q.append(u)

    images = np.zeros(ngens, dtype=np.intp)
    inv = np.argmin(mul, axis=1)
    for g in range(ngens):
        r, s = elim.find(g)
        if r < 0:
            images[g] = 0
        else:
            e = gen_el[col_of[r]]
            images[g] = e if s > 0 else inv[e]
    return renumber(mul, images)
