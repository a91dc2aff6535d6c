"""Multiplication tables of the small groups used as fixtures.

Every builder returns ``(mul, names)`` with the identity at index 0.
"""

from __future__ import annotations

from itertools import permutations, product

import numpy as np


def cyclic(n: int):
    ar = np.arange(n)
    mul = (ar[:, None] + ar[None, :]) % n
    names = ["1"] + [f"a^{k}" if k > 1 else "a" for k in range(1, n)]
    return mul, names


def abelian(*orders: int):
    """Table of C_{d1} x ... x C_{dk}; tuple (e1..ek) gets its mixed-radix index."""
    if not orders:
        return np.zeros((1, 1), dtype=np.intp), ["1"]
    coords = np.array(list(product(*[range(d) for d in orders])), dtype=np.intp)
    radix = np.array([int(np.prod(orders[i + 1:])) for i in range(len(orders))], dtype=np.intp)
    mul = np.zeros((len(coords), len(coords)), dtype=np.intp)
    for t, d in enumerate(orders):
        c = coords[:, t]
        mul += (c[:, None] + c[None, :]) % d * radix[t]
    names = ["1" if not c.any() else "(" + ",".join(map(str, c)) + ")" for c in coords]
    return mul, names


def klein_four():
    return abelian(2, 2)


def dihedral(m: int):
    """Symmetries of the m-gon, order 2m: id ``k`` is r^k, id ``m + k`` is r^k s."""
    n = 2 * m
    mul = np.zeros((n, n), dtype=np.intp)
    for a, b in product(range(n), repeat=2):
        i, fa = a % m, a // m
        j, fb = b % m, b // m
        # r^i s^fa r^j s^fb = r^(i + (-1)^fa j) s^(fa + fb)
        k = (i + (j if fa == 0 else -j)) % m
        mul[a, b] = k + m * ((fa + fb) % 2)
    names = []
    for a in range(n):
        k, f = a % m, a // m
        r = "" if k == 0 else ("r" if k == 1 else f"r^{k}")
        names.append((r + ("s" if f else "")) or "1")
    return mul, names


def quaternion():
    """Q8 with ids 0..7 = 1, i, -1, -i, j, k, -j, -k (i has id 1, -1 has id 2)."""
    # represent i^a j^b with a in 0..3, b in 0..1: id = a + 4b
    n = 8
    mul = np.zeros((n, n), dtype=np.intp)
    for x, y in product(range(n), repeat=2):
        a, b = x % 4, x // 4
        c, d = y % 4, y // 4
        # j i^c = i^-c j,  j^2 = i^2
        e = (a + (c if b == 0 else -c)) % 4
        f = b + d
        if f == 2:
            e, f = (e + 2) % 4, 0
        mul[x, y] = e + 4 * f
    names = ["1", "i", "-1", "-i", "j", "k", "-j", "-k"]
    return mul, names


def generalized_quaternion(m: int):
    """Dicyclic group of order 4m: id ``k + 2m f`` is x^k y^f, x^(2m)=1, y^2=x^m."""
    n = 4 * m
    mul = np.zeros((n, n), dtype=np.intp)
    for p, q in product(range(n), repeat=2):
        a, b = p % (2 * m), p // (2 * m)
        c, d = q % (2 * m), q // (2 * m)
        e = (a + (c if b == 0 else -c)) % (2 * m)
        f = b + d
        if f == 2:
            e, f = (e + m) % (2 * m), 0
        mul[p, q] = e + 2 * m * f
    names = [f"x^{p % (2 * m)}y^{p // (2 * m)}" for p in range(n)]
    names[0] = "1"
    return mul, names


def symmetric(k: int):
    """S_k on permutations of range(k), lexicographic order (identity first)."""
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    mul = np.zeros((n, n), dtype=np.intp)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            # (p*q)(t) = p(q(t))
            mul[i, j] = index[tuple(p[q[t]] for t in range(k))]
    names = ["".join(str(v + 1) for v in p) for p in perms]
    return mul, names


def group_product(t1, t2):
    """Direct product table; pair (a, b) gets id ``a * n2 + b``."""
    mul1, names1 = t1
    mul2, names2 = t2
    n1, n2 = len(mul1), len(mul2)
    mul = (np.asarray(mul1)[:, None, :, None] * n2 + np.asarray(mul2)[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    names = [f"({a},{b})" for a in names1 for b in names2]
    names[0] = "1"
    return mul, names
