"""Finite groups as explicit Cayley tables, and the counting geometry on them.

Haar measure is counting measure throughout, so ``mu(E) = len(E)``. Elements
are the integers ``0..n-1``. Groups built from coordinates (cyclic products,
Heisenberg groups) use a mixed-radix encoding with the first coordinate
varying fastest, e.g. in Z2 x Z2 the order is (0,0), (1,0), (0,1), (1,1).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import prod

import numpy as np

from .errors import OrderTooLarge, WrongGroupKind

MAX_ORDER = 4096
EXHAUSTIVE_ASSOC_LIMIT = 256


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    cayley: np.ndarray
    inverse: np.ndarray
    identity: int
    label: str = ""
    kind: str = "table"
    radices: tuple[int, ...] | None = None
    generators: tuple[int, ...] | None = None

    @classmethod
    def from_table(cls, cayley, label="", kind="table", radices=None, generators=None):
        """Build a group from a multiplication table, deriving identity and inverses.

        Raises ValueError if the table has no two-sided identity or some
        element has no right inverse. Associativity is *not* checked here,
        see :func:`validate_group`.
        """
        table = np.array(cayley, dtype=np.int32)
        n = table.shape[0]
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise ValueError("cayley table must be a non-empty square array")
        if table.min() < 0 or table.max() >= n:
            raise ValueError("cayley entries out of range")
        ar = np.arange(n)
        ids = [e for e in range(n) if np.array_equal(table[e], ar) and np.array_equal(table[:, e], ar)]
        if not ids:
            raise ValueError("table has no identity element")
        e = ids[0]
        inverse = np.empty(n, dtype=np.int32)
        for x in range(n):
            hits = np.flatnonzero(table[x] == e)
            if hits.size == 0:
                raise ValueError(f"element {x} has no inverse")
            inverse[x] = hits[0]
        table.setflags(write=False)
        inverse.setflags(write=False)
        return cls(n, table, inverse, e, label, kind, radices, generators)

    def __len__(self):
        return self.order

    def mul(self, x, y):
        return int(self.cayley[x, y])

    def inv(self, x):
        return int(self.inverse[x])

    def encode(self, coords):
        if self.radices is None:
            raise WrongGroupKind(f"group {self.label!r} has no coordinate encoding")
        return int(np.ravel_multi_index(tuple(int(c) % r for c, r in zip(coords, self.radices)),
                                        self.radices, order="F"))

    def decode(self, x):
        if self.radices is None:
            raise WrongGroupKind(f"group {self.label!r} has no coordinate encoding")
        return tuple(int(c) for c in np.unravel_index(x, self.radices, order="F"))

    def product_set(self, a, b):
        """Sorted array of all products x*y with x in a, y in b."""
        a = np.asarray(list(a), dtype=np.int64)
        b = np.asarray(list(b), dtype=np.int64)
        if a.size == 0 or b.size == 0:
            return np.empty(0, dtype=np.int64)
        return np.unique(self.cayley[np.ix_(a, b)])

    def complement(self, a):
        mask = np.ones(self.order, dtype=bool)
        mask[np.asarray(list(a), dtype=np.int64)] = False
        return np.flatnonzero(mask)

    def element_order(self, x):
        k, y = 1, x
        while y != self.identity:
            y = int(self.cayley[y, x])
            k += 1
        return k

    def is_abelian(self):
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def center(self):
        return tuple(int(z) for z in range(self.order)
                     if np.array_equal(self.cayley[z], self.cayley[:, z]))


def make_cyclic_product(moduli):
    """Z_{m1} x ... x Z_{mk} with componentwise addition."""
    moduli = tuple(int(m) for m in moduli)
    if not moduli or any(m < 1 for m in moduli):
        raise ValueError("moduli must be positive integers")
    n = prod(moduli)
    if n > MAX_ORDER:
        raise OrderTooLarge(f"order {n} exceeds cap {MAX_ORDER}")
    coords = np.array(np.unravel_index(np.arange(n), moduli, order="F"), dtype=np.int64)
    summed = [(c[:, None] + c[None, :]) % m for c, m in zip(coords, moduli)]
    table = np.ravel_multi_index(summed, moduli, order="F")
    gens = []
    for i, m in enumerate(moduli):
        if m > 1:
            unit = [0] * len(moduli)
            unit[i] = 1
            gens.append(int(np.ravel_multi_index(unit, moduli, order="F")))
    label = "x".join(f"Z{m}" for m in moduli)
    return FiniteGroup.from_table(table, label, "cyclic", moduli, tuple(gens))


def make_heisenberg(N):
    """Discrete Heisenberg group over Z_N: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')."""
    N = int(N)
    if N < 2:
        raise ValueError("Heisenberg group needs N >= 2")
    if N ** 3 > MAX_ORDER:
        raise OrderTooLarge(f"order {N ** 3} exceeds cap {MAX_ORDER}")
    radices = (N, N, N)
    n = N ** 3
    a, b, c = np.unravel_index(np.arange(n), radices, order="F")
    pa = (a[:, None] + a[None, :]) % N
    pb = (b[:, None] + b[None, :]) % N
    pc = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % N
    table = np.ravel_multi_index((pa, pb, pc), radices, order="F")
    gens = sorted({int(np.ravel_multi_index(v, radices, order="F"))
                   for v in [(1, 0, 0), (N - 1, 0, 0), (0, 1, 0), (0, N - 1, 0)]})
    return FiniteGroup.from_table(table, f"Heis({N})", "heisenberg", radices, tuple(gens))


@dataclass
class GroupReport:
    violations: list

    @property
    def ok(self):
        return not self.violations


def validate_group(g, seed=0, max_report=10):
    """Check identity, inverse and associativity laws against the stored fields.

    Associativity is exhaustive up to order 256 and sampled (10 n^2 random
    triples) above. Returns a :class:`GroupReport`; never raises on bad tables.
    """
    n = g.order
    T = np.asarray(g.cayley)
    out = []
    if T.shape != (n, n):
        return GroupReport([("shape", T.shape)])
    if T.min() < 0 or T.max() >= n:
        return GroupReport([("range", int(T.min()), int(T.max()))])
    e = g.identity
    for x in range(n):
        if T[e, x] != x or T[x, e] != x:
            out.append(("identity", x))
        if T[x, g.inverse[x]] != e:
            out.append(("inverse", x))
    if n <= EXHAUSTIVE_ASSOC_LIMIT:
        left = T[T, :]                                  # (xy)z
        right = T[np.arange(n)[:, None, None], T[None, :, :]]   # x(yz)
        bad = np.argwhere(left != right)
    else:
        rng = np.random.default_rng(seed)
        xyz = rng.integers(0, n, size=(10 * n * n, 3))
        x, y, z = xyz.T
        mask = T[T[x, y], z] != T[x, T[y, z]]
        bad = xyz[mask]
    for trip in bad[:max_report]:
        out.append(("associativity", tuple(int(t) for t in trip)))
    return GroupReport(out)


@dataclass(frozen=True)
class Window:
    elements: tuple[int, ...]
    symmetric: bool
    contains_identity: bool

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.elements

    @property
    def array(self):
        return np.asarray(self.elements, dtype=np.int64)


def make_window(group, elements):
    elems = tuple(sorted({int(x) for x in elements}))
    if any(x < 0 or x >= group.order for x in elems):
        raise ValueError("window element outside the group")
    s = set(elems)
    return Window(elems, all(group.inv(x) in s for x in elems), group.identity in s)


def full_window(group):
    return make_window(group, range(group.order))


def identity_window(group):
    return make_window(group, [group.identity])


def symmetrize(group, elements):
    s = {int(x) for x in elements}
    return make_window(group, s | {group.inv(x) for x in s} | {group.identity})


def index_set(group, elements):
    """Validate and canonicalize an index set: sorted tuple, no duplicates."""
    elems = [int(x) for x in elements]
    if len(set(elems)) != len(elems):
        raise ValueError("index set contains duplicates")
    if any(x < 0 or x >= group.order for x in elems):
        raise ValueError("index set element outside the group")
    return tuple(sorted(elems))


def window_sequence(windows):
    """Check that windows are nested and return them as a tuple."""
    windows = tuple(windows)
    if not windows:
        raise ValueError("window sequence must be nonempty")
    for i, (a, b) in enumerate(zip(windows, windows[1:])):
        if not set(a.elements) <= set(b.elements):
            raise ValueError(f"window {i} is not contained in window {i + 1}")
    return windows


def box_window(group, radius):
    if group.kind != "cyclic":
        raise WrongGroupKind("box windows need a cyclic product group")
    offsets = [sorted({d % m for d in range(-radius, radius + 1)}) for m in group.radices]
    grids = np.meshgrid(*offsets, indexing="ij")
    idx = np.ravel_multi_index([gr.ravel() for gr in grids], group.radices, order="F")
    return make_window(group, idx)


def ball_window(group, generators, radius):
    """Ball of the word metric for the symmetrized generator set (right multiplication)."""
    gens = {int(s) for s in generators}
    gens |= {group.inv(s) for s in gens}
    seen = {group.identity}
    frontier = [group.identity]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for s in gens:
                y = group.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return make_window(group, seen)


def generating_set(group):
    """Greedy generating set: add the smallest element outside the generated subgroup."""
    if group.generators:
        return group.generators
    gens = []
    reached = {group.identity}
    while len(reached) < group.order:
        s = min(set(range(group.order)) - reached)
        gens.append(s)
        queue = deque(reached)
        while queue:
            x = queue.popleft()
            for t in gens:
                y = group.mul(x, t)
                if y not in reached:
                    reached.add(y)
                    queue.append(y)
    return tuple(gens)


def canonical_windows(group):
    """Nested canonical windows, smallest first, ending at the whole group.

    Boxes for cyclic products, word-metric balls otherwise.
    """
    out = []
    r = 0
    while True:
        if group.kind == "cyclic":
            w = box_window(group, r)
        else:
            w = ball_window(group, generating_set(group), r)
        if not out or len(w) > len(out[-1]):
            out.append(w)
        if len(w) == group.order:
            return tuple(out)
        r += 1


def folner_defect(group, Kn, K):
    """#(Kn K  intersect  Kn^c K) / #Kn as an exact fraction."""
    Kn = list(Kn)
    inner = group.product_set(Kn, K)
    outer = group.product_set(group.complement(Kn), K)
    return Fraction(int(np.intersect1d(inner, outer).size), len(Kn))


def _indicator(group, lam):
    mask = np.zeros(group.order, dtype=bool)
    mask[np.asarray(list(lam), dtype=np.int64)] = True
    return mask


def translate_counts(group, lam, K):
    """Array over x of #(lam intersect xK)."""
    K = np.asarray(list(K), dtype=np.int64)
    return _indicator(group, lam)[group.cayley[:, K]].sum(axis=1)


def relative_separation(group, lam, Q):
    """max over x of #(lam intersect xQ)."""
    if len(lam) == 0:
        return 0
    return int(translate_counts(group, lam, Q).max())


def is_U_dense(group, lam, U):
    if len(lam) == 0:
        return False
    covered = group.product_set(lam, U)
    return covered.size == group.order


def packing_cover_bound(group, lam, U, K):
    """(#(lam intersect U), Rel_K(lam)/#K * #(UK)); the first never exceeds the second."""
    count = int(_indicator(group, lam)[np.asarray(list(U), dtype=np.int64)].sum()) if len(U) else 0
    rel = relative_separation(group, lam, K)
    bound = Fraction(rel, len(K)) * int(group.product_set(U, K).size)
    return count, bound
