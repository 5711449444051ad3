"""Finite groups as validated Cayley tables, plus the named catalog.

Elements are dense integer indices ``0..n-1``.  Each catalog constructor fixes
a normal-form encoding so that tables, labels and exports are reproducible:

* ``cyclic(n)``: index ``k`` is ``a^k``.
* ``direct_product_cyclic(n, m)``: index ``i*m + j`` is ``a^i b^j``.
* ``dihedral(n)``: index ``i + n*j`` is ``r^i s^j``.
* ``metacyclic(p, q)``: index ``i + p*j`` is ``s^i t^j``.
* ``symmetric(n)`` / ``alternating(n)``: lexicographic rank of the one-line
  notation among the listed permutations; products compose right to left,
  ``(a*b)(x) = a(b(x))``.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadCongruence,
    BadOrder,
    MissingInverse,
    NoIdentity,
    NotAssociative,
    NotLatinSquare,
    NotPrime,
    UnknownGroup,
)

ASSOCIATIVITY_BOUND = 64
SPOT_CHECK_TRIPLES = 10_000
MAX_SYMMETRIC_DEGREE = 7


def _index_dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group stored as its Cayley table.

    Use :func:`make_group_from_cayley` or one of the catalog constructors
    rather than instantiating directly; they validate the table.
    """

    name: str
    cayley: np.ndarray
    identity: int
    inverse: np.ndarray
    labels: tuple[str, ...]
    generators: tuple[int, ...]
    meta: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return int(self.cayley.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (
            self is other
            or (
                self.name == other.name
                and self.labels == other.labels
                and np.array_equal(self.cayley, other.cayley)
            )
        )

    def __hash__(self) -> int:
        return hash((self.name, self.order, self.cayley.tobytes()))

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def prod(self, *elems: int) -> int:
        out = self.identity
        for e in elems:
            out = int(self.cayley[out, e])
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        for _ in range(k):
            out = int(self.cayley[out, a])
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.cayley[x, a])
            k += 1
        return k

    def label(self, a: int) -> str:
        return self.labels[a]

    def index_of(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an element label of {self.name}") from None

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def element_orders(self) -> np.ndarray:
        return np.array([self.element_order(a) for a in self.elements()])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    @cached_property
    def center(self) -> tuple[int, ...]:
        commutes = (self.cayley == self.cayley.T).all(axis=1)
        return tuple(int(i) for i in np.flatnonzero(commutes))

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        n = self.order
        g = np.arange(n)
        seen = np.zeros(n, dtype=bool)
        classes = []
        for h in range(n):
            if seen[h]:
                continue
            cls = np.unique(self.cayley[self.cayley[g, h], self.inverse[g]])
            seen[cls] = True
            classes.append(tuple(int(x) for x in cls))
        return tuple(classes)

    def closure(self, gens: Iterable[int]) -> list[int]:
        """Elements of the subgroup generated by ``gens``, in discovery order."""
        gens = list(gens)
        seen = {self.identity}
        order = [self.identity]
        queue = deque(order)
        while queue:
            x = queue.popleft()
            for g in gens:
                y = int(self.cayley[x, g])
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
        return order

    def opposite(self) -> FiniteGroup:
        """The opposite group, with product ``a *' b = b * a``."""
        return FiniteGroup(
            name=f"{self.name}^op",
            cayley=_frozen(self.cayley.T.copy()),
            identity=self.identity,
            inverse=self.inverse,
            labels=self.labels,
            generators=self.generators,
            meta=dict(self.meta),
        )


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _check_associative(t: np.ndarray, bound: int, rng_seed: int = 0) -> None:
    n = t.shape[0]
    if n <= bound:
        lhs = t[t, :]  # (a*b)*c indexed [a, b, c]
        rhs = t[:, t]  # a*(b*c) indexed [a, b, c]
        bad = lhs != rhs
        if bad.any():
            a, b, c = np.unravel_index(int(np.argmax(bad)), bad.shape)
            raise NotAssociative(f"(a*b)*c != a*(b*c) for triple ({a}, {b}, {c})")
        return
    rng = np.random.default_rng(rng_seed)
    a, b, c = rng.integers(0, n, size=(3, SPOT_CHECK_TRIPLES))
    bad = t[t[a, b], c] != t[a, t[b, c]]
    if bad.any():
        k = int(np.argmax(bad))
        raise NotAssociative(f"(a*b)*c != a*(b*c) for triple ({a[k]}, {b[k]}, {c[k]})")


def _greedy_generators(t: np.ndarray, identity: int) -> tuple[int, ...]:
    n = t.shape[0]
    if n == 1:
        return (identity,)
    gens: list[int] = []
    covered = {identity}
    for g in range(n):
        if g in covered:
            continue
        gens.append(g)
        # regenerate the closure; cheap for catalog sizes
        covered = {identity}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for h in gens:
                y = int(t[x, h])
                if y not in covered:
                    covered.add(y)
                    queue.append(y)
        if len(covered) == n:
            break
    return tuple(gens)


def make_group_from_cayley(
    table,
    labels: Sequence[str] | None = None,
    *,
    name: str = "G",
    generators: Sequence[int] | None = None,
    assoc_bound: int = ASSOCIATIVITY_BOUND,
    meta: dict | None = None,
) -> FiniteGroup:
    """Validate a multiplication table and wrap it as a :class:`FiniteGroup`.

    Identity and inverses are read off the table.  When ``generators`` is not
    given they are chosen greedily by ascending index.  Associativity is
    checked on every triple up to ``assoc_bound`` elements and spot-checked on
    random triples above it.
    """
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotLatinSquare(f"table must be a nonempty square array, got shape {t.shape}")
    n = t.shape[0]
    if not np.issubdtype(t.dtype, np.integer):
        raise NotLatinSquare("table entries must be integers")
    if t.min() < 0 or t.max() >= n:
        raise NotLatinSquare(f"table entries must lie in [0, {n})")
    t = t.astype(_index_dtype(n))
    ref = np.arange(n)
    rows_ok = (np.sort(t, axis=1) == ref).all(axis=1)
    if not rows_ok.all():
        raise NotLatinSquare(f"row {int(np.argmin(rows_ok))} is not a permutation")
    cols_ok = (np.sort(t, axis=0) == ref[:, None]).all(axis=0)
    if not cols_ok.all():
        raise NotLatinSquare(f"column {int(np.argmin(cols_ok))} is not a permutation")

    unit = np.flatnonzero((t == ref).all(axis=1) & (t.T == ref).all(axis=1))
    if unit.size == 0:
        raise NoIdentity("no element acts as a two-sided identity")
    e = int(unit[0])

    right_inv = np.argmax(t == e, axis=1)
    two_sided = t[right_inv, ref] == e
    if not two_sided.all():
        a = int(np.argmin(two_sided))
        raise MissingInverse(f"element {a} has no two-sided inverse (row {a})")

    _check_associative(t, assoc_bound)

    if labels is None:
        labels = [str(i) for i in range(n)]
    labels = tuple(str(x) for x in labels)
    if len(labels) != n or len(set(labels)) != n:
        raise ValueError("labels must be n distinct strings")

    if generators is None:
        gens = _greedy_generators(t, e)
    else:
        gens = tuple(int(g) for g in generators) or (e,)
    group = FiniteGroup(
        name=name,
        cayley=_frozen(t),
        identity=e,
        inverse=_frozen(right_inv.astype(t.dtype)),
        labels=labels,
        generators=gens,
        meta=dict(meta or {}),
    )
    if len(group.closure(gens)) != n:
        raise ValueError(f"generators {gens} do not generate {name}")
    return group


# ---------------------------------------------------------------------------
# catalog constructors


def _pow_label(sym: str, k: int) -> str:
    if k == 0:
        return ""
    if k == 1:
        return sym
    return f"{sym}^{k}"


def _word(*parts: str) -> str:
    word = "".join(parts)
    return word or "1"


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise BadOrder(f"cyclic group needs n >= 1, got {n}")
    k = np.arange(n)
    table = (k[:, None] + k[None, :]) % n
    labels = [_word(_pow_label("a", i)) for i in range(n)]
    return make_group_from_cayley(table, labels, name=f"C{n}", generators=[1 % n])


def direct_product_cyclic(n: int, m: int) -> FiniteGroup:
    if n < 1 or m < 1:
        raise BadOrder(f"C{n}xC{m}: orders must be positive")
    i, j = np.divmod(np.arange(n * m), m)
    table = ((i[:, None] + i[None, :]) % n) * m + (j[:, None] + j[None, :]) % m
    labels = [_word(_pow_label("a", a), _pow_label("b", b)) for a, b in zip(i, j)]
    gens = sorted({(1 % n) * m, 1 % m} - {0}) or [0]
    return make_group_from_cayley(table, labels, name=f"C{n}xC{m}", generators=gens)


def dihedral(n: int) -> FiniteGroup:
    """The dihedral group ``<r, s | r^n = s^2 = rsrs = 1>`` of order 2n."""
    if n < 3:
        raise BadOrder(f"dihedral(n) requires n >= 3, got {n}")
    j, i = np.divmod(np.arange(2 * n), n)
    # r^i s^j * r^k s^l = r^(i + (-1)^j k) s^(j + l)
    sign = 1 - 2 * j
    rexp = (i[:, None] + sign[:, None] * i[None, :]) % n
    sexp = (j[:, None] + j[None, :]) % 2
    table = rexp + n * sexp
    labels = [_word(_pow_label("r", a), _pow_label("s", b)) for a, b in zip(i, j)]
    return make_group_from_cayley(table, labels, name=f"D{n}", generators=[1, n])


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % k for k in range(2, int(p**0.5) + 1))


def multiplicative_order(a: int, p: int) -> int:
    k, x = 1, a % p
    while x != 1:
        x = x * a % p
        k += 1
    return k


def metacyclic(p: int, q: int) -> FiniteGroup:
    """The nonabelian group ``<s, t | s^p = t^q = 1, t s t^-1 = s^d>`` of order pq."""
    for x in (p, q):
        if not is_prime(x):
            raise NotPrime(f"{x} is not prime")
    if p % q != 1:
        raise BadCongruence(f"need p = 1 mod q, got p={p}, q={q}")
    d = next(x for x in range(2, p) if multiplicative_order(x, p) == q)
    j, i = np.divmod(np.arange(p * q), p)
    # t^b s^c = s^(c d^b) t^b
    dpow = np.array([pow(d, int(b), p) for b in range(q)])
    sexp = (i[:, None] + i[None, :] * dpow[j][:, None]) % p
    texp = (j[:, None] + j[None, :]) % q
    table = sexp + p * texp
    labels = [_word(_pow_label("s", a), _pow_label("t", b)) for a, b in zip(i, j)]
    return make_group_from_cayley(
        table, labels, name=f"M{p}_{q}", generators=[1, p], meta={"p": p, "q": q, "d": d}
    )


def cycle_notation(perm: Sequence[int]) -> str:
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def parity(perm: Sequence[int]) -> int:
    """0 for even permutations, 1 for odd."""
    seen = [False] * len(perm)
    swaps = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        swaps += length - 1
    return swaps % 2


def _cycle_perm(n: int, cycle: Sequence[int]) -> tuple[int, ...]:
    perm = list(range(n))
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        perm[a] = b
    return tuple(perm)


def _permutation_group(perms: list[tuple[int, ...]], degree: int, name: str, gens, meta) -> FiniteGroup:
    P = np.array(perms, dtype=np.int64).reshape(len(perms), degree)
    weights = degree ** np.arange(degree - 1, -1, -1, dtype=np.int64)
    codes = P @ weights
    N = len(perms)
    table = np.empty((N, N), dtype=_index_dtype(N))
    chunk = max(1, 2_000_000 // max(1, N * degree))
    for start in range(0, N, chunk):
        # (a*b)(x) = a(b(x)): rows a, columns b
        a = P[start : start + chunk]
        comp = np.take_along_axis(
            a[:, None, :].repeat(N, axis=1), P[None, :, :].repeat(len(a), axis=0), axis=2
        )
        table[start : start + chunk] = np.searchsorted(codes, comp @ weights)
    index = {p: k for k, p in enumerate(perms)}
    gen_idx = sorted({index[g] for g in gens})
    labels = [cycle_notation(p) for p in perms]
    meta = dict(meta, degree=degree, perms=tuple(perms))
    return make_group_from_cayley(table, labels, name=name, generators=gen_idx, meta=meta)


def _check_degree(n: int) -> None:
    if not 1 <= n <= MAX_SYMMETRIC_DEGREE:
        raise BadOrder(f"degree must lie in [1, {MAX_SYMMETRIC_DEGREE}], got {n}")


def symmetric(n: int) -> FiniteGroup:
    _check_degree(n)
    perms = list(itertools.permutations(range(n)))
    gens = [tuple(range(n))]
    if n >= 2:
        gens = [_cycle_perm(n, [0, 1]), _cycle_perm(n, list(range(n)))]
    return _permutation_group(perms, n, f"S{n}", gens, {})


def alternating(n: int) -> FiniteGroup:
    _check_degree(n)
    perms = [p for p in itertools.permutations(range(n)) if parity(p) == 0]
    gens = [tuple(range(n))]
    if n >= 3:
        tail = list(range(n)) if n % 2 else list(range(1, n))
        gens = [_cycle_perm(n, [0, 1, 2])]
        if len(tail) >= 3:
            gens.append(_cycle_perm(n, tail))
    return _permutation_group(perms, n, f"A{n}", gens, {})


# ---------------------------------------------------------------------------
# name lookup

_PATTERNS = [
    (re.compile(r"^C(\d+)xC(\d+)$"), direct_product_cyclic),
    (re.compile(r"^C(\d+)$"), cyclic),
    (re.compile(r"^D(\d+)$"), dihedral),
    (re.compile(r"^S(\d+)$"), symmetric),
    (re.compile(r"^A(\d+)$"), alternating),
    (re.compile(r"^M_?(\d+)_(\d+)$"), metacyclic),
]

CATALOG = (
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C15", "C2xC2", "C2xC4", "C3xC3",
    "D3", "D4", "D5", "D6", "D7", "D8", "D9", "D10", "D11", "D12",
    "S3", "S4", "S5", "A4", "A5",
    "M3_2", "M5_2", "M7_2", "M7_3", "M13_3",
)


def group_by_name(name: str) -> FiniteGroup:
    """Resolve a catalog name such as ``D4``, ``S5``, ``M7_3`` or ``C2xC2``."""
    return _cached_group(name.strip())


_cache: dict[str, FiniteGroup] = {}


def _cached_group(name: str) -> FiniteGroup:
    if name not in _cache:
        for pattern, build in _PATTERNS:
            m = pattern.match(name)
            if m:
                _cache[name] = build(*(int(x) for x in m.groups()))
                break
        else:
            raise UnknownGroup(f"unknown group name {name!r}")
    return _cache[name]


def conjugacy_classes(G: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """Conjugacy classes of ``G`` sorted by their minimal element."""
    return G.conjugacy_classes


def center(G: FiniteGroup) -> tuple[int, ...]:
    return G.center
