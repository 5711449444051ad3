"""Endomorphisms, automorphisms and fixed point free abelian maps.

Homomorphisms are found by backtracking over the images of the generators.
Once a prefix of generators has images, the map is propagated along the
Cayley graph of the subgroup they generate; any inconsistency prunes the
branch.  A complete assignment that propagates without conflict is a
homomorphism, since it satisfies ``f(x*g) = f(x)*f(g)`` on every edge.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BadPsi, NotBijective, NotHomomorphic, SearchBudgetExceeded
from .groups import FiniteGroup

DEFAULT_BUDGET = 10**8
EXHAUSTIVE_LAW_BOUND = 1000
SAMPLED_PAIRS = 100_000


def default_budget() -> int:
    env = os.environ.get("YBE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True, eq=False)
class GroupMap:
    """A function between groups stored as its image vector."""

    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.source.order:
            raise ValueError("image vector length must equal the source order")

    @classmethod
    def from_images(cls, G: FiniteGroup, images: Sequence[int], target: FiniteGroup | None = None):
        return cls(G, G if target is None else target, tuple(int(x) for x in images))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.int64)

    def __call__(self, g: int) -> int:
        return self.images[g]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupMap):
            return NotImplemented
        return self.images == other.images and self.source == other.source and self.target == other.target

    def __hash__(self) -> int:
        return hash((self.source.name, self.images))

    def __repr__(self) -> str:
        return f"GroupMap({self.source.name}: {self.describe()})"

    def describe(self) -> str:
        """Images of the source generators, e.g. ``r->rs, s->rs``."""
        S, T = self.source, self.target
        return ", ".join(f"{S.label(g)}->{T.label(self.images[g])}" for g in S.generators)

    def compose(self, other: GroupMap) -> GroupMap:
        """``self o other`` (apply ``other`` first)."""
        return GroupMap(other.source, self.target, tuple(self.images[x] for x in other.images))

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(set(self.images)) == self.source.order

    def inverse(self) -> GroupMap:
        if not self.is_bijective():
            raise NotBijective(f"{self!r} is not bijective")
        inv = [0] * self.source.order
        for g, x in enumerate(self.images):
            inv[x] = g
        return GroupMap(self.target, self.source, tuple(inv))

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.images)))

    def homomorphism_violation(self) -> tuple[int, int] | None:
        """First pair ``(g, h)`` with ``f(gh) != f(g)f(h)``, or None."""
        S, T = self.source, self.target
        f = self.array
        n = S.order
        if n <= EXHAUSTIVE_LAW_BOUND:
            bad = f[S.cayley] != T.cayley[f[:, None], f[None, :]]
            if bad.any():
                g, h = np.unravel_index(int(np.argmax(bad)), bad.shape)
                return int(g), int(h)
            return None
        rng = np.random.default_rng(0)
        g, h = rng.integers(0, n, size=(2, SAMPLED_PAIRS))
        bad = f[S.cayley[g, h]] != T.cayley[f[g], f[h]]
        if bad.any():
            k = int(np.argmax(bad))
            return int(g[k]), int(h[k])
        return None

    def is_homomorphism(self) -> bool:
        return self.images[self.source.identity] == self.target.identity and self.homomorphism_violation() is None


def map_from_generators(G: FiniteGroup, gen_images: dict[int, int], target: FiniteGroup | None = None) -> GroupMap:
    """Extend images of ``G.generators`` to a homomorphism.

    Raises :class:`NotHomomorphic` if the assignment does not respect the
    relations of ``G``.
    """
    T = G if target is None else target
    gens = list(G.generators)
    missing = [g for g in gens if g not in gen_images]
    if missing:
        raise ValueError(f"no image given for generators {missing}")
    images = _propagate(G, T, gens, [gen_images[g] for g in gens])
    if images is None or -1 in images:
        raise NotHomomorphic("generator images do not extend to a homomorphism")
    return GroupMap(G, T, tuple(images))


def _propagate(G: FiniteGroup, T: FiniteGroup, gens, imgs) -> list[int] | None:
    f = [-1] * G.order
    f[G.identity] = T.identity
    queue = deque([G.identity])
    Gc, Tc = G.cayley, T.cayley
    while queue:
        x = queue.popleft()
        fx = f[x]
        for g, v in zip(gens, imgs):
            y = int(Gc[x, g])
            w = int(Tc[fx, v])
            if f[y] == -1:
                f[y] = w
                queue.append(y)
            elif f[y] != w:
                return None
    return f


def enumerate_homomorphisms(G: FiniteGroup, T: FiniteGroup | None = None, budget: int | None = None) -> list[GroupMap]:
    """All homomorphisms ``G -> T`` sorted by image vector."""
    T = G if T is None else T
    budget = default_budget() if budget is None else budget
    gens = list(G.generators)
    g_orders = [G.element_order(g) for g in gens]
    t_orders = T.element_orders
    candidates = [
        [int(x) for x in np.flatnonzero(o % t_orders == 0)] for o in g_orders
    ]
    found: list[tuple[int, ...]] = []
    nodes = 0

    def extend(depth: int, chosen: list[int]) -> None:
        nonlocal nodes
        for v in candidates[depth]:
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"node budget {budget} exhausted while searching Hom({G.name}, {T.name})")
            trial = chosen + [v]
            f = _propagate(G, T, gens[: depth + 1], trial)
            if f is None:
                continue
            if depth + 1 == len(gens):
                found.append(tuple(f))
            else:
                extend(depth + 1, trial)

    extend(0, [])
    found.sort()
    return [GroupMap(G, T, imgs) for imgs in found]


def enumerate_endomorphisms(G: FiniteGroup, budget: int | None = None) -> list[GroupMap]:
    return enumerate_homomorphisms(G, G, budget)


def automorphism_group(G: FiniteGroup, budget: int | None = None) -> list[GroupMap]:
    return [f for f in enumerate_endomorphisms(G, budget) if f.is_bijective()]


@dataclass(frozen=True)
class FpfCertificate:
    map: GroupMap
    abelian_witness: tuple[int, int] | None = None
    fixed_point_witness: int | None = None

    @property
    def valid(self) -> bool:
        return self.abelian_witness is None and self.fixed_point_witness is None

    def __bool__(self) -> bool:
        return self.valid

    def explain(self) -> str:
        T = self.map.target
        if self.valid:
            return "fixed point free abelian"
        parts = []
        if self.fixed_point_witness is not None:
            parts.append(f"fixes {T.label(self.fixed_point_witness)}")
        if self.abelian_witness is not None:
            a, b = self.abelian_witness
            parts.append(f"image elements {T.label(a)} and {T.label(b)} do not commute")
        return "; ".join(parts)


def is_fpf_abelian(psi: GroupMap) -> FpfCertificate:
    """Certify that ``psi`` has no nontrivial fixed point and abelian image.

    Witnesses name the first violation in index order: the smallest fixed
    non-identity element, and the smallest non-commuting pair of image
    elements.
    """
    G = psi.source
    f = psi.array
    fixed = np.flatnonzero(f == np.arange(G.order))
    fixed = fixed[fixed != G.identity]
    fixed_w = int(fixed[0]) if fixed.size else None
    img = np.array(psi.image())
    sub = G.cayley[np.ix_(img, img)]
    bad = sub != sub.T
    ab_w = None
    if bad.any():
        i, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
        ab_w = (int(img[i]), int(img[j]))
    return FpfCertificate(psi, ab_w, fixed_w)


def require_fpf(psi: GroupMap) -> GroupMap:
    cert = is_fpf_abelian(psi)
    if not cert.valid:
        raise BadPsi(f"{psi!r} is not fixed point free abelian: {cert.explain()}", cert)
    return psi


def trivial_map(G: FiniteGroup) -> GroupMap:
    return GroupMap(G, G, (G.identity,) * G.order)


def enumerate_fpf(G: FiniteGroup, budget: int | None = None) -> list[GroupMap]:
    """FPF(G): every fixed point free abelian endomorphism, by image vector."""
    return [f for f in enumerate_endomorphisms(G, budget) if is_fpf_abelian(f).valid]


def conjugate_map(phi: GroupMap, psi: GroupMap, phi_inv: GroupMap | None = None) -> GroupMap:
    """``phi o psi o phi^-1``."""
    phi_inv = phi.inverse() if phi_inv is None else phi_inv
    return phi.compose(psi).compose(phi_inv)


def are_brace_equivalent(psi1: GroupMap, psi2: GroupMap, aut: Sequence[GroupMap]) -> GroupMap | None:
    """First automorphism ``phi`` in ``aut`` with ``psi2 = phi psi1 phi^-1``."""
    p1, p2 = psi1.images, psi2.images
    for phi in aut:
        f = phi.images
        inv = [0] * len(f)
        for g, x in enumerate(f):
            inv[x] = g
        if all(f[p1[inv[g]]] == p2[g] for g in range(len(f))):
            return phi
    return None


def same_regular_subgroup(psi1: GroupMap, psi2: GroupMap) -> bool:
    from .perms import regular_subgroup

    return regular_subgroup(psi1.source, psi1).key == regular_subgroup(psi2.source, psi2).key


@dataclass
class FpfClassification:
    group: FiniteGroup
    all_maps: list[GroupMap]
    brace_orbits: list[list[int]]
    subgroup_classes: list[list[int]]
    automorphisms: list[GroupMap] = field(default_factory=list, repr=False)

    def representatives(self) -> list[GroupMap]:
        return [self.all_maps[orbit[0]] for orbit in self.brace_orbits]


def classify_fpf(G: FiniteGroup, budget: int | None = None) -> FpfClassification:
    """Orbits of FPF(G) under conjugation by Aut(G), and the coarser grouping
    by identical regular subgroup."""
    from .perms import regular_subgroup

    maps = enumerate_fpf(G, budget)
    aut = automorphism_group(G, budget)
    index = {m.images: k for k, m in enumerate(maps)}
    auts = [(phi.array, phi.inverse().array) for phi in aut]
    seen = [False] * len(maps)
    orbits: list[list[int]] = []
    for k, psi in enumerate(maps):
        if seen[k]:
            continue
        p = psi.array
        members = {index[tuple(int(x) for x in f[p[finv]])] for f, finv in auts}
        for m in members:
            seen[m] = True
        # maps are sorted, so the smallest member is the lexicographic minimum
        orbits.append(sorted(members))

    by_key: dict = {}
    for k, psi in enumerate(maps):
        by_key.setdefault(regular_subgroup(G, psi).key, []).append(k)
    classes = sorted(by_key.values())
    return FpfClassification(G, maps, orbits, classes, aut)
