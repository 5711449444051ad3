"""Regular G-stable subgroups of Perm(G) built from fixed point free abelian maps.

Permutations are n-vectors ``p`` with ``p[x]`` the image of element ``x``;
they compose right to left, ``(p q)[x] = p[q[x]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from .errors import NotClosed, NotRegular
from .groups import FiniteGroup

if TYPE_CHECKING:
    from .morphisms import GroupMap


@dataclass(frozen=True, eq=False)
class RegularSubgroup:
    """A set of permutations of ``G`` indexed by group elements.

    ``members[i]`` is the permutation named by element ``label[i]``; for
    subgroups built from a map ``psi`` that permutation is ``eta_g`` with
    ``g = label[i]``.
    """

    group: FiniteGroup
    members: np.ndarray
    label: np.ndarray
    psi: GroupMap | None = None
    name: str = ""

    @cached_property
    def key(self) -> frozenset:
        """Order-independent identity of the permutation set."""
        return frozenset(tuple(int(x) for x in row) for row in self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RegularSubgroup):
            return NotImplemented
        return self.group == other.group and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[tuple[int, ...]]:
        return sorted(self.key)

    def member_for(self, g: int) -> np.ndarray:
        """The permutation named by element ``g``."""
        (i,) = np.flatnonzero(self.label == g)
        return self.members[i]


def left_regular(G: FiniteGroup) -> RegularSubgroup:
    """lambda(G): ``lambda(g)[x] = g x``."""
    return RegularSubgroup(G, G.cayley.astype(np.int64), np.arange(G.order), name="lambda")


def right_regular(G: FiniteGroup) -> RegularSubgroup:
    """rho(G): ``rho(g)[x] = x g^-1``."""
    members = G.cayley[:, G.inverse].T.astype(np.int64)
    return RegularSubgroup(G, members, np.arange(G.order), name="rho")


def eta(G: FiniteGroup, psi: GroupMap, g: int) -> np.ndarray:
    """``eta_g[h] = g h psi(g^-1)``."""
    f = psi.array
    return G.cayley[G.cayley[g, :], f[G.inverse[g]]].astype(np.int64)


def regular_subgroup(G: FiniteGroup, psi: GroupMap) -> RegularSubgroup:
    """N_psi = {eta_g}, checked to be closed via ``eta_g eta_h = eta_{gh}``."""
    f = psi.array
    # members[g, h] = (g h) psi(g^-1)
    members = G.cayley[G.cayley, f[G.inverse][:, None]].astype(np.int64)
    for g in range(G.order):
        # eta_g eta_h [x] = eta_g[eta_h[x]] must equal eta_{gh}[x]
        bad = members[g][members] != members[G.cayley[g]]
        if bad.any():
            h = int(np.argmax(bad.any(axis=1)))
            raise NotClosed(f"eta_{g} eta_{h} != eta_(g h)")
    return RegularSubgroup(G, members, np.arange(G.order), psi=psi, name="N_psi")


def kappa(N: RegularSubgroup) -> np.ndarray:
    """Evaluation at the identity: ``kappa[i] = members[i][1_G]``."""
    k = N.members[:, N.group.identity]
    if len(N) != N.group.order or len(np.unique(k)) != N.group.order:
        raise NotRegular("evaluation at the identity is not a bijection")
    return k


def _compose_table(N: RegularSubgroup) -> np.ndarray:
    """Multiplication table of N on member indices, or raise NotClosed."""
    M = N.members
    index = {tuple(int(x) for x in row): i for i, row in enumerate(M)}
    n = len(M)
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        prods = M[i][M]  # row j is members[i] o members[j]
        for j in range(n):
            k = index.get(tuple(int(x) for x in prods[j]))
            if k is None:
                raise NotClosed(f"members {i} and {j} compose outside the set")
            table[i, j] = k
    return table


def is_regular(N: RegularSubgroup) -> bool:
    """Free and transitive action on G, for a set of permutations closed
    under composition."""
    G = N.group
    M = N.members
    if M.ndim != 2 or M.shape[1] != G.order:
        return False
    ident = np.arange(G.order)
    non_identity = ~(M == ident).all(axis=1)
    # free: a non-identity member fixes nothing
    if (M[non_identity] == ident).any():
        return False
    # transitive: the orbit of the identity is everything
    if len(np.unique(M[:, G.identity])) != G.order:
        return False
    try:
        _compose_table(N)
    except NotClosed:
        return False
    return True


def is_g_stable(N: RegularSubgroup) -> bool:
    """``lambda(g) eta lambda(g^-1)`` lies in N for every g and member eta.

    For subgroups built from a map also checks ``^k eta_g = eta_{k g k^-1}``.
    """
    G = N.group
    key = N.key
    C = G.cayley
    for g in range(G.order):
        ginv = G.inverse[g]
        # (lambda(g) eta lambda(g^-1))[x] = g eta[g^-1 x]
        conj = C[g][N.members[:, C[ginv]]]
        for i, row in enumerate(conj):
            if tuple(int(x) for x in row) not in key:
                return False
            if N.psi is not None:
                h = int(N.label[i])
                target = C[C[g, h], ginv]
                if not np.array_equal(row, N.member_for(target)):
                    return False
    return True


def opposite_regular_subgroup(N: RegularSubgroup) -> RegularSubgroup:
    """Transport of right translation through kappa.

    The member named like ``eta`` sends ``x`` to ``kappa^-1(x)[eta[1_G]]``.
    The result centralizes N and its brace is the opposite brace.
    """
    k = kappa(N)
    if not is_regular(N):
        raise NotRegular("opposite needs a regular subgroup")
    kinv = np.empty_like(k)
    kinv[k] = np.arange(len(k))
    e = N.group.identity
    # opp[i][x] = members[kinv[x]][members[i][e]]
    opp = N.members[kinv[None, :], N.members[:, e][:, None]]
    name = N.name[:-4] if N.name.endswith("^opp") else (N.name + "^opp" if N.name else "")
    return RegularSubgroup(N.group, opp, N.label.copy(), psi=None, name=name)


def fpf_subgroups(G: FiniteGroup, maps=None) -> set[frozenset]:
    """Distinct permutation sets among N_psi and their opposites."""
    from .morphisms import enumerate_fpf

    maps = enumerate_fpf(G) if maps is None else maps
    keys = set()
    for psi in maps:
        N = regular_subgroup(G, psi)
        keys.add(N.key)
        keys.add(opposite_regular_subgroup(N).key)
    return keys


def count_fpf_subgroups(G: FiniteGroup, maps=None) -> int:
    return len(fpf_subgroups(G, maps))
