"""Skew braces from fixed point free abelian endomorphisms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BraceAxiomViolation, NotBijective, NotHomomorphic, NotRegular, NotStable
from .groups import FiniteGroup, make_group_from_cayley
from .morphisms import GroupMap, require_fpf
from .perms import RegularSubgroup, _compose_table, is_g_stable, is_regular, kappa


@dataclass(frozen=True, eq=False)
class SkewBrace:
    """``(G, ., o)``: the carrier's Cayley table is the dot product, ``circle``
    the second group law on the same index set, ``bar`` its inverses."""

    carrier: FiniteGroup
    circle: np.ndarray
    bar: np.ndarray
    source_psi: GroupMap | None = None

    @property
    def order(self) -> int:
        return self.carrier.order

    @property
    def dot(self) -> np.ndarray:
        return self.carrier.cayley

    def circ(self, a: int, b: int) -> int:
        return int(self.circle[a, b])

    def same_tables(self, other: SkewBrace) -> bool:
        return np.array_equal(self.dot, other.dot) and np.array_equal(self.circle, other.circle)

    def verify(self) -> None:
        """Raise :class:`BraceAxiomViolation` unless both group laws and the
        brace relation hold on every triple."""
        verify_brace(self.carrier, self.circle, self.bar)


def _first_true(mask: np.ndarray) -> tuple[int, ...]:
    return tuple(int(x) for x in np.unravel_index(int(np.argmax(mask)), mask.shape))


def verify_brace(G: FiniteGroup, circle: np.ndarray, bar: np.ndarray) -> None:
    n = G.order
    e = G.identity
    ref = np.arange(n)
    if not ((np.sort(circle, axis=1) == ref).all() and (np.sort(circle, axis=0) == ref[:, None]).all()):
        raise BraceAxiomViolation("circle table is not a Latin square")
    if not (np.array_equal(circle[e], ref) and np.array_equal(circle[:, e], ref)):
        raise BraceAxiomViolation("the dot identity is not the circle identity")
    if not ((circle[ref, bar] == e).all() and (circle[bar, ref] == e).all()):
        a = int(np.argmax((circle[ref, bar] != e) | (circle[bar, ref] != e)))
        raise BraceAxiomViolation(f"bar[{a}] is not the circle inverse of {a}")
    dot, inv = G.cayley, G.inverse
    # chunk over the first argument to bound memory
    step = max(1, 4_000_000 // (n * n))
    for lo in range(0, n, step):
        a = ref[lo : lo + step, None, None]
        b = ref[None, :, None]
        c = ref[None, None, :]
        assoc = circle[circle[a, b], c] != circle[a, circle[b, c]]
        if assoc.any():
            i, j, k = _first_true(assoc)
            raise BraceAxiomViolation(f"circle is not associative on ({lo + i}, {j}, {k})")
        lhs = circle[a, dot[b, c]]
        rhs = dot[dot[circle[a, b], inv[a]], circle[a, c]]
        bad = lhs != rhs
        if bad.any():
            i, j, k = _first_true(bad)
            raise BraceAxiomViolation(f"brace relation fails on ({lo + i}, {j}, {k})")


def circle_table(G: FiniteGroup, psi: GroupMap) -> np.ndarray:
    """``g o h = g psi(g^-1) h psi(g)``."""
    C, f = G.cayley, psi.array
    left = C[np.arange(G.order), f[G.inverse]]  # g psi(g^-1)
    return C[C[left[:, None], np.arange(G.order)[None, :]], f[:, None]]


def bar_vector(G: FiniteGroup, psi: GroupMap) -> np.ndarray:
    """Circle inverses ``psi(g) g^-1 psi(g^-1)``."""
    C, f, inv = G.cayley, psi.array, G.inverse
    return C[C[f, inv], f[inv]]


def build_brace(G: FiniteGroup, psi: GroupMap) -> SkewBrace:
    require_fpf(psi)
    brace = SkewBrace(G, circle_table(G, psi), bar_vector(G, psi), psi)
    brace.verify()
    return brace


def circle_inverse(B: SkewBrace, g: int) -> int:
    G, psi = B.carrier, B.source_psi
    if psi is None:
        return int(B.bar[g])
    return G.prod(psi(g), G.inv(g), psi(G.inv(g)))


def phi_isomorphism(G: FiniteGroup, psi: GroupMap) -> GroupMap:
    """``g -> g psi(g^-1)``, an isomorphism from ``(G, o)`` onto ``(G, .)``."""
    f = psi.array
    images = G.cayley[np.arange(G.order), f[G.inverse]]
    phi = GroupMap(G, G, tuple(int(x) for x in images))
    if not phi.is_bijective():
        raise NotBijective("g -> g psi(g^-1) is not bijective")
    circle = circle_table(G, psi)
    if not np.array_equal(images[circle], G.cayley[images[:, None], images[None, :]]):
        raise NotHomomorphic("g -> g psi(g^-1) does not carry o to .")
    return phi


def opposite_brace(B: SkewBrace) -> SkewBrace:
    """Same circle, dot replaced by the opposite group."""
    opp = SkewBrace(B.carrier.opposite(), B.circle, B.bar, B.source_psi)
    opp.verify()
    return opp


def brace_from_regular_subgroup(N: RegularSubgroup) -> SkewBrace:
    """Brace on N's labels: dot from composition, circle transported by kappa.

    ``eta o pi = kappa^-1(kappa(eta) kappa(pi))``.
    """
    if not is_regular(N):
        raise NotRegular("subgroup is not regular")
    if not is_g_stable(N):
        raise NotStable("subgroup is not G-stable")
    G = N.group
    n = G.order
    comp = _compose_table(N)  # member indices
    k = kappa(N)
    kinv = np.empty_like(k)
    kinv[k] = np.arange(n)
    circ = kinv[G.cayley[k[:, None], k[None, :]]]  # member indices
    # relabel member index i as element label[i]
    lab = N.label.astype(np.int64)
    pos = np.empty(n, dtype=np.int64)
    pos[lab] = np.arange(n)
    dot = lab[comp[pos[:, None], pos[None, :]]]
    circle = lab[circ[pos[:, None], pos[None, :]]]
    if np.array_equal(dot, G.cayley):
        carrier = G
    else:
        carrier = make_group_from_cayley(dot, G.labels, name=f"{G.name}[{N.name or 'N'}]")
    e = carrier.identity
    bar = np.argmax(circle == e, axis=1)
    brace = SkewBrace(carrier, circle, bar, N.psi)
    brace.verify()
    return brace
