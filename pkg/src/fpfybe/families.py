"""Closed-form fixed point free maps, family solutions and count formulas.

Everything here is evaluated from explicit formulas in normal-form exponents
and never routed through the generic closed form, so that the two paths can
check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadParity,
    BadRange,
    NonInvolutiveTau,
    OddTau,
    UnsupportedFamily,
    UnsupportedParity,
)
from .groups import FiniteGroup, alternating, dihedral, group_by_name, metacyclic, parity, symmetric
from .morphisms import GroupMap, is_fpf_abelian, require_fpf
from .ybe import YbeMap

FAMILIES = (
    "trivial",
    "dihedral-alpha",
    "dihedral-beta",
    "dihedral-gamma",
    "dihedral-delta",
    "symmetric-tau",
    "metacyclic-ij",
    "alternating-a4",
)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    parameters: tuple[int, ...] = ()
    tau: tuple[int, ...] | None = None
    group: str | None = None  # only used by the trivial family

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamily(f"unknown family {self.family!r}")
        object.__setattr__(self, "parameters", tuple(int(x) for x in self.parameters))
        if self.tau is not None:
            object.__setattr__(self, "tau", tuple(int(x) for x in self.tau))


def _map_from_rule(G: FiniteGroup, rule) -> GroupMap:
    return GroupMap(G, G, tuple(int(rule(g)) for g in G.elements()))


# ---------------------------------------------------------------------------
# dihedral


def _dihedral_images(G: FiniteGroup, n: int, r_img: int, s_img: int) -> GroupMap:
    # psi(r^a s^b) = psi(r)^a psi(s)^b
    def rule(g):
        a, b = g % n, g // n
        return G.mul(G.power(r_img, a), G.power(s_img, b))

    return _map_from_rule(G, rule)


def dihedral_family_map(n: int, family: str, i: int) -> GroupMap:
    """alpha_i, beta_i, gamma_i or delta_i on D_n, n = 2m."""
    if n % 2:
        raise BadParity(f"the alpha/beta/gamma/delta families need even n, got {n}")
    m = n // 2
    if not 0 <= i <= m - 1:
        raise BadRange(f"need 0 <= i <= {m - 1}, got {i}")
    G = dihedral(n)

    def rs(k):  # r^k s
        return k % n + n

    r_img, s_img = {
        "alpha": (rs(2 * i), 0),
        "beta": (rs(2 * i + m), m),
        "gamma": (rs(2 * i + 1), rs(2 * i + 1)),
        "delta": (rs(2 * i + 1 + m), rs(2 * i + 1)),
    }[family]
    return _dihedral_images(G, n, r_img, s_img)


def dihedral_central_maps(n: int) -> list[GroupMap]:
    """Fixed point free maps of D_n with image in the center {1, r^m}."""
    G = dihedral(n)
    if n % 2:
        return [_dihedral_images(G, n, 0, 0)]
    m = n // 2
    out = []
    for a in (0, m):
        for b in (0, m):
            psi = _dihedral_images(G, n, a, b)
            if psi.is_homomorphism() and is_fpf_abelian(psi).valid:
                out.append(psi)
    return out


def dihedral_fpf_maps(n: int) -> list[GroupMap]:
    """The 4m maps alpha_i, beta_i, gamma_i, delta_i followed by the central
    fixed point free maps, each certified."""
    if n % 2:
        raise BadParity(f"D{n} has odd n: its only fixed point free abelian map is the trivial one")
    m = n // 2
    maps = [
        dihedral_family_map(n, fam, i)
        for fam in ("alpha", "beta", "gamma", "delta")
        for i in range(m)
    ]
    maps += dihedral_central_maps(n)
    for psi in maps:
        if not psi.is_homomorphism():
            raise AssertionError(f"{psi!r} is not a homomorphism")
        require_fpf(psi)
    return maps


# ---------------------------------------------------------------------------
# symmetric


def _perm_index(G: FiniteGroup) -> dict[tuple[int, ...], int]:
    return {p: k for k, p in enumerate(G.meta["perms"])}


def symmetric_fpf(n: int, tau) -> GroupMap:
    """psi_tau: 1 on even permutations, tau on odd ones."""
    if n < 5:
        raise BadRange(f"symmetric family is stated for n >= 5, got {n}")
    G = symmetric(n)
    tau = tuple(int(x) for x in tau)
    if sorted(tau) != list(range(n)):
        raise BadRange(f"{tau} is not a permutation of 0..{n - 1}")
    if parity(tau):
        raise OddTau(f"tau = {tau} is odd and would be a fixed point")
    if any(tau[tau[x]] != x for x in range(n)):
        raise NonInvolutiveTau(f"tau = {tau} does not square to the identity")
    t = _perm_index(G)[tau]
    perms = G.meta["perms"]
    psi = _map_from_rule(G, lambda g: t if parity(perms[g]) else G.identity)
    return require_fpf(psi)


def even_involutions(n: int) -> list[tuple[int, ...]]:
    """tau in A_n with tau^2 = 1, identity included, in lexicographic order."""
    return [p for p in alternating(n).meta["perms"] if all(p[p[x]] == x for x in range(n))]


# ---------------------------------------------------------------------------
# metacyclic


def metacyclic_fpf(p: int, q: int, i: int, j: int) -> GroupMap:
    """psi_{i,j}: s -> 1, t -> s^i t^j."""
    if not 0 <= i <= p - 1:
        raise BadRange(f"need 0 <= i <= {p - 1}, got {i}")
    if not 2 <= j <= q - 1:
        raise BadRange(f"need 2 <= j <= {q - 1}, got {j}")
    G = metacyclic(p, q)
    img = i + p * j

    def rule(g):
        return G.power(img, g // p)  # psi(s^a t^b) = (s^i t^j)^b

    return require_fpf(_map_from_rule(G, rule))


def a4_square_map() -> tuple[GroupMap, int]:
    """The map of A_4 killing V and sending the 3-cycle x = (0 1 2) to x^2."""
    G = alternating(4)
    perms = G.meta["perms"]
    x = _perm_index(G)[(1, 2, 0, 3)]
    x2 = G.mul(x, x)
    v_set = {k for k, p in enumerate(perms) if all(p[p[y]] == y for y in range(4))}

    def rule(g):
        # g = v x^e for a unique e
        for e in range(3):
            if G.mul(g, G.power(x, -e)) in v_set:
                return G.power(x2, e)
        raise AssertionError("A4 element outside V<x>")

    return require_fpf(_map_from_rule(G, rule)), x


def family_map(spec: FamilySpec) -> GroupMap:
    f, p = spec.family, spec.parameters
    if f == "trivial":
        G = group_by_name(spec.group or "C1")
        return GroupMap(G, G, (G.identity,) * G.order)
    if f.startswith("dihedral-"):
        _need(p, 2, "n i")
        return dihedral_family_map(p[0], f.split("-")[1], p[1])
    if f == "symmetric-tau":
        _need(p, 1, "n")
        tau = spec.tau if spec.tau is not None else tuple(range(p[0]))
        return symmetric_fpf(p[0], tau)
    if f == "metacyclic-ij":
        _need(p, 4, "p q i j")
        return metacyclic_fpf(*p)
    if f == "alternating-a4":
        return a4_square_map()[0]
    raise UnsupportedFamily(f)


def _need(params, k, names):
    if len(params) != k:
        raise BadRange(f"expected parameters ({names}), got {params}")


# ---------------------------------------------------------------------------
# family solutions, evaluated from the case-split formulas


class _Words:
    """Vectorised products of group elements given as index arrays."""

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.C = G.cayley
        self.inv = G.inverse
        n = G.order
        self.g, self.h = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")

    def mul(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = self.C[out, x]
        return out

    def power(self, a: int, k):
        k = np.asarray(k)
        table = np.array([self.G.power(a, e) for e in range(self.G.element_order(a))])
        return table[k % len(table)]


def _dihedral_solution(n: int, which: str, prime: bool) -> YbeMap:
    G = dihedral(n)
    m = n // 2
    w = _Words(G)
    r, s = 1, n
    R = lambda e: w.power(r, e)  # noqa: E731
    S = lambda e: w.power(s, e)  # noqa: E731
    i, j = w.g % n, w.g // n  # g = r^i s^j
    k, l = w.h % n, w.h // n  # h = r^k s^l
    if which == "alpha":
        if not prime:
            first = w.mul(S(i), R(k), S(l + i))
            second = w.mul(S(i + k + l), R(-k), S(i), R(i), S(i + j), R(k), S(i + k + l))
        else:
            first = w.mul(R(i), S(i + j), R(k), S(i + j + l), R(-i))
            second = w.mul(S(k), R(i), S(j + k))
    else:
        if m % 2 == 0:
            raise UnsupportedParity(f"the beta_0 formula is stated for m odd, got m = {m}")
        if not prime:
            first = w.mul(S(i), R(k), S(i + l))
            second = w.mul(S(i + k + l), R(-k), S(i), R(i), S(i + j), R(k), S(i + k + l))
        else:
            first = w.mul(R(i), S(i + j), R(k), S(i + j + l), R(-i))
            second = w.mul(S(k), R(i), S(j + k))
    psi = dihedral_family_map(n, which, 0)
    return YbeMap(G, first, second, "family", psi)


def _symmetric_solution(n: int, tau, prime: bool) -> YbeMap:
    psi = symmetric_fpf(n, tau)
    G = psi.source
    w = _Words(G)
    t = _perm_index(G)[tuple(tau)]
    inv = w.inv
    odd = np.array([parity(p) for p in G.meta["perms"]], dtype=bool)
    sg, pi = w.g, w.h
    so, po = odd[sg], odd[pi]
    if not prime:
        cases = [
            (~so & ~po, pi, w.mul(inv[pi], sg, pi)),
            (~so & po, pi, w.mul(t, inv[pi], sg, pi, t)),
            (so & ~po, w.mul(t, pi, t), w.mul(t, inv[pi], t, sg, t, pi, t)),
            (so & po, w.mul(t, pi, t), w.mul(inv[pi], t, sg, t, pi)),
        ]
    else:
        cases = [
            (~so & ~po, w.mul(sg, pi, inv[sg]), sg),
            (~so & po, w.mul(sg, pi, inv[sg]), w.mul(t, sg, t)),
            (so & ~po, w.mul(sg, t, pi, t, inv[sg]), sg),
            (so & po, w.mul(sg, t, pi, t, inv[sg]), w.mul(t, sg, t)),
        ]
    first = np.select([c[0] for c in cases], [c[1] for c in cases])
    second = np.select([c[0] for c in cases], [c[2] for c in cases])
    return YbeMap(G, first, second, "family", psi)


def _metacyclic_solution(p: int, q: int, j: int, prime: bool) -> YbeMap:
    G = metacyclic(p, q)
    psi = metacyclic_fpf(p, q, 0, j)
    w = _Words(G)
    s, t = 1, p
    S = lambda e: w.power(s, e)  # noqa: E731
    T = lambda e: w.power(t, e)  # noqa: E731
    k, l = w.g % p, w.g // p  # g = s^k t^l
    mm, nn = w.h % p, w.h // p  # h = s^m t^n
    g_inv, h_inv = w.inv[w.g], w.inv[w.h]
    if not prime:
        first = w.mul(T(-j * l), S(mm), T(nn + j * l))
        second = w.mul(
            T(j * (nn - l)), h_inv, T(j * l), S(k), T(l - j * l), S(mm), T(nn + j * (l - nn))
        )
    else:
        first = w.mul(S(k), T(l - j * l), S(mm), T(nn + j * l), g_inv)
        second = w.mul(T(j * nn), S(k), T(l - j * nn))
    return YbeMap(G, first, second, "family", psi)


def _a4_solution(prime: bool) -> YbeMap:
    psi, x = a4_square_map()
    G = psi.source
    w = _Words(G)
    perms = G.meta["perms"]
    v_of = np.empty(G.order, dtype=np.int64)
    e_left = np.empty(G.order, dtype=np.int64)
    v_set = {k for k, p in enumerate(perms) if all(p[p[y]] == y for y in range(4))}
    for g in G.elements():
        for e in range(3):
            v = G.mul(g, G.power(x, -e))  # g = v x^e
            if v in v_set:
                v_of[g], e_left[g] = v, e
    X = lambda e: w.power(x, e)  # noqa: E731
    v1, i = v_of[w.g], e_left[w.g]
    v2, jj = v_of[w.h], e_left[w.h]
    if not prime:
        first = w.mul(X(i), v2, X(jj - i))
        second = w.mul(X(i + jj), v2, X(-i), v1, X(-i), v2, X(-i - jj))
    else:
        first = w.mul(v1, X(-i), v2, X(i + jj), v1)
        second = w.mul(X(-jj), v1, X(i + jj))
    return YbeMap(G, first, second, "family", psi)


def _trivial_solution(G: FiniteGroup, prime: bool) -> YbeMap:
    w = _Words(G)
    g, h, inv = w.g, w.h, w.inv
    if not prime:
        first, second = h, w.mul(inv[h], g, h)
    else:
        first, second = w.mul(g, h, inv[g]), g
    psi = GroupMap(G, G, (G.identity,) * G.order)
    return YbeMap(G, first, second, "family", psi)


def family_solution(spec: FamilySpec, prime: bool = False) -> YbeMap:
    """Evaluate the family's displayed solution formula (``prime`` for R')."""
    f, p = spec.family, spec.parameters
    if f == "trivial":
        return _trivial_solution(group_by_name(spec.group or "C1"), prime)
    if f in ("dihedral-alpha", "dihedral-beta"):
        _need(p, 2, "n i")
        n, i = p
        if n % 2:
            raise BadParity(f"n must be even, got {n}")
        if i != 0:
            raise UnsupportedFamily(f"only i = 0 has a displayed formula, got i = {i}")
        return _dihedral_solution(n, f.split("-")[1], prime)
    if f == "symmetric-tau":
        _need(p, 1, "n")
        tau = spec.tau if spec.tau is not None else tuple(range(p[0]))
        return _symmetric_solution(p[0], tau, prime)
    if f == "metacyclic-ij":
        _need(p, 4, "p q i j")
        pp, q, i, j = p
        metacyclic_fpf(pp, q, i, j)  # range checks
        if i != 0:
            raise UnsupportedFamily(f"only i = 0 has a displayed formula, got i = {i}")
        return _metacyclic_solution(pp, q, j, prime)
    if f == "alternating-a4":
        return _a4_solution(prime)
    raise UnsupportedFamily(f"{f} has no displayed solution formula")


# ---------------------------------------------------------------------------
# counting formulas


def v2(n: int) -> int:
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return k


def upsilon_order(n: int) -> int:
    """Number of units x mod n with x^2 = 1."""
    return sum(1 for x in range(1, n + 1) if math.gcd(x, n) == 1 and (x * x) % n == 1 % n)


def s_formula(n: int) -> int:
    """Regular G-stable subgroups of Perm(D_n) obtained from FPF(D_n) and opposites."""
    if n < 3:
        raise BadRange(f"need n >= 3, got {n}")
    e = v2(n)
    m = n // 2
    if e == 0:
        return 2
    if e == 1:
        return 4 * m + 2
    return 8 * m + 2


def r_formula(n: int) -> int:
    """Regular G-stable subgroups of Perm(D_n) isomorphic to D_n, by the known closed-form count."""
    if n < 3:
        raise BadRange(f"need n >= 3, got {n}")
    e = v2(n)
    m = n // 2
    factor = {0: 1, 1: 2 * m + 1, 2: m + 1}.get(e, m + 2)
    return upsilon_order(n) * factor


def _prime_power(n: int) -> tuple[int, int] | None:
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            return (p, k) if n == 1 else None
    return None


def totient(n: int) -> int:
    return sum(1 for x in range(1, n + 1) if math.gcd(x, n) == 1)


@dataclass
class CoverageReport:
    group: str
    kind: str
    complete: bool
    details: dict = field(default_factory=dict)


def coverage_report(G: FiniteGroup) -> CoverageReport:
    """Whether FPF(G) and opposites reach every solution of the group's type,
    by the arithmetic criteria only."""
    name = G.name
    if name.startswith("D") and name[1:].isdigit():
        n = int(name[1:])
        # odd n: a prime power; v2(n) = 1: twice an odd prime power; else never
        e = v2(n)
        odd = _prime_power(n >> e) if n >> e > 1 else None
        criterion = odd is not None and e <= 1
        s, r = s_formula(n), r_formula(n)
        return CoverageReport(
            name,
            "dihedral",
            criterion,
            {"n": n, "S": s, "R": r, "S_equals_R": s == r, "upsilon": upsilon_order(n), "v2": v2(n)},
        )
    if G.is_abelian:
        n = G.order
        phi = totient(n)
        g = math.gcd(n, phi)
        return CoverageReport(name, "abelian", g == 1, {"order": n, "totient": phi, "gcd": g})
    raise UnsupportedFamily(f"no completeness criterion for {name}")
