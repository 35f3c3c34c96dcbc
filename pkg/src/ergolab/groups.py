"""Finite groups, homomorphisms, affine maps, and exact measures on them.

Elements of a group of order n are the indices 0..n-1; the identity need not
be index 0 (explicit tables may place it anywhere). All measure weights are
`fractions.Fraction`, so invariance and independence checks are exact.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    GroupMismatch,
    MissingIdentity,
    MissingInverse,
    NonAssociative,
    NotAutomorphism,
    NotBijective,
    NotHomomorphism,
    NotInvariant,
)

FULL_ASSOC_CHECK_MAX_ORDER = 64
SAMPLED_ASSOC_TRIPLES = 4096
EXHAUSTIVE_INDEPENDENCE_MAX_ORDER = 8


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its full multiplication table."""

    order: int
    op_table: tuple[tuple[int, ...], ...]
    identity: int
    inverse_table: tuple[int, ...]
    label: str = "G"

    def op(self, a: int, b: int) -> int:
        return self.op_table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse_table[a]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        x, n = a, 1
        while x != self.identity:
            x = self.op(x, a)
            n += 1
        return n

    @cached_property
    def np_op(self) -> np.ndarray:
        """Multiplication table as an array, for vectorized sampling paths."""
        return np.array(self.op_table, dtype=np.int64)

    @cached_property
    def is_abelian(self) -> bool:
        return all(
            self.op(a, b) == self.op(b, a)
            for a in self.elements()
            for b in self.elements()
        )

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label}, order={self.order})"


def _validate_table(table: Sequence[Sequence[int]], label: str) -> FiniteGroup:
    n = len(table)
    rows = tuple(tuple(int(v) for v in row) for row in table)
    for row in rows:
        if len(row) != n or any(not (0 <= v < n) for v in row):
            raise ValueError(f"{label}: table is not {n}x{n} over 0..{n - 1}")

    identity = None
    for e in range(n):
        if all(rows[e][x] == x and rows[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise MissingIdentity(f"{label}: no two-sided identity")

    inverse = [None] * n
    for a in range(n):
        for b in range(n):
            if rows[a][b] == identity and rows[b][a] == identity:
                inverse[a] = b
                break
        if inverse[a] is None:
            raise MissingInverse(f"{label}: element {a} has no two-sided inverse")

    if n <= FULL_ASSOC_CHECK_MAX_ORDER:
        triples = product(range(n), repeat=3)
    else:
        # too large for the n^3 sweep; sampled triples only (weaker check)
        rng = random.Random(0)
        triples = (
            (rng.randrange(n), rng.randrange(n), rng.randrange(n))
            for _ in range(SAMPLED_ASSOC_TRIPLES)
        )
    for a, b, c in triples:
        if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
            raise NonAssociative(f"{label}: ({a}*{b})*{c} != {a}*({b}*{c})")

    return FiniteGroup(n, rows, identity, tuple(inverse), label)


def cyclic(n: int) -> FiniteGroup:
    """Z/nZ with addition mod n."""
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return _validate_table(table, f"C{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Direct product; element (a, b) has index a*|H| + b."""
    n, m = g.order, h.order
    table = [
        [g.op(a1, a2) * m + h.op(b1, b2) for a2 in range(n) for b2 in range(m)]
        for a1 in range(n)
        for b1 in range(m)
    ]
    return _validate_table(table, f"{g.label}x{h.label}")


def symmetric(n: int) -> FiniteGroup:
    """S_n on 0..n-1, elements in lexicographic order; capped at n <= 4."""
    if not 1 <= n <= 4:
        raise ValueError("symmetric group supported for 1 <= n <= 4")
    elems = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(elems)}
    # op(p, q) applies q first, then p
    table = [
        [index[tuple(p[q[i]] for i in range(n))] for q in elems] for p in elems
    ]
    return _validate_table(table, f"S{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n (symmetries of the n-gon); capped at n <= 8."""
    if not 2 <= n <= 8:
        raise ValueError("dihedral group supported for 2 <= n <= 8")

    # encode the rotation r^k as k and the reflection f r^k as n + k;
    # the relation r f = f r^-1 gives the four coset products below
    def mul(x, y):
        kx, fx = x % n, x // n
        ky, fy = y % n, y // n
        if fx == 0 and fy == 0:
            return (kx + ky) % n
        if fx == 0 and fy == 1:
            return n + (ky - kx) % n
        if fx == 1 and fy == 0:
            return n + (kx + ky) % n
        return (ky - kx) % n

    table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
    return _validate_table(table, f"D{n}")


def explicit_group(table: Sequence[Sequence[int]], label: str = "G") -> FiniteGroup:
    """Build and fully validate a group from an explicit multiplication table."""
    return _validate_table(table, label)


def make_group(spec: dict) -> FiniteGroup:
    """Constructor dispatch from a descriptor, as used by scenario configs."""
    family = spec.get("family")
    if family == "cyclic":
        return cyclic(int(spec["n"]))
    if family == "symmetric":
        return symmetric(int(spec["n"]))
    if family == "dihedral":
        return dihedral(int(spec["n"]))
    if family == "direct_product":
        return direct_product(make_group(spec["left"]), make_group(spec["right"]))
    if family == "explicit":
        return explicit_group(spec["table"], spec.get("label", "G"))
    raise ValueError(f"unknown group family: {family!r}")


@dataclass(frozen=True)
class GroupHom:
    """A verified homomorphism between finite groups, stored as an image table."""

    source: FiniteGroup
    target: FiniteGroup
    table: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.table[a]

    @cached_property
    def image(self) -> frozenset[int]:
        return frozenset(self.table)

    @cached_property
    def surjective(self) -> bool:
        return len(self.image) == self.target.order

    @cached_property
    def kernel(self) -> frozenset[int]:
        e = self.target.identity
        return frozenset(a for a in self.source.elements() if self.table[a] == e)

    @cached_property
    def bijective(self) -> bool:
        return self.source.order == self.target.order and self.surjective

    def __repr__(self) -> str:
        return f"GroupHom({self.source.label}->{self.target.label})"


def make_hom(source: FiniteGroup, target: FiniteGroup, table: Sequence[int]) -> GroupHom:
    """Verify the homomorphism law on every pair and return the hom."""
    tab = tuple(int(v) for v in table)
    if len(tab) != source.order or any(not (0 <= v < target.order) for v in tab):
        raise ValueError("hom table must map every source element into the target")
    for a in range(source.order):
        for b in range(source.order):
            if tab[source.op(a, b)] != target.op(tab[a], tab[b]):
                raise NotHomomorphism(f"law fails at pair ({a}, {b})")
    return GroupHom(source, target, tab)


def identity_hom(g: FiniteGroup) -> GroupHom:
    return make_hom(g, g, tuple(g.elements()))


def power_hom(g: FiniteGroup, k: int) -> GroupHom:
    """x -> x^k; a homomorphism on abelian groups (e.g. x -> 2x on Z/n)."""
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    table = []
    for x in g.elements():
        acc = g.identity
        for _ in range(k):
            acc = g.op(acc, x)
        table.append(acc)
    return make_hom(g, g, table)


def _generating_sequence(g: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {g.identity}
    for x in g.elements():
        if x in span:
            continue
        gens.append(x)
        frontier = [g.identity]
        span = {g.identity}
        while frontier:
            nxt = []
            for y in frontier:
                for s in gens:
                    z = g.op(y, s)
                    if z not in span:
                        span.add(z)
                        nxt.append(z)
            frontier = nxt
        if len(span) == g.order:
            break
    return gens


def automorphisms(g: FiniteGroup) -> list[GroupHom]:
    """All automorphisms, by backtracking over generator images (small orders)."""
    gens = _generating_sequence(g)
    if not gens:  # trivial group
        return [identity_hom(g)]
    orders = [g.element_order(x) for x in gens]
    candidates = [
        [y for y in g.elements() if g.element_order(y) == o] for o in orders
    ]
    # expression of every element as (parent, generator) via BFS words in gens
    parent: dict[int, tuple[int, int]] = {}
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for y in frontier:
            for gi, s in enumerate(gens):
                z = g.op(y, s)
                if z not in seen:
                    seen.add(z)
                    parent[z] = (y, gi)
                    nxt.append(z)
        frontier = nxt

    def build_table(images: Sequence[int]) -> Optional[tuple[int, ...]]:
        table: list[Optional[int]] = [None] * g.order
        table[g.identity] = g.identity

        def resolve(z: int) -> int:
            if table[z] is not None:
                return table[z]
            y, gi = parent[z]
            val = g.op(resolve(y), images[gi])
            table[z] = val
            return val

        for z in g.elements():
            if z != g.identity and z not in parent:
                return None
            resolve(z)
        return tuple(table)

    result = []
    for images in product(*candidates):
        table = build_table(images)
        if table is None or len(set(table)) != g.order:
            continue
        ok = all(
            table[g.op(a, b)] == g.op(table[a], table[b])
            for a in g.elements()
            for b in g.elements()
        )
        if ok:
            result.append(GroupHom(g, g, table))
    return result


def brute_force_isomorphism(g: FiniteGroup, h: FiniteGroup) -> Optional[GroupHom]:
    """Search for an isomorphism by enumerating bijections; tiny orders only."""
    if g.order != h.order:
        return None
    if g.order > 8:
        raise ValueError("brute-force isomorphism search capped at order 8")
    g_orders = sorted(g.element_order(x) for x in g.elements())
    h_orders = sorted(h.element_order(x) for x in h.elements())
    if g_orders != h_orders:
        return None
    for perm in permutations(h.elements()):
        if perm[g.identity] != h.identity:
            continue
        if all(
            perm[g.op(a, b)] == h.op(perm[a], perm[b])
            for a in g.elements()
            for b in g.elements()
        ):
            return GroupHom(g, h, tuple(perm))
    return None


@dataclass(frozen=True)
class AffineMap:
    """x -> a * A(x) for an automorphism A; always a bijection of the group."""

    group: FiniteGroup
    translation: int
    automorphism: GroupHom

    def __post_init__(self):
        a = self.automorphism
        if a.source is not self.group or a.target is not self.group or not a.bijective:
            raise NotAutomorphism("affine maps require an automorphism of the same group")

    def __call__(self, x: int) -> int:
        return self.group.op(self.translation, self.automorphism(x))

    @cached_property
    def conjugate(self) -> GroupHom:
        """y -> a A(y) a^-1; the automorphism the map commutes through."""
        g, a = self.group, self.translation
        table = [
            g.op(g.op(a, self.automorphism(y)), g.inv(a)) for y in g.elements()
        ]
        return make_hom(g, g, table)


Transform = Union[GroupHom, AffineMap]


def _check_endomorphism(mu_group: FiniteGroup, t: Transform) -> None:
    if isinstance(t, AffineMap):
        if t.group != mu_group:
            raise GroupMismatch("map acts on a different group")
    elif t.source != mu_group or t.source != t.target:
        raise GroupMismatch("need an endomorphism of the measure's group")


@dataclass(frozen=True)
class DenseMeasure:
    """An exact probability vector over the elements of a finite group."""

    group: FiniteGroup
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.group.order:
            raise ValueError("one weight per group element required")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if sum(self.weights) != 1:
            raise ValueError("weights must sum to exactly 1")

    def __call__(self, g: int) -> Fraction:
        return self.weights[g]

    def mass(self, subset) -> Fraction:
        return sum((self.weights[x] for x in subset), Fraction(0))

    @cached_property
    def support(self) -> frozenset[int]:
        return frozenset(x for x in self.group.elements() if self.weights[x] > 0)

    def __repr__(self) -> str:
        return f"DenseMeasure({self.group.label}, {[str(w) for w in self.weights]})"


def measure(group: FiniteGroup, weights) -> DenseMeasure:
    from .exact import parse_ratio

    return DenseMeasure(group, tuple(parse_ratio(w) for w in weights))


def haar(group: FiniteGroup) -> DenseMeasure:
    w = Fraction(1, group.order)
    return DenseMeasure(group, (w,) * group.order)


def point_mass(group: FiniteGroup, g: int) -> DenseMeasure:
    return DenseMeasure(
        group, tuple(Fraction(1 if x == g else 0) for x in group.elements())
    )


def mix(components: Sequence[tuple[Fraction, DenseMeasure]]) -> DenseMeasure:
    """Exact convex combination of measures on one group."""
    if not components:
        raise ValueError("empty mixture")
    group = components[0][1].group
    if any(m.group != group for _, m in components):
        raise GroupMismatch("mixture components live on different groups")
    if sum(w for w, _ in components) != 1 or any(w < 0 for w, _ in components):
        raise ValueError("mixture weights must be nonnegative and sum to 1")
    weights = tuple(
        sum((w * m.weights[x] for w, m in components), Fraction(0))
        for x in group.elements()
    )
    return DenseMeasure(group, weights)


def convolve(mu: DenseMeasure, nu: DenseMeasure) -> DenseMeasure:
    """(mu*nu)(g) = sum_h mu(h) nu(h^-1 g): pushforward of mu x nu under (x,y) -> xy."""
    if mu.group != nu.group:
        raise GroupMismatch("convolution needs measures on the same group")
    g = mu.group
    weights = [Fraction(0)] * g.order
    for h in g.elements():
        mh = mu.weights[h]
        if mh == 0:
            continue
        for x in g.elements():
            nx = nu.weights[x]
            if nx != 0:
                weights[g.op(h, x)] += mh * nx
    return DenseMeasure(g, tuple(weights))


def pushforward(mu: DenseMeasure, t: Transform) -> DenseMeasure:
    """(mu o T^-1)(g) = sum over the fiber T^-1(g)."""
    _check_endomorphism(mu.group, t)
    g = mu.group
    weights = [Fraction(0)] * g.order
    for x in g.elements():
        weights[t(x)] += mu.weights[x]
    return DenseMeasure(g, tuple(weights))


def is_invariant(mu: DenseMeasure, t: Transform) -> bool:
    return pushforward(mu, t).weights == mu.weights


@dataclass(frozen=True)
class IndependenceReport:
    independent: bool
    witness: Optional[tuple[frozenset[int], frozenset[int]]] = None
    detail: str = ""


def independence_check(mu: DenseMeasure) -> IndependenceReport:
    """Test independence of the first-coordinate and product-map algebras.

    On G x G carrying (uniform) x mu, the events {(x, y): x in E} and
    {(x, y): xy in F} are independent for every E, F exactly when mu is the
    uniform measure. The scan over subset pairs is exhaustive for orders up
    to 8; above that it scans singleton pairs, which already witness every
    failure of uniformity.
    """
    g = mu.group
    n = g.order
    den = 1
    for w in mu.weights:
        den = den * w.denominator // math.gcd(den, w.denominator)
    a = [int(w * den) for w in mu.weights]  # mu = a/den, integers

    # joint(E, F) = (1/n) sum_{x in E} mu(x^-1 F); product = |E| |F| / n^2.
    # Equality <=> n * sum_{x in E, f in F} a[x^-1 f] == |E| * |F| * den.
    if n <= EXHAUSTIVE_INDEPENDENCE_MAX_ORDER:
        # row[x][Fmask] = sum_{f in F} a[x^-1 f], filled by lowest-bit recursion
        row = [[0] * (1 << n) for _ in range(n)]
        for x in range(n):
            xinv = g.inv(x)
            vals = [a[g.op(xinv, f)] for f in range(n)]
            rx = row[x]
            for mask in range(1, 1 << n):
                low = (mask & -mask).bit_length() - 1
                rx[mask] = rx[mask ^ (1 << low)] + vals[low]
        members = [[x for x in range(n) if mask >> x & 1] for mask in range(1 << n)]
        sizes = [len(m) for m in members]
        for emask in range(1, 1 << n):
            es = members[emask]
            for fmask in range(1, 1 << n):
                s = 0
                for x in es:
                    s += row[x][fmask]
                if n * s != sizes[emask] * sizes[fmask] * den:
                    e_set = frozenset(es)
                    f_set = frozenset(members[fmask])
                    return IndependenceReport(False, (e_set, f_set), "subset pair scan")
        return IndependenceReport(True, None, "exhaustive over all subset pairs")

    for x in range(n):
        xinv = g.inv(x)
        for f in range(n):
            if n * a[g.op(xinv, f)] != den:
                return IndependenceReport(
                    False, (frozenset([x]), frozenset([f])), "singleton scan"
                )
    return IndependenceReport(True, None, "singleton scan (order > 8)")


@dataclass(frozen=True)
class ErgodicComponents:
    orbits: tuple[tuple[int, ...], ...]
    ergodic: bool


def ergodic_components(
    group: FiniteGroup, t: Transform, mu: DenseMeasure
) -> ErgodicComponents:
    """Orbit decomposition of a bijective map; ergodic iff one orbit carries mass 1."""
    _check_endomorphism(group, t)
    if isinstance(t, GroupHom) and not t.bijective:
        raise NotBijective("orbit decomposition needs a bijective map")
    if mu.group != group:
        raise GroupMismatch("measure lives on a different group")
    if not is_invariant(mu, t):
        raise NotInvariant("measure is not invariant under the map")
    seen = [False] * group.order
    orbits = []
    for x in group.elements():
        if seen[x]:
            continue
        orbit = []
        y = x
        while not seen[y]:
            seen[y] = True
            orbit.append(y)
            y = t(y)
        orbits.append(tuple(orbit))
    ergodic = any(mu.mass(o) == 1 for o in orbits)
    return ErgodicComponents(tuple(orbits), ergodic)


def random_measure(
    group: FiniteGroup, rng: random.Random, max_weight: int = 20
) -> DenseMeasure:
    """Random strictly positive rational measure (for randomized exact tests)."""
    raw = [rng.randint(1, max_weight) for _ in group.elements()]
    total = sum(raw)
    return DenseMeasure(group, tuple(Fraction(r, total) for r in raw))


def random_invariant_measure(
    group: FiniteGroup, t: Transform, rng: random.Random, max_weight: int = 20
) -> DenseMeasure:
    """Random measure constant on the orbits of a bijective map, hence invariant."""
    comps = ergodic_components(group, t, haar(group))
    raw = {orbit: rng.randint(1, max_weight) for orbit in comps.orbits}
    total = sum(r * len(o) for o, r in raw.items())
    weights = [Fraction(0)] * group.order
    for orbit, r in raw.items():
        for x in orbit:
            weights[x] = Fraction(r, total)
    return DenseMeasure(group, tuple(weights))
