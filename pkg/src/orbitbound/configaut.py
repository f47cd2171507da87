"""Configuration schemes of finite point sets and their automorphisms.

A finite set O = {a_1, ..., a_N} of integral points cuts out a reduced
subscheme Z_O of affine space: N copies of Spec Z glued above the primes
dividing coordinate differences.  We model it through the weight matrix
``g_ij = gcd(a_i - a_j)`` (coordinatewise, prime factors of N0 removed) and
the congruence ring

    B = {f in Z^N : f_i = f_j mod g_ij}.

Automorphisms over the base are the weight-preserving permutations.  The
data at a prime p only needs B localised at p, which is the lattice
``L_p = {f : f_i = f_j mod p^v_p(g_ij)}``: every other congruence becomes
trivial once primes other than p are units.

Level-r data at p is the quotient B / m^r where m is the ideal of tuples
vanishing mod p (the intersection of the maximal ideals over p).  Since
p is in m, p^r B lies in m^r and every quotient is finite.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import lattice as lat
from .jetspace import is_prime
from .polyring import Polynomial, is_smooth

MAX_AUT_POINTS = 10

Perm = tuple[int, ...]


class ConfigError(ValueError):
    pass


def vp(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of zero")
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def strip_primes(x: int, N0: int) -> int:
    """Part of ``x`` coprime to ``N0``."""
    g = math.gcd(x, N0)
    while g > 1:
        while x % g == 0:
            x //= g
        g = math.gcd(x, N0)
    return x


@dataclass(frozen=True)
class ConfigScheme:
    points: tuple[tuple, ...]
    weights: tuple[tuple[int, ...], ...]
    N0: int = 1

    @property
    def size(self) -> int:
        return len(self.points)

    def primes(self) -> list[int]:
        """Primes dividing some off-diagonal weight."""
        out = set()
        for i in range(self.size):
            for j in range(i + 1, self.size):
                out.update(prime_factors(self.weights[i][j]))
        return sorted(out)

    def valuation_matrix(self, p: int, cap: int | None = None) -> list[list[int]]:
        """v_p(g_ij), optionally capped; the diagonal is the cap (or infinity as -1)."""
        N = self.size
        V = [[0] * N for _ in range(N)]
        for i in range(N):
            for j in range(N):
                if i == j:
                    V[i][j] = cap if cap is not None else -1
                else:
                    v = vp(self.weights[i][j], p)
                    V[i][j] = min(v, cap) if cap is not None else v
        return V


def prime_factors(x: int) -> list[int]:
    out = []
    d = 2
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            while x % d == 0:
                x //= d
        d += 1
    if x > 1:
        out.append(x)
    return out


def weight_matrix(O: Iterable[Sequence], N0: int = 1) -> ConfigScheme:
    pts = [tuple(Fraction(c) for c in y) for y in O]
    if len(set(pts)) != len(pts):
        raise ConfigError("configuration points must be distinct")
    if pts and len({len(y) for y in pts}) != 1:
        raise ConfigError("configuration points have different dimensions")
    D = 1
    for y in pts:
        for c in y:
            D = math.lcm(D, c.denominator)
    if not is_smooth(D, N0) and D != 1:
        raise ConfigError(f"denominators must divide a power of N0={N0}")
    scaled = [tuple(int(c * D) for c in y) for y in pts]
    N = len(pts)
    W = [[0] * N for _ in range(N)]
    for i in range(N):
        for j in range(i + 1, N):
            g = 0
            for u, v in zip(scaled[i], scaled[j]):
                g = math.gcd(g, u - v)
            g = strip_primes(g, N0)
            W[i][j] = W[j][i] = g
    normed = tuple(tuple(c.numerator if c.denominator == 1 else c for c in y) for y in pts)
    return ConfigScheme(normed, tuple(tuple(r) for r in W), N0)


# permutations

def compose(a: Perm, b: Perm) -> Perm:
    """(a o b)(i) = a(b(i))."""
    return tuple(a[i] for i in b)


def inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def perm_order(a: Perm) -> int:
    order = 1
    for cyc in cycles(a):
        order = math.lcm(order, len(cyc))
    return order


def cycles(a: Perm) -> list[list[int]]:
    seen = set()
    out = []
    for i in range(len(a)):
        if i in seen:
            continue
        cyc = [i]
        seen.add(i)
        j = a[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = a[j]
        out.append(cyc)
    return out


def cycle_notation(a: Perm) -> str:
    cs = [c for c in cycles(a) if len(c) > 1]
    if not cs:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)


def is_prime_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def preserves_weights(Z: ConfigScheme, sigma: Perm) -> bool:
    W = Z.weights
    N = Z.size
    if sorted(sigma) != list(range(N)):
        return False
    return all(W[sigma[i]][sigma[j]] == W[i][j] for i in range(N) for j in range(i + 1, N))


# automorphism group

@dataclass
class AutGroup:
    size_n: int
    transversals: list[list[Perm]]
    generators: list[Perm] = field(default_factory=list)

    @property
    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def elements(self) -> list[Perm]:
        elems = [tuple(range(self.size_n))]
        for level in reversed(self.transversals):
            elems = [compose(t, h) for t in level for h in elems]
        return sorted(elems)

    def contains(self, sigma: Perm) -> bool:
        h = tuple(sigma)
        for i, level in enumerate(self.transversals):
            t = next((t for t in level if t[i] == h[i]), None)
            if t is None:
                return False
            h = compose(inverse(t), h)
        return h == tuple(range(self.size_n))


def _extend(W, sig, partial: dict[int, int], order: list[int], k: int) -> dict | None:
    if k == len(order):
        return partial
    i = order[k]
    if i in partial:
        return _extend(W, sig, partial, order, k + 1)
    used = set(partial.values())
    for j in range(len(W)):
        if j in used or sig[j] != sig[i]:
            continue
        if all(W[j][partial[l]] == W[i][l] for l in partial):
            partial[i] = j
            found = _extend(W, sig, partial, order, k + 1)
            if found is not None:
                return found
            del partial[i]
    return None


def aut_group(Z: ConfigScheme, max_points: int = MAX_AUT_POINTS) -> AutGroup:
    """Weight-preserving permutations of the configuration, via a stabiliser chain.

    Level i holds one permutation for each reachable image of point i among
    permutations fixing points 0..i-1, found by backtracking with partial
    weight-consistency pruning.
    """
    N = Z.size
    if N > max_points:
        raise ConfigError(f"aut_group enumeration is capped at {max_points} points, got {N}")
    W = Z.weights
    sig = [tuple(sorted(W[i][j] for j in range(N) if j != i)) for i in range(N)]
    order = list(range(N))
    transversals = []
    for i in range(N):
        level = []
        for j in range(i, N):
            partial = {k: k for k in range(i)}
            if sig[j] != sig[i]:
                continue
            if not all(W[j][k] == W[i][k] for k in range(i)):
                continue
            partial[i] = j
            found = _extend(W, sig, partial, order, 0)
            if found is not None:
                level.append(tuple(found[k] for k in range(N)))
        transversals.append(level)
    group = AutGroup(N, transversals)
    group.generators = _small_generating_set(group)
    return group


def _closure(gens: list[Perm], n: int, cap: int) -> set[Perm] | None:
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                e = compose(g, h)
                if e not in seen:
                    seen.add(e)
                    nxt.append(e)
                    if len(seen) > cap:
                        return None
        frontier = nxt
    return seen


def _small_generating_set(group: AutGroup, cap: int = 5040) -> list[Perm]:
    ident = tuple(range(group.size_n))
    strong = [t for level in group.transversals for t in level if t != ident]
    if group.order > cap:
        return strong
    gens: list[Perm] = []
    span = {ident}
    for t in sorted(strong, key=lambda t: (-perm_order(t), t)):
        if t not in span:
            gens.append(t)
            span = _closure(gens, group.size_n, cap)
    return sorted(gens)


# rings at a prime

def cluster_levels(Z: ConfigScheme, p: int, cap: int | None = None) -> list[list[frozenset]]:
    """Partition of the points by congruence mod p^e for e = 0, 1, ..., top.

    ``clusters[e]`` groups i, j together iff v_p(g_ij) >= e.  The relation is
    an equivalence because valuations of gcds of differences are ultrametric.
    """
    V = Z.valuation_matrix(p, cap)
    N = Z.size
    top = max((V[i][j] for i in range(N) for j in range(N) if i != j), default=0)
    if cap is not None:
        top = min(top, cap)
    out = []
    for e in range(top + 2):
        groups: list[set] = []
        for i in range(N):
            for g in groups:
                j = next(iter(g))
                if V[i][j] >= e:
                    g.add(i)
                    break
            else:
                groups.append({i})
        out.append([frozenset(g) for g in groups])
    return out


def congruence_lattice(Z: ConfigScheme, p: int, cap: int | None = None) -> list[list[int]]:
    """HNF basis of {f in Z^N : f_i = f_j mod p^min(cap, v_p(g_ij))}.

    With ``cap`` set the lattice also contains p^cap Z^N, giving the
    presentation inside (Z/p^cap)^N.  Generators are p^e 1_C for every
    cluster C of points congruent mod p^(e+1).
    """
    N = Z.size
    levels = cluster_levels(Z, p, cap)
    gens = []
    last = len(levels) - 1
    for e in range(last):
        for C in levels[e + 1]:
            gens.append([p**e if i in C else 0 for i in range(N)])
    top = cap if cap is not None else last
    for i in range(N):
        gens.append([p**top if k == i else 0 for k in range(N)])
    return lat.hnf(gens, N)


def radical_lattice(B: list[list[int]], p: int) -> list[list[int]]:
    """Elements of B whose entries are all divisible by p."""
    N = len(B[0])
    ker = lat.left_kernel_mod(B, p)
    gens = [lat.combine(c, B) for c in ker] + [[p * x for x in row] for row in B]
    return lat.hnf(gens, N)


@dataclass
class LevelTwoData:
    p: int
    ring: list[list[int]]
    m: list[list[int]]
    m2: list[list[int]]
    classes: list[frozenset]
    p2_in_m2: bool

    @property
    def quotient_size(self) -> int:
        """|B / m^2|."""
        return lat.determinant(self.m2) // lat.determinant(self.ring)


def level2_data(Z: ConfigScheme, p: int) -> LevelTwoData:
    if not is_prime(p):
        raise ConfigError(f"{p} is not prime")
    if Z.N0 % p == 0:
        raise ConfigError(f"prime {p} divides N0={Z.N0}; its fibre is not part of the scheme")
    if Z.size == 0:
        raise ConfigError("empty configuration")
    B = congruence_lattice(Z, p)
    m = radical_lattice(B, p)
    m2 = lat.product_lattice(m, m)
    one = [1] * Z.size
    p2_in = lat.contains(m2, [p * p * x for x in one])
    classes = cluster_levels(Z, p)[1]
    return LevelTwoData(p, B, m, m2, classes, p2_in)


def ideal_power(m: list[list[int]], r: int) -> list[list[int]]:
    out = m
    for _ in range(r - 1):
        out = lat.product_lattice(out, m)
    return out


def act(sigma: Perm, f: Sequence[int]) -> list[int]:
    """Push a tuple forward along sigma: the value at point i moves to sigma(i)."""
    out = [0] * len(f)
    for i, j in enumerate(sigma):
        out[j] = f[i]
    return out


def acts_trivially(sigma: Perm, ring: list[list[int]], ideal: list[list[int]]) -> bool:
    """True iff sigma(b) - b lies in ``ideal`` for every basis vector b of ``ring``."""
    for b in ring:
        d = [x - y for x, y in zip(act(sigma, b), b)]
        if not lat.contains(ideal, d):
            return False
    return True


def fixes_classes(sigma: Perm, classes: Iterable[frozenset]) -> bool:
    return all(frozenset(sigma[i] for i in C) == C for C in classes)


def gamma_membership(Z: ConfigScheme, sigma: Perm, p: int,
                     data: LevelTwoData | None = None) -> bool:
    """Does sigma act trivially on the level-2 data at p?

    Requires fixing every maximal ideal over p (each residue class of points
    mod p) and acting as the identity on B / m^2.
    """
    sigma = tuple(sigma)
    if not preserves_weights(Z, sigma):
        raise ConfigError(f"{cycle_notation(sigma)} does not preserve the weights")
    data = data or level2_data(Z, p)
    return fixes_classes(sigma, data.classes) and acts_trivially(sigma, data.ring, data.m2)


def gamma_subgroup(Z: ConfigScheme, p: int, group: AutGroup | None = None) -> list[Perm]:
    group = group or aut_group(Z)
    data = level2_data(Z, p)
    return [s for s in group.elements() if gamma_membership(Z, s, p, data)]


def order_on_quotient(sigma: Perm, ring: list[list[int]], ideal: list[list[int]]) -> int:
    """Order of the automorphism induced by sigma on ring / ideal."""
    k = perm_order(sigma)
    for t in sorted(d for d in range(1, k + 1) if k % d == 0):
        power = tuple(range(len(sigma)))
        for _ in range(t):
            power = compose(sigma, power)
        if acts_trivially(power, ring, ideal):
            return t
    return k


def presented_order(Z: ConfigScheme, sigma: Perm, p: int, r: int) -> int:
    """Order of sigma on the truncated presentation inside (Z/p^r)^N."""
    L = congruence_lattice(Z, p, cap=r)
    full = [[p**r if k == i else 0 for k in range(Z.size)] for i in range(Z.size)]
    return order_on_quotient(sigma, L, lat.hnf(full, Z.size))


@dataclass
class TorsionReport:
    p: int
    checked: list[tuple] = field(default_factory=list)
    violations: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def torsion_order_check(Z: ConfigScheme, p: int, levels: Sequence[int] = (3, 4),
                        group: AutGroup | None = None) -> TorsionReport:
    """Every member of Gamma_p must have p-power order.

    For each such sigma and each r in ``levels`` the order of sigma on the
    local quotient B / m^r and on the truncated presentation mod p^r are
    recorded and checked as well.
    """
    if Z.size > 8:
        raise ConfigError("torsion_order_check is limited to 8 points")
    report = TorsionReport(p)
    group = group or aut_group(Z)
    data = level2_data(Z, p)
    if not data.p2_in_m2:
        report.violations.append(("p^2 not in m^2",))
    powers = {r: ideal_power(data.m, r) for r in levels}
    for sigma in group.elements():
        if not gamma_membership(Z, sigma, p, data):
            continue
        k = perm_order(sigma)
        report.checked.append((sigma, "order", k))
        if not is_prime_power(k, p):
            report.violations.append((sigma, "order", k))
        for r in levels:
            local = order_on_quotient(sigma, data.ring, powers[r])
            pres = presented_order(Z, sigma, p, r)
            report.checked.append((sigma, f"B/m^{r}", local))
            report.checked.append((sigma, f"presented mod p^{r}", pres))
            if not is_prime_power(local, p):
                report.violations.append((sigma, f"B/m^{r}", local))
            if not is_prime_power(pres, p):
                report.violations.append((sigma, f"presented mod p^{r}", pres))
    return report


def injectivity_check(Z: ConfigScheme, pair, group: AutGroup | None = None) -> bool:
    """True iff only the identity lies in both Gamma_p and Gamma_p'."""
    if Z.size > 8:
        raise ConfigError("injectivity_check is limited to 8 points")
    p, q = tuple(pair)
    group = group or aut_group(Z)
    dp, dq = level2_data(Z, p), level2_data(Z, q)
    ident = tuple(range(Z.size))
    both = [s for s in group.elements()
            if gamma_membership(Z, s, p, dp) and gamma_membership(Z, s, q, dq)]
    return both == [ident]


def congruence_subring_preserved(Z: ConfigScheme, sigma: Perm) -> bool:
    """Direct finite test: sigma maps each truncated presentation onto itself.

    Checked at every prime dividing a weight, at truncation p^(max v_p + 1).
    """
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(Z.size)):
        return False
    for p in Z.primes():
        V = Z.valuation_matrix(p)
        r = max(V[i][j] for i in range(Z.size) for j in range(Z.size) if i != j) + 1
        L = congruence_lattice(Z, p, cap=r)
        if not all(lat.contains(L, act(sigma, b)) for b in L):
            return False
    return True


# interpolation

@dataclass(frozen=True)
class Interpolant:
    poly: Polynomial
    integral: bool
    coefficients: tuple  # highest degree first


def lagrange_cycle(seq: Sequence[int]) -> Interpolant:
    """Minimal-degree f in Q[t] with f(a_i) = a_{i+1}, indices mod the length."""
    a = [int(x) for x in seq]
    L = len(a)
    if L == 0:
        raise ConfigError("cycle must be nonempty")
    if len(set(a)) != L:
        raise ConfigError("cycle entries must be distinct")
    targets = a[1:] + a[:1]
    # Newton divided differences, then expand the Newton form
    dd = [Fraction(y) for y in targets]
    for level in range(1, L):
        for i in range(L - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (a[i] - a[i - level])
    coeffs = [Fraction(0)] * L  # coeffs[k] multiplies t^k
    basis = [Fraction(1)]  # prod_{j<i} (t - a_j), low degree first
    for i in range(L):
        for k, c in enumerate(basis):
            coeffs[k] += dd[i] * c
        nxt = [Fraction(0)] * (len(basis) + 1)
        for k, c in enumerate(basis):
            nxt[k + 1] += c
            nxt[k] -= a[i] * c
        basis = nxt
    poly = Polynomial(1, {(k,): c for k, c in enumerate(coeffs) if c})
    top = max((k for k, c in enumerate(coeffs) if c), default=0)
    ordered = tuple(coeffs[k] for k in range(top, -1, -1))
    integral = all(c.denominator == 1 for c in coeffs)
    return Interpolant(poly, integral, ordered)


def mod_p_obstruction(seq: Sequence[int], p: int) -> tuple[int, int] | None:
    """Indices i, j with a_i = a_j mod p but a_(i+1) != a_(j+1) mod p, if any.

    Any such pair rules out an integral interpolant, since integer
    polynomials preserve congruences.
    """
    a = list(seq)
    L = len(a)
    for i in range(L):
        for j in range(i + 1, L):
            if (a[i] - a[j]) % p == 0 and (a[(i + 1) % L] - a[(j + 1) % L]) % p:
                return (i, j)
    return None


# the coordinate ring itself

def coordinate_ring(O: Sequence[Sequence[int]]) -> list[list[int]]:
    """HNF basis of the image of Z[x1..xn] in Z^N under evaluation at O.

    Monomials with each exponent below the number of distinct values of that
    coordinate suffice: prod_c (x_k - c) is monic and vanishes on O.
    """
    pts = [tuple(int(c) for c in y) for y in O]
    if len(set(pts)) != len(pts):
        raise ConfigError("configuration points must be distinct")
    n = len(pts[0])
    degs = [len({y[k] for y in pts}) for k in range(n)]
    rows = []
    for e in itertools.product(*(range(d) for d in degs)):
        rows.append([math.prod(y[k] ** e[k] for k in range(n)) for y in pts])
    return lat.hnf(rows, len(pts))


def preserves_coordinate_ring(O: Sequence[Sequence[int]], sigma: Perm,
                              ring: list[list[int]] | None = None) -> bool:
    """Whether sigma is an automorphism of the image ring of Z[x] (not just of B).

    This ring can be strictly smaller than the congruence ring B, and a few
    weight-preserving permutations fail to preserve it.
    """
    ring = ring or coordinate_ring(O)
    return all(lat.contains(ring, act(tuple(sigma), b)) for b in ring)
