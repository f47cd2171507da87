"""Property suites shared by ``orbitbound selftest`` and the acceptance tests.

Each suite returns a :class:`SuiteResult`.  Randomised suites take a seed and
are deterministic given it.  The brute-force orbit oracle here evaluates
maps through sympy, not through :mod:`orbitbound.polyring`, and enumerates
words by exact length rather than by cumulative rounds.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds, configaut, jetspace, orbits
from .polyring import parse_poly

ORACLE_CAP = 500
HEIGHT_BITS = 4096


@dataclass
class SuiteResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name} ({self.seconds:.2f}s) {self.details}"


def _timed(name, fn, *args, **kwargs) -> SuiteResult:
    t0 = time.perf_counter()
    passed, details = fn(*args, **kwargs)
    return SuiteResult(name, passed, details, time.perf_counter() - t0)


# 1. bound reproduction

def _bound_reproduction():
    t0 = time.perf_counter()
    b = bounds.bound_C(1, bounds.PrimePair(2, 3), want_exact=True)
    elapsed = time.perf_counter() - t0
    exact_log = bounds.log2_int(b.exact_value)
    rel = abs(exact_log - b.log2_value) / b.log2_value
    two_part = bounds.exponent_factor_exact(1, 2)
    exponent_ok = two_part == 1 << 1344 and 64 * sum(range(1, 7)) == 1344
    details = {
        "seconds_exact": round(elapsed, 3),
        "log2_analytic": bounds.format_log(b.log2_value),
        "log2_exact": bounds.format_log(exact_log),
        "relative_error": float(rel),
        "p2_exponent_1344": exponent_ok,
    }
    return bool(rel <= 1e-6 and exponent_ok and elapsed < 60), details


def bound_reproduction() -> SuiteResult:
    return _timed("bound_reproduction", _bound_reproduction)


# 2. decision examples

DECISION_EXAMPLES = [
    ("involution", 1, [["36 - x1"]], [0], 10**4, None, "periodic"),
    ("shift_budget", 1, [["x1 + 1"]], [0], 10**4, None, "undecided"),
    ("square_collision", 1, [["x1^2"]], [-1], 10**4, None, "finite_not_permuted"),
    ("shift_override", 1, [["x1 + 1"]], [0], 10**4, 50, "exceeded_proven_bound"),
]


def verdict_label(v) -> str:
    if isinstance(v, orbits.NotPeriodic):
        return v.reason.value
    return v.tag


def _decision_examples(periodic_sink=None):
    rows = {}
    ok = True
    for name, n, maps, x, budget, override, want in DECISION_EXAMPLES:
        sys = orbits.AffineSystem.build(n, maps)
        t0 = time.perf_counter()
        v = orbits.decide_periodic(sys, x, budget, override)
        dt = time.perf_counter() - t0
        got = verdict_label(v)
        good = got == want and dt < 1.0
        if name == "square_collision":
            good = good and v.witness["collision"] == ((-1,), (1,)) and v.witness["image"] == (1,)
        if name == "involution":
            good = good and v.orbit == [(0,), (36,)]
        if isinstance(v, orbits.Periodic) and periodic_sink is not None:
            periodic_sink.append((sys, v))
        rows[name] = {"verdict": got, "seconds": round(dt, 4), "ok": good}
        ok &= good
    return ok, rows


def decision_examples(periodic_sink=None) -> SuiteResult:
    return _timed("decision_examples", _decision_examples, periodic_sink)


# 3. oracle equivalence

MONOMIALS = {1: [(0,), (1,), (2,)], 2: [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]}


def random_poly_str(rng: random.Random, n: int, max_deg: int) -> str:
    monos = [m for m in MONOMIALS[n] if sum(m) <= max_deg]
    k = rng.randint(1, len(monos))
    terms = []
    for m in rng.sample(monos, k):
        c = rng.randint(-3, 3)
        if c == 0:
            continue
        factors = [str(c)] + [f"x{i + 1}^{e}" for i, e in enumerate(m) if e]
        terms.append("*".join(factors))
    return " + ".join(terms) if terms else "0"


STRUCTURED = {
    1: [["-x1"], ["{c} - x1"], ["x1"], ["{c}"]],
    2: [["x2", "x1"], ["-x1", "-x2"], ["{c} - x1", "x2"], ["x2", "{c} - x1"], ["x1", "x2"]],
}


def random_system(rng: random.Random):
    """Random maps with small coefficients; a third also get a structured map.

    Uniform draws rarely yield periodic points, so sign flips, reflections and
    coordinate swaps are mixed in to exercise the periodic branch.
    """
    n = rng.choice([1, 2])
    max_deg = rng.choice([1, 2])
    maps = [[random_poly_str(rng, n, max_deg) for _ in range(n)]
            for _ in range(rng.randint(1, 3))]
    if rng.random() < 1 / 3:
        maps = maps[:rng.randint(0, 1)]
        for _ in range(rng.randint(1, 2)):
            pick = rng.choice(STRUCTURED[n])
            maps.append([c.format(c=rng.randint(-3, 3)) for c in pick])
    x = [rng.randint(-5, 5) for _ in range(n)]
    return n, maps, x


class HeightExceeded(Exception):
    pass


def word_oracle(n: int, maps: list[list[str]], x: list[int], cap: int = ORACLE_CAP):
    """Independent periodicity verdict by enumerating words of each length.

    Level set W_l holds the images of x under all words of length exactly l
    (memoised as a set).  The orbit is the union over l <= cap; once the
    union stops growing it is the whole orbit.
    """
    import sympy
    syms = sympy.symbols(" ".join(f"x{i + 1}" for i in range(n)))
    syms = syms if isinstance(syms, tuple) else (syms,)
    funcs = []
    for coords in maps:
        exprs = [sympy.sympify(c.replace("^", "**")) for c in coords]
        funcs.append(sympy.lambdify(syms, exprs, modules=[{}, "math"]))

    def image(f, y):
        out = tuple(int(v) for v in f(*y))
        if any(abs(v).bit_length() > HEIGHT_BITS for v in out):
            raise HeightExceeded
        return out

    start = tuple(x)
    union = {start}
    level = {start}
    for _ in range(cap):
        level = {image(f, y) for y in level for f in funcs}
        before = len(union)
        union |= level
        if len(union) > cap:
            return "exceeded_proven_bound", None
        if len(union) == before:
            break
    else:
        return "exceeded_proven_bound", None
    for f in funcs:
        imgs = [image(f, y) for y in union]
        if len(set(imgs)) != len(union):
            return "finite_not_permuted", union
    return "periodic", union


def _oracle_equivalence(count: int, seed: int, periodic_sink=None):
    rng = random.Random(seed)
    compared = discarded = 0
    mismatches = []
    tally: dict[str, int] = {}
    while compared < count:
        n, maps, x = random_system(rng)
        try:
            want, union = word_oracle(n, maps, x)
        except HeightExceeded:
            discarded += 1
            continue
        sys = orbits.AffineSystem.build(n, maps)
        v = orbits.decide_periodic(sys, x, budget=10**4, bound_override=ORACLE_CAP)
        got = verdict_label(v)
        if got != want or (union is not None and set(v.orbit) != union):
            mismatches.append({"maps": maps, "x": x, "decide": got, "oracle": want})
        if isinstance(v, orbits.Periodic) and periodic_sink is not None:
            periodic_sink.append((sys, v))
        tally[got] = tally.get(got, 0) + 1
        compared += 1
    details = {"compared": compared, "discarded_height": discarded,
               "verdicts": tally, "mismatches": mismatches[:5]}
    return not mismatches, details


def oracle_equivalence(count: int = 200, seed: int = 2024, periodic_sink=None) -> SuiteResult:
    return _timed("oracle_equivalence", _oracle_equivalence, count, seed, periodic_sink)


# 4. torsion orders and injectivity

def random_configuration(rng: random.Random, max_points: int = 6, max_coord: int = 10**4):
    """Point sets mixing uniform draws with symmetric and progression shapes.

    Uniform draws almost never have automorphisms, so two thirds of the
    samples are built to have them.
    """
    n = rng.choice([1, 2])
    N = rng.randint(2, max_points)
    kind = rng.randrange(3)
    for _ in range(100):
        if kind == 0:
            pts = {tuple(rng.randint(-max_coord, max_coord) for _ in range(n)) for _ in range(N)}
        elif kind == 1:
            scale = rng.choice([1, 2, 3, 4, 6, 8, 9, 12, 18, 27, 36, 5, 25])
            half = [tuple(rng.randint(1, 30) * scale for _ in range(n)) for _ in range(N // 2)]
            pts = {y for h in half for y in (h, tuple(-c for c in h))}
            if N % 2:
                pts.add((0,) * n)
        else:
            step = tuple(rng.choice([1, 2, 3, 4, 6, 9, 12, 36]) * rng.choice([1, -1])
                         for _ in range(n))
            pts = {tuple(k * s for s in step) for k in range(N)}
        shift = tuple(rng.randint(-max_coord // 2, max_coord // 2) for _ in range(n))
        pts = {tuple(c + s for c, s in zip(y, shift)) for y in pts}
        pts = {y for y in pts if all(abs(c) <= max_coord for c in y)}
        if len(pts) >= 2:
            return sorted(pts)
    return [(0,) * n, (1,) + (0,) * (n - 1)]


def _torsion_injectivity(count: int, seed: int):
    rng = random.Random(seed)
    violations = []
    nontrivial = {2: 0, 3: 0, 5: 0}
    levels_built = 0
    for _ in range(count):
        O = random_configuration(rng)
        Z = configaut.weight_matrix(O)
        group = configaut.aut_group(Z)
        for p in (2, 3, 5):
            data = configaut.level2_data(Z, p)
            levels_built += 1
            if not data.p2_in_m2:
                violations.append({"O": O, "p": p, "issue": "p^2 not in m^2"})
            if not configaut.is_prime_power(data.quotient_size, p):
                violations.append({"O": O, "p": p, "issue": "|B/m^2| not a p-power"})
            rep = configaut.torsion_order_check(Z, p, group=group)
            nontrivial[p] += sum(1 for s, kind, _ in rep.checked
                                 if kind == "order" and s != tuple(range(Z.size)))
            if not rep.ok:
                violations.append({"O": O, "p": p, "issue": repr(rep.violations[:3])})
        if not configaut.injectivity_check(Z, (2, 3), group=group):
            violations.append({"O": O, "issue": "Gamma_2 and Gamma_3 share a non-identity element"})
    details = {"configurations": count, "level_two_built": levels_built,
               "nontrivial_gamma_elements": nontrivial, "violations": violations[:5]}
    return not violations, details


def torsion_injectivity(count: int = 1000, seed: int = 7) -> SuiteResult:
    return _timed("torsion_injectivity", _torsion_injectivity, count, seed)


# 5. jet rings

def reduce_mod_ideal_square(coeffs: list[int], a: int, p: int) -> tuple[int, int]:
    """Normal form of an integer polynomial (low degree first) in Z[x]/(p, x-a)^2.

    Long division by the monic (x-a)^2 leaves r0 + r1 (x-a); then p^2 and
    p(x-a) lie in the ideal square.
    """
    c = list(coeffs)
    d = [a * a, -2 * a, 1]  # (x-a)^2, low degree first
    while len(c) > 2:
        lead = c[-1]
        shift = len(c) - 3
        for k in range(3):
            c[shift + k] -= lead * d[k]
        c.pop()
    while len(c) < 2:
        c.append(0)
    r1 = c[1]
    r0 = c[0] + r1 * a  # c0 + c1 x = (c0 + c1 a) + c1 (x - a)
    return r0 % (p * p), r1 % p


def _poly_mul(u, v):
    out = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        for j, y in enumerate(v):
            out[i + j] += x * y
    return out


def _jets(samples: int, seed: int):
    rng = random.Random(seed)
    failures = []
    sizes = {}
    for p in (2, 3):
        for n in (1, 2):
            ctx = jetspace.JetRingCtx(p, n, (0,) * n)
            count = sum(1 for _ in ctx.elements())
            sizes[f"p={p},n={n}"] = count
            if count != p ** (n + 2) or jetspace.ring_size(ctx) != count:
                failures.append(("size", p, n))
    # exhaustive axioms and normal-form validation at p = 2, n = 1
    for a in (0, 1):
        ctx = jetspace.JetRingCtx(2, 1, (a,))
        els = list(ctx.elements())
        for u, v, w in itertools.product(els, repeat=3):
            if (u * v) * w != u * (v * w) or u * (v + w) != u * v + u * w:
                failures.append(("axiom", a))
                break
        for u, v in itertools.product(els, repeat=2):
            if u * v != v * u:
                failures.append(("commutative", a))
            # representative polynomials c + v (x - a)
            ru = [u.c - u.v[0] * a, u.v[0]]
            rv = [v.c - v.v[0] * a, v.v[0]]
            prod = jetspace.jet_mul(u, v)
            if reduce_mod_ideal_square(_poly_mul(ru, rv), a, 2) != (prod.c, prod.v[0]):
                failures.append(("normal form", a, u, v))
    ctx = jetspace.JetRingCtx(3, 2, (1, 2))
    els = list(ctx.elements())
    for _ in range(2000):
        u, v, w = (rng.choice(els) for _ in range(3))
        if (u * v) * w != u * (v * w) or u * (v + w) != u * v + u * w:
            failures.append(("sampled axiom", u, v, w))
    # chain rule
    chain = 0
    for _ in range(samples):
        p = rng.choice([2, 3, 5])
        n = rng.choice([1, 2])
        F = [parse_poly(random_poly_str(rng, n, 2), n) for _ in range(n)]
        G = [parse_poly(random_poly_str(rng, n, 2), n) for _ in range(n)]
        a = tuple(rng.randrange(p) for _ in range(n))
        tau = jetspace.JetRingCtx(p, n, a).tautological()
        lhs = jetspace.jet_apply(F, jetspace.jet_apply(G, tau))
        # independent route: base F(G(a)) mod p^2, tangent J_F(G(a)) J_G(a) mod p
        from .polyring import apply_map, jacobian_mod
        Ga = apply_map(G, a)
        base = tuple(v % (p * p) for v in apply_map(F, Ga))
        JF, JG = jacobian_mod(F, Ga, p), jacobian_mod(G, a, p)
        tangent = [[sum(JF[i][k] * JG[k][j] for k in range(n)) % p for j in range(n)]
                   for i in range(n)]
        if lhs.base != base or lhs.tangent != tangent:
            failures.append(("chain rule", p, [str(f) for f in F], [str(g) for g in G], a))
        chain += 1
    details = {"sizes": sizes, "chain_rule_samples": chain, "failures": [repr(f) for f in failures[:5]]}
    return not failures, details


def jets(samples: int = 500, seed: int = 11) -> SuiteResult:
    return _timed("jets", _jets, samples, seed)


# 6. derived Aut characterisation

def _aut_validation(samples: int, seed: int):
    rng = random.Random(seed)
    mismatches = []
    perms_checked = preserved = 0
    for _ in range(samples):
        n = rng.choice([1, 2])
        N = rng.randint(1, 5)
        if rng.random() < 0.5:
            pts = {tuple(rng.randint(-50, 50) for _ in range(n)) for _ in range(N)}
        else:
            pts = set(map(tuple, random_configuration(rng, max_points=5, max_coord=50)))
        O = sorted(pts)
        Z = configaut.weight_matrix(O)
        for sigma in itertools.permutations(range(Z.size)):
            w = configaut.preserves_weights(Z, sigma)
            c = configaut.congruence_subring_preserved(Z, sigma)
            perms_checked += 1
            preserved += w
            if w != c:
                mismatches.append({"O": O, "sigma": sigma, "weights": w, "congruence": c})
    details = {"configurations": samples, "permutations": perms_checked,
               "weight_preserving": preserved, "mismatches": mismatches[:5]}
    return not mismatches, details


def aut_validation(samples: int = 10_000, seed: int = 5) -> SuiteResult:
    return _timed("aut_validation", _aut_validation, samples, seed)


# 7. cross-module soundness

def _cross_module(periodic):
    violations = []
    checked = 0
    for sys, v in periodic:
        Z = configaut.weight_matrix(v.orbit, sys.N)
        index = {y: i for i, y in enumerate(v.orbit)}
        group = configaut.aut_group(Z) if Z.size <= configaut.MAX_AUT_POINTS else None
        for name, perm in v.permutations.items():
            sigma = tuple(index[perm[y]] for y in v.orbit)
            ok = configaut.preserves_weights(Z, sigma)
            if group is not None:
                ok = ok and group.contains(sigma)
            checked += 1
            if not ok:
                violations.append({"orbit": [list(map(str, y)) for y in v.orbit], "generator": name})
    return not violations, {"periodic_verdicts": len(periodic), "permutations_checked": checked,
                            "violations": violations[:5]}


def cross_module(periodic) -> SuiteResult:
    return _timed("cross_module", _cross_module, periodic)


# 8. interpolation remark

def _lagrange(count: int, seed: int):
    import sympy
    rng = random.Random(seed)
    problems = []
    res = configaut.lagrange_cycle([0, 1, 2])
    example_ok = (not res.integral
                  and res.coefficients == (Fraction(-3, 2), Fraction(5, 2), Fraction(1)))
    if not example_ok:
        problems.append("cycle (0,1,2)")
    t = sympy.Symbol("t")
    obstructed = 0
    for _ in range(count):
        L = rng.randint(1, 5)
        seq = rng.sample(range(-20, 21), L)
        r = configaut.lagrange_cycle(seq)
        obs = configaut.mod_p_obstruction(seq, 2)
        if obs is not None:
            obstructed += 1
            if r.integral:
                problems.append(("obstructed but integral", seq))
        targets = seq[1:] + seq[:1]
        ref = sympy.Poly(sympy.interpolate(list(zip(seq, targets)), t), t)
        ref_coeffs = tuple(Fraction(int(c.p), int(c.q)) for c in ref.all_coeffs())
        if ref_coeffs != r.coefficients and not (ref.is_zero and r.coefficients == (0,)):
            problems.append(("coefficients", seq))
    details = {"example_ok": example_ok, "cycles": count, "mod2_obstructed": obstructed,
               "problems": [repr(x) for x in problems[:5]]}
    return not problems, details


def lagrange(count: int = 1000, seed: int = 3) -> SuiteResult:
    return _timed("lagrange", _lagrange, count, seed)


def run_all(quick: bool = False) -> list[SuiteResult]:
    scale = 10 if quick else 1
    periodic: list = []
    results = [
        bound_reproduction(),
        decision_examples(periodic),
        oracle_equivalence(200 // scale, periodic_sink=periodic),
        torsion_injectivity(1000 // scale),
        jets(500 // scale),
        aut_validation(10_000 // scale),
    ]
    results.append(cross_module(periodic))
    results.append(lagrange(1000 // scale))
    return results
