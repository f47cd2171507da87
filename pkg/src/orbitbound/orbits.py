"""Orbits of a point under a finite set of polynomial maps, and periodicity.

The orbit of x is built as the ascending chain O_1 = {x},
O_(k+1) = O_k + {f(y) : y in O_k, f in S}.  Either the chain stops growing
(and periodicity is read off by testing each generator for bijectivity on
the orbit), or it outgrows the effective bound and x cannot be periodic.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Sequence

from .bounds import EffectiveBound, bound_C, choose_primes
from .polyring import Polynomial, PolyError, apply_map, is_smooth, make_point, point_key


class OrbitError(ValueError):
    pass


@dataclass(frozen=True)
class AffineSystem:
    """A^n over Z[1/N] with named generator maps, each a tuple of n polynomials."""

    n: int
    maps: tuple[tuple[str, tuple[Polynomial, ...]], ...]
    N: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise OrbitError("dimension must be >= 1")
        if self.N < 1:
            raise OrbitError("N must be >= 1")
        names = [name for name, _ in self.maps]
        if len(set(names)) != len(names):
            raise OrbitError("generator names must be unique")
        for name, F in self.maps:
            if len(F) != self.n or any(f.n != self.n for f in F):
                raise OrbitError(f"map {name!r} must have {self.n} polynomials in {self.n} variables")
            for f in F:
                for d in f.denominators():
                    if not is_smooth(d, self.N):
                        raise OrbitError(f"map {name!r} has denominator {d} not dividing a power of N")

    @classmethod
    def build(cls, n: int, maps, N: int = 1) -> "AffineSystem":
        """``maps`` is a dict or list of (name, coords); coords may be strings."""
        from .polyring import parse_poly
        items = maps.items() if isinstance(maps, dict) else maps
        out = []
        for k, entry in enumerate(items):
            name, coords = entry if isinstance(entry, tuple) else (f"f{k}", entry)
            polys = tuple(c if isinstance(c, Polynomial) else parse_poly(c, n, N) for c in coords)
            out.append((name, polys))
        return cls(n, tuple(out), N)

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.maps]

    def point(self, coords) -> tuple:
        try:
            return make_point(coords, self.n, self.N)
        except PolyError as exc:
            raise OrbitError(str(exc)) from exc


@dataclass
class OrbitState:
    visited: set
    frontier: set
    steps: int
    stabilized: bool

    def ordered(self) -> list[tuple]:
        return sorted(self.visited, key=point_key)


def orbit_closure(sys: AffineSystem, x: Sequence, max_points: int) -> OrbitState:
    """Grow the chain until it stops or holds more than ``max_points`` points.

    Frontier points are processed in canonical order and generators in the
    order given, so the result is reproducible even when the budget trips
    partway through a round.
    """
    if max_points < 1:
        raise OrbitError("budget must be >= 1")
    x = sys.point(x)
    visited = {x}
    frontier = [x]
    steps = 0
    while frontier:
        if len(visited) > max_points:
            return OrbitState(visited, set(frontier), steps, False)
        nxt = []
        for y in sorted(frontier, key=point_key):
            for _, F in sys.maps:
                z = apply_map(F, y)
                if z not in visited:
                    visited.add(z)
                    nxt.append(z)
                    if len(visited) > max_points:
                        return OrbitState(visited, set(nxt), steps + 1, False)
        frontier = nxt
        steps += 1
    return OrbitState(visited, set(), steps, True)


@dataclass
class GeneratorCheck:
    name: str
    bijective: bool
    permutation: dict | None = None  # point -> image
    collision: tuple | None = None  # (a, b, image)
    unhit: tuple | None = None


def permutation_check(sys: AffineSystem, O) -> list[GeneratorCheck]:
    pts = sorted(set(O), key=point_key)
    members = set(pts)
    out = []
    for name, F in sys.maps:
        images = {}
        seen: dict = {}
        collision = None
        for y in pts:
            z = apply_map(F, y)
            if z not in members:
                raise OrbitError(f"set is not closed under {name!r}: {y} -> {z}")
            images[y] = z
            if z in seen and collision is None:
                collision = (seen[z], y, z)
            seen.setdefault(z, y)
        if collision is None:
            out.append(GeneratorCheck(name, True, images))
        else:
            unhit = next(y for y in pts if y not in seen)
            out.append(GeneratorCheck(name, False, None, collision, unhit))
    return out


class Reason(enum.Enum):
    EXCEEDED_PROVEN_BOUND = "exceeded_proven_bound"
    FINITE_NOT_PERMUTED = "finite_not_permuted"


@dataclass
class Periodic:
    orbit: list[tuple]
    permutations: dict[str, dict]
    steps: int
    tag = "periodic"


@dataclass
class NotPeriodic:
    reason: Reason
    witness: dict
    orbit: list[tuple] | None = None
    steps: int = 0
    tag = "not_periodic"


@dataclass
class Undecided:
    budget: int
    visited: int
    steps: int = 0
    tag = "undecided"


Verdict = Periodic | NotPeriodic | Undecided


@dataclass
class Decision:
    verdict: Verdict
    bound: EffectiveBound | None = None
    bound_override: int | None = None
    budget: int = 0
    extra: dict = field(default_factory=dict)


@functools.lru_cache(maxsize=64)
def _bound_for(n: int, N: int) -> EffectiveBound:
    return bound_C(n, choose_primes(N))


def default_bound(sys: AffineSystem) -> EffectiveBound:
    return _bound_for(sys.n, sys.N)


def _materialize(bound: EffectiveBound, budget: int) -> int | None:
    """The bound as an int when it is at most ``budget``, else None."""
    if bound.exact_value is not None:
        return bound.exact_value if bound.exact_value <= budget else None
    if bound.log2_value is None or not bound.exceeded_by(budget):
        return None
    import mpmath
    with mpmath.workprec(200):
        return int(mpmath.floor(mpmath.power(2, bound.log2_value)))


def decide(sys: AffineSystem, x: Sequence, budget: int,
           bound_override: int | None = None) -> Decision:
    """Decide S-periodicity of x; returns the verdict with bound metadata."""
    if budget < 1:
        raise OrbitError("budget must be >= 1")
    if bound_override is not None and bound_override < 1:
        raise OrbitError("bound_override must be >= 1")
    bound = None
    if bound_override is not None:
        limit = bound_override
    else:
        bound = default_bound(sys)
        limit = _materialize(bound, budget)
    bound_hit_first = limit is not None and limit <= budget
    cap = limit if bound_hit_first else budget
    state = orbit_closure(sys, x, cap)
    if state.stabilized:
        orbit = state.ordered()
        checks = permutation_check(sys, orbit)
        bad = next((c for c in checks if not c.bijective), None)
        if bad is None:
            verdict = Periodic(orbit, {c.name: c.permutation for c in checks}, state.steps)
        else:
            a, b, img = bad.collision
            verdict = NotPeriodic(Reason.FINITE_NOT_PERMUTED,
                                  {"generator": bad.name, "collision": (a, b), "image": img,
                                   "unhit": bad.unhit},
                                  orbit, state.steps)
    elif bound_hit_first:
        verdict = NotPeriodic(Reason.EXCEEDED_PROVEN_BOUND,
                              {"visited": len(state.visited), "bound": limit},
                              None, state.steps)
    else:
        verdict = Undecided(budget, len(state.visited), state.steps)
    return Decision(verdict, bound, bound_override, budget)


def decide_periodic(sys: AffineSystem, x: Sequence, budget: int,
                    bound_override: int | None = None) -> Verdict:
    return decide(sys, x, budget, bound_override).verdict
