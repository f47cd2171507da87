"""First-order jets: the finite local rings Z[x1..xn]/(p, x1-a1, ..., xn-an)^2.

Every element has a unique normal form ``c + sum v_i (x_i - a_i)`` with
``c`` in Z/p^2 and ``v`` in (Z/p)^n, so the ring has p^(n+2) elements.
Products follow from p^2 = p(x_i - a_i) = (x_i - a_i)(x_j - a_j) = 0::

    (c, v) * (c', v') = (c c' mod p^2, (c mod p) v' + (c' mod p) v)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polyring import Polynomial, PolyError, residue


class JetError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class JetRingCtx:
    p: int
    n: int
    a: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise JetError(f"{self.p} is not prime")
        if len(self.a) != self.n:
            raise JetError("base point has wrong dimension")
        object.__setattr__(self, "a", tuple(x % self.p for x in self.a))

    @property
    def p2(self) -> int:
        return self.p * self.p

    def element(self, c, v: Sequence[int] = ()) -> "JetElement":
        v = tuple(v) if v else (0,) * self.n
        return JetElement(self, residue(c, self.p2), tuple(x % self.p for x in v))

    def zero(self) -> "JetElement":
        return self.element(0)

    def one(self) -> "JetElement":
        return self.element(1)

    def elements(self):
        """All p^(n+2) elements, in a fixed order."""
        from itertools import product
        for c in range(self.p2):
            for v in product(range(self.p), repeat=self.n):
                yield JetElement(self, c, v)

    def tautological(self) -> "JetPoint":
        """The point whose i-th coordinate is x_i = a_i + (x_i - a_i)."""
        return JetPoint(tuple(
            self.element(self.a[i], [int(j == i) for j in range(self.n)])
            for i in range(self.n)
        ))


@dataclass(frozen=True)
class JetElement:
    ctx: JetRingCtx
    c: int
    v: tuple[int, ...]

    def _check(self, other):
        if not isinstance(other, JetElement):
            if isinstance(other, (int, Fraction)):
                return self.ctx.element(other)
            raise TypeError(f"cannot combine jet element with {type(other).__name__}")
        if other.ctx != self.ctx:
            raise JetError("jet elements live in different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        p = self.ctx.p
        return JetElement(self.ctx, (self.c + other.c) % self.ctx.p2,
                          tuple((x + y) % p for x, y in zip(self.v, other.v)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return JetElement(self.ctx, -self.c % self.ctx.p2, tuple(-x % p for x in self.v))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        return jet_mul(self, self._check(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return self.c == 0 and not any(self.v)


def jet_mul(u: JetElement, w: JetElement) -> JetElement:
    if u.ctx != w.ctx:
        raise JetError("jet elements live in different rings")
    p = u.ctx.p
    cu, cw = u.c % p, w.c % p
    return JetElement(u.ctx, u.c * w.c % u.ctx.p2,
                      tuple((cu * y + cw * x) % p for x, y in zip(u.v, w.v)))


@dataclass(frozen=True)
class JetPoint:
    coords: tuple[JetElement, ...]

    def __post_init__(self):
        if self.coords and len({e.ctx for e in self.coords}) != 1:
            raise JetError("jet point coordinates must share one ring")

    @property
    def ctx(self) -> JetRingCtx:
        return self.coords[0].ctx

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(e.c for e in self.coords)

    @property
    def tangent(self) -> list[list[int]]:
        """Row j is the tangent part of coordinate j."""
        return [list(e.v) for e in self.coords]


def _eval_jet(f: Polynomial, P: JetPoint) -> JetElement:
    ctx = P.ctx
    pw = [[ctx.one()] for _ in range(f.n)]
    total = ctx.zero()
    for e, c in f.terms.items():
        t = ctx.element(c)
        for i, k in enumerate(e):
            row = pw[i]
            while len(row) <= k:
                row.append(row[-1] * P.coords[i])
            if k:
                t = t * row[k]
        total = total + t
    return total


def jet_apply(F: Sequence[Polynomial], P: JetPoint) -> JetPoint:
    """Evaluate the map ``F`` on a point with coordinates in the jet ring."""
    n = len(P.coords)
    if len(F) != n or any(f.n != n for f in F):
        raise JetError("map and jet point dimensions disagree")
    try:
        return JetPoint(tuple(_eval_jet(f, P) for f in F))
    except PolyError as exc:
        raise JetError(str(exc)) from exc


def ring_size(ctx: JetRingCtx) -> int:
    return ctx.p ** (ctx.n + 2)


def point_set_size(ctx: JetRingCtx) -> int:
    """|A^n(R_a)|."""
    return ring_size(ctx) ** ctx.n


def lift_point(y: Sequence, p: int) -> JetPoint:
    """Integer (or Z[1/N]) point as a jet with zero tangent, based at ``y mod p``."""
    try:
        a = tuple(residue(c, p) for c in y)
        ctx = JetRingCtx(p, len(y), a)
        return JetPoint(tuple(ctx.element(c) for c in y))
    except PolyError as exc:
        raise JetError(str(exc)) from exc


def jet_fingerprint(F: Sequence[Polynomial], y: Sequence, p: int) -> dict:
    """Base of F(y) mod p^2 and the Jacobian of F at y mod p."""
    n = len(y)
    a = tuple(residue(c, p) for c in y)
    ctx = JetRingCtx(p, n, a)
    # tautological point shifted so its constant part is y mod p^2
    P = JetPoint(tuple(
        ctx.element(y[i], [int(j == i) for j in range(n)]) for i in range(n)
    ))
    img = jet_apply(F, P)
    return {"base": list(img.base), "jacobian": img.tangent}
