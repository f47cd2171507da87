"""Sparse multivariate polynomials with exact integer (or Z[1/N]) coefficients.

A polynomial in ``n`` variables ``x1..xn`` is a map from exponent vectors to
nonzero coefficients.  Coefficients are Python ints, or ``Fraction`` whose
denominator is N-smooth when the ambient base ring is ``Z[1/N]``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Coeff = int | Fraction


class PolyError(ValueError):
    """Bad polynomial input (syntax, variable range, denominators)."""


class PolySyntaxError(PolyError):
    def __init__(self, msg: str, pos: int, src: str):
        super().__init__(f"{msg} at position {pos} in {src!r}")
        self.pos = pos
        self.src = src


def _norm(c) -> Coeff:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    raise TypeError(f"unsupported coefficient {c!r}")


def is_smooth(d: int, N: int) -> bool:
    """True iff every prime factor of ``d`` divides ``N``."""
    d = abs(d)
    if d == 0:
        return False
    g = gcd(d, N)
    while g > 1:
        while d % g == 0:
            d //= g
        g = gcd(d, N)
    return d == 1


def grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class Polynomial:
    """Immutable sparse polynomial; equal polynomials have identical term maps."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], Coeff] | None = None):
        if n < 0:
            raise PolyError("dimension must be nonnegative")
        clean: dict[tuple[int, ...], Coeff] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise PolyError(f"bad exponent vector {exp} for n={n}")
            c = _norm(c)
            if c:
                clean[exp] = _norm(clean.get(exp, 0) + c)
                if not clean[exp]:
                    del clean[exp]
        self.n = n
        self.terms = dict(sorted(clean.items(), key=lambda t: grlex_key(t[0]), reverse=True))
        self._hash = None

    @classmethod
    def constant(cls, n: int, c: Coeff) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        if not 1 <= i <= n:
            raise PolyError(f"unknown variable x{i} (n={n})")
        return cls(n, {tuple(int(k == i - 1) for k in range(n)): 1})

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise PolyError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolyError("exponent must be a natural number")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.n, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, tuple(self.terms.items())))
        return self._hash

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def denominators(self) -> list[int]:
        return [c.denominator for c in self.terms.values() if isinstance(c, Fraction)]

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    # evaluation

    def _powers(self, y: Sequence, mul, one):
        maxe = [0] * self.n
        for e in self.terms:
            for i, k in enumerate(e):
                if k > maxe[i]:
                    maxe[i] = k
        table = []
        for i in range(self.n):
            row = [one]
            for _ in range(maxe[i]):
                row.append(mul(row[-1], y[i]))
            table.append(row)
        return table

    def __call__(self, y: Sequence) -> Coeff:
        return self.eval(y)

    def eval(self, y: Sequence) -> Coeff:
        """Exact value at the point ``y`` (ints or Fractions)."""
        if len(y) != self.n:
            raise PolyError(f"point of length {len(y)} for polynomial in {self.n} variables")
        pw = self._powers(y, lambda a, b: a * b, 1)
        total = 0
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * pw[i][k]
            total += t
        return _norm(total) if isinstance(total, Fraction) else total

    def eval_mod(self, y: Sequence, m: int) -> int:
        """``eval(y) mod m`` with all intermediate arithmetic reduced mod ``m``."""
        if m < 2:
            raise PolyError("modulus must be >= 2")
        if len(y) != self.n:
            raise PolyError(f"point of length {len(y)} for polynomial in {self.n} variables")
        ys = [residue(v, m) for v in y]
        pw = self._powers(ys, lambda a, b: a * b % m, 1 % m)
        total = 0
        for e, c in self.terms.items():
            t = residue(c, m)
            for i, k in enumerate(e):
                if k:
                    t = t * pw[i][k] % m
            total = (total + t) % m
        return total

    def partial(self, i: int) -> "Polynomial":
        """Formal derivative with respect to ``x_i`` (1-based)."""
        if not 1 <= i <= self.n:
            raise PolyError(f"variable index {i} out of range 1..{self.n}")
        out = {}
        for e, c in self.terms.items():
            k = e[i - 1]
            if k:
                out[e[: i - 1] + (k - 1,) + e[i:]] = c * k
        return Polynomial(self.n, out)

    # printing

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.n}, {format_poly(self)!r})"


def residue(v: Coeff, m: int) -> int:
    """Image of an integer or fraction in Z/m; the denominator must be a unit."""
    if isinstance(v, Fraction):
        d = v.denominator
        if gcd(d, m) != 1:
            raise PolyError(f"denominator {d} is not invertible modulo {m}")
        return v.numerator * pow(d, -1, m) % m
    return v % m


def format_poly(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    parts = []
    for e, c in f.terms.items():
        mono = "*".join(
            f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
        )
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((sign, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\S))")


def _tokenize(src: str):
    toks = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            break  # trailing whitespace
        start = m.end() - len(m.group(0).lstrip())
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("var", int(m.group(2)), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise PolySyntaxError(f"unexpected character {ch!r}", start, src)
            toks.append((ch, ch, start))
        pos = m.end()
    toks.append(("end", None, len(src)))
    return toks


class _Parser:
    def __init__(self, src: str, n: int, N: int):
        self.src = src
        self.n = n
        self.N = N
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            self.fail(f"expected {kind!r}", tok)
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        found = "end of input" if tok[0] == "end" else repr(self.src[tok[2]:tok[2] + 8])
        raise PolySyntaxError(f"{msg}, found {found}", tok[2], self.src)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        f = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return f

    def expr(self):
        f = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while self.peek()[0] == "*":
            self.take()
            f = f * self.factor()
        return f

    def factor(self):
        f = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("expected natural exponent", tok)
            f = f ** tok[1]
        return f

    def atom(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "int":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                den = self.take()
                if den[0] != "int":
                    self.fail("expected denominator", den)
                if den[1] == 0:
                    raise PolySyntaxError("zero denominator", den[2], self.src)
                q = Fraction(tok[1], den[1])
                if q.denominator != 1 and not is_smooth(q.denominator, self.N):
                    raise PolyError(
                        f"denominator {q.denominator} does not divide a power of N={self.N}"
                    )
                return Polynomial.constant(self.n, q)
            return Polynomial.constant(self.n, tok[1])
        if kind == "var":
            self.take()
            if not 1 <= tok[1] <= self.n:
                raise PolyError(f"unknown variable x{tok[1]} (n={self.n}) at position {tok[2]}")
            return Polynomial.variable(self.n, tok[1])
        if kind == "(":
            self.take()
            f = self.expr()
            self.take(")")
            return f
        if kind == "-":
            self.take()
            return -self.factor()
        self.fail("expected integer, rational, variable, '(' or '-'")


def parse_poly(src: str, n: int, N: int = 1) -> Polynomial:
    """Parse ``src`` into a canonical polynomial in ``x1..xn`` over ``Z[1/N]``.

    Grammar: ``expr := term (('+'|'-') term)*``, ``term := factor ('*' factor)*``,
    ``factor := atom ('^' natural)?``, ``atom := integer | a/b | x<k> | '(' expr ')'
    | '-' factor``.
    """
    if N < 1:
        raise PolyError("N must be >= 1")
    return _Parser(src, n, N).parse()


# points

def make_point(coords: Iterable, n: int, N: int = 1) -> tuple:
    """Normalise coordinates into a point of A^n(Z[1/N]).

    Accepts ints, Fractions and strings like ``"-3"`` or ``"5/2"``.
    """
    out = []
    for c in coords:
        if isinstance(c, str):
            c = Fraction(c.strip())
        elif isinstance(c, bool) or not isinstance(c, (int, Fraction)):
            raise PolyError(f"bad coordinate {c!r}")
        c = _norm(Fraction(c))
        if isinstance(c, Fraction) and not is_smooth(c.denominator, N):
            raise PolyError(f"coordinate {c} has denominator not dividing a power of N={N}")
        out.append(c)
    if len(out) != n:
        raise PolyError(f"point has {len(out)} coordinates, expected {n}")
    return tuple(out)


def point_key(y: Sequence):
    """Canonical order: lexicographic on (numerator, denominator) per coordinate."""
    return tuple((Fraction(c).numerator, Fraction(c).denominator) for c in y)


def coord_str(c: Coeff) -> str:
    return str(c)


def apply_map(F: Sequence[Polynomial], y: Sequence) -> tuple:
    return tuple(f.eval(y) for f in F)


def jacobian_mod(F: Sequence[Polynomial], a: Sequence, p: int) -> list[list[int]]:
    """Jacobian of ``F`` at ``a`` reduced mod ``p``; row j holds the partials of ``F[j]``."""
    n = len(a)
    if len(F) != n or any(f.n != n for f in F):
        raise PolyError("jacobian needs n polynomials in n variables")
    return [[f.partial(i + 1).eval_mod(a, p) for i in range(n)] for f in F]
