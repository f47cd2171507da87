"""Effective bounds on the size of periodic integral orbits in A^n.

For a prime ``p`` let ``M = (n+2) p^n``.  The per-prime factor is

    prod_{m=1}^{M} (p^m)^(p^M) * ((p^m)^n)!

and ``C(n)`` multiplies the factors for ``p = 2`` and ``p = 3``.  Over
``Z[1/N]`` the same product is taken at the two smallest primes not dividing
``N``; that constant is labelled a derived bound.

Everything is carried in log2 form; the exact integer is only built when the
largest factorial argument is at most 10**6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath

from .jetspace import is_prime

EXACT_FACTORIAL_LIMIT = 10**6
# Past this many factors the sum is not worth evaluating term by term.
MAX_TERMS = 20_000
PREC_BITS = 160


class BoundError(ValueError):
    pass


class BoundNotRepresentable(BoundError):
    pass


@dataclass(frozen=True)
class PrimePair:
    p: int
    q: int

    def __post_init__(self):
        if not (is_prime(self.p) and is_prime(self.q)):
            raise BoundError(f"({self.p}, {self.q}) are not both prime")
        if self.p >= self.q:
            raise BoundError("prime pair must satisfy p < p'")

    def __iter__(self):
        return iter((self.p, self.q))

    def __str__(self):
        return f"{self.p},{self.q}"


@dataclass
class EffectiveBound:
    n: int
    primes: PrimePair
    log2_value: mpmath.mpf | None
    exact_value: int | None = None
    note: str = ""
    label: str = "C(n)"
    per_prime: dict = field(default_factory=dict)

    @property
    def representable(self) -> bool:
        return self.log2_value is not None

    def exceeded_by(self, count: int) -> bool:
        """True iff ``count > bound``; a non-representable bound is +infinity."""
        if self.exact_value is not None:
            return count > self.exact_value
        if self.log2_value is None or count < 1:
            return False
        return mpmath.log(count, 2) > self.log2_value


def choose_primes(N: int) -> PrimePair:
    """The two smallest primes not dividing ``N``."""
    if N < 1:
        raise BoundError("N must be >= 1")
    found = []
    q = 2
    while len(found) < 2:
        if is_prime(q) and N % q:
            found.append(q)
        q += 1
    return PrimePair(*found)


def num_factors(n: int, p: int) -> int:
    """M = (n+2) p^n, the number of m-indexed factors."""
    return (n + 2) * p**n


def log2_factorial(k) -> mpmath.mpf:
    """log2(k!) through mpmath's log-gamma at PREC_BITS working precision.

    Relative error is far below 1e-9 for every k >= 2; small k go through
    the exact factorial.
    """
    if k < 2:
        return mpmath.mpf(0)
    with mpmath.workprec(PREC_BITS):
        if k <= 1000:
            return mpmath.log(mpmath.mpf(math.factorial(int(k))), 2)
        return mpmath.loggamma(mpmath.mpf(k) + 1) / mpmath.log(2)


def per_prime_parts_log2(n: int, p: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(exponent part, factorial part) of log2 of the per-prime factor."""
    if n < 1:
        raise BoundError("n must be >= 1")
    if not is_prime(p):
        raise BoundError(f"{p} is not prime")
    M = num_factors(n, p)
    if M > MAX_TERMS:
        raise BoundNotRepresentable(
            f"bound not representable: {M} factors for n={n}, p={p}"
        )
    with mpmath.workprec(PREC_BITS):
        log2p = mpmath.log(p, 2)
        # sum_m p^M * m * log2(p) = p^M * log2(p) * M(M+1)/2
        expo = mpmath.mpf(p) ** M * log2p * (M * (M + 1) // 2)
        fact = mpmath.mpf(0)
        for m in range(1, M + 1):
            fact += log2_factorial(mpmath.mpf(p) ** (m * n) if m * n > 60 else p ** (m * n))
    return expo, fact


def per_prime_term_log2(n: int, p: int) -> mpmath.mpf:
    expo, fact = per_prime_parts_log2(n, p)
    with mpmath.workprec(PREC_BITS):
        return expo + fact


def exact_feasible(n: int, p: int) -> bool:
    e = num_factors(n, p) * n
    if e * math.log2(p) > math.log2(EXACT_FACTORIAL_LIMIT) + 1:
        return False
    return p**e <= EXACT_FACTORIAL_LIMIT


def exponent_factor_exact(n: int, p: int) -> int:
    """prod_m (p^m)^(p^M) as an exact integer (a power of p)."""
    M = num_factors(n, p)
    return p ** (p**M * (M * (M + 1) // 2))


def factorial_factor_exact(n: int, p: int) -> int:
    M = num_factors(n, p)
    out = 1
    for m in range(1, M + 1):
        out *= math.factorial(p ** (m * n))
    return out


def per_prime_term_exact(n: int, p: int) -> int:
    return exponent_factor_exact(n, p) * factorial_factor_exact(n, p)


def log2_int(x: int) -> mpmath.mpf:
    """log2 of a positive big integer, accurate to about 2**-100 absolute."""
    if x < 1:
        raise ValueError("log2 of nonpositive integer")
    shift = max(0, x.bit_length() - 120)
    with mpmath.workprec(PREC_BITS):
        return shift + mpmath.log(mpmath.mpf(x >> shift), 2)


def bound_C(n: int, pair: PrimePair | None = None, want_exact: bool = False) -> EffectiveBound:
    """The orbit-size bound for dimension ``n`` at the prime pair ``pair``."""
    if n < 1:
        raise BoundError("n must be >= 1")
    pair = pair or PrimePair(2, 3)
    label = "C(n)" if (pair.p, pair.q) == (2, 3) else "derived bound"
    try:
        parts = {p: per_prime_parts_log2(n, p) for p in pair}
    except BoundNotRepresentable as exc:
        return EffectiveBound(n, pair, None, None, note=str(exc), label=label)
    with mpmath.workprec(PREC_BITS):
        total = sum((e + f for e, f in parts.values()), mpmath.mpf(0))
    per_prime = {p: {"exponent_log2": e, "factorial_log2": f} for p, (e, f) in parts.items()}
    bound = EffectiveBound(n, pair, total, label=label, per_prime=per_prime)
    if want_exact:
        if all(exact_feasible(n, p) for p in pair):
            bound.exact_value = per_prime_term_exact(n, pair.p) * per_prime_term_exact(n, pair.q)
        else:
            bound.note = (
                "exact value infeasible: largest factorial argument "
                + " or ".join(f"{p}^{num_factors(n, p) * n}" for p in pair)
                + f" exceeds {EXACT_FACTORIAL_LIMIT}"
            )
    return bound


def int_to_decimal(x: int) -> str:
    """Decimal string of a big integer; gmpy2 when present, it is much faster."""
    try:
        import gmpy2
    except ImportError:  # pragma: no cover
        import sys
        if hasattr(sys, "set_int_max_str_digits"):
            sys.set_int_max_str_digits(0)
        return str(x)
    return gmpy2.mpz(x).digits()


def format_log(x: mpmath.mpf | None) -> str | None:
    if x is None:
        return None
    return mpmath.nstr(x, 15)
