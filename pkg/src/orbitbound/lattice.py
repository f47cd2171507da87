"""Small integer-lattice toolkit: Hermite normal form, membership, kernels mod p.

Lattices are given by integer row vectors.  Sizes here are tiny (dimension
at most 10), so plain Python ints and naive elimination are enough.
"""

from __future__ import annotations

from typing import Sequence

Vector = list[int]


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[Vector]:
    """Row Hermite normal form: nonzero rows, positive pivots, reduced above."""
    A = [list(r) for r in rows if any(r)]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    basis: list[Vector] = []
    pivots: list[int] = []
    for col in range(ncols):
        piv = [r for r in A if r[col]]
        rest = [r for r in A if not r[col]]
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            a = piv[0]
            keep = [a]
            for r in piv[1:]:
                q = r[col] // a[col]
                r = [x - q * y for x, y in zip(r, a)]
                if r[col]:
                    keep.append(r)
                elif any(r):
                    rest.append(r)
            piv = keep
        if piv:
            a = piv[0]
            if a[col] < 0:
                a = [-x for x in a]
            basis.append(a)
            pivots.append(col)
        A = rest
    for i in range(len(basis)):
        c = pivots[i]
        for j in range(i):
            q = basis[j][c] // basis[i][c]
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return basis


def pivot_cols(basis: Sequence[Vector]) -> list[int]:
    return [next(k for k, x in enumerate(row) if x) for row in basis]


def reduce_vec(v: Sequence[int], basis: Sequence[Vector]) -> Vector:
    """Remainder of ``v`` modulo an HNF basis; zero iff ``v`` is in the lattice."""
    v = list(v)
    for row in basis:
        c = next(k for k, x in enumerate(row) if x)
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return v


def contains(basis: Sequence[Vector], v: Sequence[int]) -> bool:
    return not any(reduce_vec(v, basis))


def coords(v: Sequence[int], basis: Sequence[Vector]) -> list[int]:
    """Integer coefficients of ``v`` in an HNF basis; ValueError if not a member."""
    v = list(v)
    out = []
    for row in basis:
        c = next(k for k, x in enumerate(row) if x)
        q, r = divmod(v[c], row[c])
        if r:
            raise ValueError("vector not in lattice")
        out.append(q)
        v = [x - q * y for x, y in zip(v, row)]
    if any(v):
        raise ValueError("vector not in lattice")
    return out


def determinant(basis: Sequence[Vector]) -> int:
    """Index in Z^N of a full-rank lattice given in HNF."""
    n = len(basis[0]) if basis else 0
    if len(basis) != n:
        raise ValueError("lattice is not full rank")
    d = 1
    for row, c in zip(basis, pivot_cols(basis)):
        d *= row[c]
    return d


def left_kernel_mod(A: Sequence[Sequence[int]], p: int) -> list[Vector]:
    """Basis (entries in [0, p)) of {c : c A = 0 mod p}, p prime."""
    m = len(A)
    ncols = len(A[0]) if m else 0
    # row-reduce [A | I] mod p
    M = [[x % p for x in A[i]] + [int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, m) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][col], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(m):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        r += 1
    return [row[ncols:] for row in M[r:]]


def combine(coeffs: Sequence[int], basis: Sequence[Vector]) -> Vector:
    n = len(basis[0])
    out = [0] * n
    for c, row in zip(coeffs, basis):
        if c:
            for k in range(n):
                out[k] += c * row[k]
    return out


def hadamard(u: Sequence[int], v: Sequence[int]) -> Vector:
    return [x * y for x, y in zip(u, v)]


def product_lattice(A: Sequence[Vector], B: Sequence[Vector]) -> list[Vector]:
    """Additive span of all coordinatewise products a*b, a in A, b in B."""
    n = len(A[0])
    return hnf([hadamard(a, b) for a in A for b in B], n)
