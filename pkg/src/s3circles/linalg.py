"""Exact linear algebra over Q: rref, Bareiss elimination, modular nullspace.

Two independent routes compute nullspaces:

* :func:`bareiss_nullspace` runs fraction-free (Bareiss) elimination on an
  integer matrix; everything stays in Z.
* :func:`modular_nullspace` eliminates modulo several word-size primes,
  lifts the normalized kernel by CRT + rational reconstruction, and then
  verifies the lifted vectors *exactly* against the integer matrix.  The
  rank modulo a prime never exceeds the rank over Q, so a full-rank result
  modulo a prime is itself a proof of a trivial kernel.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import List, Sequence

import numpy as np

# primes below 2**31 so products of two residues fit in int64
PRIMES = (
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
    2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399,
    2147483353, 2147483323, 2147483269, 2147483249, 2147483237, 2147483179,
    2147483171, 2147483137, 2147483123, 2147483077, 2147483069, 2147483059,
    2147483053, 2147483033, 2147483029, 2147482951, 2147482949, 2147482943,
    2147482937, 2147482921, 2147482877, 2147482873, 2147482867, 2147482859,
)


class KernelLiftError(RuntimeError):
    """The modular kernel could not be lifted to a verified rational kernel."""


def rref(rows: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form over Fractions; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> List[List[Fraction]]:
    """Kernel basis over Q, one vector per free column (free entry = 1)."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def bareiss_echelon(rows: Sequence[Sequence[int]]) -> tuple[list, list]:
    """Fraction-free row echelon form of an integer matrix.

    Returns the echelon rows (only the first ``rank`` are meaningful) and the
    pivot columns.  Every division is exact.
    """
    m = [list(map(int, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (p * row[j] - f * prow[j]) // prev
            row[c] = 0
        # entries of rows above the pivot row that precede column c are untouched
        prev = p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def bareiss_nullspace(rows: Sequence[Sequence[int]], ncols: int | None = None) -> List[List[Fraction]]:
    """Kernel basis from a fraction-free echelon form and exact back substitution."""
    if ncols is None:
        ncols = len(rows[0])
    ech, pivots = bareiss_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            pc = pivots[k]
            row = ech[k]
            s = sum((row[j] * v[j] for j in range(pc + 1, ncols) if v[j]), Fraction(0))
            v[pc] = -s / row[pc]
        basis.append(v)
    return basis


def _rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, list]:
    """In-place reduced echelon form of an int64 matrix modulo prime p."""
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = (a[rows] - (col[rows, None] * a[r][None, :]) % p) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_mod_p(rows: Sequence[Sequence[int]], p: int = PRIMES[0]) -> int:
    a = np.array([[int(x) % p for x in r] for r in rows], dtype=np.int64)
    _, pivots = _rref_mod(a, p)
    return len(pivots)


def _kernel_mod(rows_mod: np.ndarray, p: int, ncols: int) -> tuple[list, list]:
    red, pivots = _rref_mod(rows_mod.copy(), p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-int(row[f])) % p
        basis.append(v)
    return basis, pivots


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Find n/d = a mod m with |n|, d <= sqrt(m/2) (Wang's algorithm)."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _mat_vec_zero(rows: Sequence[Sequence[int]], v: Sequence[Fraction]) -> bool:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    iv = [int(x * den) for x in v]
    nz = [(j, x) for j, x in enumerate(iv) if x]
    for r in rows:
        if sum(r[j] * x for j, x in nz) != 0:
            return False
    return True


def modular_nullspace(
    rows: Sequence[Sequence[int]], ncols: int | None = None, max_primes: int = len(PRIMES)
) -> List[List[Fraction]]:
    """Exact kernel over Q of an integer matrix via multi-modular lifting.

    The returned vectors are normalized like :func:`nullspace` (free column
    entries 0/1) and have been checked exactly against every row.
    """
    if ncols is None:
        ncols = len(rows[0])
    rows = [list(map(int, r)) for r in rows]
    best_rank = -1
    residues: list = []
    modulus = 1
    pivots_ref = None
    for p in PRIMES[:max_primes]:
        a = np.array([[x % p for x in r] for r in rows], dtype=np.int64)
        basis, pivots = _kernel_mod(a, p, ncols)
        rank = len(pivots)
        if rank < best_rank:
            continue  # unlucky prime
        if rank > best_rank:
            best_rank, pivots_ref, residues, modulus = rank, pivots, [], 1
        if pivots != pivots_ref:
            continue
        if not basis:
            return []
        if not residues:
            residues = [list(v) for v in basis]
            modulus = p
        else:
            # CRT combine
            inv = pow(modulus, -1, p)
            for old, new in zip(residues, basis):
                for j in range(ncols):
                    t = ((new[j] - old[j]) * inv) % p
                    old[j] = old[j] + modulus * t
            modulus *= p
        lifted = []
        for vec in residues:
            out = []
            for x in vec:
                fr = rational_reconstruct(x, modulus)
                if fr is None:
                    break
                out.append(fr)
            else:
                lifted.append(out)
                continue
            break
        if len(lifted) == len(residues) and all(_mat_vec_zero(rows, v) for v in lifted):
            return lifted
    raise KernelLiftError("modular kernel did not stabilize; increase max_primes")


def is_zero_matrix_product(rows, v) -> bool:
    return _mat_vec_zero(rows, v)
