"""Integer lattice calculus modulo m.

Every lattice handled here sits between m*Z^k and Z^k, which makes all row
reductions valid modulo m: adding or removing multiples of m*e_j never
changes the lattice. Lattices are stored as k x k upper-triangular bases
(row Hermite form) whose diagonal entries divide m; entries stay in
[0, m), except diagonals which stay in (0, m].

Provided primitives:
  * hnf_from_rows    - canonical triangular basis from a generating set
  * lattice_index    - [Z^k : L] as an exact integer
  * member_residual  - triangular membership reduction
  * snf_mod          - diagonalisation with optional column transforms
  * orth_complement  - {u : <l, u> = 0 mod m for all l in L}
  * quotient_structure - invariants and generators of L2/L1
  * LatticeSolver    - express vectors over a generating set, mod m
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

import numpy as np


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u*a + v*b = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf_baseline(k: int, m: int) -> np.ndarray:
    return m * np.eye(k, dtype=np.int64)


def hnf_insert(H: np.ndarray, row: np.ndarray, m: int) -> None:
    """Fold one generator row into the triangular basis, in place.

    The reduction walks left to right; columns once cleared stay cleared
    because pivot rows are triangular, so the scan pointer never backs up.
    """
    r = row.astype(np.int64) % m
    j = 0
    while True:
        nz = np.nonzero(r[j:])[0]
        if nz.size == 0:
            return
        j += int(nz[0])
        piv = int(H[j, j])
        a = int(r[j])
        tail = r[j:]
        if a % piv == 0:
            np.subtract(tail, (a // piv) * H[j, j:], out=tail)
            np.remainder(tail, m, out=tail)
        else:
            g, u, v = _egcd(piv, a)
            new_piv = (u * H[j, j:] + v * tail) % m
            np.multiply(tail, piv // g, out=tail)
            np.subtract(tail, (a // g) * H[j, j:], out=tail)
            np.remainder(tail, m, out=tail)
            new_piv[0] = g  # g in (0, m); avoids a zero diagonal representative
            H[j, j:] = new_piv
        j += 1


def hnf_canonical(H: np.ndarray, m: int) -> np.ndarray:
    """Reduce above-diagonal entries modulo the pivot below them."""
    k = H.shape[0]
    out = H.copy()
    for i in range(k):
        for j in range(i + 1, k):
            d = int(out[j, j])
            q = int(out[i, j]) // d
            if q:
                out[i] = (out[i] - q * out[j]) % m
    for i in range(k):
        if out[i, i] == 0:
            out[i, i] = m
    return out


def hnf_from_rows(rows: Sequence[np.ndarray] | np.ndarray, k: int, m: int) -> np.ndarray:
    """Triangular basis of <rows> + m*Z^k.

    Rows are first swept in bulk with the exact-division reduction, which
    disposes of redundant generators cheaply; rows that need a pivot update
    fall back to the sequential insert. The resulting lattice does not
    depend on processing order, and the returned form is canonical.
    """
    H = hnf_baseline(k, m)
    if k == 0:
        return H
    R = np.array(list(rows), dtype=np.int64).reshape(-1, k) % m
    while R.shape[0]:
        active = np.ones(R.shape[0], dtype=bool)
        for j in range(k):
            col = R[:, j]
            colmask = active & (col != 0)
            if not colmask.any():
                continue
            d = int(H[j, j])
            idx = np.nonzero(colmask)[0]
            q, rem = np.divmod(col[idx], d)
            ok = rem == 0
            ok_idx = idx[ok]
            if ok_idx.size:
                R[ok_idx, j:] = (R[ok_idx, j:] - q[ok, None] * H[j, j:]) % m
            active[idx[~ok]] = False  # stuck: needs a gcd pivot update
        R = R[R.any(axis=1)]
        if not R.shape[0]:
            break
        chunk = min(256, R.shape[0])
        for i in range(chunk):
            hnf_insert(H, R[i], m)
        R = R[chunk:]
    return hnf_canonical(H, m)


def lattice_index(H: np.ndarray) -> int:
    """[Z^k : L], as an exact (possibly huge) integer."""
    out = 1
    for d in np.diagonal(H):
        out *= int(d)
    return out


def member_residual(H: np.ndarray, v: np.ndarray, m: int) -> np.ndarray:
    """Reduce v against the basis; an all-zero result means membership."""
    r = np.asarray(v, dtype=np.int64) % m
    k = H.shape[0]
    for j in range(k):
        if r[j] == 0:
            continue
        d = int(H[j, j])
        if r[j] % d != 0:
            return r
        r = (r - (int(r[j]) // d) * H[j]) % m
    return r


def snf_mod(
    rows: np.ndarray,
    k: int,
    m: int,
    want_v: bool = False,
    want_winv: bool = False,
) -> tuple[list[int], np.ndarray | None, np.ndarray | None]:
    """Diagonalise the lattice <rows> + m*Z^k by row and column operations.

    Returns (diag, V, Winv). diag has length k; entry i is the order of the
    quotient in coordinate i (a divisor of m, with the implicit m*Z^k folded
    in, so a zero physical pivot reads as m). V accumulates the column
    operations; Winv accumulates their inverses, so Winv = V^-1 modulo m.
    No divisibility chain is enforced; see invariant_factors_from_orders.
    """
    A = np.asarray(rows, dtype=np.int64).reshape(-1, k) % m
    R = A.shape[0]
    V = np.eye(k, dtype=np.int64) if want_v else None
    W = np.eye(k, dtype=np.int64) if want_winv else None

    def col_addmul(dst: int, src: int, q: int) -> None:
        A[:, dst] = (A[:, dst] - q * A[:, src]) % m
        if V is not None:
            V[:, dst] = (V[:, dst] - q * V[:, src]) % m
        if W is not None:
            W[src] = (W[src] + q * W[dst]) % m

    def col_combine(t: int, j: int, a: int, b: int) -> None:
        # new col t = u*ct + v*cj ; new col j = (a/g)*cj - (b/g)*ct
        g, u, v = _egcd(a, b)
        ct, cj = A[:, t].copy(), A[:, j].copy()
        A[:, t] = (u * ct + v * cj) % m
        A[:, j] = ((a // g) * cj - (b // g) * ct) % m
        if V is not None:
            vt, vj = V[:, t].copy(), V[:, j].copy()
            V[:, t] = (u * vt + v * vj) % m
            V[:, j] = ((a // g) * vj - (b // g) * vt) % m
        if W is not None:
            wt, wj = W[t].copy(), W[j].copy()
            W[t] = ((a // g) * wt + (b // g) * wj) % m
            W[j] = (-v * wt + u * wj) % m

    def col_swap(t: int, j: int) -> None:
        A[:, [t, j]] = A[:, [j, t]]
        if V is not None:
            V[:, [t, j]] = V[:, [j, t]]
        if W is not None:
            W[[t, j]] = W[[j, t]]

    t = 0
    size = min(R, k)
    while t < size:
        sub = A[t:, t:]
        nzr, nzc = np.nonzero(sub)
        if nzr.size == 0:
            break
        vals = sub[nzr, nzc]
        best = int(vals.min())
        # among equal minimal values keep the row-major first
        pick = int(np.nonzero(vals == best)[0][0])
        i0, j0 = int(nzr[pick]) + t, int(nzc[pick]) + t
        if i0 != t:
            A[[t, i0]] = A[[i0, t]]
        if j0 != t:
            col_swap(t, j0)
        while True:
            # clear column t with row operations
            colmask = np.nonzero(A[:, t])[0]
            for i in colmask:
                i = int(i)
                if i == t:
                    continue
                a, b = int(A[t, t]), int(A[i, t])
                if b % a == 0:
                    A[i] = (A[i] - (b // a) * A[t]) % m
                else:
                    g, u, v = _egcd(a, b)
                    rt = (u * A[t] + v * A[i]) % m
                    ri = ((a // g) * A[i] - (b // g) * A[t]) % m
                    rt[t] = g
                    A[t], A[i] = rt, ri
            # clear row t with column operations
            rowmask = [int(j) for j in np.nonzero(A[t])[0] if j != t]
            if not rowmask:
                if np.count_nonzero(A[:, t]) == 1:
                    break
                continue
            for j in rowmask:
                a, b = int(A[t, t]), int(A[t, j])
                if b == 0:
                    continue
                if b % a == 0:
                    col_addmul(j, t, b // a)
                else:
                    col_combine(t, j, a, b)
        t += 1

    diag = []
    for i in range(k):
        d = int(A[i, i]) if i < R else 0
        diag.append(gcd(d, m) if d else m)
    return diag, V, W


def _factorise(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_from_orders(orders: Sequence[int]) -> tuple[int, ...]:
    """Canonical divisibility chain of a direct sum of cyclic groups."""
    per_prime: dict[int, list[int]] = {}
    for v in orders:
        if v <= 1:
            continue
        for p, e in _factorise(v).items():
            per_prime.setdefault(p, []).append(e)
    if not per_prime:
        return ()
    for exps in per_prime.values():
        exps.sort(reverse=True)
    width = max(len(v) for v in per_prime.values())
    desc = []
    for i in range(width):
        d = 1
        for p, exps in per_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        desc.append(d)
    return tuple(reversed(desc))


def orth_complement(rows: np.ndarray | Sequence[np.ndarray], k: int, m: int) -> np.ndarray:
    """Basis of {u : <l, u> = 0 mod m for every generator l}."""
    if k == 0:
        return hnf_baseline(0, m)
    mat = np.asarray(rows, dtype=np.int64).reshape(-1, k)
    diag, V, _ = snf_mod(mat, k, m, want_v=True)
    comp = [(m // diag[i]) * V[:, i] for i in range(k)]
    return hnf_from_rows(comp, k, m)


def coords_against(H: np.ndarray, v: np.ndarray, m: int) -> np.ndarray:
    """One coordinate row c with c @ H = v modulo m*Z^k.

    H must be a triangular basis from hnf_from_rows. Raises ValueError when
    v is not in the lattice (mod m).
    """
    k = H.shape[0]
    r = np.asarray(v, dtype=np.int64) % m
    c = np.zeros(k, dtype=np.int64)
    for j in range(k):
        if r[j] == 0:
            continue
        d = int(H[j, j])
        if int(r[j]) % d != 0:
            raise ValueError("vector not in lattice modulo m")
        q = int(r[j]) // d
        c[j] = q
        r = (r - q * H[j]) % m
    return c % m


def quotient_structure(
    sub_H: np.ndarray,
    sup_H: np.ndarray,
    m: int,
    want_generators: bool = False,
) -> tuple[list[int], np.ndarray | None]:
    """Structure of (sup lattice)/(sub lattice), both between m*Z^k and Z^k.

    Returns (orders, gens): orders[i] is the order of the i-th cyclic
    summand (1 allowed, divides m); gens, when requested, holds one vector
    of Z^k per summand whose class generates it. Orders are not chained;
    canonicalise with invariant_factors_from_orders.
    """
    k = sup_H.shape[0]
    if k == 0:
        return [], (np.zeros((0, 0), dtype=np.int64) if want_generators else None)
    # relation lattice: coordinates (against sup) of sub generators, plus the
    # coordinates of anything that lands in m*Z^k.
    rel_rows = [coords_against(sup_H, row, m) for row in sub_H]
    slack = orth_complement(sup_H.T, k, m)  # {c : c @ sup_H = 0 mod m}
    rel = np.vstack([np.asarray(rel_rows, dtype=np.int64).reshape(-1, k), slack])
    diag, _, W = snf_mod(rel, k, m, want_winv=want_generators)
    if not want_generators:
        return diag, None
    gens = (W @ sup_H) % m
    return diag, gens


class LatticeSolver:
    """Express vectors as combinations of a fixed generating set, mod m.

    Rows are inserted with coefficient bookkeeping, so solve(v) returns one
    coefficient vector c with v = sum c_i * gen_i modulo m*Z^k, or None.
    """

    def __init__(self, gens: np.ndarray, k: int, m: int):
        self.k = k
        self.m = m
        self.t = gens.shape[0] if gens.size else 0
        width = k + self.t
        self.H = np.zeros((k, width), dtype=np.int64)
        for j in range(k):
            self.H[j, j] = m
        for i in range(self.t):
            row = np.zeros(width, dtype=np.int64)
            row[:k] = np.asarray(gens[i], dtype=np.int64) % m
            row[k + i] = 1
            self._insert(row)

    def _insert(self, row: np.ndarray) -> None:
        m, k = self.m, self.k
        r = row % m
        j = 0
        while True:
            nz = np.nonzero(r[j:k])[0]
            if nz.size == 0:
                return
            j += int(nz[0])
            piv = int(self.H[j, j])
            a = int(r[j])
            if a % piv == 0:
                r = (r - (a // piv) * self.H[j]) % m
            else:
                g, u, v = _egcd(piv, a)
                new_piv = (u * self.H[j] + v * r) % m
                r = ((piv // g) * r - (a // g) * self.H[j]) % m
                new_piv[j] = g
                self.H[j] = new_piv
            j += 1

    def solve(self, v: np.ndarray) -> np.ndarray | None:
        m, k = self.m, self.k
        r = np.zeros(k + self.t, dtype=np.int64)
        r[:k] = np.asarray(v, dtype=np.int64) % m
        for j in range(k):
            if r[j] == 0:
                continue
            d = int(self.H[j, j])
            if int(r[j]) % d != 0:
                return None
            r = (r - (int(r[j]) // d) * self.H[j]) % m
        if np.any(r[:k]):
            return None
        return (-r[k:]) % m
