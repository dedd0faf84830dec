"""Exact linear algebra over F_p (numpy int64) and Q (object arrays).

F_p matrices are int64 arrays of least non-negative residues.  The
echelon routine does right-looking elimination in panels: pivoting and
multiplier bookkeeping happen on a narrow reduced panel, and the
trailing block is updated with one float64 matmul per panel.  All
float64 products stay far below 2**53, so every result is exact.

Q matrices use dtype=object with ``Fraction`` entries and a naive
elimination; they are only used at small sizes.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .ring import PrimeField

_PANEL = 128


def is_prime_field(field) -> bool:
    return isinstance(field, PrimeField)


def zeros(field, m: int, n: int):
    if is_prime_field(field):
        return np.zeros((m, n), dtype=np.int64)
    M = np.empty((m, n), dtype=object)
    M[:] = Fraction(0)
    return M


def identity(field, n: int):
    if is_prime_field(field):
        return np.eye(n, dtype=np.int64)
    M = zeros(field, n, n)
    for i in range(n):
        M[i, i] = Fraction(1)
    return M


def _fp_echelon(A: np.ndarray, p: int):
    """Destructive echelon; returns (rank, pivcols, E).

    E holds the echelon rows 0..rank-1 reduced mod p; anything below
    row ``rank`` is garbage and must not be used.
    """
    m, n = A.shape
    r = 0
    pivcols: list[int] = []
    j0 = 0
    while j0 < n and r < m:
        j1 = min(j0 + _PANEL, n)
        r0 = r
        # panel worked on as a contiguous copy with deferred reduction;
        # entries stay below PANEL * p**2, far inside int64
        P = A[r0:, j0:j1] % p
        mult = np.zeros((m - r0, j1 - j0), dtype=np.int64)
        for j in range(j0, j1):
            s = r - r0  # pivot sequence number within this panel
            jc = j - j0
            P[s:, jc] %= p
            nz = np.nonzero(P[s:, jc])[0]
            if nz.size == 0:
                continue
            i = s + int(nz[0])
            if i != s:
                A[[r0 + s, r0 + i], :] = A[[r0 + i, r0 + s], :]
                P[[s, i], :] = P[[i, s], :]
                mult[[s, i], :] = mult[[i, s], :]
            P[s, :] %= p
            inv = pow(int(P[s, jc]), p - 2, p)
            f = (P[s + 1 :, jc] * inv) % p
            nz_f = np.nonzero(f)[0]
            if nz_f.size * 3 < f.size:
                P[s + 1 + nz_f, :] -= f[nz_f, None] * P[s, :]
            else:
                P[s + 1 :, :] -= f[:, None] * P[s, :]
            mult[s + 1 :, s] = f
            pivcols.append(j)
            r += 1
            if r == m:
                break
        A[r0:, j0:j1] = P % p
        npv = r - r0
        if j1 < n and npv > 0:
            A[r0:r, j1:] %= p
            # replay the panel's eliminations among the pivot rows
            for s in range(npv - 1):
                rows = np.nonzero(mult[s + 1 : npv, s])[0]
                if rows.size:
                    A[r0 + s + 1 + rows, j1:] -= (
                        mult[s + 1 + rows, s][:, None] * A[r0 + s, j1:]
                    )
                    A[r0 + s + 1 + rows, j1:] %= p
            if r < m:
                # leave the below block unreduced: it is re-reduced when a
                # later panel or pivot-row pass touches it, and magnitudes
                # stay below p + npanels*PANEL*p**2 << 2**62
                Mf = mult[npv:, :npv].astype(np.float64)
                Uf = A[r0:r, j1:].astype(np.float64)
                A[r:, j1:] -= (Mf @ Uf).astype(np.int64)
        j0 = j1
    if r:
        A[:r] %= p
    return r, pivcols, A


def _qq_echelon(A: np.ndarray):
    """Naive fraction echelon; returns (rank, pivcols, E)."""
    A = A.copy()
    m, n = A.shape
    r = 0
    pivcols: list[int] = []
    for j in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if A[i, j] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[[r, piv], :] = A[[piv, r], :]
        inv = 1 / A[r, j]
        for i in range(r + 1, m):
            if A[i, j] != 0:
                A[i, j:] = A[i, j:] - (A[i, j] * inv) * A[r, j:]
        pivcols.append(j)
        r += 1
    return r, pivcols, A


def _echelon(field, M):
    if is_prime_field(field):
        return _fp_echelon(np.array(M, dtype=np.int64) % field.p, field.p)
    return _qq_echelon(M)


def rank(field, M) -> int:
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    r, _, _ = _echelon(field, M)
    return r


def rank_two(field, A, B) -> tuple[int, int]:
    """rank(A) and rank([A | B]) from one elimination.

    Valid because left-to-right pivoting puts exactly rank(A) pivots in
    the first block.
    """
    if A.shape[1] == 0:
        rb = rank(field, B)
        return 0, rb
    if B.shape[1] == 0:
        r = rank(field, A)
        return r, r
    stacked = np.concatenate([A, B], axis=1)
    r_all, pivcols, _ = _echelon(field, stacked)
    r_a = sum(1 for j in pivcols if j < A.shape[1])
    return r_a, r_all


def nullspace(field, M):
    """Columns form a basis of the right kernel of M."""
    m, n = M.shape
    if n == 0:
        return zeros(field, 0, 0)
    if m == 0:
        return identity(field, n)
    if is_prime_field(field):
        p = field.p
        r, pivcols, E = _fp_echelon(np.array(M, dtype=np.int64) % p, p)
        pivset = set(pivcols)
        free = [j for j in range(n) if j not in pivset]
        N = np.zeros((n, len(free)), dtype=np.int64)
        if not free:
            return N
        X = np.zeros((r, len(free)), dtype=np.int64)
        if r:
            P = E[:r][:, pivcols]
            R = E[:r][:, free]
            for s in range(r - 1, -1, -1):
                acc = R[s].astype(np.int64).copy()
                if s + 1 < r:
                    dot = P[s, s + 1 :].astype(np.float64) @ X[s + 1 :].astype(np.float64)
                    acc = acc - dot.astype(np.int64)
                inv = pow(int(P[s, s]), p - 2, p)
                X[s] = (acc % p * inv) % p
        for k, j in enumerate(free):
            N[j, k] = 1
            for s in range(r):
                N[pivcols[s], k] = (-X[s, k]) % p
        return N
    r, pivcols, E = _qq_echelon(M)
    for s in range(r - 1, -1, -1):
        E[s, :] = E[s, :] * (1 / E[s, pivcols[s]])
        for t in range(s):
            c = E[t, pivcols[s]]
            if c != 0:
                E[t, :] = E[t, :] - c * E[s, :]
    pivset = set(pivcols)
    free = [j for j in range(n) if j not in pivset]
    N = zeros(field, n, len(free))
    for k, j in enumerate(free):
        N[j, k] = Fraction(1)
        for s in range(r):
            N[pivcols[s], k] = -E[s, j]
    return N


def matmul(field, A, B):
    if is_prime_field(field):
        p = field.p
        if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        if A.shape[1] * (p - 1) * (p - 1) < 2**53:
            return (A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % p
        return (A @ B) % p
    return A @ B


def solve_columns(field, B, V):
    """Solve B @ X = V; None if some column of V is outside the span of B.

    Intended for small systems (expressing vectors in a chosen basis).
    """
    nb = B.shape[1]
    nv = V.shape[1]
    if nb == 0:
        if V.shape[0] and any(np.any(V[:, j] != 0) for j in range(nv)):
            return None
        return zeros(field, 0, nv)
    stacked = np.concatenate([B, V], axis=1)
    r, pivcols, E = _echelon(field, stacked)
    if any(j >= nb for j in pivcols):
        return None
    E = E[:r]
    for s in range(r - 1, -1, -1):
        j = pivcols[s]
        if is_prime_field(field):
            E[s] = (E[s] * pow(int(E[s, j]), field.p - 2, field.p)) % field.p
        else:
            E[s] = E[s] * (1 / E[s, j])
        for t in range(s):
            c = E[t, j]
            if c != 0:
                if is_prime_field(field):
                    E[t] = (E[t] - int(c) * E[s]) % field.p
                else:
                    E[t] = E[t] - c * E[s]
    X = zeros(field, nb, nv)
    for s, j in enumerate(pivcols):
        X[j, :] = E[s, nb:]
    return X


class ColumnSpace:
    """Incrementally extendable column-space basis over the field."""

    def __init__(self, field, dim: int):
        self.field = field
        self.dim = dim
        self.pivots: list[int] = []
        self.rows: list[np.ndarray] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, v):
        fld = self.field
        if is_prime_field(fld):
            p = fld.p
            v = np.asarray(v, dtype=np.int64) % p
            for piv, row in zip(self.pivots, self.rows):
                c = int(v[piv])
                if c:
                    v = (v - c * row) % p
            return v
        v = np.array(v, dtype=object)
        for piv, row in zip(self.pivots, self.rows):
            c = v[piv]
            if c != 0:
                v = v - c * row
        return v

    def add(self, v) -> bool:
        """Adjoin a vector; True if it enlarged the space."""
        v = self._reduce(v)
        nz = [i for i in range(self.dim) if v[i] != 0]
        if not nz:
            return False
        piv = nz[0]
        fld = self.field
        if is_prime_field(fld):
            v = (v * pow(int(v[piv]), fld.p - 2, fld.p)) % fld.p
        else:
            v = v * (1 / v[piv])
        for k, row in enumerate(self.rows):
            c = row[piv]
            if c != 0:
                if is_prime_field(fld):
                    self.rows[k] = (row - int(c) * v) % fld.p
                else:
                    self.rows[k] = row - c * v
        self.pivots.append(piv)
        self.rows.append(v)
        return True

    def add_columns(self, M) -> int:
        added = 0
        for j in range(M.shape[1]):
            added += bool(self.add(M[:, j]))
        return added

    def contains(self, v) -> bool:
        red = self._reduce(v)
        return all(red[i] == 0 for i in range(self.dim))


def random_matrix(field, m, n, rng):
    if is_prime_field(field):
        return rng.integers(0, field.p, size=(m, n), dtype=np.int64)
    M = zeros(field, m, n)
    for i in range(m):
        for j in range(n):
            M[i, j] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
    return M
