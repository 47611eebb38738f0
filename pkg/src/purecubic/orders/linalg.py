"""Integer and modular linear algebra used by the order engine.

Row convention throughout: lattices are spanned by the rows of a matrix.
``hnf`` returns the square lower-triangular Hermite form (row i has its
pivot in column i), i.e. the transpose of the column-style upper-triangular
form.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hnf(vectors: Sequence[Sequence[int]], n: int, modulus: int | None = None) -> Matrix:
    """Lower-triangular HNF of the lattice spanned by ``vectors`` in Z^n.

    With ``modulus`` D the lattice is taken to be span(vectors) + D Z^n and
    all intermediate entries are kept below D.  Without a modulus the lattice
    must have full rank.
    """
    rows = [list(v) for v in vectors if any(v)]
    D = modulus
    if D is not None:
        rows = [[x % D for x in v] for v in rows]
    out: list[list[int] | None] = [None] * n
    for c in range(n - 1, -1, -1):
        if D is not None:
            e = [0] * n
            e[c] = D
            rows.append(e)
        active = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        if not active:
            raise ValueError("lattice is not of full rank")
        piv = active[0]
        for r in active[1:]:
            g, s, t = xgcd(piv[c], r[c])
            a, b = piv[c] // g, r[c] // g
            new_piv = [s * x + t * y for x, y in zip(piv, r)]
            other = [a * y - b * x for x, y in zip(piv, r)]
            piv = new_piv
            if D is not None:
                other = [x % D for x in other]
            if any(other):
                rest.append(other)
        if piv[c] < 0:
            piv = [-x for x in piv]
        if D is not None:
            piv = [x % D if j < c else x for j, x in enumerate(piv)]
        out[c] = piv
        rows = rest
    H = [r for r in out]  # type: ignore[misc]
    # reduce entries below the diagonal: row k, column i < k, modulo H[i][i]
    for k in range(1, n):
        for i in range(k - 1, -1, -1):
            q = H[k][i] // H[i][i]
            if q:
                H[k] = [x - q * y for x, y in zip(H[k], H[i])]
    return H  # type: ignore[return-value]


def hnf_solve(H: Matrix, v: Sequence[int]) -> list[int] | None:
    """Integer x with x * H = v for lower-triangular H, or None if v is not in the lattice."""
    n = len(H)
    v = list(v)
    x = [0] * n
    for c in range(n - 1, -1, -1):
        q, r = divmod(v[c], H[c][c])
        if r:
            return None
        x[c] = q
        if q:
            row = H[c]
            for j in range(c + 1):
                v[j] -= q * row[j]
    return x


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


# -- modular linear algebra ------------------------------------------------

def rref_mod(M: Sequence[Sequence[int]], p: int) -> tuple[Matrix, list[int]]:
    A = [[x % p for x in r] for r in M]
    pivots = []
    rank = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(A)) if A[r][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [x * inv % p for x in A[rank]]
        for r in range(len(A)):
            if r != rank and A[r][c]:
                f = A[r][c]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[rank])]
        pivots.append(c)
        rank += 1
    return A[:rank], pivots


def rank_mod(M: Sequence[Sequence[int]], p: int) -> int:
    if not M:
        return 0
    return len(rref_mod(M, p)[1])


def right_kernel_mod(M: Sequence[Sequence[int]], ncols: int, p: int) -> Matrix:
    """Basis of {x : M x = 0} over F_p."""
    if not M:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    R, pivots = rref_mod(M, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for r, c in enumerate(pivots):
            x[c] = -R[r][f] % p
        basis.append(x)
    return basis


def left_kernel_mod(M: Sequence[Sequence[int]], p: int) -> Matrix:
    """Basis of {x : x M = 0} over F_p, M given by rows."""
    if not M:
        return []
    nrows = len(M)
    T = [[M[i][j] for i in range(nrows)] for j in range(len(M[0]))]
    return right_kernel_mod(T, nrows, p)


def solve_mod(M: Sequence[Sequence[int]], target: Sequence[int], p: int) -> list[int] | None:
    """x with x M = target over F_p (rows of M combined), or None."""
    nrows = len(M)
    T = [[M[i][j] for i in range(nrows)] + [target[j]] for j in range(len(target))]
    R, pivots = rref_mod(T, p)
    if nrows in pivots:
        return None
    x = [0] * nrows
    for r, c in enumerate(pivots):
        x[c] = R[r][nrows] % p
    return x


# -- Smith normal form -----------------------------------------------------

def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """(diag, U, V) with U A V diagonal (entries d_1 | d_2 | ...), U, V unimodular."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [list(r) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(dst, src, f):  # row dst += f * row src
        M[dst] = [x + f * y for x, y in zip(M[dst], M[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def col_op(dst, src, f):  # col dst += f * col src
        for r in M:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        while True:
            # the pivot's absolute value strictly decreases on every pass
            nz = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    row_op(i, t, -(M[i][t] // piv))
                    dirty = dirty or M[i][t] != 0
            for j in range(t + 1, n):
                if M[t][j]:
                    col_op(j, t, -(M[t][j] // piv))
                    dirty = dirty or M[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % piv), None)
            if bad is None:
                break
            row_op(t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
    diag = [M[i][i] for i in range(min(m, n))]
    return diag, U, V


def inverse_unimodular(V: Sequence[Sequence[int]]) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    from fractions import Fraction

    n = len(V)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(V)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    out = []
    for r in A:
        row = r[n:]
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


# -- LLL -------------------------------------------------------------------

def lll_gram(G: Sequence[Sequence[int]]) -> Matrix:
    """Integral LLL (delta = 3/4) on a positive definite integer Gram matrix.

    Returns the unimodular transformation H whose rows express the reduced
    basis in terms of the input basis.
    """
    n = len(G)
    G = [list(r) for r in G]
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    d = [0] * (n + 1)
    lam = [[0] * n for _ in range(n)]
    d[0] = 1
    d[1] = G[0][0]
    if d[1] <= 0:
        raise ValueError("Gram matrix is not positive definite")
    k, kmax = 1, 0

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            H[k] = [x - q * y for x, y in zip(H[k], H[l])]
            # Gram update for b_k <- b_k - q b_l
            gkk = G[k][k] - 2 * q * G[k][l] + q * q * G[l][l]
            for r in range(n):
                if r != k:
                    G[k][r] -= q * G[l][r]
                    G[r][k] = G[k][r]
            G[k][k] = gkk
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k: int) -> None:
        H[k], H[k - 1] = H[k - 1], H[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for r in G:
            r[k], r[k - 1] = r[k - 1], r[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = G[k][j]
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
                    if u <= 0:
                        raise ValueError("Gram matrix is not positive definite")
        while True:
            red(k, k - 1)
            if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
                swap(k)
                k = max(1, k - 1)
            else:
                for l in range(k - 2, -1, -1):
                    red(k, l)
                k += 1
                break
    return H


def lll_rows(B: Sequence[Sequence[int]]) -> Matrix:
    """LLL-reduce integer row vectors (Euclidean inner product)."""
    G = [[sum(x * y for x, y in zip(u, v)) for v in B] for u in B]
    H = lll_gram(G)
    return [[sum(h * b[j] for h, b in zip(row, B)) for j in range(len(B[0]))] for row in H]
