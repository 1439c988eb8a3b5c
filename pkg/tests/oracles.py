"""Independent reference computations used to pin values in the tests.

Nothing here imports the elimination, bar or shuffle code of the package:
ranks use a dense Fraction elimination, strings and shuffles are enumerated
directly.
"""

from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb


def dense_rank(rows: list) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def dense_rank_mod(rows: list, p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], p - 2, p)
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] * inv % p
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def differential_matrix(basis: dict, d: dict, n: int) -> list:
    """Rows index degree n+1, columns degree n; d is {label: {label: coeff}}."""
    src, tgt = basis.get(n, []), basis.get(n + 1, [])
    pos = {t: i for i, t in enumerate(tgt)}
    rows = [[0] * len(src) for _ in tgt]
    for j, s in enumerate(src):
        for t, c in d.get(s, {}).items():
            rows[pos[t]][j] += c
    return rows


def cohomology_dims(basis: dict, d: dict, degrees) -> dict:
    out = {}
    for n in degrees:
        dim = len(basis.get(n, []))
        r_out = dense_rank(differential_matrix(basis, d, n)) if basis.get(n + 1) and dim else 0
        r_in = dense_rank(differential_matrix(basis, d, n - 1)) if basis.get(n - 1) and dim else 0
        out[n] = dim - r_out - r_in
    return out


def complex_cohomology(cx, degrees) -> dict:
    """Cohomology of a package Complex, read only through its basis and d tables."""
    basis = {n: list(b) for n, b in cx.basis.items()}
    d = {x: {t: Fraction(c) for t, c in img.items()} for x, img in cx.d.items()}
    return cohomology_dims(basis, d, degrees)


# ---------------------------------------------------------------- shuffles


def shuffle_sign(word_parities: list, perm: tuple) -> int:
    """Koszul sign of permuting letters of the given parities into ``perm`` order."""
    s = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and word_parities[perm[a]] and word_parities[perm[b]]:
                s = -s
    return s


def signed_shuffle_count(i: int, j: int, odd: bool = True) -> int:
    """Sum of Koszul signs over all permutations of i+j letters keeping both blocks in order."""
    n = i + j
    par = [odd] * n
    tot = 0
    for perm in permutations(range(n)):
        pos = {v: k for k, v in enumerate(perm)}
        if all(pos[a] < pos[a + 1] for a in range(i - 1)) and all(pos[a] < pos[a + 1] for a in range(i, n - 1)):
            tot += shuffle_sign(par, perm)
    return tot


def gaussian_binomial_at_minus_one(n: int, k: int) -> int:
    """[n choose k]_q at q = -1, the closed form for odd letters."""
    if k < 0 or k > n:
        return 0
    if n % 2 == 0 and k % 2 == 1:
        return 0
    return comb(n // 2, k // 2)


def shuffle_positions(i: int, j: int):
    for pos in combinations(range(i + j), i):
        yield pos


# ---------------------------------------------------------------- strings


def composable_strings(arrows: list, n: int) -> list:
    """Tuples (a_1..a_n) of (name, src, tgt) with src(a_i) = tgt(a_{i+1})."""
    out = []
    for s in product(arrows, repeat=n):
        if all(s[k][1] == s[k + 1][2] for k in range(n - 1)):
            out.append(s)
    return out


def bar_dims(arrows: list, fibre: dict, n: int) -> int:
    """dim of omega^dual(X_0) (x) A(X_1,X_0) (x) .. (x) omega(X_n) on non-identity arrows."""
    if n == 0:
        return sum(v * v for v in fibre.values())
    return sum(fibre[s[0][2]] * fibre[s[-1][1]] for s in composable_strings(arrows, n))
