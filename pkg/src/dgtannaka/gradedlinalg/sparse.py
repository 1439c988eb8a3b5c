"""Sparse exact linear algebra.

Vectors are dicts ``key -> scalar`` holding only nonzero entries.  Matrices
are lists of row dicts ``column index -> scalar``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Callable, Hashable, Iterable

from .field import FieldSpec, FieldError, Mod


def axpy(acc: dict, vec: dict, c=1) -> dict:
    """acc += c * vec, in place; zero entries are dropped."""
    if not c:
        return acc
    for k, v in vec.items():
        x = acc.get(k)
        x = v * c if x is None else x + v * c
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def add_term(acc: dict, key, c) -> None:
    if not c:
        return
    x = acc.get(key)
    x = c if x is None else x + c
    if x:
        acc[key] = x
    else:
        del acc[key]


def scaled(vec: dict, c) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in vec.items() if v * c}


def is_zero(vec: dict) -> bool:
    return not any(vec.values())


def apply_linear(images: Callable[[Hashable], dict] | dict, vec: dict) -> dict:
    """Apply a linear map given on basis keys to a vector."""
    get = images.get if isinstance(images, dict) else images
    out: dict = {}
    for k, c in vec.items():
        im = get(k)
        if im:
            axpy(out, im, c)
    return out


@dataclass
class Matrix:
    nrows: int
    ncols: int
    rows: list = dc_field(default_factory=list)

    @classmethod
    def from_dense(cls, dense, fld: FieldSpec) -> "Matrix":
        dense = [list(r) for r in dense]
        ncols = len(dense[0]) if dense else 0
        rows = [{j: fld(x) for j, x in enumerate(r) if x} for r in dense]
        return cls(len(dense), ncols, rows)

    def to_dense(self, fld: FieldSpec):
        return [[r.get(j, fld.zero) for j in range(self.ncols)] for r in self.rows]


@dataclass
class RREF:
    rows: list
    rank: int
    pivots: list
    kernel: list


def _check_field(rows, fld: FieldSpec):
    for r in rows:
        for x in r.values():
            if fld.p is None and isinstance(x, Mod):
                raise FieldError("F_p entry in a rational matrix")
            if fld.p is not None and isinstance(x, Mod) and x.p != fld.p:
                raise FieldError("entries from different prime fields")


def _rref_rational(rows, ncols):
    # clear denominators row by row, then eliminate over Z keeping rows primitive
    irows = []
    for r in rows:
        if not r:
            irows.append({})
            continue
        den = 1
        for x in r.values():
            x = Fraction(x)
            den = den * x.denominator // gcd(den, x.denominator)
        irows.append({j: int(Fraction(x) * den) for j, x in r.items() if x})
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(irows)):
            if irows[i].get(col):
                piv = i
                break
        if piv is None:
            continue
        irows[rank], irows[piv] = irows[piv], irows[rank]
        prow = irows[rank]
        p = prow[col]
        for i in range(len(irows)):
            if i == rank:
                continue
            c = irows[i].get(col)
            if not c:
                continue
            g = gcd(p, c)
            a, b = p // g, c // g
            new = {}
            keys = set(irows[i]) | set(prow)
            for j in keys:
                x = a * irows[i].get(j, 0) - b * prow.get(j, 0)
                if x:
                    new[j] = x
            content = 0
            for x in new.values():
                content = gcd(content, x)
            if content > 1:
                new = {j: x // content for j, x in new.items()}
            irows[i] = new
        pivots.append(col)
        rank += 1
    out = []
    for i in range(rank):
        p = irows[i][pivots[i]]
        out.append({j: Fraction(x, p) for j, x in irows[i].items()})
    return out, pivots


def _rref_modp(rows, ncols, p):
    irows = [{j: int(x) % p for j, x in r.items() if int(x) % p} for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(irows)):
            if irows[i].get(col):
                piv = i
                break
        if piv is None:
            continue
        irows[rank], irows[piv] = irows[piv], irows[rank]
        inv = pow(irows[rank][col], -1, p)
        prow = {j: x * inv % p for j, x in irows[rank].items()}
        irows[rank] = prow
        for i in range(len(irows)):
            if i == rank:
                continue
            c = irows[i].get(col)
            if not c:
                continue
            new = dict(irows[i])
            for j, x in prow.items():
                y = (new.get(j, 0) - c * x) % p
                if y:
                    new[j] = y
                else:
                    new.pop(j, None)
            irows[i] = new
        pivots.append(col)
        rank += 1
    return [{j: Mod(x, p) for j, x in irows[i].items()} for i in range(rank)], pivots


def rref(m: Matrix, fld: FieldSpec) -> RREF:
    """Reduced row echelon form, rank, pivot columns and a kernel basis.

    Pivoting takes the leftmost nonzero column and the topmost usable row.
    Kernel vectors are listed by increasing free column.
    """
    _check_field(m.rows, fld)
    if fld.p is None:
        rows, pivots = _rref_rational(m.rows, m.ncols)
    else:
        rows, pivots = _rref_modp(m.rows, m.ncols, fld.p)
    pivset = set(pivots)
    kernel = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = {f: fld.one}
        for r, pc in zip(rows, pivots):
            x = r.get(f)
            if x:
                v[pc] = -x
        kernel.append(v)
    return RREF(rows, len(pivots), pivots, kernel)


def rank(m: Matrix, fld: FieldSpec) -> int:
    return rref(m, fld).rank


class Echelon:
    """Incrementally built echelon basis of a subspace of a keyed vector space.

    ``order`` maps keys to sort positions; the pivot of a stored row is its
    smallest key.  With ``track=True`` every stored row remembers which
    combination of inserted vectors produced it.
    """

    def __init__(self, order: Callable[[Hashable], object] | None = None, track: bool = False):
        self.order = order if order is not None else (lambda k: k)
        self.rows: dict = {}
        self.combos: dict = {}
        self.track = track
        self.count = 0

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict, combo: dict | None = None):
        v = dict(vec)
        while True:
            cands = [k for k in v if k in self.rows]
            if not cands:
                return (v, combo) if combo is not None else v
            k = min(cands, key=self.order)
            c = v[k]
            axpy(v, self.rows[k], -c)
            if combo is not None:
                axpy(combo, self.combos[k], -c)

    def add(self, vec: dict) -> bool:
        idx = self.count
        self.count += 1
        if self.track:
            v, combo = self.reduce(vec, {idx: 1})
        else:
            v, combo = self.reduce(vec), None
        if not v:
            return False
        k = min(v, key=self.order)
        inv = 1 / v[k]
        self.rows[k] = {j: x * inv for j, x in v.items()}
        if self.track:
            self.combos[k] = {j: x * inv for j, x in combo.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def express(self, vec: dict):
        """Coefficients of ``vec`` in terms of the inserted vectors, or None."""
        if not self.track:
            raise ValueError("Echelon built without tracking")
        v = dict(vec)
        out: dict = {}
        while v:
            cands = [k for k in v if k in self.rows]
            if len(cands) != len(v):
                return None
            k = min(cands, key=self.order)
            c = v[k]
            axpy(v, self.rows[k], -c)
            axpy(out, self.combos[k], c)
        return out


def span_rank(vectors: Iterable[dict], order=None) -> int:
    e = Echelon(order)
    for v in vectors:
        e.add(v)
    return len(e)


def kernel_of_map(columns: list, order=None, fld: FieldSpec | None = None) -> list:
    """Kernel of the map sending the i-th standard vector to ``columns[i]``.

    Returns dicts ``i -> coefficient``.
    """
    keys = {}
    for col in columns:
        for k in col:
            if k not in keys:
                keys[k] = None
    keylist = sorted(keys, key=order) if order else list(keys)
    pos = {k: i for i, k in enumerate(keylist)}
    rows = [dict() for _ in keylist]
    for j, col in enumerate(columns):
        for k, x in col.items():
            rows[pos[k]][j] = x
    fld = fld or _guess_field(columns)
    return rref(Matrix(len(rows), len(columns), rows), fld).kernel


def _guess_field(columns) -> FieldSpec:
    for col in columns:
        for x in col.values():
            if isinstance(x, Mod):
                return FieldSpec(x.p)
            return FieldSpec()
    return FieldSpec()
