"""Cochain complexes with labelled bases, chain maps and cohomology."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .field import FieldSpec
from .sparse import Echelon, Matrix, apply_linear, axpy, rref


class ComplexError(ValueError):
    pass


class Complex:
    """A finitely supported cochain complex over an exact field.

    ``basis`` maps a degree to the ordered basis labels in that degree (labels
    are hashable and unique across degrees); ``d`` maps a label to the sparse
    image of that basis element, a dict over labels one degree up.  Degrees of
    dimension zero are simply absent.
    """

    def __init__(self, field: FieldSpec, basis: dict, d: dict | None = None, name: str = ""):
        self.field = field
        self.basis = {n: tuple(b) for n, b in sorted(basis.items()) if len(b)}
        self.d = {k: v for k, v in (d or {}).items() if v}
        self.name = name
        self._deg = {}
        self._pos = {}
        for n, labels in self.basis.items():
            for i, lab in enumerate(labels):
                if lab in self._deg:
                    raise ComplexError(f"duplicate basis label {lab!r}")
                self._deg[lab] = n
                self._pos[lab] = i
        for lab, img in self.d.items():
            if lab not in self._deg:
                raise ComplexError(f"differential given on unknown label {lab!r}")
            for t in img:
                if self._deg.get(t) != self._deg[lab] + 1:
                    raise ComplexError(f"d({lab!r}) has component {t!r} of the wrong degree")

    # -- bookkeeping
    def degree(self, label) -> int:
        return self._deg[label]

    def __contains__(self, label) -> bool:
        return label in self._deg

    def labels(self, n: int | None = None) -> tuple:
        if n is None:
            return tuple(lab for b in self.basis.values() for lab in b)
        return self.basis.get(n, ())

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def dims(self) -> dict:
        return {n: len(b) for n, b in self.basis.items()}

    @property
    def total_dim(self) -> int:
        return len(self._deg)

    def support(self) -> list:
        return list(self.basis)

    def order_key(self, label):
        return (self._deg[label], self._pos[label])

    def euler_characteristic(self, degrees: Iterable[int] | None = None) -> int:
        degs = self.support() if degrees is None else degrees
        return sum((-1) ** (n % 2) * self.dim(n) for n in degs)

    # -- differential
    def d_of(self, label) -> dict:
        return self.d.get(label, {})

    def apply_d(self, vec: dict) -> dict:
        return apply_linear(self.d, vec)

    def matrix(self, n: int) -> Matrix:
        """Matrix of d^n: rows index degree n+1, columns index degree n."""
        src, tgt = self.labels(n), self.labels(n + 1)
        pos = {lab: i for i, lab in enumerate(tgt)}
        rows = [dict() for _ in tgt]
        for j, lab in enumerate(src):
            for t, x in self.d_of(lab).items():
                rows[pos[t]][j] = x
        return Matrix(len(tgt), len(src), rows)

    def truncate(self, lo: int | None = None, hi: int | None = None) -> "Complex":
        """Keep degrees in [lo, hi]; only a subcomplex when hi is None."""
        keep = {n: b for n, b in self.basis.items()
                if (lo is None or n >= lo) and (hi is None or n <= hi)}
        kept = {lab for b in keep.values() for lab in b}
        d = {lab: {t: x for t, x in img.items() if t in kept}
             for lab, img in self.d.items() if lab in kept}
        return Complex(self.field, keep, d, self.name)

    def shift(self, k: int) -> "Complex":
        """The complex M[k] with basis relabelled; degree n moves to n - k."""
        sign = -1 if k % 2 else 1
        basis = {n - k: [("sh", k, lab) for lab in b] for n, b in self.basis.items()}
        d = {("sh", k, lab): {("sh", k, t): x * sign for t, x in img.items()}
             for lab, img in self.d.items()}
        return Complex(self.field, basis, d, self.name)

    def __repr__(self):
        return f"Complex({self.name or ''} dims={self.dims()})"


def zero_complex(field: FieldSpec) -> Complex:
    return Complex(field, {}, {})


def check_complex(c: Complex) -> list:
    """Every basis label whose image under d^2 is nonzero."""
    report = []
    for n in c.support():
        for lab in c.labels(n):
            dd = c.apply_d(c.d_of(lab))
            if dd:
                report.append({"label": lab, "degree": n, "d2": dd})
    return report


@dataclass
class Cohomology:
    dims: dict
    reps: dict
    cocycles: dict = dc_field(default_factory=dict)
    boundaries: dict = dc_field(default_factory=dict)

    def total(self, degrees=None) -> int:
        return sum(v for n, v in self.dims.items() if degrees is None or n in degrees)


def _kernel_vectors(c: Complex, n: int) -> list:
    src = c.labels(n)
    if not src:
        return []
    if not c.labels(n + 1):
        return [{lab: c.field.one} for lab in src]
    red = rref(c.matrix(n), c.field)
    return [{src[j]: x for j, x in v.items()} for v in red.kernel]


def _image_vectors(c: Complex, n: int) -> list:
    """Images of the degree n-1 basis in degree n."""
    return [c.d_of(lab) for lab in c.labels(n - 1) if c.d_of(lab)]


def cohomology(c: Complex, degrees: Iterable[int] | None = None) -> Cohomology:
    """dim H^j = dim ker d^j - rank d^(j-1), with cocycle representatives."""
    degs = list(degrees) if degrees is not None else c.support()
    dims, reps, cocycles, boundaries = {}, {}, {}, {}
    for n in degs:
        z = _kernel_vectors(c, n)
        ech = Echelon(c.order_key)
        for v in _image_vectors(c, n):
            ech.add(v)
        nb = len(ech)
        rs = []
        for v in z:
            if ech.add(v):
                rs.append(v)
        dims[n] = len(z) - nb
        reps[n] = rs
        cocycles[n] = z
        boundaries[n] = nb
    return Cohomology(dims, reps, cocycles, boundaries)


class ChainMap:
    """A degree-``degree`` linear map between complexes, given on basis labels."""

    def __init__(self, source: Complex, target: Complex, images: dict, degree: int = 0, name: str = ""):
        self.source = source
        self.target = target
        self.images = {k: v for k, v in images.items() if v}
        self.degree = degree
        self.name = name
        for lab, img in self.images.items():
            if lab not in source:
                raise ComplexError(f"map given on unknown label {lab!r}")
            for t in img:
                if t not in target:
                    raise ComplexError(f"image of {lab!r} has unknown label {t!r}")
                if target.degree(t) != source.degree(lab) + degree:
                    raise ComplexError(f"image of {lab!r} has wrong degree")

    def __call__(self, vec: dict) -> dict:
        return apply_linear(self.images, vec)

    def check(self) -> list:
        """Labels where d f != (-1)^degree f d."""
        sign = -1 if self.degree % 2 else 1
        bad = []
        for lab in self.source.labels():
            lhs = self.target.apply_d(self.images.get(lab, {}))
            rhs = self(self.source.d_of(lab))
            axpy(lhs, rhs, -sign)
            if lhs:
                bad.append(lab)
        return bad

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        imgs = {lab: self(other.images.get(lab, {})) for lab in other.source.labels()}
        return ChainMap(other.source, self.target, imgs, self.degree + other.degree)


def identity_map(c: Complex) -> ChainMap:
    one = c.field.one
    return ChainMap(c, c, {lab: {lab: one} for lab in c.labels()})


@dataclass
class QuasiIsoCertificate:
    """Per-degree cohomology dimensions and induced ranks within a window."""

    window: tuple
    dims_source: dict
    dims_target: dict
    induced_ranks: dict
    verdict: dict
    level_cutoff: int | None = None
    depth: int | None = None
    notes: list = dc_field(default_factory=list)
    scope: str = "window-local verdict"
    weights: dict | None = None

    @property
    def ok(self) -> bool:
        return all(self.verdict.values())

    def to_json(self) -> dict:
        degs = sorted(self.verdict)
        doc = {
            "window": list(self.window),
            "level_cutoff": self.level_cutoff,
            "depth": self.depth,
            "dims": {"source": {str(n): self.dims_source[n] for n in degs},
                     "target": {str(n): self.dims_target[n] for n in degs}},
            "ranks": {str(n): self.induced_ranks[n] for n in degs},
            "verdict": all(self.verdict[n] for n in degs),
            "verdict_by_degree": {str(n): self.verdict[n] for n in degs},
            "scope": self.scope,
            "notes": list(self.notes),
        }
        if self.weights is not None:
            doc["trusted_weights"] = {str(n): list(self.weights[n]) for n in degs}
        return doc


def induced_map_on_cohomology(f: ChainMap, degrees: Iterable[int]) -> QuasiIsoCertificate:
    """Ranks of H^j(f) and the quasi-isomorphism verdict on each degree."""
    if f.degree != 0:
        raise ComplexError("quasi-isomorphism certificates need a degree-0 map")
    degs = list(degrees)
    hs = cohomology(f.source, degs)
    ht = cohomology(f.target, degs)
    ranks = {}
    for n in degs:
        ech = Echelon(f.target.order_key)
        for v in _image_vectors(f.target, n):
            ech.add(v)
        r = 0
        for z in hs.cocycles[n]:
            if ech.add(f(z)):
                r += 1
        ranks[n] = r
    verdict = {n: hs.dims[n] == ht.dims[n] == ranks[n] for n in degs}
    w = (min(degs), max(degs)) if degs else (0, -1)
    return QuasiIsoCertificate(w, dict(hs.dims), dict(ht.dims), ranks, verdict)


def direct_sum(parts: list, field: FieldSpec) -> Complex:
    """Direct sum of complexes, labels become (i, label)."""
    basis: dict = {}
    d = {}
    for i, c in enumerate(parts):
        for n, labels in c.basis.items():
            basis.setdefault(n, []).extend((i, lab) for lab in labels)
        for lab, img in c.d.items():
            d[(i, lab)] = {(i, t): x for t, x in img.items()}
    return Complex(field, basis, d)


def koszul(*degrees: int) -> int:
    """Sign (+1/-1) for (-1)^(product of the two degrees)."""
    a, b = degrees
    return -1 if (a * b) % 2 else 1


def tensor_complexes(a: Complex, b: Complex, lo: int | None = None, hi: int | None = None) -> Complex:
    """a (x) b with d(x(x)y) = dx(x)y + (-1)^|x| x(x)dy; labels are pairs."""
    fld = a.field
    basis: dict = {}
    for n, la in a.basis.items():
        for m, lb in b.basis.items():
            if (lo is not None and n + m < lo) or (hi is not None and n + m > hi):
                continue
            basis.setdefault(n + m, []).extend((x, y) for x in la for y in lb)
    keep = {lab for labs in basis.values() for lab in labs}
    d = {}
    for labs in basis.values():
        for (x, y) in labs:
            img: dict = {}
            for t, c in a.d_of(x).items():
                if (t, y) in keep:
                    img[(t, y)] = img.get((t, y), 0) + c
            s = -1 if a.degree(x) % 2 else 1
            for t, c in b.d_of(y).items():
                if (x, t) in keep:
                    img[(x, t)] = img.get((x, t), 0) + c * s
            img = {k: fld(v) if isinstance(v, int) else v for k, v in img.items() if v}
            if img:
                d[(x, y)] = img
    return Complex(fld, basis, d)


def complex_to_json(c: Complex, render=str) -> dict:
    F = c.field
    return {
        "field": F.to_json(),
        "name": c.name,
        "basis": {str(n): [render(x) for x in labs] for n, labs in c.basis.items()},
        "d": [[render(x), render(t), F.fmt(v)] for x in c.labels() for t, v in c.d_of(x).items()],
    }


def complex_from_json(doc: dict) -> Complex:
    try:
        F = FieldSpec.from_json(doc.get("field", "Q"))
        basis = {int(n): list(v) for n, v in doc["basis"].items()}
        d: dict = {}
        for x, t, v in doc.get("d", []):
            img = d.setdefault(x, {})
            img[t] = img.get(t, F.zero) + F(v)
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ComplexError(f"malformed complex document: {e}") from e
    return Complex(F, basis, {x: {t: v for t, v in img.items() if v} for x, img in d.items()}, doc.get("name", ""))
