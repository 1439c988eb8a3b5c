"""Finite presentations of k-linear dg categories, their modules and bimodules.

Conventions.  ``hom(X, Y)`` holds morphisms X -> Y; ``compose(g, f)`` is
g o f for f: X -> Y, g: Y -> Z.  Composition has degree 0 and d is a
derivation: d(g o f) = dg o f + (-1)^|g| g o df.

A left module L is covariant: a: X -> Y acts L(X) -> L(Y), written a.v.
A right module R is contravariant: a: X -> Y acts R(Y) -> R(X), written r.a.
Both satisfy the Leibniz rule with the same sign pattern as composition.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field as dc_field

from .gradedlinalg import Complex, Echelon, FieldSpec, Matrix, axpy, rref
from .gradedlinalg.sparse import add_term, apply_linear


class PresentationError(ValueError):
    pass


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class Morphism:
    name: str
    src: str
    tgt: str
    degree: int


class DgCategory:
    """A dg category with finitely many objects and finite-dimensional homs.

    Every identity must be one of the chosen basis elements.  Missing
    composition entries are zero.
    """

    def __init__(self, field: FieldSpec, objects, morphisms, d=None, compose=None,
                 identities=None, nilpotence: int | None = None, name: str = ""):
        self.field = field
        self.objects = tuple(objects)
        self.name = name
        self.mor = {}
        self._hom = {(x, y): [] for x in self.objects for y in self.objects}
        for m in morphisms:
            if not isinstance(m, Morphism):
                m = Morphism(*m)
            if m.name in self.mor:
                raise PresentationError(f"duplicate morphism name {m.name!r}")
            if m.src not in self.objects or m.tgt not in self.objects:
                raise PresentationError(f"morphism {m.name!r} between unknown objects")
            self.mor[m.name] = m
            self._hom[(m.src, m.tgt)].append(m.name)
        self._hom = {k: tuple(v) for k, v in self._hom.items()}
        self._pos = {n: i for i, n in enumerate(self.mor)}
        self.d = {k: {t: field(c) for t, c in v.items() if c} for k, v in (d or {}).items()}
        self.d = {k: v for k, v in self.d.items() if v}
        self.comp = {}
        for (g, f), v in (compose or {}).items():
            v = {t: field(c) for t, c in v.items() if c}
            if v:
                self.comp[(g, f)] = v
        self.identities = dict(identities or {})
        for x in self.objects:
            if x not in self.identities:
                raise PresentationError(f"no identity designated for {x!r}")
        self._id_names = set(self.identities.values())
        self.nilpotence = nilpotence

    # -- structure
    def hom(self, x, y) -> tuple:
        return self._hom[(x, y)]

    def src(self, a) -> str:
        return self.mor[a].src

    def tgt(self, a) -> str:
        return self.mor[a].tgt

    def deg(self, a) -> int:
        return self.mor[a].degree

    def identity(self, x) -> str:
        return self.identities[x]

    def is_identity(self, a) -> bool:
        return a in self._id_names

    def order_key(self, a):
        return self._pos[a]

    def compose(self, g, f) -> dict:
        """g o f as a sparse vector over morphism names."""
        if self.tgt(f) != self.src(g):
            raise PresentationError(f"{g} o {f} is not composable")
        if self.is_identity(g):
            return {f: self.field.one}
        if self.is_identity(f):
            return {g: self.field.one}
        return self.comp.get((g, f), {})

    def compose_vec(self, gv: dict, fv: dict) -> dict:
        out: dict = {}
        for g, a in gv.items():
            for f, b in fv.items():
                if self.tgt(f) == self.src(g):
                    axpy(out, self.compose(g, f), a * b)
        return out

    def d_of(self, a) -> dict:
        return self.d.get(a, {})

    def hom_complex(self, x, y) -> Complex:
        basis: dict = {}
        for a in self.hom(x, y):
            basis.setdefault(self.deg(a), []).append(a)
        return Complex(self.field, basis, {a: self.d_of(a) for a in self.hom(x, y)}, name=f"hom({x},{y})")

    def degree_range(self, names=None):
        degs = [self.deg(a) for a in (self.mor if names is None else names)]
        return (min(degs), max(degs)) if degs else (0, 0)

    def nonidentity(self) -> list:
        return [a for a in self.mor if not self.is_identity(a)]

    def positive(self) -> list:
        return [a for a in self.mor if self.deg(a) > 0]

    def longest_chain(self, gens, bound: int) -> int:
        """Length of the longest object-composable chain of ``gens``, capped at ``bound``."""
        best = 0
        ends = {x: 0 for x in self.objects}  # longest chain ending at x (as target)
        for length in range(1, bound + 1):
            new = {}
            for a in gens:
                if ends.get(self.src(a), -1) == length - 1:
                    new[self.tgt(a)] = length
            if not new:
                break
            best = length
            ends = {x: new.get(x, -1) for x in self.objects}
        return best

    def opposite(self) -> "DgCategory":
        """A^op with (f^op o g^op) = (-1)^{|f||g|} (g o f)^op."""
        mors = [Morphism(a, m.tgt, m.src, m.degree) for a, m in self.mor.items()]
        comp = {}
        for (g, f), v in self.comp.items():
            comp[(f, g)] = {t: c * _sign(self.deg(f) * self.deg(g)) for t, c in v.items()}
        return DgCategory(self.field, self.objects, mors, self.d, comp, self.identities,
                          self.nilpotence, self.name + "^op")


def validate_category(A: DgCategory) -> list:
    """Exhaustive basis-level check of the dg category axioms.

    Returns a list of human-readable failures naming the first offending
    basis tuple of each kind; empty means valid.
    """
    rep = []
    F = A.field
    for x, a in A.identities.items():
        if a not in A.mor or A.src(a) != x or A.tgt(a) != x or A.deg(a) != 0:
            rep.append(f"identity {a!r} is not a degree-0 endomorphism of {x!r}")
            return rep
        if A.d_of(a):
            rep.append(f"d({a}) != 0 for the identity of {x!r}")
    for a, img in A.d.items():
        for t in img:
            if (A.src(t), A.tgt(t)) != (A.src(a), A.tgt(a)) or A.deg(t) != A.deg(a) + 1:
                rep.append(f"d({a}) has component {t} in the wrong hom/degree")
    for a in A.mor:
        if apply_linear(A.d, A.d_of(a)):
            rep.append(f"d^2({a}) != 0")
    for (g, f), v in A.comp.items():
        if g not in A.mor or f not in A.mor or A.tgt(f) != A.src(g):
            rep.append(f"composition entry ({g}, {f}) is not composable")
            continue
        for t in v:
            if (A.src(t), A.tgt(t)) != (A.src(f), A.tgt(g)) or A.deg(t) != A.deg(f) + A.deg(g):
                rep.append(f"{g} o {f} has component {t} in the wrong hom/degree")
    if rep:
        return rep
    names = list(A.mor)
    # associativity on composable basis triples
    for h in names:
        for g in names:
            if A.tgt(g) != A.src(h):
                continue
            for f in names:
                if A.tgt(f) != A.src(g):
                    continue
                lhs = A.compose_vec(A.compose(h, g), {f: F.one})
                rhs = A.compose_vec({h: F.one}, A.compose(g, f))
                if lhs != rhs:
                    rep.append(f"associativity/derivation failure: ({h} o {g}) o {f} != {h} o ({g} o {f})")
                    return rep
    # Leibniz on composable basis pairs
    for g in names:
        for f in names:
            if A.tgt(f) != A.src(g):
                continue
            lhs = apply_linear(A.d, A.compose(g, f))
            rhs = A.compose_vec(A.d_of(g), {f: F.one})
            axpy(rhs, A.compose_vec({g: F.one}, A.d_of(f)), _sign(A.deg(g)))
            if lhs != rhs:
                rep.append(f"associativity/derivation failure: Leibniz rule fails on ({g}, {f})")
                return rep
    if A.nilpotence is not None:
        rep += check_nilpotence(A)
    return rep


def check_nilpotence(A: DgCategory) -> list:
    """Verify the certificate N: every composite of N positive-degree generators is zero.

    The span of length-k composites is built for k = 1..N+1 by composing
    with generators on the left.
    """
    N = A.nilpotence
    if N is None or N < 1:
        return ["nilpotence certificate must be a positive integer"]
    gens = A.positive()
    span = [{g: A.field.one} for g in gens]
    for k in range(2, N + 2):
        ech = Echelon(A.order_key)
        nxt = []
        for g in gens:
            for v in span:
                w = A.compose_vec({g: A.field.one}, v)
                if w and ech.add(w):
                    nxt.append(w)
        span = nxt
        if k == N and span:
            return [f"nilpotence certificate {N} fails: a composite of {N} positive-degree generators is nonzero"]
    if span:
        return [f"nilpotence certificate {N} fails at length {N + 1}"]
    if N == 1 and gens:
        return ["nilpotence certificate 1 fails: positive-degree generators exist"]
    return []


# ---------------------------------------------------------------- modules


class LeftModule:
    """Covariant functor A -> cochain complexes with finite-dimensional values."""

    side = "left"

    def __init__(self, cat: DgCategory, basis: dict, d: dict | None = None, action: dict | None = None, name: str = ""):
        self.cat = cat
        self.name = name
        self._labels = {x: tuple(lab for lab, _ in basis.get(x, ())) for x in cat.objects}
        self._deg = {}
        self._obj = {}
        for x in cat.objects:
            for lab, dg in basis.get(x, ()):
                if lab in self._deg:
                    raise PresentationError(f"duplicate module label {lab!r}")
                self._deg[lab] = dg
                self._obj[lab] = x
        F = cat.field
        self._d = {k: {t: F(c) for t, c in v.items() if c} for k, v in (d or {}).items()}
        self._act = {}
        for (a, lab), v in (action or {}).items():
            self._act[(a, lab)] = {t: F(c) for t, c in v.items() if c}

    def labels(self, x) -> tuple:
        return self._labels[x]

    def degree(self, lab) -> int:
        return self._deg[lab]

    def obj(self, lab):
        return self._obj[lab]

    def d(self, lab) -> dict:
        return self._d.get(lab, {})

    def act(self, a, lab) -> dict:
        """a . lab for a: X -> Y and lab in M(X)."""
        if self.cat.is_identity(a):
            return {lab: self.cat.field.one}
        return self._act.get((a, lab), {})

    def act_vec(self, av: dict, vv: dict) -> dict:
        out: dict = {}
        for a, c in av.items():
            for lab, e in vv.items():
                if self.obj(lab) == self.cat.src(a):
                    axpy(out, self.act(a, lab), c * e)
        return out

    def complex_at(self, x) -> Complex:
        basis: dict = {}
        for lab in self.labels(x):
            basis.setdefault(self.degree(lab), []).append(lab)
        return Complex(self.cat.field, basis, {lab: self.d(lab) for lab in self.labels(x)})

    def total_dim(self) -> int:
        return sum(len(self.labels(x)) for x in self.cat.objects)

    def degree_range(self):
        degs = [self.degree(l) for x in self.cat.objects for l in self.labels(x)]
        return (min(degs), max(degs)) if degs else (0, 0)


class RightModule(LeftModule):
    """Contravariant functor A^op -> cochain complexes; ``act(lab, a)`` is lab . a."""

    side = "right"

    def act(self, lab, a) -> dict:  # type: ignore[override]
        """lab . a for a: X -> Y and lab in M(Y)."""
        if self.cat.is_identity(a):
            return {lab: self.cat.field.one}
        return self._act.get((lab, a), {})

    def act_vec(self, vv: dict, av: dict) -> dict:  # type: ignore[override]
        out: dict = {}
        for lab, e in vv.items():
            for a, c in av.items():
                if self.obj(lab) == self.cat.tgt(a):
                    axpy(out, self.act(lab, a), c * e)
        return out


class FibreFunctor(LeftModule):
    """A dg functor omega: A -> finite complexes, given by matrices omega(a)."""

    def matrix(self, a) -> dict:
        return {lab: self.act(a, lab) for lab in self.labels(self.cat.src(a))}


class DualModule(RightModule):
    """The right module X -> L(X)^dual of a left module L, on the dual basis.

    (phi . a)(v) = phi(a . v); (d phi)(v) = -(-1)^|phi| phi(dv).
    """

    def __init__(self, L: LeftModule):
        self.cat = L.cat
        self.base = L
        self.name = (L.name or "M") + "^v"
        self._labels = {x: tuple(("dual", lab) for lab in L.labels(x)) for x in L.cat.objects}
        self._deg = {("dual", lab): -L.degree(lab) for x in L.cat.objects for lab in L.labels(x)}
        self._obj = {("dual", lab): L.obj(lab) for x in L.cat.objects for lab in L.labels(x)}
        dd: dict = {}
        for x in L.cat.objects:
            for lab in L.labels(x):
                for t, c in L.d(lab).items():
                    # (d t^)(lab) = -(-1)^|t^| t^(d lab) = -(-1)^{-|t|} c
                    add_term(dd.setdefault(("dual", t), {}), ("dual", lab), -c * _sign(L.degree(t)))
        self._d = {k: v for k, v in dd.items() if v}
        act: dict = {}
        for a in L.cat.mor:
            for lab in L.labels(L.cat.src(a)):
                for t, c in L.act(a, lab).items():
                    add_term(act.setdefault((("dual", t), a), {}), ("dual", lab), c)
        self._act = act


class CorepresentableModule(LeftModule):
    """h_X: Y -> hom(X, Y), acted on by post-composition."""

    def __init__(self, cat: DgCategory, x):
        self.cat = cat
        self.x = x
        self.name = f"h_{x}"
        self._labels = {y: cat.hom(x, y) for y in cat.objects}
        self._deg = {a: cat.deg(a) for y in cat.objects for a in cat.hom(x, y)}
        self._obj = {a: cat.tgt(a) for y in cat.objects for a in cat.hom(x, y)}
        self._d = {}
        self._act = {}

    def d(self, lab):
        return self.cat.d_of(lab)

    def act(self, a, lab):
        return self.cat.compose(a, lab)


class RepresentableModule(RightModule):
    """h^X: Y -> hom(Y, X), acted on by pre-composition."""

    def __init__(self, cat: DgCategory, x):
        self.cat = cat
        self.x = x
        self.name = f"h^{x}"
        self._labels = {y: cat.hom(y, x) for y in cat.objects}
        self._deg = {a: cat.deg(a) for y in cat.objects for a in cat.hom(y, x)}
        self._obj = {a: cat.src(a) for y in cat.objects for a in cat.hom(y, x)}
        self._d = {}
        self._act = {}

    def d(self, lab):
        return self.cat.d_of(lab)

    def act(self, lab, a):
        return self.cat.compose(lab, a)


def validate_module(M: LeftModule) -> list:
    """Functoriality, unitality, Leibniz and d^2 = 0 on every basis element."""
    A = M.cat
    F = A.field
    rep = []
    for x in A.objects:
        for lab in M.labels(x):
            for t in M.d(lab):
                if M.obj(t) != x or M.degree(t) != M.degree(lab) + 1:
                    rep.append(f"d({lab!r}) leaves {x!r} or has the wrong degree")
            dd: dict = {}
            for t, c in M.d(lab).items():
                axpy(dd, M.d(t), c)
            if dd:
                rep.append(f"d^2({lab!r}) != 0")
    left = M.side == "left"
    for a in A.mor:
        s, t = (A.src(a), A.tgt(a)) if left else (A.tgt(a), A.src(a))
        for lab in M.labels(s):
            img = M.act(a, lab) if left else M.act(lab, a)
            for u in img:
                if M.obj(u) != t or M.degree(u) != M.degree(lab) + A.deg(a):
                    rep.append(f"action of {a} on {lab!r} lands in the wrong place")
        if A.is_identity(a):
            continue
    if rep:
        return rep
    names = list(A.mor)
    for g in names:
        for f in names:
            if A.tgt(f) != A.src(g):
                continue
            gf = A.compose(g, f)
            if left:
                for lab in M.labels(A.src(f)):
                    lhs = M.act_vec(gf, {lab: F.one})
                    rhs = M.act_vec({g: F.one}, M.act(f, lab))
                    if lhs != rhs:
                        rep.append(f"functoriality fails: ({g} o {f}) . {lab!r}")
                        return rep
            else:
                for lab in M.labels(A.tgt(g)):
                    lhs = M.act_vec({lab: F.one}, gf)
                    rhs = M.act_vec(M.act(lab, g), {f: F.one})
                    if lhs != rhs:
                        rep.append(f"functoriality fails: {lab!r} . ({g} o {f})")
                        return rep
    for a in names:
        if A.is_identity(a):
            if A.d_of(a):
                rep.append(f"d(id) != 0 for {a}")
            continue
        if left:
            for lab in M.labels(A.src(a)):
                lhs = _d_vec(M, M.act(a, lab))
                rhs = M.act_vec(A.d_of(a), {lab: F.one})
                axpy(rhs, M.act_vec({a: F.one}, M.d(lab)), _sign(A.deg(a)))
                if lhs != rhs:
                    rep.append(f"Leibniz fails for {a} acting on {lab!r}")
                    return rep
        else:
            for lab in M.labels(A.tgt(a)):
                lhs = _d_vec(M, M.act(lab, a))
                rhs = M.act_vec(M.d(lab), {a: F.one})
                axpy(rhs, M.act_vec({lab: F.one}, A.d_of(a)), _sign(M.degree(lab)))
                if lhs != rhs:
                    rep.append(f"Leibniz fails for {lab!r} acted on by {a}")
                    return rep
    return rep


def _d_vec(M, vec: dict) -> dict:
    out: dict = {}
    for lab, c in vec.items():
        axpy(out, M.d(lab), c)
    return out


def validate_functor(omega: LeftModule) -> list:
    """A fibre functor is a left module; its laws are the module laws."""
    return validate_module(omega)


# ---------------------------------------------------------------- bimodules


class Bimodule:
    """F(X -> Y) complexes with left action g.f (g: Y -> Z) and right action f.a (a: W -> X)."""

    def __init__(self, cat: DgCategory, basis: dict, d=None, left=None, right=None, name=""):
        self.cat = cat
        self.name = name
        self._labels = {k: tuple(lab for lab, _ in v) for k, v in basis.items()}
        self._deg, self._pair = {}, {}
        for k, v in basis.items():
            for lab, dg in v:
                self._deg[lab] = dg
                self._pair[lab] = k
        F = cat.field
        self._d = {k: {t: F(c) for t, c in v.items() if c} for k, v in (d or {}).items()}
        self._left = {k: {t: F(c) for t, c in v.items() if c} for k, v in (left or {}).items()}
        self._right = {k: {t: F(c) for t, c in v.items() if c} for k, v in (right or {}).items()}

    def labels(self, x, y) -> tuple:
        return self._labels.get((x, y), ())

    def degree(self, lab) -> int:
        return self._deg[lab]

    def pair(self, lab):
        return self._pair[lab]

    def d(self, lab) -> dict:
        return self._d.get(lab, {})

    def left(self, g, lab) -> dict:
        if self.cat.is_identity(g):
            return {lab: self.cat.field.one}
        return self._left.get((g, lab), {})

    def right(self, lab, a) -> dict:
        if self.cat.is_identity(a):
            return {lab: self.cat.field.one}
        return self._right.get((lab, a), {})

    def degree_range(self):
        degs = list(self._deg.values())
        return (min(degs), max(degs)) if degs else (0, 0)


class IdentityBimodule(Bimodule):
    """id_A: F(X -> Y) = hom(X, Y) with actions by composition."""

    def __init__(self, cat: DgCategory):
        self.cat = cat
        self.name = "id_A"
        self._labels = {(x, y): cat.hom(x, y) for x in cat.objects for y in cat.objects}
        self._deg = {a: cat.deg(a) for a in cat.mor}
        self._pair = {a: (cat.src(a), cat.tgt(a)) for a in cat.mor}

    def d(self, lab):
        return self.cat.d_of(lab)

    def left(self, g, lab):
        return self.cat.compose(g, lab)

    def right(self, lab, a):
        return self.cat.compose(lab, a)


class TensorBimodule(Bimodule):
    """F(X -> Y) = L(Y) (x) R(X) for a left module L and right module R.

    With L = omega and R = omega^dual this is omega (x) omega^dual.
    """

    def __init__(self, L: LeftModule, R: RightModule):
        cat = L.cat
        self.cat = cat
        self.L, self.R = L, R
        self.name = f"{L.name}(x){R.name}"
        self._labels = {(x, y): tuple((l, r) for l in L.labels(y) for r in R.labels(x))
                        for x in cat.objects for y in cat.objects}
        self._deg = {lab: L.degree(lab[0]) + R.degree(lab[1]) for v in self._labels.values() for lab in v}
        self._pair = {lab: k for k, v in self._labels.items() for lab in v}

    def d(self, lab):
        l, r = lab
        out: dict = {}
        for t, c in self.L.d(l).items():
            add_term(out, (t, r), c)
        s = _sign(self.L.degree(l))
        for t, c in self.R.d(r).items():
            add_term(out, (l, t), c * s)
        return out

    def left(self, g, lab):
        l, r = lab
        return {(t, r): c for t, c in self.L.act(g, l).items()}

    def right(self, lab, a):
        l, r = lab
        return {(l, t): c for t, c in self.R.act(r, a).items()}


def validate_bimodule(B: Bimodule) -> list:
    A = B.cat
    rep = []
    names = list(A.mor)
    for (x, y), labs in B._labels.items():
        for lab in labs:
            dd: dict = {}
            for t, c in B.d(lab).items():
                axpy(dd, B.d(t), c)
            if dd:
                rep.append(f"d^2({lab!r}) != 0")
    for (x, y), labs in B._labels.items():
        for lab in labs:
            for g in names:
                if A.src(g) != y:
                    continue
                for f in names:
                    if A.tgt(f) != x:
                        continue
                    # (g.lab).f == g.(lab.f)
                    lhs: dict = {}
                    for t, c in B.left(g, lab).items():
                        axpy(lhs, B.right(t, f), c)
                    rhs: dict = {}
                    for t, c in B.right(lab, f).items():
                        axpy(rhs, B.left(g, t), c)
                    if lhs != rhs:
                        rep.append(f"left and right actions do not commute on ({g}, {lab!r}, {f})")
                        return rep
            for g in names:
                if A.src(g) != y or A.is_identity(g):
                    continue
                lhs = _bd(B, B.left(g, lab))
                rhs: dict = {}
                for t, c in A.d_of(g).items():
                    axpy(rhs, B.left(t, lab), c)
                for t, c in B.d(lab).items():
                    axpy(rhs, B.left(g, t), c * _sign(A.deg(g)))
                if lhs != rhs:
                    rep.append(f"left Leibniz fails for {g} on {lab!r}")
            for f in names:
                if A.tgt(f) != x or A.is_identity(f):
                    continue
                lhs = _bd(B, B.right(lab, f))
                rhs: dict = {}
                for t, c in B.d(lab).items():
                    axpy(rhs, B.right(t, f), c)
                for t, c in A.d_of(f).items():
                    axpy(rhs, B.right(lab, t), c * _sign(B.degree(lab)))
                if lhs != rhs:
                    rep.append(f"right Leibniz fails for {lab!r} acted on by {f}")
    return rep


def _bd(B, vec):
    out: dict = {}
    for t, c in vec.items():
        axpy(out, B.d(t), c)
    return out


# ---------------------------------------------------------------- tensor over a subcategory


class QuotientSpace:
    """Normal forms modulo a subspace spanned by relation vectors.

    Pivots are taken at the *largest* labels so that the smallest labels
    survive as the quotient basis.
    """

    def __init__(self, order, relations):
        self.ech = Echelon(lambda k: _neg_key(order(k)))
        for r in relations:
            self.ech.add(r)

    def normal_form(self, vec: dict) -> dict:
        return self.ech.reduce(vec)

    def is_pivot(self, lab) -> bool:
        return lab in self.ech.rows


class _neg_key:
    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return other.k < self.k

    def __eq__(self, other):
        return self.k == other.k


def tensor_over_subcategory(M: RightModule, N: LeftModule, objects=None, morphisms=None):
    """M (x)_{A0} N for the subcategory A0 on the given objects and morphism basis.

    Computed as the cokernel of  (m, a, n) -> m.a (x) n - m (x) a.n  over the
    basis morphisms a of A0.  Returns (Complex, QuotientSpace) where the complex
    basis consists of surviving pairs (m, n).
    """
    A = M.cat
    if N.cat is not A:
        raise PresentationError("modules over different categories")
    objs = list(A.objects if objects is None else objects)
    mors = [a for a in (A.mor if morphisms is None else morphisms)
            if A.src(a) in objs and A.tgt(a) in objs]
    for a in mors:
        if A.d_of(a):
            raise PresentationError(f"subcategory morphism {a} has nonzero differential")
    F = A.field
    labels = [(m, n) for x in objs for m in M.labels(x) for n in N.labels(x)]
    pos = {lab: i for i, lab in enumerate(labels)}
    rels = []
    for a in mors:
        if A.is_identity(a):
            continue
        x, y = A.src(a), A.tgt(a)
        for m in M.labels(y):
            for n in N.labels(x):
                r: dict = {}
                for t, c in M.act(m, a).items():
                    add_term(r, (t, n), c)
                for t, c in N.act(a, n).items():
                    add_term(r, (m, t), -c)
                if r:
                    for k in r:
                        if k not in pos:
                            raise PresentationError("action mismatch: module element leaves the subcategory")
                    rels.append(r)
    Q = QuotientSpace(lambda k: pos[k], rels)
    basis: dict = {}
    d = {}
    for lab in labels:
        if Q.is_pivot(lab):
            continue
        m, n = lab
        basis.setdefault(M.degree(m) + N.degree(n), []).append(lab)
    for labs in basis.values():
        for (m, n) in labs:
            img: dict = {}
            for t, c in M.d(m).items():
                add_term(img, (t, n), c)
            s = _sign(M.degree(m))
            for t, c in N.d(n).items():
                add_term(img, (m, t), c * s)
            img = Q.normal_form(img)
            if img:
                d[(m, n)] = img
    return Complex(F, basis, d, name="tensor"), Q


# ---------------------------------------------------------------- degree-zero strictification


def subcategory_from_spans(A: DgCategory, spans: dict, name: str = "") -> tuple:
    """Build the dg subcategory whose hom(X, Y) is spanned by the given vectors.

    ``spans[(X, Y)]`` is a list of (degree, vector) with the identity first on
    the diagonal.  Raises if the spans are not closed under d and composition.
    Returns (B, inclusion) with inclusion: new name -> vector in A.
    """
    F = A.field
    incl = {}
    morphisms = []
    identities = {}
    echs = {}
    for (x, y), vecs in spans.items():
        ech = Echelon(A.order_key, track=True)
        for i, (dg, v) in enumerate(vecs):
            nm = f"{x}>{y}:{dg}:{i}"
            if x == y and i == 0:
                identities[x] = nm
            morphisms.append(Morphism(nm, x, y, dg))
            incl[nm] = v
            if not ech.add(v):
                raise PresentationError(f"spanning vectors for ({x},{y}) are dependent")
        echs[(x, y)] = (ech, [f"{x}>{y}:{dg}:{i}" for i, (dg, _) in enumerate(vecs)])

    def express(x, y, v):
        if not v:
            return {}
        ech, names = echs[(x, y)]
        co = ech.express(v)
        if co is None:
            raise PresentationError(f"subspace of hom({x},{y}) is not closed")
        return {names[i]: c for i, c in co.items()}

    d = {}
    for nm, v in incl.items():
        m = next(mm for mm in morphisms if mm.name == nm)
        d[nm] = express(m.src, m.tgt, apply_linear(A.d, v))
    comp = {}
    bym = {m.name: m for m in morphisms}
    for g in incl:
        for f in incl:
            if bym[f].tgt != bym[g].src:
                continue
            if g in identities.values() or f in identities.values():
                continue
            v = A.compose_vec(incl[g], incl[f])
            e = express(bym[f].src, bym[g].tgt, v)
            if e:
                comp[(g, f)] = e
    B = DgCategory(F, A.objects, morphisms, d, comp, identities, None, name or A.name + "_strict")
    return B, incl


def radical_dimension(A: DgCategory, spans0: dict) -> int | None:
    """Dimension of the trace-form radical of the degree-zero algebra spanned by spans0.

    Over Q this is the Jacobson radical (Dickson's criterion, characteristic
    zero); over F_p the criterion is not valid and None is returned.
    """
    F = A.field
    if F.p is not None:
        return None
    elems = [(x, y, v) for (x, y), vecs in spans0.items() for v in vecs]
    n = len(elems)
    if n == 0:
        return 0
    ech = Echelon(A.order_key, track=True)
    for _, _, v in elems:
        ech.add(v)

    def mult_matrix_trace(u):
        # trace of left multiplication by u on the algebra spanned by elems
        tr = F.zero
        for j, (x, y, v) in enumerate(elems):
            ux: dict = {}
            for (g, c) in u[2].items():
                for (f, e) in v.items():
                    if A.tgt(f) == A.src(g):
                        axpy(ux, A.compose(g, f), c * e)
            co = ech.express(ux) if ux else {}
            tr += co.get(j, 0)
        return tr

    rows = []
    for u in elems:
        row = {}
        for j, w in enumerate(elems):
            prod: dict = {}
            for (g, c) in u[2].items():
                for (f, e) in w[2].items():
                    if A.tgt(f) == A.src(g):
                        axpy(prod, A.compose(g, f), c * e)
            if prod:
                t = mult_matrix_trace((None, None, prod))
                if t:
                    row[j] = t
        rows.append(row)
    r = rref(Matrix(n, n, rows), F).rank
    return n - r


@dataclass
class Strictification:
    category: DgCategory
    inclusion: dict
    certificates: dict = dc_field(default_factory=dict)
    radical_dim: int | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.certificates.values())


def strictify_degree_zero(A: DgCategory) -> Strictification:
    """Replace A by a quasi-equivalent B with B^0 = H^0 A and d B^0 = 0.

    Requires A in non-negative degrees.  B^1 is a bimodule complement of dA^0
    found as the kernel of a bimodule projection onto dA^0; the projection is
    the particular solution with all free unknowns set to zero.
    """
    from .gradedlinalg import ChainMap, induced_map_on_cohomology

    F = A.field
    lo, hi = A.degree_range()
    if lo < 0:
        raise PresentationError("strictification needs A concentrated in non-negative degrees")
    pairs = [(x, y) for x in A.objects for y in A.objects]
    z0 = {}
    dA0 = {}
    for (x, y) in pairs:
        H = A.hom_complex(x, y)
        src = H.labels(0)
        # cocycles of degree 0, identity first
        vecs = []
        ech = Echelon(A.order_key)
        if x == y:
            ech.add({A.identity(x): F.one})
            vecs.append({A.identity(x): F.one})
        if src:
            red = rref(H.matrix(0), F) if H.labels(1) else None
            kern = red.kernel if red is not None else [{j: F.one} for j in range(len(src))]
            for kv in kern:
                v = {src[j]: c for j, c in kv.items()}
                if ech.add(v):
                    vecs.append(v)
        z0[(x, y)] = vecs
        imgs = Echelon(A.order_key)
        basis_d = []
        for a in src:
            v = A.d_of(a)
            if v and imgs.add(v):
                basis_d.append(v)
        dA0[(x, y)] = basis_d
    rad = radical_dimension(A, z0)
    notes = []
    if rad:
        notes.append(f"H^0 has a nonzero radical of dimension {rad}; not semisimple")
    # unknown pi[(x,y)][a][k]: coefficient of k-th dA0 basis vector in pi(a), a in A^1(x,y)
    unknowns = []
    for (x, y) in pairs:
        for a in A.hom(x, y):
            if A.deg(a) == 1:
                for k in range(len(dA0[(x, y)])):
                    unknowns.append(((x, y), a, k))
    upos = {u: i for i, u in enumerate(unknowns)}
    eqs = []  # (row dict over unknowns, rhs) in coordinates over A^1 basis

    def pi_of(vec, x, y):
        """pi(vec) as symbolic dict: A^1 basis name -> dict(unknown idx -> coeff)."""
        out: dict = {}
        for a, c in vec.items():
            for k, dv in enumerate(dA0[(x, y)]):
                u = upos[((x, y), a, k)]
                for t, e in dv.items():
                    out.setdefault(t, {})
                    add_term(out[t], u, c * e)
        return out

    def add_eq(sym: dict, target: dict):
        keys = set(sym) | set(target)
        for t in keys:
            eqs.append((sym.get(t, {}), target.get(t, F.zero)))

    def sym_apply_left(zv, sym):
        # z . (sum_t sym[t] t)
        out: dict = {}
        for t, coeffs in sym.items():
            prod = A.compose_vec(zv, {t: F.one})
            for s, c in prod.items():
                for u, e in coeffs.items():
                    out.setdefault(s, {})
                    add_term(out[s], u, c * e)
        return out

    def sym_apply_right(sym, zv):
        out: dict = {}
        for t, coeffs in sym.items():
            prod = A.compose_vec({t: F.one}, zv)
            for s, c in prod.items():
                for u, e in coeffs.items():
                    out.setdefault(s, {})
                    add_term(out[s], u, c * e)
        return out

    for (x, y) in pairs:
        for dv in dA0[(x, y)]:
            add_eq(pi_of(dv, x, y), dv)            # pi restricts to the identity on dA^0
        for a in A.hom(x, y):
            if A.deg(a) != 1:
                continue
            one = {a: F.one}
            for w in A.objects:
                for zv in z0[(y, w)]:
                    # pi(z . a) = z . pi(a)
                    lhs = pi_of(A.compose_vec(zv, one), x, w)
                    rhs = sym_apply_left(zv, pi_of(one, x, y))
                    _sub_sym(lhs, rhs)
                    add_eq(lhs, {})
                for zv in z0[(w, x)]:
                    lhs = pi_of(A.compose_vec(one, zv), w, y)
                    rhs = sym_apply_right(pi_of(one, x, y), zv)
                    _sub_sym(lhs, rhs)
                    add_eq(lhs, {})
    n = len(unknowns)
    rows = []
    for sym, rhs in eqs:
        row = dict(sym)
        if rhs:
            row[n] = rhs
        if row:
            rows.append(row)
    red = rref(Matrix(len(rows), n + 1, rows), F)
    if n in red.pivots:
        raise PresentationError("no bimodule complement of dA^0 exists (semisimplicity hypothesis fails)")
    sol = [F.zero] * n
    for r, pc in zip(red.rows, red.pivots):
        sol[pc] = r.get(n, F.zero)
    spans = {}
    for (x, y) in pairs:
        vecs = [(0, v) for v in z0[(x, y)]]
        # B^1 = ker pi on A^1(x,y)
        a1 = [a for a in A.hom(x, y) if A.deg(a) == 1]
        cols = []
        for a in a1:
            img: dict = {}
            for k, dv in enumerate(dA0[(x, y)]):
                c = sol[upos[((x, y), a, k)]]
                if c:
                    axpy(img, dv, c)
            cols.append(img)
        if a1:
            from .gradedlinalg.sparse import kernel_of_map
            for kv in kernel_of_map(cols, A.order_key, F):
                vecs.append((1, {a1[j]: c for j, c in kv.items()}))
        for a in A.hom(x, y):
            if A.deg(a) >= 2:
                vecs.append((A.deg(a), {a: F.one}))
        spans[(x, y)] = vecs
    B, incl = subcategory_from_spans(A, spans, A.name + "_strict")
    certs = {}
    for (x, y) in pairs:
        src, tgt = B.hom_complex(x, y), A.hom_complex(x, y)
        f = ChainMap(src, tgt, {nm: incl[nm] for nm in B.hom(x, y)})
        degs = sorted(set(src.support()) | set(tgt.support()) | {0})
        certs[(x, y)] = induced_map_on_cohomology(f, range(min(degs), max(degs) + 1))
    return Strictification(B, incl, certs, rad, notes)


def _sub_sym(lhs: dict, rhs: dict) -> None:
    for t, coeffs in rhs.items():
        lhs.setdefault(t, {})
        for u, e in coeffs.items():
            add_term(lhs[t], u, -e)


# ---------------------------------------------------------------- monoidal data


class MonoidalData:
    """A strict monoidal structure on a presentation and a strong monoidal fibre functor.

    ``tensor_mor[(a, b)]`` is a (x) b in hom(X (x) X', Y (x) Y') for a: X -> Y,
    b: X' -> Y'.  ``fibre_iso[(X, Y)][(u, v)]`` is the image of u (x) v in
    omega(X (x) Y); ``unit_vector`` is the image of 1 in omega(unit).
    Duals, when given, are an object map X -> X*, contravariant morphism
    data a -> a*, and identifications omega(X*) = omega(X)^dual.
    """

    def __init__(self, cat: DgCategory, tensor_obj: dict, tensor_mor: dict, unit, symmetric=False,
                 fibre_iso=None, unit_vector=None, dual_obj=None, dual_mor=None, dual_iso=None):
        F = cat.field
        self.cat = cat
        self.tensor_obj = dict(tensor_obj)
        self.tensor_mor = {k: {t: F(c) for t, c in v.items() if c} for k, v in tensor_mor.items()}
        self.unit = unit
        self.symmetric = symmetric
        self.fibre_iso = {k: {kk: {t: F(c) for t, c in vv.items() if c} for kk, vv in v.items()}
                          for k, v in (fibre_iso or {}).items()}
        self.unit_vector = {t: F(c) for t, c in (unit_vector or {}).items() if c}
        self.dual_obj = dict(dual_obj or {})
        self.dual_mor = {k: {t: F(c) for t, c in v.items() if c} for k, v in (dual_mor or {}).items()}
        self.dual_iso = {k: {t: F(c) for t, c in v.items() if c} for k, v in (dual_iso or {}).items()}

    def obj(self, x, y):
        return self.tensor_obj[(x, y)]

    def mor(self, a, b) -> dict:
        A = self.cat
        if A.is_identity(a) and A.is_identity(b):
            return {A.identity(self.obj(A.src(a), A.src(b))): A.field.one}
        return self.tensor_mor.get((a, b), {})

    def mor_vec(self, av: dict, bv: dict) -> dict:
        out: dict = {}
        for a, c in av.items():
            for b, e in bv.items():
                axpy(out, self.mor(a, b), c * e)
        return out

    def fibre(self, x, y, u, v) -> dict:
        return self.fibre_iso.get((x, y), {}).get((u, v), {})


def validate_monoidal(M: MonoidalData, omega: LeftModule | None = None) -> list:
    """Strict bifunctoriality, unit and associativity laws, Leibniz for the
    tensor of morphisms, symmetry, and the strong-monoidality squares."""
    A = M.cat
    F = A.field
    rep = []
    objs = A.objects
    for x in objs:
        if M.obj(M.unit, x) != x or M.obj(x, M.unit) != x:
            rep.append(f"unit law fails on objects at {x!r}")
        for y in objs:
            if (x, y) not in M.tensor_obj:
                rep.append(f"tensor of objects ({x},{y}) missing")
                return rep
    for x, y, z in itertools.product(objs, repeat=3):
        if M.obj(M.obj(x, y), z) != M.obj(x, M.obj(y, z)):
            rep.append(f"associativity fails on objects ({x},{y},{z})")
    names = list(A.mor)
    for a in names:
        for b in names:
            v = M.mor(a, b)
            s = (M.obj(A.src(a), A.src(b)), M.obj(A.tgt(a), A.tgt(b)))
            for t in v:
                if (A.src(t), A.tgt(t)) != s or A.deg(t) != A.deg(a) + A.deg(b):
                    rep.append(f"{a} (x) {b} has a component in the wrong hom/degree")
            # Leibniz: d(a (x) b) = da (x) b + (-1)^|a| a (x) db
            lhs = apply_linear(A.d, v)
            rhs = M.mor_vec(A.d_of(a), {b: F.one})
            axpy(rhs, M.mor_vec({a: F.one}, A.d_of(b)), _sign(A.deg(a)))
            if lhs != rhs:
                rep.append(f"tensor of morphisms is not a chain map on ({a},{b})")
        ua = M.mor(A.identity(M.unit), a)
        au = M.mor(a, A.identity(M.unit))
        if ua != {a: F.one} or au != {a: F.one}:
            rep.append(f"unit law fails on morphism {a}")
    if rep:
        return rep
    for a, b in itertools.product(names, repeat=2):
        if A.tgt(b) != A.src(a):
            continue
        for c, e in itertools.product(names, repeat=2):
            if A.tgt(e) != A.src(c):
                continue
            # (a o b) (x) (c o e) = (-1)^{|b||c|} (a (x) c) o (b (x) e)
            lhs = M.mor_vec(A.compose(a, b), A.compose(c, e))
            rhs = A.compose_vec(M.mor(a, c), M.mor(b, e))
            rhs = {k: x * _sign(A.deg(b) * A.deg(c)) for k, x in rhs.items()}
            if lhs != rhs:
                rep.append(f"bifunctoriality fails on ({a} o {b}) (x) ({c} o {e})")
                return rep
    for a, b, c in itertools.product(names, repeat=3):
        lhs = M.mor_vec(M.mor(a, b), {c: F.one})
        rhs = M.mor_vec({a: F.one}, M.mor(b, c))
        if lhs != rhs:
            rep.append(f"associativity fails on morphisms ({a},{b},{c})")
            return rep
    if M.symmetric:
        # strict symmetry: X (x) Y = Y (x) X and a (x) b = (-1)^{|a||b|} b (x) a, so the
        # symmetry constraint is the identity and squares to it
        for x, y in itertools.product(objs, repeat=2):
            if M.obj(x, y) != M.obj(y, x):
                rep.append(f"symmetric flag needs X(x)Y = Y(x)X, fails at ({x},{y})")
        for a, b in itertools.product(names, repeat=2):
            lhs = M.mor(a, b)
            rhs = {k: x * _sign(A.deg(a) * A.deg(b)) for k, x in M.mor(b, a).items()}
            if lhs != rhs:
                rep.append(f"symmetry fails on ({a},{b})")
                return rep
    if omega is not None:
        rep += _check_fibre_monoidal(M, omega)
    if M.dual_obj:
        rep += _check_duals(M)
    return rep


def _check_fibre_monoidal(M: MonoidalData, omega: LeftModule) -> list:
    A = M.cat
    rep = []
    objs = A.objects
    u1 = omega.labels(M.unit)
    if len(u1) != 1 or set(M.unit_vector) - set(u1) or not M.unit_vector:
        rep.append("k -> omega(unit) is not an isomorphism")
    # each fibre_iso[(x,y)] must be invertible and natural
    for x, y in itertools.product(objs, repeat=2):
        src = [(u, v) for u in omega.labels(x) for v in omega.labels(y)]
        tgt = omega.labels(M.obj(x, y))
        if len(src) != len(tgt):
            rep.append(f"omega({x})(x)omega({y}) and omega({x}(x){y}) differ in dimension")
            continue
        ech = Echelon()
        for p in src:
            v = M.fibre(x, y, *p)
            for t in v:
                if omega.degree(t) != omega.degree(p[0]) + omega.degree(p[1]):
                    rep.append(f"fibre isomorphism at ({x},{y}) is not degree-preserving")
            ech.add(v)
        if len(ech) != len(tgt):
            rep.append(f"fibre isomorphism at ({x},{y}) is singular")
        for (u, v) in src:
            # chain map: m(du (x) v + (-1)^|u| u (x) dv) = d m(u (x) v)
            lhs = _d_vec(omega, M.fibre(x, y, u, v))
            rhs: dict = {}
            for t, c in omega.d(u).items():
                axpy(rhs, M.fibre(x, y, t, v), c)
            for t, c in omega.d(v).items():
                axpy(rhs, M.fibre(x, y, u, t), c * _sign(omega.degree(u)))
            if lhs != rhs:
                rep.append(f"fibre isomorphism at ({x},{y}) does not commute with d")
    if rep:
        return rep
    for a in A.mor:
        for b in A.mor:
            x, y = A.src(a), A.src(b)
            for u in omega.labels(x):
                for v in omega.labels(y):
                    # omega(a (x) b) m(u (x) v) = (-1)^{|b||u|} m(a.u (x) b.v)
                    lhs = omega.act_vec(M.mor(a, b), M.fibre(x, y, u, v))
                    rhs: dict = {}
                    for s, c in omega.act(a, u).items():
                        for t, e in omega.act(b, v).items():
                            axpy(rhs, M.fibre(A.tgt(a), A.tgt(b), s, t), c * e * _sign(A.deg(b) * omega.degree(u)))
                    if lhs != rhs:
                        rep.append(f"strong-monoidality square fails on ({a},{b}) at ({u},{v})")
                        return rep
    # associativity of the fibre isomorphisms
    for x, y, z in itertools.product(objs, repeat=3):
        for u in omega.labels(x):
            for v in omega.labels(y):
                for w in omega.labels(z):
                    lhs: dict = {}
                    for s, c in M.fibre(x, y, u, v).items():
                        axpy(lhs, M.fibre(M.obj(x, y), z, s, w), c)
                    rhs: dict = {}
                    for t, c in M.fibre(y, z, v, w).items():
                        axpy(rhs, M.fibre(x, M.obj(y, z), u, t), c)
                    if lhs != rhs:
                        rep.append(f"fibre isomorphisms are not associative at ({x},{y},{z})")
                        return rep
    return rep


def _check_duals(M: MonoidalData) -> list:
    A = M.cat
    F = A.field
    rep = []
    for x in A.objects:
        if x not in M.dual_obj:
            rep.append(f"no dual designated for {x!r}")
    if rep:
        return rep
    for a in A.mor:
        v = M.dual_mor.get(a, {A.identity(M.dual_obj[A.src(a)]): F.one} if A.is_identity(a) else {})
        for t in v:
            if (A.src(t), A.tgt(t)) != (M.dual_obj[A.tgt(a)], M.dual_obj[A.src(a)]):
                rep.append(f"dual of {a} lands in the wrong hom")
    for g in A.mor:
        for f in A.mor:
            if A.tgt(f) != A.src(g):
                continue
            # (g o f)* = (-1)^{|f||g|} f* o g*
            lhs = apply_linear(lambda a: M.dual_mor.get(a, {}) if not A.is_identity(a)
                               else {A.identity(M.dual_obj[A.src(a)]): F.one}, A.compose(g, f))
            gd = M.dual_mor.get(g, {}) if not A.is_identity(g) else {A.identity(M.dual_obj[A.src(g)]): F.one}
            fd = M.dual_mor.get(f, {}) if not A.is_identity(f) else {A.identity(M.dual_obj[A.src(f)]): F.one}
            rhs = {k: c * _sign(A.deg(f) * A.deg(g)) for k, c in A.compose_vec(fd, gd).items()}
            if lhs != rhs:
                rep.append(f"duality is not contravariantly functorial on ({g},{f})")
                return rep
    return rep


# ---------------------------------------------------------------- JSON



def content_hash(obj) -> str:
    """sha256 of the canonical JSON rendering of a parsed document."""
    raw = json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(raw.encode()).hexdigest()


def _s(F: FieldSpec, x) -> str:
    return F.fmt(x)


def category_from_json(doc: dict) -> DgCategory:
    try:
        F = FieldSpec.from_json(doc.get("field", "Q"))
        objects = list(doc["objects"])
        mors = [Morphism(m["name"], m["src"], m["tgt"], int(m["degree"])) for m in doc["morphisms"]]
        d: dict = {}
        for a, t, c in doc.get("d", []):
            add_term(d.setdefault(a, {}), t, F(c))
        comp: dict = {}
        for g, f, t, c in doc.get("compose", []):
            add_term(comp.setdefault((g, f), {}), t, F(c))
        ids = dict(doc["identities"])
        nil = doc.get("nilpotence")
    except (KeyError, TypeError, ValueError) as e:
        raise PresentationError(f"malformed category document: {e}") from e
    return DgCategory(F, objects, mors, d, comp, ids, nil, doc.get("name", ""))


def category_to_json(A: DgCategory) -> dict:
    F = A.field
    doc = {
        "name": A.name,
        "field": F.to_json(),
        "objects": list(A.objects),
        "morphisms": [{"name": m.name, "src": m.src, "tgt": m.tgt, "degree": m.degree} for m in A.mor.values()],
        "identities": dict(A.identities),
        "d": [[a, t, _s(F, c)] for a, v in A.d.items() for t, c in v.items()],
        "compose": [[g, f, t, _s(F, c)] for (g, f), v in A.comp.items() for t, c in v.items()],
    }
    if A.nilpotence is not None:
        doc["nilpotence"] = A.nilpotence
    return doc


def functor_from_json(A: DgCategory, doc: dict, name: str = "omega") -> FibreFunctor:
    F = A.field
    try:
        basis = {x: [(lab, int(dg)) for lab, dg in v] for x, v in doc["spaces"].items()}
        d: dict = {}
        for s, t, c in doc.get("d", []):
            add_term(d.setdefault(s, {}), t, F(c))
        act: dict = {}
        for a, s, t, c in doc.get("action", []):
            add_term(act.setdefault((a, s), {}), t, F(c))
    except (KeyError, TypeError, ValueError) as e:
        raise PresentationError(f"malformed functor document: {e}") from e
    for x in basis:
        if x not in A.objects:
            raise PresentationError(f"functor names unknown object {x!r}")
    return FibreFunctor(A, basis, d, act, name)


def functor_to_json(omega: LeftModule, category_hash: str | None = None) -> dict:
    A = omega.cat
    F = A.field
    doc = {
        "spaces": {x: [[lab, omega.degree(lab)] for lab in omega.labels(x)] for x in A.objects},
        "d": [[s, t, _s(F, c)] for x in A.objects for s in omega.labels(x) for t, c in omega.d(s).items()],
        "action": [[a, s, t, _s(F, c)] for a in A.mor if not A.is_identity(a)
                   for s in omega.labels(A.src(a)) for t, c in omega.act(a, s).items()],
    }
    if category_hash:
        doc["category_sha256"] = category_hash
    return doc


def monoidal_from_json(A: DgCategory, doc: dict) -> MonoidalData:
    F = A.field
    tobj = {(x, y): z for x, y, z in doc["tensor_objects"]}
    tmor: dict = {}
    for a, b, t, c in doc.get("tensor_morphisms", []):
        add_term(tmor.setdefault((a, b), {}), t, F(c))
    fib: dict = {}
    for x, y, u, v, t, c in doc.get("fibre_iso", []):
        add_term(fib.setdefault((x, y), {}).setdefault((u, v), {}), t, F(c))
    unit_vec = {t: F(c) for t, c in doc.get("unit_vector", [])}
    duals = doc.get("duals") or {}
    dmor: dict = {}
    for a, t, c in duals.get("morphisms", []):
        add_term(dmor.setdefault(a, {}), t, F(c))
    diso: dict = {}
    for lab, t, c in duals.get("fibre", []):
        add_term(diso.setdefault(lab, {}), tuple(t) if isinstance(t, list) else t, F(c))
    return MonoidalData(A, tobj, tmor, doc["unit"], bool(doc.get("symmetric", False)), fib, unit_vec,
                        duals.get("objects"), dmor, diso)


def load_document(path) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise PresentationError(f"{path}: not valid JSON ({e})") from e


@dataclass
class Bundle:
    """A parsed input: category, optional fibre functor and monoidal data, and hashes."""

    category: DgCategory
    functor: FibreFunctor | None = None
    monoidal: MonoidalData | None = None
    hashes: dict = dc_field(default_factory=dict)
    doc: dict = dc_field(default_factory=dict)


def load_bundle(path, functor_path=None) -> Bundle:
    fdoc = load_document(functor_path) if functor_path is not None else None
    return bundle_from_document(load_document(path), fdoc)


def bundle_from_document(doc: dict, fdoc: dict | None = None) -> Bundle:
    if not isinstance(doc, dict):
        raise PresentationError("a presentation must be a JSON object")
    A = category_from_json(doc)
    h = {"category": content_hash({k: v for k, v in doc.items() if k not in ("fibre_functor", "monoidal")})}
    omega = None
    if fdoc is not None:
        want = fdoc.get("category_sha256")
        if want and want != h["category"]:
            raise PresentationError("functor file refers to a different category (hash mismatch)")
        omega = functor_from_json(A, fdoc)
        h["functor"] = content_hash(fdoc)
    elif "fibre_functor" in doc:
        omega = functor_from_json(A, doc["fibre_functor"])
        h["functor"] = content_hash(doc["fibre_functor"])
    mon = None
    if "monoidal" in doc:
        try:
            mon = monoidal_from_json(A, doc["monoidal"])
        except (KeyError, TypeError, ValueError) as e:
            raise PresentationError(f"malformed monoidal block: {e}") from e
        h["monoidal"] = content_hash(doc["monoidal"])
    return Bundle(A, omega, mon, h, doc)
