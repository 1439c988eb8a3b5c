"""Bar and cobar functors between positive dg categories and conilpotent coalgebras.

The base S is a product of copies of k, one per object: tensor products over S
are sums over composable strings.  Strings follow the composition order of a
category: (a_1, .., a_n) with a_i : X_i -> X_{i-1} multiplies to a_1 o .. o a_n.

beta(A) = sum_{n > 0} (A^{>0})^{(x)_S n}[n] is stored as a counital k-coalgebra
by adjoining one grouplike e_X per object (the path-coalgebra convention), so
that the generic coalgebra checks and serializers apply.  Truncations are by
a positive weight grading, additive on strings; truncating at weight <= L is
exact on every weight <= L.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coalg import DgCoalgebra, check_coalgebra, coalgebra_to_json
from .dgcat import DgCategory, Morphism, _sign, category_to_json, validate_category
from .gradedlinalg import ChainMap, Complex, QuasiIsoCertificate, induced_map_on_cohomology
from .gradedlinalg.sparse import add_term, axpy, kernel_of_map


class KoszulError(ValueError):
    pass


# ---------------------------------------------------------------- positive algebras


@dataclass
class PositiveAlgebra:
    """A dg category whose degree-zero part is spanned by the identities.

    ``weight`` assigns a positive integer to every non-identity basis
    morphism, additive under composition and preserved by d.
    """

    cat: DgCategory
    weight: dict

    @property
    def field(self):
        return self.cat.field

    def positive(self) -> list:
        return [a for a in self.cat.mor if not self.cat.is_identity(a)]


def positive_algebra(A: DgCategory, weights: dict | None = None) -> PositiveAlgebra:
    """Validate the shape required for the bar functor and attach a weight grading.

    Without ``weights`` the internal degree is used, which needs d = 0.
    """
    rep = validate_category(A)
    if rep:
        raise KoszulError("invalid category: " + rep[0])
    for a in A.mor:
        if A.is_identity(a):
            continue
        if A.deg(a) < 1:
            raise KoszulError(f"{a} has degree {A.deg(a)}; the base must be spanned by the identities")
    if weights is None:
        if any(A.d_of(a) for a in A.mor):
            raise KoszulError("d != 0: supply a weight grading")
        weights = {a: A.deg(a) for a in A.mor if not A.is_identity(a)}
    P = PositiveAlgebra(A, dict(weights))
    bad = check_weights_algebra(P)
    if bad:
        raise KoszulError("weights: " + bad[0])
    return P


def check_weights_algebra(P: PositiveAlgebra) -> list:
    A = P.cat
    rep = []
    for a in P.positive():
        if P.weight.get(a, 0) < 1:
            rep.append(f"weight of {a} is not positive")
        for t in A.d_of(a):
            if P.weight.get(t) != P.weight.get(a):
                rep.append(f"d does not preserve the weight on {a}")
        for b in P.positive():
            if A.tgt(b) != A.src(a):
                continue
            for t in A.compose(a, b):
                if P.weight.get(t) != P.weight[a] + P.weight[b]:
                    rep.append(f"composition {a} o {b} is not additive in weight")
    return rep


# ---------------------------------------------------------------- conilpotent coalgebras


class ConilpotentCoalgebra:
    """A non-counital coalgebra over S, stored with its grouplikes adjoined.

    ``pairs[x] = (src, tgt)`` for every non-grouplike label; the reduced
    coproduct is Delta(x) minus the two grouplike terms.
    """

    def __init__(self, coalg: DgCoalgebra, objects, pairs: dict, weight: dict, name: str = ""):
        self.coalg = coalg
        self.objects = list(objects)
        self.pairs = dict(pairs)
        self.weight = dict(weight)
        self.name = name or coalg.name
        self.field = coalg.field

    @property
    def complex(self) -> Complex:
        return self.coalg.complex

    def grouplike(self, X):
        return ("e", X)

    def labels(self) -> list:
        return [x for x in self.coalg.labels() if x in self.pairs]

    def degree(self, x) -> int:
        return self.coalg.degree(x)

    def reduced(self, x) -> dict:
        return {(y, z): c for (y, z), c in self.coalg.delta_of(x).items() if y in self.pairs and z in self.pairs}

    def render(self, x) -> str:
        r = getattr(self.coalg, "render", None)
        return r(x) if r else str(x)


def conilpotent_coalgebra(field, objects, basis: list, d: dict, reduced: dict, weight: dict | None = None,
                          name: str = "") -> ConilpotentCoalgebra:
    """From labels (name, src, tgt, degree), a differential and a reduced coproduct.

    The weight defaults to 1 per basis element, which is additive only when the
    reduced coproduct vanishes.
    """
    objects = list(objects)
    cb: dict = {0: [("e", X) for X in objects]}
    pairs = {}
    for lab, s, t, n in basis:
        if lab in cb[0][:len(objects)]:
            raise KoszulError(f"label {lab!r} collides with a grouplike")
        cb.setdefault(n, []).append(lab)
        pairs[lab] = (s, t)
    cx = Complex(field, cb, d, name=name)
    delta = {}
    one = field.one
    for X in objects:
        delta[("e", X)] = {(("e", X), ("e", X)): one}
    for lab, (s, t) in pairs.items():
        v = {(("e", t), lab): one}
        add_term(v, (lab, ("e", s)), one)
        axpy(v, reduced.get(lab, {}))
        delta[lab] = v
    counit = {("e", X): one for X in objects}
    C = DgCoalgebra(cx, delta, counit, name)
    if weight is None:
        if any(reduced.values()):
            raise KoszulError("nonzero reduced coproduct: supply a weight grading")
        weight = {lab: 1 for lab in pairs}
    return ConilpotentCoalgebra(C, objects, pairs, weight, name)


def check_conilpotent(C: ConilpotentCoalgebra, bound: int | None = None) -> list:
    """Coalgebra axioms, weight additivity, S-compatibility and vanishing of an iterated reduced coproduct."""
    rep = check_coalgebra(C.coalg)
    for x in C.labels():
        if C.weight.get(x, 0) < 1:
            rep.append(f"weight of {C.render(x)} is not positive")
        for t in C.complex.d_of(x):
            if C.weight.get(t) != C.weight.get(x):
                rep.append(f"d does not preserve the weight on {C.render(x)}")
        for (y, z) in C.reduced(x):
            if C.weight[y] + C.weight[z] != C.weight[x]:
                rep.append(f"reduced coproduct is not additive in weight on {C.render(x)}")
            if C.pairs[y][0] != C.pairs[z][1] or C.pairs[y][1] != C.pairs[x][1] or C.pairs[z][0] != C.pairs[x][0]:
                rep.append(f"reduced coproduct of {C.render(x)} is not composable")
    # weights bound the length of iterated reduced coproducts, so conilpotence is automatic;
    # verify Delta^(m) = 0 for m one above the largest weight when asked
    if bound is not None:
        for x in C.labels():
            terms = {(x,): C.field.one}
            for _ in range(bound - 1):
                nxt: dict = {}
                for tup, c in terms.items():
                    for (y, z), e in C.reduced(tup[-1]).items():
                        add_term(nxt, tup[:-1] + (y, z), c * e)
                terms = nxt
            if terms:
                rep.append(f"iterated reduced coproduct of length {bound} is nonzero on {C.render(x)}")
    return rep


# ---------------------------------------------------------------- strings


def _strings(letters: list, weight, W: int, src_of, tgt_of):
    """Composable tuples (l_1..l_n), l_i : X_i -> X_{i-1}, of total weight <= W."""
    by_tgt: dict = {}
    for x in letters:
        by_tgt.setdefault(tgt_of(x), []).append(x)
    out = []

    def grow(prefix, w):
        if prefix:
            out.append(prefix)
        X = src_of(prefix[-1]) if prefix else None
        cands = letters if X is None else by_tgt.get(X, [])
        for x in cands:
            if w + weight[x] <= W:
                grow(prefix + (x,), w + weight[x])

    grow((), 0)
    return out


def _render_string(parts) -> str:
    return "[" + "|".join(parts) + "]"


# ---------------------------------------------------------------- bar


def bar_beta(P: PositiveAlgebra, L: int, name: str = "") -> ConilpotentCoalgebra:
    """beta(A) on strings of weight <= L (a subcoalgebra and subcomplex).

    Degree of [a_1|..|a_n] is sum(|a_i| - 1);
    d = -sum (-1)^{e_{i-1}} [..|da_i|..] - sum (-1)^{e_i} [..|a_i a_{i+1}|..]
    with e_i = sum_{j <= i} (|a_j| - 1); the reduced coproduct deconcatenates.
    """
    A = P.cat
    F = A.field
    letters = P.positive()
    strs = _strings(letters, P.weight, L, A.src, A.tgt)
    keep = set(strs)
    basis = []
    d = {}
    reduced = {}
    weight = {}
    for s in strs:
        degs = [A.deg(a) - 1 for a in s]
        basis.append((s, A.src(s[-1]), A.tgt(s[0]), sum(degs)))
        weight[s] = sum(P.weight[a] for a in s)
        img: dict = {}
        e = 0
        for i, a in enumerate(s):
            for t, c in A.d_of(a).items():
                add_term(img, s[:i] + (t,) + s[i + 1:], -_sign(e) * c)
            e += degs[i]
            if i + 1 < len(s):
                for t, c in A.compose(a, s[i + 1]).items():
                    u = s[:i] + (t,) + s[i + 2:]
                    if u in keep:
                        add_term(img, u, -_sign(e) * c)
        if img:
            d[s] = img
        red = {}
        for m in range(1, len(s)):
            red[(s[:m], s[m:])] = F.one
        if red:
            reduced[s] = red
    C = conilpotent_coalgebra(F, A.objects, basis, d, reduced, weight, name or f"beta({A.name})")
    C.coalg.render = lambda x: f"e_{x[1]}" if x not in C.pairs else _render_string(x)
    return C


def tangent_space(C: ConilpotentCoalgebra) -> list:
    """Basis of ker(reduced Delta) as sparse vectors."""
    labs = C.labels()
    cols = [C.reduced(x) for x in labs]
    ker = kernel_of_map(cols, None, C.field) if any(cols) else [{i: C.field.one} for i in range(len(labs))]
    return [{labs[i]: c for i, c in v.items()} for v in ker]


# ---------------------------------------------------------------- cobar


@dataclass
class CobarAlgebra:
    """beta*(C) modulo strings of weight > L, as a dg category."""

    cat: DgCategory
    coalgebra: ConilpotentCoalgebra
    names: dict
    strings: dict
    weight: dict
    cutoff: int

    def name_of(self, s) -> str:
        return self.names[s]

    def positive(self) -> PositiveAlgebra:
        return PositiveAlgebra(self.cat, {self.names[s]: w for s, w in self.weight.items()})


def cobar_beta_star(C: ConilpotentCoalgebra, L: int, name: str = "") -> CobarAlgebra:
    """Tensor algebra on C[-1] with concatenation, modulo the dg ideal of weight > L.

    Degree of (c_1..c_n) is sum(|c_i| + 1); on generators
    d(c) = -(dc) - sum (-1)^{|c'|} (c', c''), extended as a derivation.
    """
    F = C.field
    letters = C.labels()
    strs = _strings(letters, C.weight, L, lambda x: C.pairs[x][0], lambda x: C.pairs[x][1])
    keep = set(strs)

    def nm(s):
        return _render_string([C.render(x) for x in s])

    names = {s: nm(s) for s in strs}
    if len(set(names.values())) != len(names):
        raise KoszulError("rendered names of cobar strings collide")
    mors = [Morphism(f"1_{X}", X, X, 0) for X in C.objects]
    for s in strs:
        mors.append(Morphism(names[s], C.pairs[s[-1]][0], C.pairs[s[0]][1], sum(C.degree(x) + 1 for x in s)))
    d = {}
    for s in strs:
        img: dict = {}
        e = 0
        for i, x in enumerate(s):
            sg = _sign(e)
            for t, c in C.complex.d_of(x).items():
                add_term(img, names[s[:i] + (t,) + s[i + 1:]], -sg * c)
            for (y, z), c in C.reduced(x).items():
                u = s[:i] + (y, z) + s[i + 1:]
                if u in keep:
                    add_term(img, names[u], -sg * _sign(C.degree(y)) * c)
            e += C.degree(x) + 1
        if img:
            d[names[s]] = img
    comp = {}
    for s in strs:
        for u in strs:
            if C.pairs[s[-1]][0] == C.pairs[u[0]][1] and s + u in keep:
                comp[(names[s], names[u])] = {names[s + u]: F.one}
    cat = DgCategory(F, C.objects, mors, d, comp, {X: f"1_{X}" for X in C.objects}, None,
                     name or f"beta*({C.name})")
    weight = {s: sum(C.weight[x] for x in s) for s in strs}
    return CobarAlgebra(cat, C, names, {v: k for k, v in names.items()}, weight, L)


# ---------------------------------------------------------------- unit and counit


def unit_map(C: ConilpotentCoalgebra, L: int):
    """C -> beta beta*(C): c -> sum_n [c_(1)| .. |c_(n)] over iterated reduced coproducts.

    With the signs carried by the two differentials every term enters with +1.
    Returns (map, cobar algebra, bar coalgebra), all on weights <= L.
    """
    B = cobar_beta_star(C, L)
    P = B.positive()
    BB = bar_beta(P, L)
    src_labels = [x for x in C.labels() if C.weight[x] <= L]
    src = _restrict(C.complex, set(src_labels), "C")
    tgt = _restrict(BB.complex, set(BB.labels()), "beta beta*(C)")
    imgs = {}
    for x in src_labels:
        out: dict = {}
        terms = {(x,): C.field.one}
        while terms:
            for tup, c in terms.items():
                word = tuple(B.names[(y,)] for y in tup)
                add_term(out, word, c)
            nxt: dict = {}
            for tup, c in terms.items():
                for (y, z), e in C.reduced(tup[-1]).items():
                    add_term(nxt, tup[:-1] + (y, z), c * e)
            terms = nxt
        imgs[x] = out
    return ChainMap(src, tgt, imgs, name="unit"), B, BB


def counit_map(P: PositiveAlgebra, L: int):
    """beta* beta(A) -> A: a word in bar strings goes to the composite of its
    length-one letters, and to 0 if any letter is longer."""
    Bc = bar_beta(P, L)
    B = cobar_beta_star(Bc, L)
    A = P.cat
    src = _category_complex(B.cat, B.names.values())
    keep = [a for a in P.positive() if P.weight[a] <= L]
    tgt = _category_complex(A, keep)
    imgs = {}
    for s, name in B.names.items():
        if any(len(letter) != 1 for letter in s):
            continue
        vec = {s[0][0]: A.field.one}
        for letter in s[1:]:
            vec = A.compose_vec(vec, {letter[0]: A.field.one})
        vec = {t: c for t, c in vec.items() if t in set(keep)}
        if vec:
            imgs[name] = vec
    return ChainMap(src, tgt, imgs, name="counit"), Bc, B


def _category_complex(A: DgCategory, mors) -> Complex:
    mors = list(mors)
    basis: dict = {}
    for a in mors:
        basis.setdefault(A.deg(a), []).append(a)
    keep = set(mors)
    d = {a: {t: c for t, c in A.d_of(a).items() if t in keep} for a in mors}
    return Complex(A.field, basis, {a: v for a, v in d.items() if v})


def _restrict(cx: Complex, keep: set, name: str) -> Complex:
    return Complex(cx.field, {n: [x for x in labs if x in keep] for n, labs in cx.basis.items()},
                   {x: {t: c for t, c in cx.d_of(x).items() if t in keep} for x in keep}, name=name)


def _certify(f: ChainMap, L: int, window: tuple) -> QuasiIsoCertificate:
    if L < 1:
        raise KoszulError("trusted sub-window empty: weight cutoff below 1")
    bad = f.check()
    lo, hi = window
    cert = induced_map_on_cohomology(f, range(lo, hi + 1))
    cert.level_cutoff = L
    cert.weights = {j: (1, L) for j in range(lo, hi + 1)}
    cert.notes.append(f"exact on weights 1..{L}; higher weights not examined")
    if bad:
        cert.verdict = {j: False for j in cert.verdict}
        cert.notes.append(f"not a chain map on {len(bad)} labels")
    return cert


def unit_check(C: ConilpotentCoalgebra, L: int, window: tuple = (0, 3)) -> QuasiIsoCertificate:
    f, _, _ = unit_map(C, L)
    return _certify(f, L, window)


def counit_check(P: PositiveAlgebra, L: int, window: tuple = (0, 4)) -> QuasiIsoCertificate:
    f, _, _ = counit_map(P, L)
    return _certify(f, L, window)


# ---------------------------------------------------------------- pointed coalgebras


def reduced_part(C: DgCoalgebra, grouplikes: dict, weight: dict | None = None,
                 name: str = "") -> ConilpotentCoalgebra:
    """The coalgebra over S = {X} from a coalgebra with grouplikes g_X.

    Every other basis element x must satisfy Delta(x) = g_t (x) x + x (x) g_s
    + (terms free of grouplikes) and lie in degrees >= 0.  The weight defaults
    to the level grading of C when it has one.
    """
    g_of = {g: X for X, g in grouplikes.items()}
    basis, reduced, pairs = [], {}, {}
    F = C.field
    for x in C.labels():
        if x in g_of:
            continue
        if C.degree(x) < 0:
            raise KoszulError(f"{x!r} sits in negative degree {C.degree(x)}")
        tgt = [g_of[y] for (y, z), c in C.delta_of(x).items() if y in g_of and z == x and c == F.one]
        src = [g_of[z] for (y, z), c in C.delta_of(x).items() if z in g_of and y == x and c == F.one]
        if len(tgt) != 1 or len(src) != 1:
            raise KoszulError(f"{x!r} is not primitive relative to a unique pair of grouplikes")
        pairs[x] = (src[0], tgt[0])
        basis.append((x, src[0], tgt[0], C.degree(x)))
        red = {}
        for (y, z), c in C.delta_of(x).items():
            if y in g_of or z in g_of:
                if not ((y == x and z in g_of) or (z == x and y in g_of)):
                    raise KoszulError(f"Delta({x!r}) has a stray grouplike term")
                continue
            red[(y, z)] = c
        reduced[x] = red
    d = {x: dict(C.complex.d_of(x)) for x in pairs if C.complex.d_of(x)}
    if weight is None and C.level is not None:
        weight = {x: C.level(x) for x in pairs}
    objects = list(grouplikes)
    out = conilpotent_coalgebra(F, objects, basis, d, reduced, weight, name or f"{C.name}^+")
    r = getattr(C, "render", None)
    out.coalg.render = lambda x: f"e_{x[1]}" if x not in out.pairs else (r(x) if r else str(x))
    return out


# ---------------------------------------------------------------- functoriality


def _string_map(letter_map, s) -> dict:
    """Image of a string under letter -> sparse vector, multiplied out as tensors."""
    out = {(): 1}
    for x in s:
        nxt: dict = {}
        for u, c in out.items():
            for t, e in letter_map(x).items():
                add_term(nxt, u + (t,), c * e)
        out = nxt
    return out


def check_algebra_map(P: PositiveAlgebra, Q: PositiveAlgebra, f: dict) -> list:
    """f on non-identity morphisms, identity on objects: degree, weight, d and composition."""
    A, B = P.cat, Q.cat
    rep = []
    for a in P.positive():
        for t in f.get(a, {}):
            if B.deg(t) != A.deg(a) or Q.weight[t] != P.weight[a] or (B.src(t), B.tgt(t)) != (A.src(a), A.tgt(a)):
                rep.append(f"f({a}) leaves its degree, weight or hom space")
        lhs: dict = {}
        for t, c in f.get(a, {}).items():
            axpy(lhs, B.d_of(t), c)
        rhs: dict = {}
        for t, c in A.d_of(a).items():
            axpy(rhs, f.get(t, {}), c)
        axpy(lhs, rhs, -1)
        if lhs:
            rep.append(f"f does not commute with d on {a}")
    for a in P.positive():
        for b in P.positive():
            if A.src(a) != A.tgt(b):
                continue
            lhs = {}
            for t, c in A.compose(a, b).items():
                if not A.is_identity(t):
                    axpy(lhs, f.get(t, {}), c)
            rhs = B.compose_vec(f.get(a, {}), f.get(b, {}))
            axpy(lhs, rhs, -1)
            if lhs:
                rep.append(f"f does not preserve the composite {a} o {b}")
    return rep


def bar_map(Bp: ConilpotentCoalgebra, Bq: ConilpotentCoalgebra, f: dict) -> ChainMap:
    """beta(f): [a_1|..|a_n] -> [f a_1|..|f a_n], between the weight truncations."""
    keep = set(Bq.labels())
    imgs = {}
    for s in Bp.labels():
        v = _string_map(lambda a: f.get(a, {}), s)
        imgs[s] = {u: Bp.field(c) for u, c in v.items() if c and u in keep}
    return ChainMap(_restrict(Bp.complex, set(Bp.labels()), "beta"),
                    _restrict(Bq.complex, keep, "beta'"), imgs, name="beta(f)")


def cobar_map(Bc: CobarAlgebra, Bd: CobarAlgebra, g: dict) -> ChainMap:
    """beta*(g): (c_1..c_n) -> (g c_1..g c_n), for g on the reduced parts."""
    src = _category_complex(Bc.cat, Bc.names.values())
    tgt = _category_complex(Bd.cat, Bd.names.values())
    imgs = {}
    for s, nm in Bc.names.items():
        v = _string_map(lambda x: g.get(x, {}), s)
        imgs[nm] = {Bd.names[u]: Bc.cat.field(c) for u, c in v.items() if c and u in Bd.names}
    return ChainMap(src, tgt, imgs, name="beta*(g)")


def _commutes(top_then_right: ChainMap, left_then_bottom: ChainMap) -> list:
    bad = []
    for x in top_then_right.source.labels():
        v = dict(top_then_right.images.get(x, {}))
        axpy(v, left_then_bottom.images.get(x, {}), -1)
        if v:
            bad.append(x)
    return bad


def counit_naturality(P: PositiveAlgebra, Q: PositiveAlgebra, f: dict, L: int) -> list:
    """Labels where eps_Q o beta*beta(f) != f o eps_P."""
    ep, Bp, BBp = counit_map(P, L)
    eq, Bq, BBq = counit_map(Q, L)
    bf = bar_map(Bp, Bq, f)
    bbf = cobar_map(BBp, BBq, {s: bf.images.get(s, {}) for s in Bp.labels()})
    fm = ChainMap(ep.target, eq.target, {a: {t: c for t, c in f.get(a, {}).items() if t in eq.target}
                                         for a in ep.target.labels()})
    return _commutes(eq.compose(bbf), fm.compose(ep))


def unit_naturality(C: ConilpotentCoalgebra, D: ConilpotentCoalgebra, g: dict, L: int) -> list:
    """Labels where eta_D o g != beta beta*(g) o eta_C, for g a strict map of reduced parts."""
    uc, Bc, BBc = unit_map(C, L)
    ud, Bd, BBd = unit_map(D, L)
    cg = cobar_map(Bc, Bd, g)
    bbg = bar_map(BBc, BBd, cg.images)
    gm = ChainMap(uc.source, ud.source, {x: {t: c for t, c in g.get(x, {}).items() if t in ud.source}
                                         for x in uc.source.labels()})
    return _commutes(ud.compose(gm), bbg.compose(uc))


# ---------------------------------------------------------------- serialization


def beta_to_json(C: ConilpotentCoalgebra) -> dict:
    return coalgebra_to_json(C.coalg, C.render)


def beta_star_to_json(B: CobarAlgebra) -> dict:
    return category_to_json(B.cat)
