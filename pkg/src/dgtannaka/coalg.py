"""Dg coalgebras and comodules on labelled bases.

Tensors of basis labels are pairs (y, z).  Maps on tensors follow
(f (x) g)(y (x) z) = (-1)^{|g||y|} f(y) (x) g(z), so d on a tensor is
d y (x) z + (-1)^{|y|} y (x) d z, and the product on C (x) C is
(a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .gradedlinalg import ChainMap, Complex, Echelon, FieldSpec, cohomology, induced_map_on_cohomology
from .gradedlinalg.sparse import kernel_of_map
from .gradedlinalg.sparse import add_term, axpy


class CoalgebraError(ValueError):
    pass


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def tensor_d(c1: Complex, c2: Complex, vec: dict) -> dict:
    """(d (x) 1 + 1 (x) d) on a vector of pairs."""
    out: dict = {}
    for (y, z), x in vec.items():
        for t, c in c1.d_of(y).items():
            add_term(out, (t, z), x * c)
        s = _sign(c1.degree(y))
        for t, c in c2.d_of(z).items():
            add_term(out, (y, t), x * c * s)
    return out


class DgCoalgebra:
    """A coassociative counital dg coalgebra with optional bialgebra data.

    ``delta[x]`` is a dict over pairs; ``counit[x]`` a scalar.  When
    ``product`` is present it may be partial (level-truncated): the pair
    (a, b) is multiplied only when ``can_multiply(a, b)``.
    """

    def __init__(self, complex_: Complex, delta: dict, counit: dict, name: str = "", level=None,
                 product=None, unit=None, symmetric: bool = False, max_level: int | None = None):
        self.complex = complex_
        self.field = complex_.field
        self.delta = {k: v for k, v in delta.items() if v}
        self.counit = {k: v for k, v in counit.items() if v}
        self.name = name
        self.level = level
        self._product = product
        self.unit = unit
        self.symmetric = symmetric
        self.max_level = max_level

    def degree(self, x) -> int:
        return self.complex.degree(x)

    def labels(self):
        return self.complex.labels()

    def delta_of(self, x) -> dict:
        return self.delta.get(x, {})

    def apply_delta(self, vec: dict) -> dict:
        out: dict = {}
        for x, c in vec.items():
            axpy(out, self.delta_of(x), c)
        return out

    def eps(self, vec: dict):
        tot = self.field.zero
        for x, c in vec.items():
            e = self.counit.get(x)
            if e:
                tot += c * e
        return tot

    @property
    def has_product(self) -> bool:
        return self._product is not None

    def can_multiply(self, a, b) -> bool:
        if self.level is None or self.max_level is None:
            return True
        return self.level(a) + self.level(b) <= self.max_level

    def mul(self, a, b) -> dict:
        return self._product(a, b)

    def mul_vec(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for a, c in u.items():
            for b, e in v.items():
                axpy(out, self.mul(a, b), c * e)
        return out


def check_coalgebra(C: DgCoalgebra) -> list:
    """Coassociativity, counit laws and the chain-map identities on every basis label."""
    rep = []
    cx = C.complex
    one = C.field.one
    for x in C.labels():
        dx = C.delta_of(x)
        for (y, z) in dx:
            if y not in cx or z not in cx or cx.degree(y) + cx.degree(z) != cx.degree(x):
                rep.append(f"delta({x!r}) has an ill-formed term")
                return rep
        lhs: dict = {}
        rhs: dict = {}
        for (y, z), c in dx.items():
            for (y1, y2), e in C.delta_of(y).items():
                add_term(lhs, (y1, y2, z), c * e)
            for (z1, z2), e in C.delta_of(z).items():
                add_term(rhs, (y, z1, z2), c * e)
        if lhs != rhs:
            rep.append(f"coassociativity fails on {x!r}")
        left: dict = {}
        right: dict = {}
        for (y, z), c in dx.items():
            e = C.counit.get(y)
            if e:
                add_term(left, z, c * e)
            e = C.counit.get(z)
            if e:
                add_term(right, y, c * e)
        if left != {x: one} or right != {x: one}:
            rep.append(f"counit law fails on {x!r}")
        if C.apply_delta(cx.d_of(x)) != tensor_d(cx, cx, dx):
            rep.append(f"delta is not a chain map on {x!r}")
        if C.eps(cx.d_of(x)):
            rep.append(f"counit is not a chain map on {x!r}")
        if C.counit.get(x) and cx.degree(x) != 0:
            rep.append(f"counit has nonzero degree on {x!r}")
    return rep


def check_bialgebra(C: DgCoalgebra) -> list:
    """Associativity, unit, Leibniz, multiplicativity of delta and counit, and
    graded commutativity when ``symmetric``; only where products are defined."""
    if not C.has_product:
        return ["no product"]
    rep = []
    cx = C.complex
    labs = list(C.labels())
    one = C.field.one
    u = C.unit
    for a in labs:
        if C.mul_vec(u, {a: one}) != {a: one} or C.mul_vec({a: one}, u) != {a: one}:
            rep.append(f"unit law fails on {a!r}")
    if C.apply_delta(u) != _tensor_mul_unit(u):
        rep.append("delta(1) != 1 (x) 1")
    if C.eps(u) != one:
        rep.append("counit(1) != 1")
    for a, b in itertools.product(labs, repeat=2):
        if not C.can_multiply(a, b):
            continue
        ab = C.mul(a, b)
        for t in ab:
            if cx.degree(t) != cx.degree(a) + cx.degree(b):
                rep.append(f"product of {a!r} and {b!r} has the wrong degree")
        lhs = cx.apply_d(ab)
        rhs = C.mul_vec(cx.d_of(a), {b: one})
        axpy(rhs, C.mul_vec({a: one}, cx.d_of(b)), _sign(cx.degree(a)))
        if lhs != rhs:
            rep.append(f"Leibniz fails on ({a!r}, {b!r})")
        # delta(ab) = delta(a) delta(b)
        lhs = C.apply_delta(ab)
        rhs: dict = {}
        for (a1, a2), c in C.delta_of(a).items():
            for (b1, b2), e in C.delta_of(b).items():
                s = _sign(cx.degree(a2) * cx.degree(b1))
                for t1, x1 in C.mul(a1, b1).items():
                    for t2, x2 in C.mul(a2, b2).items():
                        add_term(rhs, (t1, t2), c * e * s * x1 * x2)
        if lhs != rhs:
            rep.append(f"delta is not multiplicative on ({a!r}, {b!r})")
        if C.eps(ab) != C.eps({a: one}) * C.eps({b: one}):
            rep.append(f"counit is not multiplicative on ({a!r}, {b!r})")
        if C.symmetric:
            ba = {k: v * _sign(cx.degree(a) * cx.degree(b)) for k, v in C.mul(b, a).items()}
            if ab != ba:
                rep.append(f"product is not graded commutative on ({a!r}, {b!r})")
    for a, b, c in itertools.product(labs, repeat=3):
        if not (C.can_multiply(a, b) and C.can_multiply(b, c)):
            continue
        ab = C.mul(a, b)
        if not all(C.can_multiply(t, c) for t in ab):
            continue
        bc = C.mul(b, c)
        if not all(C.can_multiply(a, t) for t in bc):
            continue
        if C.mul_vec(ab, {c: one}) != C.mul_vec({a: one}, bc):
            rep.append(f"associativity fails on ({a!r}, {b!r}, {c!r})")
    return rep


def _tensor_mul_unit(u: dict) -> dict:
    out: dict = {}
    for a, c in u.items():
        for b, e in u.items():
            add_term(out, (a, b), c * e)
    return out


# ---------------------------------------------------------------- comodules


class Comodule:
    """A right (M -> M (x) C) or left (M -> C (x) M) dg comodule."""

    def __init__(self, complex_: Complex, coalg: DgCoalgebra, coaction: dict, side: str = "right", name: str = ""):
        if side not in ("right", "left"):
            raise CoalgebraError("side must be 'right' or 'left'")
        self.complex = complex_
        self.coalg = coalg
        self.coaction = {k: v for k, v in coaction.items() if v}
        self.side = side
        self.name = name

    @property
    def field(self):
        return self.complex.field

    def mu(self, x) -> dict:
        return self.coaction.get(x, {})

    def apply_mu(self, vec: dict) -> dict:
        out: dict = {}
        for x, c in vec.items():
            axpy(out, self.mu(x), c)
        return out


def check_comodule(M: Comodule) -> list:
    rep = []
    C = M.coalg
    cx, cc = M.complex, C.complex
    one = M.field.one
    for x in cx.labels():
        mx = M.mu(x)
        lhs: dict = {}
        rhs: dict = {}
        cnt: dict = {}
        for (p, q), c in mx.items():
            if M.side == "right":
                m, k = p, q
                for (m1, k1), e in M.mu(m).items():
                    add_term(lhs, (m1, k1, k), c * e)
                for (k1, k2), e in C.delta_of(k).items():
                    add_term(rhs, (m, k1, k2), c * e)
                e = C.counit.get(k)
                if e:
                    add_term(cnt, m, c * e)
            else:
                k, m = p, q
                for (k1, m1), e in M.mu(m).items():
                    add_term(lhs, (k, k1, m1), c * e)
                for (k1, k2), e in C.delta_of(k).items():
                    add_term(rhs, (k1, k2, m), c * e)
                e = C.counit.get(k)
                if e:
                    add_term(cnt, m, c * e)
        if lhs != rhs:
            rep.append(f"coaction is not coassociative on {x!r}")
        if cnt != {x: one}:
            rep.append(f"counit law fails on {x!r}")
        a, b = (cx, cc) if M.side == "right" else (cc, cx)
        if M.apply_mu(cx.d_of(x)) != tensor_d(a, b, mx):
            rep.append(f"coaction is not a chain map on {x!r}")
    return rep


def cofree_comodule(C: DgCoalgebra) -> Comodule:
    """C as a right comodule over itself."""
    return Comodule(C.complex, C, dict(C.delta), "right", name="C")


def cofree_left(C: DgCoalgebra) -> Comodule:
    return Comodule(C.complex, C, dict(C.delta), "left", name="C")


def trivial_comodule(C: DgCoalgebra, grouplike, side: str = "right") -> Comodule:
    """k with coaction 1 -> 1 (x) g for a grouplike degree-0 cocycle g."""
    one = C.field.one
    cx = Complex(C.field, {0: ["1"]}, {}, name="k")
    mu = {"1": {("1", grouplike) if side == "right" else (grouplike, "1"): one}}
    return Comodule(cx, C, mu, side, name="k")


def cotensor(N: Comodule, M: Comodule) -> Complex:
    """Kernel of mu_N (x) 1 - 1 (x) mu_M : N (x) M -> N (x) C (x) M, with d restricted."""
    if N.side != "right" or M.side != "left":
        raise CoalgebraError("cotensor needs a right comodule and a left comodule")
    if N.coalg is not M.coalg:
        raise CoalgebraError("comodules over different coalgebras")
    F = N.field
    cn, cm = N.complex, M.complex
    degs = sorted({a + b for a in cn.support() for b in cm.support()})
    basis: dict = {}
    vecs: dict = {}
    for k in degs:
        src = [(x, y) for a in cn.support() for x in cn.labels(a) for y in cm.labels(k - a)]
        if not src:
            continue
        cols = []
        for (x, y) in src:
            img: dict = {}
            for (n1, c), e in N.mu(x).items():
                add_term(img, (n1, c, y), e)
            for (c, m1), e in M.mu(y).items():
                add_term(img, (x, c, m1), -e)
            cols.append(img)
        ker = kernel_of_map(cols, None, F) if any(cols) else [{j: F.one} for j in range(len(src))]
        vs = [{src[j]: c for j, c in kv.items()} for kv in ker]
        basis[k] = [("ct", k, i) for i in range(len(vs))]
        vecs[k] = vs
    d = {}
    for k, vs in vecs.items():
        if k + 1 not in vecs:
            continue
        ech = Echelon(track=True)
        for v in vecs[k + 1]:
            ech.add(v)
        for i, v in enumerate(vs):
            img = tensor_d(cn, cm, v)
            if not img:
                continue
            co = ech.express(img)
            if co is None:
                raise CoalgebraError("cotensor kernel is not a subcomplex")
            d[("ct", k, i)] = {("ct", k + 1, j): c for j, c in co.items()}
    out = Complex(F, basis, d, name="cotensor")
    out.vectors = {lab: vecs[k][i] for k, labs in basis.items() for i, lab in enumerate(labs)}
    return out


# ---------------------------------------------------------------- comodule Homs


def comodule_hom_complex(P: Comodule, N: Comodule, window) -> Complex:
    """Degree-i comodule maps P -> N for i in the window, by a direct linear solve.

    Labels are ("hom", i, j); each carries its matrix in ``.maps``.  The
    differential is Df = d f - (-1)^i f d; its value in degree hi+1 is
    outside the window and is dropped, so only degrees < hi are complete.
    """
    if P.side != N.side or P.coalg is not N.coalg:
        raise CoalgebraError("comodules of different sides or coalgebras")
    F = P.field
    lo, hi = window
    cp, cn = P.complex, N.complex
    spaces = {}
    for i in range(lo, hi + 2):
        unknowns = [(p, n) for a in cp.support() for p in cp.labels(a) for n in cn.labels(a + i)]
        if not unknowns:
            spaces[i] = []
            continue
        # condition mu_N f(p) - (f (x) 1) mu_P(p) = 0 for every p
        cols = []
        for (p, n) in unknowns:
            col: dict = {}
            for key, e in N.mu(n).items():
                add_term(col, (p, key), e)
            # (f (x) 1) mu_P: terms of mu_P(p') with first factor p contribute to p'
            cols.append(col)
        idx = {u: j for j, u in enumerate(unknowns)}
        for a in cp.support():
            for pp in cp.labels(a):
                for key, e in P.mu(pp).items():
                    q, c = key if P.side == "right" else (key[1], key[0])
                    for n in cn.labels(cp.degree(q) + i):
                        j = idx[(q, n)]
                        tk = (n, c) if P.side == "right" else (c, n)
                        add_term(cols[j], (pp, tk), -e)
        ker = kernel_of_map(cols, None, F) if any(cols) else [{j: F.one} for j in range(len(unknowns))]
        spaces[i] = [{unknowns[j]: c for j, c in kv.items()} for kv in ker]
    basis = {i: [("hom", i, j) for j in range(len(spaces[i]))] for i in range(lo, hi + 1)}
    d = {}
    for i in range(lo, hi):
        ech = Echelon(track=True)
        for v in spaces[i + 1]:
            ech.add(v)
        for j, f in enumerate(spaces[i]):
            img = _hom_d(cp, cn, f, i)
            if not img:
                continue
            co = ech.express(img)
            if co is None:
                raise CoalgebraError("hom differential leaves the solution space")
            d[("hom", i, j)] = {("hom", i + 1, k): c for k, c in co.items()}
    out = Complex(F, basis, d, name="Hom_C")
    out.maps = {("hom", i, j): spaces[i][j] for i in basis for j in range(len(spaces[i]))}
    return out


def _hom_d(cp: Complex, cn: Complex, f: dict, i: int) -> dict:
    """D f = d f - (-1)^i f d, with f stored as {(p, n): coefficient}."""
    out: dict = {}
    by_p: dict = {}
    for (p, n), c in f.items():
        by_p.setdefault(p, {})[n] = c
        for t, e in cn.d_of(n).items():
            add_term(out, (p, t), c * e)
    s = -_sign(i)
    for a in cp.support():
        for p in cp.labels(a):
            for q, e in cp.d_of(p).items():
                for n, c in by_p.get(q, {}).items():
                    add_term(out, (p, n), s * e * c)
    return out


# ---------------------------------------------------------------- cobar coresolution


@dataclass
class CobarResolution:
    """N^ = sum_{n <= depth} s^n M (x) C^{(x) n+1} as the cofree-shaped comodule V (x) C.

    ``comodule`` is N^, ``inclusion`` the chain map M -> N^, ``V`` the
    complex-free graded space of cogenerators (labels of N^ minus the last
    factor) and ``project`` the map N^ -> V given by the counit on the last factor.
    """

    source: Comodule
    comodule: Comodule
    inclusion: ChainMap
    depth: int
    V: dict = dc_field(default_factory=dict)

    def project(self, vec: dict) -> dict:
        C = self.source.coalg
        out: dict = {}
        for lab, c in vec.items():
            e = C.counit.get(lab[-1])
            if e:
                add_term(out, lab[:-1], c * e)
        return out


def cobar_coresolution(M: Comodule, depth: int) -> CobarResolution:
    """Truncated cobar coresolution of a right comodule M.

    Labels ("s", n, m, c_0, ..., c_n) of degree |m| + sum |c_i| + n;
    d(s^n y) = (-1)^n s^n dy + s^{n+1} sum_i (-1)^i delta_i y with delta_0 = mu_M
    and delta_i = Delta on c_{i-1}.  The coaction acts on the last factor.
    """
    if M.side != "right":
        raise CoalgebraError("cobar coresolution is built for right comodules")
    if depth < 0:
        raise CoalgebraError("depth must be non-negative")
    C = M.coalg
    F = M.field
    cm, cc = M.complex, C.complex
    cl = list(cc.labels())
    strings = {0: [(m,) for m in cm.labels()]}
    for n in range(1, depth + 2):
        strings[n] = [s + (c,) for s in strings[n - 1] for c in cl]
    deg = lambda s: cm.degree(s[0]) + sum(cc.degree(c) for c in s[1:])
    basis: dict = {}
    labels_by_n = {}
    for n in range(depth + 1):
        labs = [("s", n) + s for s in strings[n + 1]]
        labels_by_n[n] = labs
        for lab in labs:
            basis.setdefault(deg(lab[2:]) + n, []).append(lab)
    d = {}
    for n in range(depth + 1):
        sn = _sign(n)
        for lab in labels_by_n[n]:
            y = lab[2:]
            img: dict = {}
            for t, c in _string_d(cm, cc, y).items():
                add_term(img, ("s", n) + t, c * sn)
            if n < depth:
                for t, c in _cobar_delta(M, C, y).items():
                    add_term(img, ("s", n + 1) + t, c)
            if img:
                d[lab] = img
    hat = Complex(F, basis, d, name="cobar")
    mu = {}
    for n in range(depth + 1):
        for lab in labels_by_n[n]:
            img: dict = {}
            for (c1, c2), e in C.delta_of(lab[-1]).items():
                add_term(img, (lab[:-1] + (c1,), c2), e)
            if img:
                mu[lab] = img
    Nhat = Comodule(hat, C, mu, "right", name="cobar")
    inc = ChainMap(cm, hat, {m: {("s", 0, m1, c): e for (m1, c), e in M.mu(m).items()} for m in cm.labels()})
    V = {}
    for n in range(depth + 1):
        for s in strings[n]:
            V[("s", n) + s] = deg(s) + n
    return CobarResolution(M, Nhat, inc, depth, V)


def _string_d(cm: Complex, cc: Complex, y: tuple) -> dict:
    out: dict = {}
    e = 0
    for k, x in enumerate(y):
        cx = cm if k == 0 else cc
        s = _sign(e)
        for t, c in cx.d_of(x).items():
            add_term(out, y[:k] + (t,) + y[k + 1:], c * s)
        e += cx.degree(x)
    return out


def _cobar_delta(M: Comodule, C: DgCoalgebra, y: tuple) -> dict:
    out: dict = {}
    for (m1, c), e in M.mu(y[0]).items():
        add_term(out, (m1, c) + y[1:], e)
    for i in range(1, len(y)):
        s = _sign(i)
        for (c1, c2), e in C.delta_of(y[i]).items():
            add_term(out, y[:i] + (c1, c2) + y[i + 1:], e * s)
    return out


def cofree_hom_complex(P: Comodule, R: CobarResolution, name: str = "Hom_C") -> Complex:
    """Hom_C(P, N^) through Hom_C(P, V (x) C) = Hom_k(P, V).

    A basis element ("E", p, v) stands for the comodule map f = (g (x) 1) mu_P
    with g(p) = v.  D g = pi_V(d f) - (-1)^i g d, pi_V the counit on the last factor.
    """
    if P.side != "right" or P.coalg is not R.source.coalg:
        raise CoalgebraError("P must be a right comodule over the resolution's coalgebra")
    F = P.field
    cp = P.complex
    hat = R.comodule.complex
    basis: dict = {}
    for p in cp.labels():
        for v, dv in R.V.items():
            basis.setdefault(dv - cp.degree(p), []).append(("E", p, v))
    # inverse index of mu_P: p -> [(p', c, e)] with (p, c) in mu_P(p')
    inv: dict = {}
    for pp in cp.labels():
        for (q, c), e in P.mu(pp).items():
            inv.setdefault(q, []).append((pp, c, e))
    # inverse index of d_P
    dinv: dict = {}
    for pp in cp.labels():
        for q, e in cp.d_of(pp).items():
            dinv.setdefault(q, []).append((pp, e))
    d = {}
    for i, labs in basis.items():
        s = -_sign(i)
        for lab in labs:
            _, p, v = lab
            img: dict = {}
            for pp, c, e in inv.get(p, ()):
                for t, x in R.project(hat.d_of(v + (c,))).items():
                    add_term(img, ("E", pp, t), e * x)
            for pp, e in dinv.get(p, ()):
                add_term(img, ("E", pp, v), s * e)
            if img:
                d[lab] = img
    return Complex(F, basis, d, name=name)


def evaluate_cofree(P: Comodule, lab, p) -> dict:
    """f_E(p) in N^ for a basis map E = ("E", q, v): (g (x) 1) mu_P(p)."""
    _, q, v = lab
    out: dict = {}
    for (q1, c), e in P.mu(p).items():
        if q1 == q:
            add_term(out, v + (c,), e)
    return out


def hom_as_maps(H: Complex) -> dict:
    return getattr(H, "maps", {})


def certify_resolution(R: CobarResolution, window) -> object:
    lo, hi = window
    return induced_map_on_cohomology(R.inclusion, range(lo, hi + 1))


# ---------------------------------------------------------------- shuffles


def shuffles(p: int, q: int):
    """(p,q)-shuffles as (mu, nu, sign): mu, nu increasing, disjoint, covering 0..p+q-1."""
    n = p + q
    for mu in itertools.combinations(range(n), p):
        nu = tuple(i for i in range(n) if i not in mu)
        inv = sum(1 for a in mu for b in nu if a > b)
        yield mu, nu, _sign(inv)


def shuffle_product(a, b, p: int, q: int, pad, levelwise, slot_degrees=None) -> dict:
    """sum over (p,q)-shuffles (mu, nu) of sign levelwise(pad(a, mu), pad(b, nu)).

    The sign is the Koszul sign of the shuffle permutation for the entry
    degrees ``slot_degrees(a)``, ``slot_degrees(b)``; without them every entry
    counts as odd and the sign is the plain shuffle sign.
    """
    da = slot_degrees(a) if slot_degrees else None
    db = slot_degrees(b) if slot_degrees else None
    out: dict = {}
    for mu, nu, s in shuffles(p, q):
        if da is not None:
            e = sum(da[i] * db[j] for j, y in enumerate(nu) for i, x in enumerate(mu) if x > y)
            s = _sign(e)
        axpy(out, levelwise(pad(a, mu, p + q), pad(b, nu, p + q)), s)
    return out


def shuffle_bialgebra(C: DgCoalgebra, pad, levelwise, unit: dict, symmetric: bool = False,
                      name: str = "", slot_degrees=None) -> DgCoalgebra:
    """Extend a level-wise product to the total complex by signed shuffles.

    ``pad(x, slots, n)`` spreads the p entries of a level-p label over the
    positions ``slots`` of a level-n string, identities elsewhere;
    ``levelwise(u, v)`` multiplies two padded level-n strings and returns a
    vector of labels.  x * y = sum over (p,q)-shuffles (mu, nu) of
    sign levelwise(pad(x, mu), pad(y, nu)), where the sign is the Koszul sign
    of the shuffle permutation for the degrees ``slot_degrees(label)`` (the
    plain shuffle sign when every entry is odd, the default).  Products are
    defined while the total level stays within ``C.max_level``.
    """
    level = C.level
    memo: dict = {}

    def product(a, b):
        if (a, b) not in memo:
            memo[(a, b)] = shuffle_product(a, b, level(a), level(b), pad, levelwise, slot_degrees)
        return memo[(a, b)]

    B = DgCoalgebra(C.complex, C.delta, C.counit, name or C.name, level, product, unit, symmetric, C.max_level)
    for attr in ("model", "window", "render"):
        if hasattr(C, attr):
            setattr(B, attr, getattr(C, attr))
    return B


def antipode_report(C: DgCoalgebra, rho, degrees=(0,)) -> dict:
    """m (rho (x) 1) Delta = unit eps = m (1 (x) rho) Delta, at chain level and on H^0.

    ``rho`` maps a label to a vector.  Chain-level failures are listed; the
    cohomological identity is checked on cocycle representatives of H^0,
    modulo boundaries.
    """
    cx = C.complex
    one = C.field.one
    u = C.unit

    def side(vec, left):
        out: dict = {}
        for x, c in vec.items():
            for (y, z), e in C.delta_of(x).items():
                if left:
                    ry = _apply(rho, y)
                    if all(C.can_multiply(t, z) for t in ry):
                        axpy(out, C.mul_vec(ry, {z: one}), c * e)
                    else:
                        return None
                else:
                    rz = _apply(rho, z)
                    if all(C.can_multiply(y, t) for t in rz):
                        axpy(out, C.mul_vec({y: one}, rz), c * e)
                    else:
                        return None
        return out

    chain_fail = []
    undefined = []
    for x in cx.labels():
        want = {k: v * C.eps({x: one}) for k, v in u.items()} if C.eps({x: one}) else {}
        for left in (True, False):
            got = side({x: one}, left)
            if got is None:
                undefined.append(x)
                break
            if got != want:
                chain_fail.append((x, "left" if left else "right"))
    h = cohomology(cx, [0])
    ech = Echelon(cx.order_key)
    for lab in cx.labels(-1):
        ech.add(cx.d_of(lab))
    h0_fail = []
    for z in h.cocycles.get(0, []):
        want = {k: v * C.eps(z) for k, v in u.items()} if C.eps(z) else {}
        for left in (True, False):
            got = side(z, left)
            if got is None:
                h0_fail.append(("undefined", z))
                continue
            diff = dict(got)
            axpy(diff, want, -1)
            if diff and not ech.contains(diff):
                h0_fail.append(("left" if left else "right", z))
    return {"chain_level_failures": chain_fail, "undefined": undefined, "h0_failures": h0_fail,
            "h0_dim": h.dims.get(0, 0), "h0_ok": not h0_fail}


def _apply(m, vec):
    out: dict = {}
    for k, c in (vec.items() if isinstance(vec, dict) else [(vec, 1)]):
        axpy(out, m(k), c)
    return out


# ---------------------------------------------------------------- JSON


def coalgebra_to_json(C: DgCoalgebra, render=str) -> dict:
    F = C.field
    cx = C.complex
    doc = {
        "field": F.to_json(),
        "name": C.name,
        "basis": {str(n): [render(x) for x in labs] for n, labs in cx.basis.items()},
        "d": [[render(x), render(t), F.fmt(c)] for x in cx.labels() for t, c in cx.d_of(x).items()],
        "delta": [[render(x), [render(y), render(z)], F.fmt(c)] for x in cx.labels()
                  for (y, z), c in C.delta_of(x).items()],
        "counit": [[render(x), F.fmt(c)] for x, c in C.counit.items()],
    }
    return doc


def coalgebra_from_json(doc: dict) -> DgCoalgebra:
    F = FieldSpec.from_json(doc.get("field", "Q"))
    basis = {int(n): list(v) for n, v in doc["basis"].items()}
    d: dict = {}
    for x, t, c in doc.get("d", []):
        add_term(d.setdefault(x, {}), t, F(c))
    delta: dict = {}
    for x, (y, z), c in doc.get("delta", []):
        add_term(delta.setdefault(x, {}), (y, z), F(c))
    counit = {x: F(c) for x, c in doc.get("counit", [])}
    return DgCoalgebra(Complex(F, basis, d), delta, counit, doc.get("name", ""))
