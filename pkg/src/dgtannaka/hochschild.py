"""Simplicial Hochschild complexes, two-sided bar constructions and their totals.

Two shapes of string are built.

cyclic:  labels (objs, (a_1, ..., a_n, f)) with a_i: X_i -> X_{i-1} and
         f: X_0 -> X_n in a bimodule F.  d_0 moves a_1 round to act on f
         from the right (with the Koszul sign), d_n lets a_n act on the left.
bar:     labels (objs, (r, a_1, ..., a_n, l)) with r in R(X_0), l in L(X_n)
         for a right module R and a left module L.  d_0 = r.a_1, d_n = a_n.l.

Inner faces compose neighbours; degeneracies insert identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .dgcat import (Bimodule, DgCategory, LeftModule, PresentationError, QuotientSpace,
                    RightModule, _sign)
from .gradedlinalg import Bicomplex, Complex, LevelSupport, TrustedWindow, total_complex
from .gradedlinalg.sparse import add_term, axpy


class HochschildError(ValueError):
    pass


def fmt_label(x) -> str:
    if isinstance(x, tuple) and len(x) == 2 and x[0] == "dual":
        return f"{fmt_label(x[1])}*"
    if isinstance(x, tuple):
        return "(" + ",".join(fmt_label(y) for y in x) + ")"
    return str(x)


# ---------------------------------------------------------------- shapes


class _Shape:
    """Factor bookkeeping shared by the cyclic and bar strings."""

    kind = ""

    def __init__(self, A: DgCategory, inner):
        self.A = A
        self.inner = list(inner)
        self.inner_set = set(self.inner)

    def chains(self, L: int) -> list:
        """chains[n] = list of (objs, (a_1..a_n)) with a_i: X_i -> X_{i-1}."""
        out = [[((x,), ()) for x in self.A.objects]]
        for n in range(1, L + 1):
            nxt = []
            for objs, as_ in out[-1]:
                for a in self.inner:
                    if self.A.tgt(a) == objs[-1]:
                        nxt.append((objs + (self.A.src(a),), as_ + (a,)))
            out.append(nxt)
        return out

    def keep_inner(self, vec: dict) -> dict:
        return {a: c for a, c in vec.items() if a in self.inner_set}


class CyclicShape(_Shape):
    kind = "cyclic"

    def __init__(self, A: DgCategory, F: Bimodule, inner):
        super().__init__(A, inner)
        self.F = F

    def strings(self, chains_n) -> list:
        out = []
        for objs, as_ in chains_n:
            for f in self.F.labels(objs[0], objs[-1]):
                out.append((objs, as_ + (f,)))
        return out

    def degree(self, lab) -> int:
        objs, fs = lab
        return sum(self.A.deg(a) for a in fs[:-1]) + self.F.degree(fs[-1])

    def d(self, lab) -> dict:
        objs, fs = lab
        n = len(fs) - 1
        out: dict = {}
        e = 0
        for k in range(n + 1):
            if k < n:
                img = self.keep_inner(self.A.d_of(fs[k]))
                dk = self.A.deg(fs[k])
            else:
                img = self.F.d(fs[k])
                dk = self.F.degree(fs[k])
            s = _sign(e)
            for t, c in img.items():
                add_term(out, (objs, fs[:k] + (t,) + fs[k + 1:]), c * s)
            e += dk
        return out

    def face(self, i: int, lab) -> dict:
        objs, fs = lab
        n = len(fs) - 1
        as_, f = fs[:-1], fs[-1]
        out: dict = {}
        if i == 0:
            a1 = as_[0]
            rest = sum(self.A.deg(a) for a in as_[1:]) + self.F.degree(f)
            s = _sign(self.A.deg(a1) * rest)
            for t, c in self.F.right(f, a1).items():
                add_term(out, (objs[1:], as_[1:] + (t,)), c * s)
        elif i == n:
            for t, c in self.F.left(as_[-1], f).items():
                add_term(out, (objs[:-1], as_[:-1] + (t,)), c)
        else:
            comp = self.keep_inner(self.A.compose(as_[i - 1], as_[i]))
            for t, c in comp.items():
                add_term(out, (objs[:i] + objs[i + 1:], as_[:i - 1] + (t,) + as_[i + 1:] + (f,)), c)
        return out

    def degen(self, j: int, lab):
        objs, fs = lab
        x = objs[j]
        return (objs[:j + 1] + (x,) + objs[j + 1:], fs[:j] + (self.A.identity(x),) + fs[j:])

    def is_degenerate(self, lab) -> bool:
        return any(self.A.is_identity(a) for a in lab[1][:-1])

    def render(self, lab) -> str:
        objs, fs = lab
        return ">".join(map(str, objs)) + "|" + ",".join(fmt_label(a) for a in fs[:-1]) + "|" + fmt_label(fs[-1])

    def outer_range(self):
        return self.F.degree_range()


class BarShape(_Shape):
    kind = "bar"

    def __init__(self, A: DgCategory, R: RightModule, L: LeftModule, inner):
        super().__init__(A, inner)
        self.R, self.L = R, L

    def strings(self, chains_n) -> list:
        out = []
        for objs, as_ in chains_n:
            for r in self.R.labels(objs[0]):
                for l in self.L.labels(objs[-1]):
                    out.append((objs, (r,) + as_ + (l,)))
        return out

    def _fdeg(self, k, n, x):
        if k == 0:
            return self.R.degree(x)
        if k == n + 1:
            return self.L.degree(x)
        return self.A.deg(x)

    def degree(self, lab) -> int:
        objs, fs = lab
        n = len(fs) - 2
        return sum(self._fdeg(k, n, x) for k, x in enumerate(fs))

    def d(self, lab) -> dict:
        objs, fs = lab
        n = len(fs) - 2
        out: dict = {}
        e = 0
        for k, x in enumerate(fs):
            if k == 0:
                img = self.R.d(x)
            elif k == n + 1:
                img = self.L.d(x)
            else:
                img = self.keep_inner(self.A.d_of(x))
            s = _sign(e)
            for t, c in img.items():
                add_term(out, (objs, fs[:k] + (t,) + fs[k + 1:]), c * s)
            e += self._fdeg(k, n, x)
        return out

    def face(self, i: int, lab) -> dict:
        objs, fs = lab
        n = len(fs) - 2
        r, as_, l = fs[0], fs[1:-1], fs[-1]
        out: dict = {}
        if i == 0 and n >= 1:
            for t, c in self.R.act(r, as_[0]).items():
                add_term(out, (objs[1:], (t,) + as_[1:] + (l,)), c)
        elif i == n:
            for t, c in self.L.act(as_[-1], l).items():
                add_term(out, (objs[:-1], (r,) + as_[:-1] + (t,)), c)
        else:
            comp = self.keep_inner(self.A.compose(as_[i - 1], as_[i]))
            for t, c in comp.items():
                add_term(out, (objs[:i] + objs[i + 1:], (r,) + as_[:i - 1] + (t,) + as_[i + 1:] + (l,)), c)
        return out

    def degen(self, j: int, lab):
        objs, fs = lab
        x = objs[j]
        return (objs[:j + 1] + (x,) + objs[j + 1:], fs[:j + 1] + (self.A.identity(x),) + fs[j + 1:])

    def is_degenerate(self, lab) -> bool:
        return any(self.A.is_identity(a) for a in lab[1][1:-1])

    def render(self, lab) -> str:
        objs, fs = lab
        return (">".join(map(str, objs)) + "|" + fmt_label(fs[0]) + "|"
                + ",".join(fmt_label(a) for a in fs[1:-1]) + "|" + fmt_label(fs[-1]))

    def outer_range(self):
        r0, r1 = self.R.degree_range()
        l0, l1 = self.L.degree_range()
        return r0 + l0, r1 + l1


# ---------------------------------------------------------------- levels


@dataclass
class SimplicialLevels:
    """Levels 0..L with faces[n][i]: level n -> n-1 and degens[n][j]: level n-1 -> n.

    Maps are dicts label -> sparse image.  When ``normalised`` the
    degeneracies are zero and are not stored.
    """

    field: object
    levels: list
    faces: list
    degens: list
    shape: _Shape
    normalised: bool = False
    relative: bool = False
    support: LevelSupport | None = None
    quotients: list = dc_field(default_factory=list)

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    def face_sum(self, n: int) -> dict:
        out = {}
        for lab in self.levels[n].labels():
            img: dict = {}
            for i in range(n + 1):
                axpy(img, self.faces[n][i].get(lab, {}), _sign(i))
            if img:
                out[lab] = img
        return out

    def bicomplex(self) -> Bicomplex:
        chain = [{}] + [self.face_sum(n) for n in range(1, self.max_level + 1)]
        return Bicomplex(self.field, self.levels, chain, self.support)

    def render(self, lab) -> str:
        return self.shape.render(lab)

    def dims(self) -> list:
        return [lev.total_dim for lev in self.levels]

    def check(self) -> list:
        """Simplicial identities and compatibility with d, on every basis label."""
        rep = []
        comp = lambda m, v: _apply(m, v)
        for n in range(self.max_level + 1):
            lev = self.levels[n]
            for lab in lev.labels():
                if lev.apply_d(lev.d_of(lab)):
                    rep.append(f"d^2 != 0 at level {n} on {self.render(lab)}")
            if n >= 1:
                for i in range(n + 1):
                    fi = self.faces[n][i]
                    for lab in lev.labels():
                        lhs = comp(fi, lev.d_of(lab))
                        rhs = self.levels[n - 1].apply_d(fi.get(lab, {}))
                        axpy(lhs, rhs, -1)
                        if lhs:
                            rep.append(f"face {i} at level {n} does not commute with d on {self.render(lab)}")
            if n >= 2:
                for i in range(n + 1):
                    for j in range(i + 1, n + 1):
                        for lab in lev.labels():
                            lhs = comp(self.faces[n - 1][i], self.faces[n][j].get(lab, {}))
                            rhs = comp(self.faces[n - 1][j - 1], self.faces[n][i].get(lab, {}))
                            if lhs != rhs:
                                rep.append(f"d_{i} d_{j} != d_{j - 1} d_{i} at level {n} on {self.render(lab)}")
                                break
            if not self.normalised and n >= 1:
                rep += self._check_degens(n)
        return rep

    def _check_degens(self, n: int) -> list:
        rep = []
        low = self.levels[n - 1]
        one = self.field.one
        for j in range(n):
            s = self.degens[n][j]
            for lab in low.labels():
                if _apply(s, low.d_of(lab)) != self.levels[n].apply_d(s.get(lab, {})):
                    rep.append(f"s_{j} does not commute with d at level {n}")
                for i in range(n + 1):
                    got = _apply(self.faces[n][i], s.get(lab, {}))
                    if i < j:
                        want = _apply(self.degens[n - 1][j - 1], self.faces[n - 1][i].get(lab, {})) if n >= 2 else None
                    elif i in (j, j + 1):
                        want = {lab: one}
                    else:
                        want = _apply(self.degens[n - 1][j], self.faces[n - 1][i - 1].get(lab, {})) if n >= 2 else None
                    if want is not None and got != want:
                        rep.append(f"d_{i} s_{j} identity fails at level {n} on {self.render(lab)}")
            if n >= 2:
                for i in range(j + 1):
                    if n - 2 < 0:
                        continue
                    for lab in self.levels[n - 2].labels():
                        lhs = _apply(self.degens[n][i], self.degens[n - 1][j].get(lab, {})) if j < n - 1 else None
                        if lhs is None:
                            continue
                        rhs = _apply(self.degens[n][j + 1], self.degens[n - 1][i].get(lab, {}))
                        if lhs != rhs:
                            rep.append(f"s_{i} s_{j} identity fails at level {n}")
        return rep


def _apply(m: dict, vec: dict) -> dict:
    out: dict = {}
    for k, c in vec.items():
        im = m.get(k)
        if im:
            axpy(out, im, c)
    return out


def _build(shape: _Shape, L: int, normalised: bool, quotient=None) -> SimplicialLevels:
    if L < 0:
        raise HochschildError("level cutoff must be non-negative")
    A = shape.A
    F = A.field
    chains = shape.chains(L)
    levels, faces, degens, quots = [], [], [], []
    for n in range(L + 1):
        labs = shape.strings(chains[n])
        if normalised:
            labs = [x for x in labs if not shape.is_degenerate(x)]
        Q = quotient(n, labs) if quotient else None
        quots.append(Q)
        keep = [x for x in labs if Q is None or not Q.is_pivot(x)]
        keepset = set(keep)

        def project(vec, keepset=keepset, Q=Q):
            if Q is not None:
                vec = Q.normal_form(vec)
            return {k: c for k, c in vec.items() if k in keepset}

        basis: dict = {}
        for x in keep:
            basis.setdefault(shape.degree(x), []).append(x)
        d = {x: project(shape.d(x)) for x in keep}
        levels.append(Complex(F, basis, d, name=f"level {n}"))
        if n == 0:
            faces.append([])
            degens.append([])
            continue
        lowproj = _projector(levels[n - 1], quots[n - 1])
        faces.append([{x: lowproj(shape.face(i, x)) for x in keep} for i in range(n + 1)])
        if normalised:
            degens.append([])
        else:
            degens.append([{x: {shape.degen(j, x): F.one} for x in levels[n - 1].labels()}
                           for j in range(n)])
    for n in range(1, L + 1):
        for i in range(len(faces[n])):
            faces[n][i] = {k: v for k, v in faces[n][i].items() if v}
    return SimplicialLevels(F, levels, faces, degens, shape, normalised, quotient is not None,
                            _support(shape), quots)


def _projector(level: Complex, Q):
    def proj(vec):
        if Q is not None:
            vec = Q.normal_form(vec)
        return {k: c for k, c in vec.items() if k in level}
    return proj


def _support(shape: _Shape) -> LevelSupport:
    lo, hi = shape.A.degree_range(shape.inner) if shape.inner else (0, 0)
    olo, ohi = shape.outer_range()
    return LevelSupport(lo, olo, hi, ohi)


def hochschild_levels(A: DgCategory, F: Bimodule, L: int, normalised: bool = False) -> SimplicialLevels:
    """Levels 0..L of the simplicial Hochschild complex of A with coefficients in F."""
    inner = A.nonidentity() if normalised else list(A.mor)
    return _build(CyclicShape(A, F, inner), L, normalised)


def bar_levels(A: DgCategory, R: RightModule, Lm: LeftModule, L: int, normalised: bool = True) -> SimplicialLevels:
    """Levels of the two-sided bar construction B(R, A, Lm)."""
    inner = A.nonidentity() if normalised else list(A.mor)
    return _build(BarShape(A, R, Lm, inner), L, normalised)


def normalize(levels: SimplicialLevels) -> SimplicialLevels:
    """Quotient by the degenerate subspace, basis = non-degenerate labels."""
    if levels.normalised:
        return levels
    sh = levels.shape
    new_levels, new_faces = [], []
    for n, lev in enumerate(levels.levels):
        keep = {x for x in lev.labels() if not sh.is_degenerate(x)}
        basis = {j: [x for x in labs if x in keep] for j, labs in lev.basis.items()}
        d = {x: {t: c for t, c in lev.d_of(x).items() if t in keep} for x in keep}
        new_levels.append(Complex(lev.field, basis, d, lev.name))
        if n == 0:
            new_faces.append([])
            continue
        low = new_levels[n - 1]
        new_faces.append([{x: {t: c for t, c in fi.get(x, {}).items() if t in low}
                           for x in keep if fi.get(x)} for fi in levels.faces[n]])
    inner = [a for a in sh.inner if not sh.A.is_identity(a)]
    shape = type(sh).__new__(type(sh))
    shape.__dict__.update(sh.__dict__)
    shape.inner, shape.inner_set = inner, set(inner)
    return SimplicialLevels(levels.field, new_levels, new_faces, [], shape, True,
                            levels.relative, _support(shape), levels.quotients)


def _window(levels: SimplicialLevels, cutoff: int, top: int | None) -> TrustedWindow:
    sup = levels.support
    if top is not None:
        sup = LevelSupport(sup.lo_slope, sup.lo_const, sup.hi_slope, sup.hi_const, top)
    return sup.trusted_window(cutoff)


def levels_total(levels: SimplicialLevels, cutoff: int | None = None, top: int | None = None):
    """Total complex of the given levels and the window it can be trusted on."""
    L = levels.max_level if cutoff is None else cutoff
    tot, _ = total_complex(levels.bicomplex(), L)
    return tot, _window(levels, L, top)


def normalised_top(A: DgCategory, inner, cap: int | None = None) -> int | None:
    """Last level that can be nonzero, from composable chains of inner generators."""
    cap = cap if cap is not None else len(inner) * max(1, len(A.objects)) + 1
    n = A.longest_chain(inner, cap + 1)
    return None if n > cap else n


def hochschild_total(A: DgCategory, F: Bimodule, L: int | None = None, normalised: bool = True,
                     nilpotence: bool = False):
    """Total Hochschild complex and its trusted window.

    With ``nilpotence`` the levels are cut where composable chains of
    non-identity generators run out and every degree is trusted.
    """
    top = None
    if nilpotence:
        if not normalised:
            raise HochschildError("exact totals need the normalised complex")
        top = normalised_top(A, A.nonidentity())
        if top is None:
            raise HochschildError("nilpotence does not bound the normalised levels")
        L = top if L is None else max(L, top)
    if L is None:
        raise HochschildError("supply a level cutoff or a nilpotence certificate")
    lev = hochschild_levels(A, F, L, normalised)
    return levels_total(lev, L, top)


# ---------------------------------------------------------------- relative version


def degree_zero_part(A: DgCategory) -> tuple:
    lo, _ = A.degree_range()
    if lo < 0:
        raise HochschildError("relative complexes need A in non-negative degrees")
    a0 = [a for a in A.mor if A.deg(a) == 0]
    for a in a0:
        if A.d_of(a):
            raise HochschildError(f"d A^0 != 0 (on {a}); strictify first")
    return a0, A.positive()


def relative_levels(A: DgCategory, R: RightModule, Lm: LeftModule, L: int) -> SimplicialLevels:
    """Levels R (x)_{A0} A^{>0} (x)_{A0} ... (x)_{A0} Lm over the degree-zero part A0."""
    a0, pos = degree_zero_part(A)
    shape = BarShape(A, R, Lm, pos)
    zs = [z for z in a0 if not A.is_identity(z)]
    chains = shape.chains(L)

    def quotient(n, labs):
        if not zs:
            return None
        where = {x: i for i, x in enumerate(labs)}
        rels = _relations(shape, chains, n, zs)
        for r in rels:
            for k in r:
                if k not in where:
                    raise PresentationError("action mismatch: relation leaves the enumerated strings")
        return QuotientSpace(lambda k: where[k], rels)

    return _build(shape, L, True, quotient)


def _relations(shape: BarShape, chains, n: int, zs) -> list:
    """(.. x.z (x) y ..) - (.. x (x) z.y ..) at every slot, for every degree-zero z.

    Slot k sits between factor k (r when k = 0) and factor k+1 (l when k = n).
    """
    A = shape.A
    rels = []
    for z in zs:
        U, V = A.src(z), A.tgt(z)
        for k in range(n + 1):
            lefts = [(objs, as_) for objs, as_ in chains[k] if objs[-1] == V]
            rights = [(objs, as_) for objs, as_ in chains[n - k] if objs[0] == U]
            for lobjs, las in lefts:
                for r in shape.R.labels(lobjs[0]):
                    lf = (r,) + las
                    for robjs, ras in rights:
                        for l in shape.L.labels(robjs[-1]):
                            rf = ras + (l,)
                            vec: dict = {}
                            xz = shape.R.act(lf[-1], z) if k == 0 else shape.keep_inner(A.compose(lf[-1], z))
                            for t, c in xz.items():
                                add_term(vec, (lobjs[:-1] + robjs, lf[:-1] + (t,) + rf), c)
                            zy = shape.L.act(z, rf[0]) if k == n else shape.keep_inner(A.compose(z, rf[0]))
                            for t, c in zy.items():
                                add_term(vec, (lobjs + robjs[1:], lf + (t,) + rf[1:]), -c)
                            if vec:
                                rels.append(vec)
    return rels


def relative_total(A: DgCategory, R: RightModule, Lm: LeftModule, L: int | None = None,
                   nilpotence: bool = False):
    """Total complex of the relative levels with its trusted window."""
    top = None
    if nilpotence:
        if A.nilpotence is None:
            raise HochschildError("no nilpotence certificate on the category")
        from .dgcat import check_nilpotence
        bad = check_nilpotence(A)
        if bad:
            raise HochschildError(bad[0])
        top = normalised_top(A, A.positive())
        if top is None:
            raise HochschildError("composable strings of positive generators do not run out; supply a cutoff")
        L = top if L is None else max(L, top)
    if L is None:
        raise HochschildError("supply a level cutoff or a nilpotence certificate")
    lev = relative_levels(A, R, Lm, L)
    return lev, levels_total(lev, L, top)
