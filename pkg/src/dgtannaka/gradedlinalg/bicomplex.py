"""Chain-cochain bicomplexes, their total complexes, and trusted windows."""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex, ComplexError, check_complex
from .field import FieldSpec
from .sparse import add_term, apply_linear, axpy


@dataclass(frozen=True)
class TrustedWindow:
    """Degrees in which a truncated total complex agrees with the full one.

    Either an interval [lo, hi] (None = unbounded), or, when ``hole`` is set,
    every degree outside the closed interval ``hole``.
    """

    lo: int | None = None
    hi: int | None = None
    empty: bool = False
    hole: tuple | None = None

    def __contains__(self, j: int) -> bool:
        if self.empty:
            return False
        if self.hole is not None:
            return not (self.hole[0] <= j <= self.hole[1])
        return (self.lo is None or j >= self.lo) and (self.hi is None or j <= self.hi)

    @property
    def everything(self) -> bool:
        return not self.empty and self.hole is None and self.lo is None and self.hi is None

    def clip(self, lo: int, hi: int) -> list:
        return [j for j in range(lo, hi + 1) if j in self]

    def to_json(self):
        if self.empty:
            return "empty"
        if self.hole is not None:
            return {"all_except": list(self.hole)}
        return [self.lo, self.hi]


@dataclass(frozen=True)
class LevelSupport:
    """Cochain degrees of simplicial level i lie in [lo_slope*i + lo_const, hi_slope*i + hi_const].

    ``top`` is the last level that can be nonzero (None when unbounded),
    e.g. from a nilpotence certificate.
    """

    lo_slope: int
    lo_const: int
    hi_slope: int
    hi_const: int
    top: int | None = None

    def cochain_range(self, i: int):
        if self.top is not None and i > self.top:
            return None
        return (self.lo_slope * i + self.lo_const, self.hi_slope * i + self.hi_const)

    def total_range(self, i: int):
        r = self.cochain_range(i)
        if r is None:
            return None
        return (r[0] - i, r[1] - i)

    def trusted_window(self, cutoff: int) -> TrustedWindow:
        """Degrees j such that no level above the cutoff meets j-1, j or j+1."""
        first = cutoff + 1
        if self.top is not None:
            ranges = [self.total_range(i) for i in range(first, self.top + 1)]
            ranges = [r for r in ranges if r[0] <= r[1]]
            if not ranges:
                return TrustedWindow()
            return TrustedWindow(hole=(min(r[0] for r in ranges) - 1, max(r[1] for r in ranges) + 1))
        a = self.lo_slope - 1
        c = self.hi_slope - 1
        r = self.total_range(first)
        u_hi = r[1] if c <= 0 else None
        u_lo = r[0] if a >= 0 else None
        if u_hi is None and u_lo is None:
            return TrustedWindow(empty=True)
        if u_lo is None:
            return TrustedWindow(u_hi + 2, None)
        if u_hi is None:
            return TrustedWindow(None, u_lo - 2)
        return TrustedWindow(hole=(u_lo - 1, u_hi + 1))


class Bicomplex:
    """Levels i = 0..L (cochain complexes) with chain maps level i -> level i-1.

    ``chain_d[i]`` is a dict label -> image for level i (i >= 1) and must
    commute with the cochain differentials and square to zero.
    """

    def __init__(self, field: FieldSpec, levels: list, chain_d: list, support: LevelSupport | None = None):
        self.field = field
        self.levels = list(levels)
        self.chain_d = list(chain_d)
        if len(self.chain_d) < len(self.levels):
            self.chain_d += [{}] * (len(self.levels) - len(self.chain_d))
        self.support = support

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    def check(self) -> list:
        report = []
        for i, lev in enumerate(self.levels):
            for item in check_complex(lev):
                report.append(("d2", i, item["label"]))
            if i >= 1:
                for lab in lev.labels():
                    # commutation with the cochain differential
                    lhs = apply_linear(self.chain_d[i], lev.d_of(lab))
                    rhs = self.levels[i - 1].apply_d(self.chain_d[i].get(lab, {}))
                    axpy(lhs, rhs, -1)
                    if lhs:
                        report.append(("commute", i, lab))
            if i >= 2:
                for lab in lev.labels():
                    if apply_linear(self.chain_d[i - 1], self.chain_d[i].get(lab, {})):
                        report.append(("chain_d2", i, lab))
        return report


def total_complex(b: Bicomplex, level_cutoff: int | None = None):
    """Direct-sum total complex, degree n = sum_i level_i^(n+i).

    On the level-i, cochain-degree-j component the differential is
    d_cochain + (-1)^j * chain_d.  Returns (Complex, TrustedWindow).
    """
    L = b.max_level if level_cutoff is None else level_cutoff
    if L < 0:
        raise ComplexError("negative level cutoff")
    if L > b.max_level:
        raise ComplexError(f"levels above {b.max_level} are not materialized (cutoff {L})")
    basis: dict = {}
    d = {}
    for i in range(L + 1):
        lev = b.levels[i]
        for j, labels in lev.basis.items():
            basis.setdefault(j - i, []).extend((i, lab) for lab in labels)
            sign = -1 if j % 2 else 1
            for lab in labels:
                img: dict = {}
                for t, c in lev.d_of(lab).items():
                    img[(i, t)] = c
                if i >= 1:
                    for t, c in b.chain_d[i].get(lab, {}).items():
                        add_term(img, (i - 1, t), c * sign)
                if img:
                    d[(i, lab)] = img
    window = b.support.trusted_window(L) if b.support is not None else TrustedWindow(empty=True)
    return Complex(b.field, basis, d), window
