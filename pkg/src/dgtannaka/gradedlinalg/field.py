"""Exact scalar fields: the rationals and prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class FieldError(ValueError):
    pass


class Mod:
    """Element of F_p. Mixed arithmetic with plain ints is allowed."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise FieldError(f"mixed fields F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Q when ``p`` is None, otherwise the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, Mod):
                raise FieldError("F_p element used over Q")
            if isinstance(x, str):
                return Fraction(x)
            return Fraction(x)
        if isinstance(x, Mod):
            if x.p != self.p:
                raise FieldError(f"mixed fields F_{x.p} and F_{self.p}")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return Mod(x.numerator, self.p) / x.denominator
        return Mod(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def fmt(self, x) -> str:
        if self.p is not None:
            return str(int(x))
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def to_json(self):
        return "Q" if self.p is None else {"Fp": self.p}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if obj == "Q":
            return cls()
        if isinstance(obj, dict) and "Fp" in obj:
            return cls(int(obj["Fp"]))
        if isinstance(obj, str) and obj.startswith("Fp:"):
            return cls(int(obj[3:]))
        raise FieldError(f"unknown field {obj!r}")


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)
