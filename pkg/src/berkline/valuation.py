"""Exact arithmetic for the value group p^Q together with 0 and infinity.

A :class:`Radius` is an abstract element ``p^q`` (stored by its exponent), the
bottom element ``ZERO`` or the top element ``INF``.  The prime itself only
enters through :class:`FieldConfig`, which computes p-adic absolute values of
rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Rational = Union[int, Fraction]


class KernelError(Exception):
    """Base class for errors raised by kernel operations."""


class DomainError(KernelError):
    """An operation was called outside of its domain of definition."""


class ValidationError(KernelError):
    """Input data violates a structural invariant."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fmt_rational(x: Rational) -> str:
    """Canonical "num/den" string in lowest terms (sign on the numerator)."""
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


_ZERO_KIND, _EXP_KIND, _INF_KIND = 0, 1, 2


@dataclass(frozen=True, eq=False)
class Radius:
    kind: int
    q: Fraction = Fraction(0)

    # construction helpers -------------------------------------------------
    @staticmethod
    def exp(q: Rational) -> "Radius":
        return Radius(_EXP_KIND, as_fraction(q))

    @property
    def is_zero(self) -> bool:
        return self.kind == _ZERO_KIND

    @property
    def is_inf(self) -> bool:
        return self.kind == _INF_KIND

    @property
    def is_exp(self) -> bool:
        return self.kind == _EXP_KIND

    @property
    def finite(self) -> bool:
        return self.kind != _INF_KIND

    # ordering (integer cross-multiplication; Fraction comparison is slow) ---
    def __eq__(self, other) -> bool:
        if not isinstance(other, Radius):
            return NotImplemented
        if self.kind != other.kind:
            return False
        a, b = self.q, other.q
        return a._numerator == b._numerator and a._denominator == b._denominator

    def __hash__(self) -> int:
        return hash((self.kind, self.q._numerator, self.q._denominator))

    def __lt__(self, other: "Radius") -> bool:
        if not isinstance(other, Radius):
            return NotImplemented
        k = self.kind
        if k != other.kind:
            return k < other.kind
        if k != _EXP_KIND:
            return False
        a, b = self.q, other.q
        return a._numerator * b._denominator < b._numerator * a._denominator

    def __le__(self, other: "Radius") -> bool:
        if not isinstance(other, Radius):
            return NotImplemented
        return not other < self

    def __gt__(self, other: "Radius") -> bool:
        if not isinstance(other, Radius):
            return NotImplemented
        return other < self

    def __ge__(self, other: "Radius") -> bool:
        if not isinstance(other, Radius):
            return NotImplemented
        return not self < other

    def cmp(self, other: "Radius") -> int:
        if self < other:
            return -1
        if other < self:
            return 1
        return 0

    # arithmetic -------------------------------------------------------------
    def __mul__(self, other: "Radius") -> "Radius":
        if (self.is_inf and other.is_zero) or (self.is_zero and other.is_inf):
            raise DomainError("Infinity * Zero is undefined")
        if self.is_zero or other.is_zero:
            return ZERO
        if self.is_inf or other.is_inf:
            return INF
        return Radius(_EXP_KIND, self.q + other.q)

    def __truediv__(self, other: "Radius") -> "Radius":
        if other.is_zero:
            raise DomainError("division by Zero")
        if other.is_inf:
            if self.is_inf:
                raise DomainError("Infinity / Infinity is undefined")
            return ZERO
        if self.is_zero:
            return ZERO
        if self.is_inf:
            return INF
        return Radius(_EXP_KIND, self.q - other.q)

    def __pow__(self, e: Rational) -> "Radius":
        e = as_fraction(e)
        if not self.is_exp:
            if e > 0 and self.is_zero:
                return ZERO
            if e == 0:
                return ONE
            raise DomainError("rational powers are only defined on Exp values")
        return Radius(_EXP_KIND, self.q * e)

    def pow_strict(self, e: Rational) -> "Radius":
        if not self.is_exp:
            raise DomainError("rational powers are only defined on Exp values")
        return Radius(_EXP_KIND, self.q * as_fraction(e))

    def __repr__(self) -> str:
        if self.is_zero:
            return "Zero"
        if self.is_inf:
            return "Infinity"
        return f"Exp({self.q})"

    # serialization ---------------------------------------------------------
    def to_json(self):
        if self.is_zero:
            return {"zero": True}
        if self.is_inf:
            return {"inf": True}
        return {"exp": fmt_rational(self.q)}

    @staticmethod
    def from_json(obj) -> "Radius":
        if isinstance(obj, str):
            if obj in ("zero", "Zero"):
                return ZERO
            if obj in ("inf", "Infinity"):
                return INF
            raise ValidationError(f"bad radius {obj!r}")
        if not isinstance(obj, dict):
            raise ValidationError(f"bad radius {obj!r}")
        if "exp" in obj:
            return Radius.exp(as_fraction(str(obj["exp"])))
        if "zero" in obj:
            return ZERO
        if "inf" in obj:
            return INF
        raise ValidationError(f"bad radius {obj!r}")


ZERO = Radius(_ZERO_KIND)
INF = Radius(_INF_KIND)
ONE = Radius(_EXP_KIND, Fraction(0))


def rmax(*rs: Radius) -> Radius:
    out = rs[0]
    for r in rs[1:]:
        if out < r:
            out = r
    return out


def rmin(*rs: Radius) -> Radius:
    out = rs[0]
    for r in rs[1:]:
        if r < out:
            out = r
    return out


def between(lo: Radius, hi: Radius) -> Radius:
    """A canonical radius strictly between ``lo < hi``."""
    if not lo < hi:
        raise DomainError(f"empty interval ({lo}, {hi})")
    if lo.is_zero:
        if hi.is_inf:
            return ONE
        return Radius.exp(hi.q - 1)
    if hi.is_inf:
        return Radius.exp(lo.q + 1)
    return Radius.exp((lo.q + hi.q) / 2)


def radius_arith(a: Radius, b: Optional[Radius], op: str, q: Optional[Rational] = None):
    """Dispatch ``cmp``/``mul``/``pow`` on radii (the CLI-facing form)."""
    if op == "cmp":
        return {-1: "less", 0: "equal", 1: "greater"}[a.cmp(b)]
    if op == "mul":
        return a * b
    if op == "pow":
        return a.pow_strict(q)
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class FieldConfig:
    """The base field Q with the p-adic absolute value."""

    p: int = 2

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise ValidationError(f"p={self.p} is not prime")

    def vp(self, x: Rational) -> Optional[int]:
        """p-adic valuation; ``None`` stands for +infinity (x = 0)."""
        x = as_fraction(x)
        if x == 0:
            return None
        v = 0
        n, d = x.numerator, x.denominator
        while n % self.p == 0:
            n //= self.p
            v += 1
        while d % self.p == 0:
            d //= self.p
            v -= 1
        return v

    def abs(self, x: Rational) -> Radius:
        v = self.vp(x)
        return ZERO if v is None else Radius.exp(-v)

    def unit_part(self, x: Rational) -> Fraction:
        x = as_fraction(x)
        v = self.vp(x)
        return x / Fraction(self.p) ** v

    def residue(self, x: Rational) -> int:
        """Reduction modulo p of an element of absolute value <= 1."""
        x = as_fraction(x)
        if self.vp(x) is not None and self.vp(x) < 0:
            raise DomainError(f"{x} is not integral at p={self.p}")
        return (x.numerator * pow(x.denominator, -1, self.p)) % self.p

    def power(self, n: int) -> Fraction:
        """The rational p^n (so that abs(power(n)) = Exp(-n))."""
        return Fraction(self.p) ** n


def scalar_abs(x: Rational, cfg: FieldConfig) -> Radius:
    return cfg.abs(x)


@dataclass(frozen=True)
class Monomial:
    """The function t -> rho * t^g on radii."""

    rho: Radius
    g: Fraction = Fraction(0)

    def __post_init__(self):
        if self.rho.is_inf:
            raise DomainError("monomial coefficient must be finite")
        object.__setattr__(self, "g", as_fraction(self.g))

    def __call__(self, t: Radius) -> Radius:
        if self.rho.is_zero:
            return ZERO
        if self.g == 0:
            return self.rho
        if t.is_exp:
            return Radius.exp(self.rho.q + self.g * t.q)
        if t.is_zero:
            if self.g > 0:
                return ZERO
            raise DomainError("negative power of Zero")
        return INF if self.g > 0 else ZERO

    def crossing(self, other: "Monomial") -> Optional[Radius]:
        if self.g == other.g or self.rho.is_zero or other.rho.is_zero:
            return None
        return Radius.exp((other.rho.q - self.rho.q) / (self.g - other.g))

    def to_json(self):
        return {"rho": self.rho.to_json(), "g": fmt_rational(self.g)}

    @staticmethod
    def from_json(obj) -> "Monomial":
        return Monomial(Radius.from_json(obj["rho"]), as_fraction(str(obj.get("g", "0"))))

    def __repr__(self) -> str:
        return f"{self.rho}*t^{self.g}"


def monomial_eval_cross(m1: Monomial, m2: Monomial, t: Optional[Radius] = None):
    value = m1(t) if t is not None else None
    return {"value": value, "crossing": m1.crossing(m2)}
