"""Exact rationals and the parameter point every weight is evaluated at.

Rationals are :class:`fractions.Fraction` values, which are already kept in
lowest terms with a positive denominator. The helpers here add the error
reporting the rest of the package relies on (poles, overflow) and the literal
syntax used by the CLI and JSON reports.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Rational",
    "PoleError",
    "ParamPoint",
    "as_rational",
    "parse_rational",
    "rat_arith",
    "rat_pow",
    "float_embed",
    "rational_to_json",
    "rational_from_json",
    "random_rational",
    "random_param_point",
    "product",
]

Rational = Fraction


class PoleError(ZeroDivisionError):
    """A weight or identity was evaluated where one of its denominators vanishes.

    ``factor`` names the vanishing expression, e.g. ``"1-s*x"``.
    """

    def __init__(self, factor: str, where: str = ""):
        self.factor = factor
        self.where = where
        msg = f"pole: {factor} = 0"
        if where:
            msg += f" in {where}"
        super().__init__(msg)


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction, int or 'p/q' string")
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` with decimal integers."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational literal: {text!r}") from None
    if q == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def rat_arith(a: Fraction, b: Fraction, op: str) -> Fraction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def rat_pow(a: Fraction, k: int) -> Fraction:
    if k < 0 and a == 0:
        raise ZeroDivisionError("0 raised to a negative power")
    return Fraction(a) ** k


def float_embed(a: Fraction) -> float:
    """Nearest double to ``a`` (round-half-even, via ``Fraction.__float__``).

    Raises :class:`OverflowError` when ``|a|`` exceeds the double range.
    """
    return float(Fraction(a))


def rational_to_json(a: Fraction) -> dict:
    return {"num": str(a.numerator), "den": str(a.denominator)}


def rational_from_json(obj: dict) -> Fraction:
    den = int(obj.get("den", "1"))
    if den <= 0:
        raise ValueError("denominator must be positive")
    return Fraction(int(obj["num"]), den)


@dataclass(frozen=True)
class ParamPoint:
    """A point ``(r, s, nu, t, x_1..x_n)`` with ``q = r**2``.

    ``r`` stands in for ``q**(1/2)`` so every weight is a rational function of
    the stored values.
    """

    r: Fraction
    s: Fraction
    nu: Fraction
    t: Fraction
    x: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", as_rational(self.r))
        object.__setattr__(self, "s", as_rational(self.s))
        object.__setattr__(self, "nu", as_rational(self.nu))
        object.__setattr__(self, "t", as_rational(self.t))
        object.__setattr__(self, "x", tuple(as_rational(v) for v in self.x))
        if self.r == 0:
            raise ValueError("r must be nonzero")
        if self.s == 0:
            raise ValueError("s must be nonzero")

    @property
    def q(self) -> Fraction:
        return self.r * self.r

    @property
    def n(self) -> int:
        return len(self.x)

    # Hecke parameters a = nu*t/r and b = -1/(nu*r)
    @property
    def a(self) -> Fraction:
        return self.nu * self.t / self.r

    @property
    def b(self) -> Fraction:
        if self.nu == 0:
            raise PoleError("nu", "b = -1/(nu*r)")
        return -1 / (self.nu * self.r)

    def with_x(self, x: Sequence) -> "ParamPoint":
        return ParamPoint(self.r, self.s, self.nu, self.t, tuple(x))

    def to_json(self) -> dict:
        return {
            "r": rational_to_json(self.r),
            "s": rational_to_json(self.s),
            "nu": rational_to_json(self.nu),
            "t": rational_to_json(self.t),
            "x": [rational_to_json(v) for v in self.x],
        }


def random_rational(rng: random.Random, bound: int = 50, nonzero: bool = True) -> Fraction:
    while True:
        v = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if v != 0 or not nonzero:
            return v


def _generic(p: ParamPoint) -> bool:
    """Reject points where a weight used anywhere in the package has a pole."""
    q, s, nu, t, r = p.q, p.s, p.nu, p.t, p.r
    if nu == 0 or t == 0 or q == 1 or s * s == 1:
        return False
    xs = list(p.x)
    for x in xs:
        if x == 0 or x * x == 1 or x * x == q or q * x * x == 1:
            return False
        if s * x == 1 or s == x:
            return False
        # cap weights at 1/(r*x) and x/r
        for z in (1 / (r * x), x / r):
            if nu * t * z == 1 or nu + z == 0:
                return False
    for i, xi in enumerate(xs):
        for xj in xs[i + 1:]:
            if xi == xj or xi == q * xj or xj == q * xi or xi * xj == 1:
                return False
            if xi * xj * q == 1 or xi == -xj:
                return False
    return True


def random_param_point(rng: random.Random, n: int, bound: int = 50) -> ParamPoint:
    """Draw a generic point with small numerators/denominators.

    Redraws until no denominator appearing in the weights, the recursions or
    the auxiliary caps vanishes.
    """
    while True:
        p = ParamPoint(
            r=random_rational(rng, bound),
            s=random_rational(rng, bound),
            nu=random_rational(rng, bound),
            t=random_rational(rng, bound),
            x=tuple(random_rational(rng, bound) for _ in range(n)),
        )
        if _generic(p):
            return p


def product(values: Iterable[Fraction]) -> Fraction:
    return math.prod(values, start=Fraction(1))
