"""Boltzmann weights of the U-turn model.

Vertex conventions (colors are ints, see :mod:`uturn.colors`):

* Gamma vertex ``L_x(I, j, K, l)``: ``I`` bottom, ``j`` left (input),
  ``K`` top, ``l`` right (output).
* Delta vertex ``M_x(I, j, K, l)``: ``I`` bottom, ``j`` right (input),
  ``K`` top, ``l`` left (output).
* Caps take ``(bottom, top)``; on the model's caps bottom is the input.
* R vertices take ``(alpha, beta, gamma, delta)`` = bottom-left, top-left,
  top-right, bottom-right; strands run BL->TR and TL->BR.

Every weight is 0 when conservation ``I + e_j = K + e_l`` fails or the color
pattern is not listed. Admissibility is structural: a listed transition whose
value happens to vanish is still admissible.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .colors import add_color, all_colors, partial_sum, rank, vector_index
from .scalar import ParamPoint, PoleError

__all__ = [
    "phi",
    "gamma_weight",
    "delta_weight",
    "conserves",
    "vertex_outputs",
    "cap_weight",
    "cap_transitions",
    "CAP_VARIANTS",
    "r_weight",
    "r_admissible",
    "R_FAMILIES",
]

ONE = Fraction(1)
CAP_VARIANTS = ("standard", "recolored", "C1", "C2")
R_FAMILIES = ("GG", "DG", "DD")


def phi(z: Fraction, p: ParamPoint) -> Fraction:
    """``(1 - z^2) / ((1 - nu*t*z) (1 + z/nu))``."""
    if p.nu == 0:
        raise PoleError("nu", "phi")
    d1 = 1 - p.nu * p.t * z
    if d1 == 0:
        raise PoleError("1-nu*t*z", "phi")
    d2 = 1 + z / p.nu
    if d2 == 0:
        raise PoleError("1+z/nu", "phi")
    return (1 - z * z) / (d1 * d2)


def conserves(I, j: int, K, l: int, n: int) -> bool:
    return add_color(I, j, n) == add_color(K, l, n)


def _den(p: ParamPoint, x: Fraction, where: str) -> Fraction:
    d = 1 - p.s * x
    if d == 0:
        raise PoleError("1-s*x", where)
    return d


@lru_cache(maxsize=1 << 18)
def gamma_weight(I: tuple, j: int, K: tuple, l: int, x: Fraction, p: ParamPoint) -> Fraction:
    n = len(I) // 2
    if not conserves(I, j, K, l, n):
        return Fraction(0)
    q, s = p.q, p.s
    den = _den(p, x, "Gamma vertex")
    c = rank(j, n) - rank(l, n)
    if l == 0:
        pos = partial_sum(I, "interval", (1, n), n)
        neg = partial_sum(I, "interval", (-n, -1), n)
        if c == 0:
            return (q ** -pos - s * x * q ** neg) / den
        if c < 0:
            return (x * q ** -pos - s * s * x * q ** neg) / (s * den)
        return (q ** -pos - s * s * q ** neg) / den
    Il = I[vector_index(l, n)]
    if l > 0:
        f = q ** -partial_sum(I, "le", l, n)
        if c == 0:
            return (s * q ** Il - x) * f / (s * den)
        if c < 0:
            return -x * (1 - q ** Il) * f / (s * den)
        return -(1 - q ** Il) * f / den
    f = q ** partial_sum(I, "gt", l, n)
    if c == 0:
        return s * (s * q ** Il - x) * f / den
    if c < 0:
        return -s * x * (1 - q ** Il) * f / den
    return -s * s * (1 - q ** Il) * f / den


@lru_cache(maxsize=1 << 18)
def delta_weight(I: tuple, j: int, K: tuple, l: int, x: Fraction, p: ParamPoint) -> Fraction:
    n = len(I) // 2
    if not conserves(I, j, K, l, n):
        return Fraction(0)
    q, s = p.q, p.s
    den = _den(p, x, "Delta vertex")
    c = rank(j, n) - rank(l, n)
    if l == 0:
        pos = partial_sum(I, "interval", (1, n), n)
        neg = partial_sum(I, "interval", (-n, -1), n)
        if c == 0:
            return (q ** -neg - s * x * q ** pos) / den
        if c < 0:
            return (q ** -neg - s * s * q ** pos) / den
        return x * (q ** -neg / s - s * q ** pos) / den
    Il = I[vector_index(l, n)]
    if l > 0:
        f = q ** partial_sum(I, "lt", l, n)
        if c == 0:
            return s * (s * q ** Il - x) * f / den
        if c < 0:
            return -s * s * (1 - q ** Il) * f / den
        return -s * x * (1 - q ** Il) * f / den
    if c == 0:
        return (1 - x * q ** -Il / s) * q ** -partial_sum(I, "gt", l, n) / den
    f = q ** -partial_sum(I, "ge", l, n)
    if c < 0:
        return -(1 - q ** Il) * f / den
    return -x * (1 - q ** Il) * f / (s * den)


def vertex_outputs(kind: str, I: tuple, j: int, x: Fraction, p: ParamPoint) -> Iterator[tuple[int, tuple, Fraction]]:
    """Yield ``(l, K, weight)`` for every admissible output of a vertex.

    ``kind`` is ``"G"`` or ``"D"``. ``K = I + e_j - e_l`` must stay >= 0.
    """
    n = len(I) // 2
    w = gamma_weight if kind == "G" else delta_weight
    Ij = add_color(I, j, n)
    for l in all_colors(n):
        if l != 0 and Ij[vector_index(l, n)] == 0:
            continue
        K = add_color(Ij, l, n, -1)
        yield l, K, w(I, j, K, l, x, p)


def _cap_table(variant: str, x: Fraction, p: ParamPoint, color: int | None) -> dict:
    if variant == "standard":
        z = 1 / (p.r * x)
        f = phi(z, p)
        tf = p.t * f
        return {"+": {(0, 0): ONE}, "pos": (tf, 1 - tf), "neg": (f, 1 - f)}
    if color is None or color <= 0:
        raise ValueError(f"{variant} cap needs a positive color R")
    R = color
    if variant == "recolored":
        tf = p.t * phi(1 / (p.r * x), p)
        return {(R, 0): -ONE, (0, -R): tf, (0, R): 1 - tf}
    f = phi(x / p.r, p)
    if variant == "C1":
        tf = p.t * f
        return {(R, 0): -ONE, (0, -R): tf, (0, R): 1 - tf}
    if variant == "C2":
        return {(-R, 0): -ONE, (0, -R): 1 - f, (0, R): f}
    raise ValueError(f"unknown cap variant {variant!r}")


def cap_weight(variant: str, bottom: int, top: int, x: Fraction, p: ParamPoint, color: int | None = None) -> Fraction:
    """Weight of a cap vertex with spectral parameter ``x``.

    ``standard``: the model's U-turn; ``i -> ibar`` carries ``t*phi(1/(r x))``,
    ``ibar -> i`` carries ``phi(1/(r x))``.
    ``recolored``: the cap after swapping ``+`` and ``R`` on the lower row.
    ``C1``/``C2``: auxiliary caps built on ``phi(x/r)``. The last three are
    defined relative to one positive color ``R`` (pass ``color``).
    """
    if variant == "standard":
        if bottom == 0 or top == 0:
            return ONE if bottom == top == 0 else Fraction(0)
        if abs(bottom) != abs(top):
            return Fraction(0)
        tab = _cap_table(variant, x, p, None)
        flip, keep = tab["pos"] if bottom > 0 else tab["neg"]
        return keep if bottom == top else flip
    return _cap_table(variant, x, p, color).get((bottom, top), Fraction(0))


def cap_transitions(n: int) -> list[tuple[int, int]]:
    """Listed ``(bottom, top)`` pairs of the standard cap."""
    out = [(0, 0)]
    for i in range(1, n + 1):
        out += [(i, -i), (i, i), (-i, i), (-i, -i)]
    return out


def _r_den(family: str, x: Fraction, y: Fraction, q: Fraction) -> Fraction:
    if family == "GG":
        d, name = x - q * y, "x-q*y"
    elif family == "DG":
        d, name = x * y - 1, "x*y-1"
    elif family == "DD":
        d, name = y - q * x, "y-q*x"
    else:
        raise ValueError(f"unknown R family {family!r}")
    if d == 0:
        raise PoleError(name, f"R_{family}")
    return d


def _r_patterns(family: str, i: int, j: int) -> tuple:
    if family == "DG":
        return (i, j, i, j), (j, i, j, i), (j, j, i, i), (i, i, j, j)
    return (i, j, i, j), (j, i, j, i), (j, i, i, j), (i, j, j, i)


def r_admissible(family: str, a: int, b: int, c: int, d: int, n: int) -> bool:
    if a == b == c == d:
        return True
    cols = {a, b, c, d}
    if len(cols) != 2:
        return False
    i, j = sorted(cols, key=lambda v: rank(v, n))
    return (a, b, c, d) in _r_patterns(family, i, j)


def r_weight(family: str, a: int, b: int, c: int, d: int, x: Fraction, y: Fraction, p: ParamPoint) -> Fraction:
    """``R_XY(alpha, beta, gamma, delta; x, y)`` for ``family`` in GG, DG, DD."""
    if a == b == c == d:
        return ONE
    n = max(abs(v) for v in (a, b, c, d))
    if not r_admissible(family, a, b, c, d, n):
        return Fraction(0)
    q = p.q
    i, j = sorted({a, b, c, d}, key=lambda v: rank(v, n))
    # position of the pattern in _r_patterns: 0 and 1 are the straight-through entries
    k = _r_patterns(family, i, j).index((a, b, c, d))
    den = _r_den(family, x, y, q)
    if family == "GG":
        if k == 0:
            return (x - y) / den
        if k == 1:
            return q * (x - y) / den
        if k == 2:
            return (1 - q) * x / den
        return (1 - q) * y / den
    if family == "DG":
        xy = x * y
        if k == 0:
            return (q * xy - 1) / den
        if k == 1:
            return (q * xy - 1) / (q * den)
        if k == 2:
            return (1 - q) / (q * den)
        return (1 - q) * xy / den
    if k == 0:
        return (y - x) / den
    if k == 1:
        return q * (y - x) / den
    if k == 2:
        return (1 - q) * x / den
    return (1 - q) * y / den
