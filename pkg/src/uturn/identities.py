"""Executable forms of the model's identities.

Every check returns an :class:`IdentityReport`. Rational identities are
compared exactly; only the F-transform / Hecke relation, which carries a
square root, is compared in floating point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable

from .colors import (
    SignedPermutation,
    add_color,
    all_colors,
    color_compare,
    compose,
    identity,
    length,
    simple_reflection,
)
from .lattice import ModelSpec, enumerate_states, partition_function
from .scalar import ParamPoint, PoleError, float_embed, product, rational_to_json
from .weights import (
    cap_transitions,
    cap_weight,
    delta_weight,
    gamma_weight,
    phi,
    r_weight,
    vertex_outputs,
)

__all__ = [
    "IdentityReport",
    "HypothesisError",
    "NegativeRadicandError",
    "HECKE_RTOL",
    "check_vertex_stochastic",
    "check_cap_stochastic",
    "check_ybe",
    "ybe_top_vector",
    "check_reflection",
    "thm31_closed_form",
    "thm31_applies",
    "check_thm31",
    "check_thm32",
    "check_thm33",
    "check_eq312",
    "F_transform",
    "hecke_apply",
    "check_hecke",
    "thm32_applies",
    "thm33_applies",
    "radicands_positive",
    "random_real_point",
]

HECKE_RTOL = 1e-9


class HypothesisError(ValueError):
    """The instance does not satisfy the hypotheses of the identity."""


class NegativeRadicandError(ValueError):
    pass


def _jsonable(v):
    if isinstance(v, Fraction):
        return rational_to_json(v)
    if isinstance(v, ParamPoint):
        return v.to_json()
    if isinstance(v, SignedPermutation):
        return list(v.images)
    if isinstance(v, (list, tuple)):
        return [_jsonable(u) for u in v]
    if isinstance(v, dict):
        return {k: _jsonable(u) for k, u in v.items()}
    return v


@dataclass
class IdentityReport:
    name: str
    instance: dict
    left: Fraction | float
    right: Fraction | float
    verdict: str
    residual: Fraction | float
    seed: int | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict in ("exact-equal", "within-tolerance")

    def to_json(self) -> dict:
        d = {
            "identity": self.name,
            "instance": _jsonable(self.instance),
            "left": _jsonable(self.left),
            "right": _jsonable(self.right),
            "verdict": self.verdict,
            "residual": _jsonable(self.residual),
            "seed": self.seed,
        }
        if self.notes:
            d["notes"] = _jsonable(self.notes)
        return d


def _exact(name: str, instance: dict, left: Fraction, right: Fraction, seed=None, **notes) -> IdentityReport:
    verdict = "exact-equal" if left == right else "FAIL"
    return IdentityReport(name, instance, left, right, verdict, left - right, seed, notes)


# -- stochasticity -----------------------------------------------------------

def check_vertex_stochastic(kind: str, I: tuple, j: int, x: Fraction, params: ParamPoint, seed=None) -> IdentityReport:
    total = sum((w for _l, _K, w in vertex_outputs(kind, I, j, x, params)), Fraction(0))
    name = "stochastic-gamma" if kind == "G" else "stochastic-delta"
    return _exact(name, {"I": list(I), "j": j, "x": x, "params": params}, total, Fraction(1), seed)


def check_cap_stochastic(bottom: int, x: Fraction, params: ParamPoint, seed=None) -> IdentityReport:
    n = params.n
    total = sum((cap_weight("standard", b, t, x, params) for b, t in cap_transitions(n) if b == bottom), Fraction(0))
    return _exact("stochastic-cap", {"bottom": bottom, "x": x, "params": params}, total, Fraction(1), seed)


# -- Yang-Baxter ---------------------------------------------------------------

_FAMILY_ROWS = {"GG": ("G", "G"), "DG": ("D", "G"), "DD": ("D", "D")}


def _vertex(kind, I, left, K, right, x, params):
    """Weight of a row vertex given its four edges by position."""
    if kind == "G":
        return gamma_weight(I, left, K, right, x, params)
    return delta_weight(I, right, K, left, x, params)


def _through(kind, I, left, right, n):
    """Top vector forced by conservation, or None if negative."""
    if kind == "G":
        K = add_color(add_color(I, left, n), right, n, -1)
    else:
        K = add_color(add_color(I, right, n), left, n, -1)
    return K if min(K, default=0) >= 0 else None


# (inflow, outflow) among the four boundary colors (a, b, d, e), per family
_YBE_FLOW = {"GG": ((0, 1), (2, 3)), "DG": ((0, 3), (1, 2)), "DD": ((2, 3), (0, 1))}


def ybe_top_vector(family: str, a: int, b: int, d: int, e: int, f: tuple, n: int) -> tuple | None:
    """Top vector balancing the boundary colors and bottom vector ``f``.

    Any other top vector makes both sides of the relation empty sums. Returns
    None when the balance would need a negative entry.
    """
    inflow, outflow = _YBE_FLOW[family]
    colors = (a, b, d, e)
    c = tuple(f)
    for k in inflow:
        c = add_color(c, colors[k], n)
    for k in outflow:
        c = add_color(c, colors[k], n, -1)
    return c if min(c, default=0) >= 0 else None


def check_ybe(family: str, x: Fraction, y: Fraction, boundary: tuple, params: ParamPoint,
              vector_cap: int = 2, n: int | None = None, seed=None) -> IdentityReport:
    """Both sides of the Yang-Baxter relation for one boundary.

    ``boundary = (a, b, c, d, e, f)``: ``a, b`` the left colors (bottom, top),
    ``c`` the top vector, ``d, e`` the right colors (top, bottom), ``f`` the
    bottom vector. Left diagram: R on the left, then the X vertex at ``x``
    (lower) and Y vertex at ``y`` (upper). Right diagram: Y vertex at ``y``
    (lower) and X at ``x`` (upper), then R on the right.

    The internal vector is fixed by conservation at the lower vertex; a
    forced vector with an entry above ``vector_cap`` that would carry weight
    raises, so the cap never silently drops terms. ``n`` (number of colors)
    defaults to the number of spectral values in ``params``.
    """
    X, Y = _FAMILY_ROWS[family]
    a, b, c, d, e, f = boundary
    n = n or params.n
    cols = all_colors(n)

    def capped(h, term_nonzero):
        if max(h, default=0) <= vector_cap:
            return True
        if term_nonzero:
            raise ValueError(f"vector_cap={vector_cap} drops a nonzero term (internal vector {h})")
        return False

    left = Fraction(0)
    for g in cols:
        for i in cols:
            R = r_weight(family, a, b, g, i, x, y, params)
            if R == 0:
                continue
            h = _through(X, f, i, e, n)
            if h is None:
                continue
            term = R * _vertex(X, f, i, h, e, x, params) * _vertex(Y, h, g, c, d, y, params)
            if capped(h, term != 0):
                left += term
    right = Fraction(0)
    for j in cols:
        for l in cols:
            R = r_weight(family, l, j, d, e, x, y, params)
            if R == 0:
                continue
            k = _through(Y, f, a, l, n)
            if k is None:
                continue
            term = R * _vertex(Y, f, a, k, l, y, params) * _vertex(X, k, b, c, j, x, params)
            if capped(k, term != 0):
                right += term
    inst = {"family": family, "x": x, "y": y, "a": a, "b": b, "c": list(c), "d": d, "e": e, "f": list(f),
            "params": params}
    return _exact("ybe", inst, left, right, seed)


# -- reflection ----------------------------------------------------------------

def check_reflection(x: Fraction, y: Fraction, eps: tuple, params: ParamPoint, n: int | None = None,
                     seed=None) -> IdentityReport:
    """Both sides of the reflection relation for external colors ``eps``.

    ``eps = (e1, e2, e3, e4)`` listed top to bottom on the left. Left side:
    DD(x, y) and DG(x, y) crossings feeding caps at ``x`` (lower pair) and
    ``y`` (upper pair); right side: GG(y, x) and DG(y, x) feeding caps at
    ``y`` (lower) and ``x`` (upper).
    """
    e1, e2, e3, e4 = eps
    cols = all_colors(n or params.n)

    def cap(b, t, z):
        return cap_weight("standard", b, t, z, params)

    left = Fraction(0)
    for u in cols:
        for z in cols:
            S = r_weight("DD", e2, e1, z, u, x, y, params)
            if S == 0:
                continue
            for v in cols:
                for w in cols:
                    T = r_weight("DG", e3, u, v, w, x, y, params)
                    if T:
                        left += S * T * cap(e4, w, x) * cap(v, z, y)
    right = Fraction(0)
    for pp in cols:
        for bb in cols:
            S = r_weight("GG", e4, e3, pp, bb, y, x, params)
            if S == 0:
                continue
            for cc in cols:
                for dd in cols:
                    T = r_weight("DG", pp, e2, cc, dd, y, x, params)
                    if T:
                        right += S * T * cap(cc, e1, x) * cap(bb, dd, y)
    inst = {"x": x, "y": y, "eps": list(eps), "params": params}
    return _exact("reflection", inst, left, right, seed)


# -- closed form -----------------------------------------------------------------

def thm31_applies(spec: ModelSpec) -> bool:
    mu = spec.mu
    if spec.sigma != identity(spec.n) or mu is None:
        return False
    if any(m >= 0 for m in mu):
        return False
    return all(abs(mu[i]) >= abs(mu[i + 1]) for i in range(spec.n - 1))


def _pochhammer(alpha: Fraction, qinv: Fraction, m: int) -> Fraction:
    """``(alpha; qinv)_m = prod_{k<m} (1 - qinv**k * alpha)``."""
    return product(1 - qinv ** k * alpha for k in range(m))


def thm31_closed_form(spec: ModelSpec) -> Fraction:
    """Product formula for ``f`` when sigma = Id and mu is negative and weakly decreasing in size."""
    if not thm31_applies(spec):
        raise HypothesisError("closed form needs sigma = Id, all mu_i < 0, |mu_1| >= ... >= |mu_n|")
    p, L, n = spec.params, spec.L, spec.n
    s, q, t = p.s, p.q, p.t
    out = t ** n
    for xi, mi in zip(p.x, spec.mu):
        den = 1 - s * xi
        if den == 0:
            raise PoleError("1-s*x", "closed form")
        out *= phi(1 / (p.r * xi), p)
        out *= ((s - xi) / (s * den)) ** (L - mi - 1)
        out *= -s * xi / den
    for j in range(1, L + 1):
        m = sum(1 for mi in spec.mu if mi == -j)
        out *= _pochhammer(1 / (s * s), 1 / q, m)
    return out


def check_thm31(spec: ModelSpec, seed=None) -> IdentityReport:
    states = list(enumerate_states(spec))
    from .lattice import state_weight

    f = sum((state_weight(st, spec) for st in states), Fraction(0))
    rep = _exact("thm31", {"spec": spec.to_json()}, f, thm31_closed_form(spec), seed, state_count=len(states))
    if len(states) != 1:
        rep.verdict = "FAIL"
    return rep


# -- recursions ------------------------------------------------------------------

def thm32_applies(sigma: SignedPermutation, i: int) -> bool:
    return 1 <= i < sigma.n and color_compare(sigma(i + 1), sigma(i), sigma.n) > 0


def _swap(x: tuple, i: int) -> tuple:
    x = list(x)
    x[i - 1], x[i] = x[i], x[i - 1]
    return tuple(x)


def check_thm32(spec: ModelSpec, i: int, mode: str = "memo", seed=None) -> IdentityReport:
    """Exchange relation between ``f^sigma`` and ``f^{sigma s_i}``."""
    n, sigma, p = spec.n, spec.sigma, spec.params
    if not thm32_applies(sigma, i):
        raise HypothesisError(f"need 1 <= i < n and sigma(i+1) > sigma(i) in color order (i={i}, sigma={sigma})")
    xi, xi1 = p.x[i - 1], p.x[i]
    if xi1 == xi:
        raise PoleError("x_{i+1}-x_i", "exchange relation")
    q = p.q
    si = simple_reflection(i, n)
    f_swapped_sigma = partition_function(spec.replace(sigma=compose(sigma, si)), mode)
    f = partition_function(spec, mode)
    f_swapped_x = partition_function(spec.replace(params=p.with_x(_swap(p.x, i))), mode)
    pos = lambda c: 1 if c > 0 else 0  # noqa: E731
    left = q ** (1 + pos(sigma(i + 1))) * f_swapped_sigma
    right = q ** pos(sigma(i)) * ((q - 1) * xi1 * f + (xi1 - q * xi) * f_swapped_x) / (xi1 - xi)
    return _exact("thm32", {"spec": spec.to_json(), "i": i}, left, right, seed)


def thm33_applies(sigma: SignedPermutation) -> bool:
    return sigma(sigma.n) > 0


def _thm33_poles(p: ParamPoint):
    xn, s, r = p.x[-1], p.s, p.r
    for val, name in ((xn, "x_n"), (1 - xn * xn, "1-x_n^2"), (s - xn, "s-x_n"), (1 - s * xn, "1-s*x_n"),
                      (xn * xn - p.q, "x_n^2-q"), (1 - p.q * xn * xn, "1-q*x_n^2"), (p.t, "t"), (p.nu, "nu")):
        if val == 0:
            raise PoleError(name, "reflection relation")


def check_thm33(spec: ModelSpec, mode: str = "memo", seed=None) -> IdentityReport:
    """Reflection relation between ``f^sigma`` and ``f^{sigma s_n}``."""
    n, sigma, p, L = spec.n, spec.sigma, spec.params, spec.L
    if not thm33_applies(sigma):
        raise HypothesisError(f"need sigma(n) positive (sigma={sigma})")
    _thm33_poles(p)
    q, s, r, t, nu = p.q, p.s, p.r, p.t, p.nu
    xn = p.x[-1]
    inv_x = p.x[:-1] + (1 / xn,)
    f_flip_sigma = partition_function(spec.replace(sigma=compose(sigma, simple_reflection(n, n))), mode)
    f = partition_function(spec, mode)
    f_flip_x = partition_function(spec.replace(params=p.with_x(inv_x)), mode)
    ratio = (1 - s * xn) / (s - xn)
    left = q * s ** (-2 * L) * ratio ** L * f_flip_sigma
    pref = (r - nu * t * xn) * (r + xn / nu) / (t * (1 - xn * xn))
    right = pref * ((1 - q * xn * xn) / (xn * xn - q) * ratio ** -L * f_flip_x - ratio ** L * f) + ratio ** L * f
    return _exact("thm33", {"spec": spec.to_json()}, left, right, seed)


def check_eq312(eps1: int, eps2: int, params: ParamPoint, xn: Fraction, color: int, seed=None) -> IdentityReport:
    """Cap decomposition used in the reflection-relation proof.

    ``W``: a DD crossing at ``(1/xn, xn)`` whose right strands close on the
    recolored cap at ``xn``. ``W1``, ``W2``: the bare C1 and C2 caps. ``eps1``
    is the lower strand, ``eps2`` the upper; ``color`` is the positive color
    R the recolored and auxiliary caps are built on.
    """
    q, t = params.q, params.t
    if xn * xn == q:
        raise PoleError("x_n^2-q", "cap decomposition")
    cols = all_colors(params.n)
    W = Fraction(0)
    for u in cols:
        for v in cols:
            R = r_weight("DD", eps1, eps2, u, v, 1 / xn, xn, params)
            if R:
                W += R * cap_weight("recolored", v, u, xn, params, color)
    tphi = t * phi(1 / (params.r * xn), params)
    A = (1 - q) * xn * xn / (xn * xn - q) - (xn * xn - 1) / (xn * xn - q) * (1 - tphi)
    B = -q * (xn * xn - 1) * tphi / (xn * xn - q)
    W1 = cap_weight("C1", eps1, eps2, xn, params, color)
    W2 = cap_weight("C2", eps1, eps2, xn, params, color)
    inst = {"eps1": eps1, "eps2": eps2, "x_n": xn, "R": color, "params": params}
    return _exact("eq312", inst, W, A * W1 + B * W2, seed)


# -- F transform and Hecke operators -------------------------------------------

def F_transform(spec: ModelSpec, f: Fraction | None = None, mode: str = "memo") -> float:
    """Normalized partition function ``F_mu^sigma`` in double precision.

    All factors except the square roots are formed exactly; each radicand
    ``(x_j^2 - q)/(1 - q x_j^2)`` must be positive (principal root).
    """
    n, L, sigma, p = spec.n, spec.L, spec.sigma, spec.params
    q, s, t = p.q, p.s, p.t
    if f is None:
        f = partition_function(spec, mode)
    neg = sigma.negatives()
    expo = length(sigma) + sum(n - j for j in range(1, n + 1) if sigma(j) > 0)
    exact = q ** expo * s ** (-2 * L * neg) * (t / q) ** neg * f
    root = 1.0
    for xj in p.x:
        if s == xj:
            raise PoleError("s-x_j", "F transform")
        exact *= ((1 - s * xj) / (s - xj)) ** L
        den = 1 - q * xj * xj
        if den == 0:
            raise PoleError("1-q*x_j^2", "F transform")
        rad = (xj * xj - q) / den
        if rad < 0:
            raise NegativeRadicandError(f"radicand {rad} < 0 at x_j = {xj}")
        root *= math.sqrt(float_embed(rad))
    return float_embed(exact) * root


def hecke_apply(i: int, g: Callable[[ParamPoint], float], point: ParamPoint) -> float:
    """Apply ``T_i`` (``i < n``) or ``T_n`` to a function of the spectral point."""
    n = point.n
    x = point.x
    g0 = g(point)
    if 1 <= i < n:
        if x[i] == x[i - 1]:
            raise PoleError("x_{i+1}-x_i", "T_i")
        c = (x[i] - point.q * x[i - 1]) / (x[i] - x[i - 1])
        g1 = g(point.with_x(_swap(x, i)))
        return float_embed(point.q) * g0 + float_embed(c) * (g1 - g0)
    if i == n:
        xn = x[-1]
        if xn * xn == 1:
            raise PoleError("1-x_n^2", "T_n")
        a, b = point.a, point.b
        c = (1 - a * xn) * (1 - b * xn) / (1 - xn * xn)
        g1 = g(point.with_x(x[:-1] + (1 / xn,)))
        return float_embed(-a * b) * g0 + float_embed(c) * (g1 - g0)
    raise ValueError(f"operator index {i} outside 1..{n}")


def check_hecke(spec: ModelSpec, i: int, rtol: float = HECKE_RTOL, seed=None) -> IdentityReport:
    """``T_i F^sigma == F^{sigma s_i}`` at one real point, relative tolerance ``rtol``."""
    n, sigma = spec.n, spec.sigma
    if i < n and not thm32_applies(sigma, i):
        raise HypothesisError(f"T_{i}: need sigma(i+1) > sigma(i)")
    if i == n and not thm33_applies(sigma):
        raise HypothesisError("T_n: need sigma(n) positive")
    left = hecke_apply(i, lambda pt: F_transform(spec.replace(params=pt)), spec.params)
    right = F_transform(spec.replace(sigma=compose(sigma, simple_reflection(i, n))))
    resid = abs(left - right) / abs(right) if right else abs(left)
    verdict = "within-tolerance" if resid <= rtol else "FAIL"
    return IdentityReport("hecke", {"spec": spec.to_json(), "i": i}, left, right, verdict, resid, seed,
                          {"rtol": rtol})


def radicands_positive(p: ParamPoint) -> bool:
    q = p.q
    return all(1 - q * x * x != 0 and (x * x - q) / (1 - q * x * x) > 0 for x in p.x)


def random_real_point(rng: random.Random, n: int, bound: int = 50) -> ParamPoint:
    """A generic rational point whose F-transform radicands are all positive.

    Draws ``0 < r < 1`` and each ``x_j`` with ``r < |x_j| < 1/r``, so the
    radicands stay positive also after ``x_n -> 1/x_n``.
    """
    from .scalar import _generic, random_rational

    while True:
        r = Fraction(rng.randint(1, bound - 1), bound)
        xs = []
        for _ in range(n):
            lo, hi = float(r), float(1 / r)
            v = Fraction(rng.uniform(lo, hi)).limit_denominator(bound)
            xs.append(v)
        p = ParamPoint(r, random_rational(rng, bound), random_rational(rng, bound), random_rational(rng, bound), tuple(xs))
        if _generic(p) and radicands_positive(p):
            return p
