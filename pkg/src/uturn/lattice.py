"""The 2n x L lattice with U-turn caps: states, partition functions, sampling.

Rows are numbered 1..2n top to bottom and columns 1..L right to left. Row
``2p`` is a Gamma row entered from the left by ``sigma(p)``; row ``2p-1`` is a
Delta row leaving to the left, and the two are joined on the right by a cap
with spectral parameter ``x_p``.

Vertices are visited bottom pair first: the Gamma row from column L to 1, then
the cap, then the Delta row from column 1 to L. Every vertex has both inputs
fixed when it is reached, so enumeration is a tree walk and forward sampling
is well defined.
"""

from __future__ import annotations

import os
import random
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterator

from .colors import (
    SignedPermutation,
    add_color,
    all_colors,
    vector_index,
    zero_vector,
)
from .scalar import ParamPoint, product
from .weights import cap_transitions, cap_weight, delta_weight, gamma_weight, vertex_outputs

__all__ = [
    "ModelSpec",
    "LatticeState",
    "EnumerationLimitError",
    "NonStochasticError",
    "SampleResult",
    "enumerate_states",
    "state_weight",
    "partition_function",
    "total_mass",
    "sample_state",
    "all_mu",
    "mu_from_profile",
    "max_visited",
    "validate_regime",
]

DEFAULT_MAX_N = 3
DEFAULT_MAX_L = 5


class EnumerationLimitError(RuntimeError):
    pass


class NonStochasticError(ValueError):
    """A branch distribution met by the sampler is not a probability vector."""

    def __init__(self, message: str, location: tuple):
        self.location = location
        super().__init__(f"{message} at {location}")


def max_visited() -> int:
    return int(os.environ.get("UTURN_MAX_STATES", 10**7))


@dataclass(frozen=True)
class ModelSpec:
    n: int
    L: int
    sigma: SignedPermutation
    mu: tuple[int, ...] | None
    params: ParamPoint

    def __post_init__(self):
        if self.n < 1 or self.L < 1:
            raise ValueError("n and L must be positive")
        if self.sigma.n != self.n:
            raise ValueError(f"sigma has size {self.sigma.n}, expected {self.n}")
        if self.params.n != self.n:
            raise ValueError(f"{self.params.n} spectral parameters given, expected {self.n}")
        if self.mu is not None:
            object.__setattr__(self, "mu", tuple(int(m) for m in self.mu))
            if len(self.mu) != self.n:
                raise ValueError(f"mu has length {len(self.mu)}, expected {self.n}")
            for m in self.mu:
                if m == 0 or abs(m) > self.L:
                    raise ValueError(f"mu entry {m} outside ±1..±{self.L}")

    def top_boundary(self) -> tuple[tuple[int, ...], ...]:
        if self.mu is None:
            raise ValueError("spec has no mu")
        cols = [zero_vector(self.n)] * self.L
        for i, m in enumerate(self.mu, start=1):
            c = abs(m) - 1
            cols[c] = add_color(cols[c], i if m > 0 else -i, self.n)
        return tuple(cols)

    def replace(self, **kw) -> "ModelSpec":
        d = dict(n=self.n, L=self.L, sigma=self.sigma, mu=self.mu, params=self.params)
        d.update(kw)
        return ModelSpec(**d)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "L": self.L,
            "sigma": list(self.sigma.images),
            "mu": list(self.mu) if self.mu is not None else None,
            "params": self.params.to_json(),
        }


@dataclass(frozen=True)
class LatticeState:
    """One full edge labeling.

    ``horizontal[row-1][k]``: color on the edge ``k`` steps in from the right
    boundary of that row (``k = 0`` is the cap strand, ``k = L`` the left
    boundary). ``vertical[level][col-1]``: vector between rows ``level`` and
    ``level+1`` (level 0 is the top boundary, level 2n the bottom).
    """

    horizontal: tuple[tuple[int, ...], ...]
    vertical: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def n(self) -> int:
        return len(self.horizontal) // 2

    @property
    def L(self) -> int:
        return len(self.vertical[0])

    def vertices(self):
        """Yield ``(kind, row, col, I, j, K, l)`` and ``("C", p, bottom, top)``."""
        n, L = self.n, self.L
        h, v = self.horizontal, self.vertical
        for p in range(n, 0, -1):
            g, d = 2 * p, 2 * p - 1
            for col in range(L, 0, -1):
                yield ("G", g, col, v[g][col - 1], h[g - 1][col], v[g - 1][col - 1], h[g - 1][col - 1])
            yield ("C", p, h[g - 1][0], h[d - 1][0])
            for col in range(1, L + 1):
                yield ("D", d, col, v[d][col - 1], h[d - 1][col - 1], v[d - 1][col - 1], h[d - 1][col])

    def left_exits(self) -> tuple[int, ...]:
        return tuple(self.horizontal[2 * p - 2][self.L] for p in range(1, self.n + 1))

    def top(self) -> tuple[tuple[int, ...], ...]:
        return self.vertical[0]


def _steps(n: int, L: int) -> list[tuple[str, int, int]]:
    steps = []
    for p in range(n, 0, -1):
        steps += [("G", p, col) for col in range(L, 0, -1)]
        steps.append(("C", p, 0))
        steps += [("D", p, col) for col in range(1, L + 1)]
    return steps


def _check_bounds(n: int, L: int, max_n: int, max_L: int):
    if n > max_n or L > max_L:
        raise EnumerationLimitError(f"n={n}, L={L} exceeds bounds n<={max_n}, L<={max_L}")


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise EnumerationLimitError(f"more than {self.limit} search nodes visited (UTURN_MAX_STATES)")


def _branches(kind: str, p: int, col: int, carried: int, profile, params: ParamPoint, n: int):
    """Admissible moves at one step: ``(out_color, new_profile, weight, record)``."""
    x = params.x[p - 1]
    if kind == "C":
        for b, t in cap_transitions(n):
            if b == carried:
                yield t, profile, cap_weight("standard", b, t, x, params), ("C", p, b, t)
        return
    I = profile[col - 1]
    for l, K, w in vertex_outputs(kind, I, carried, x, params):
        new = profile[: col - 1] + (K,) + profile[col:]
        yield l, new, w, (kind, p, col, I, carried, K, l)


def _build_state(n: int, L: int, sigma: SignedPermutation, records) -> LatticeState:
    h = [[0] * (L + 1) for _ in range(2 * n)]
    v = [[zero_vector(n)] * L for _ in range(2 * n + 1)]
    for p in range(1, n + 1):
        h[2 * p - 1][L] = sigma(p)
    for rec in records:
        if rec[0] == "C":
            _, p, b, t = rec
            h[2 * p - 1][0] = b
            h[2 * p - 2][0] = t
            continue
        kind, p, col, I, j, K, l = rec
        if kind == "G":
            row = 2 * p
            h[row - 1][col] = j
            h[row - 1][col - 1] = l
        else:
            row = 2 * p - 1
            h[row - 1][col - 1] = j
            h[row - 1][col] = l
        v[row][col - 1] = I
        v[row - 1][col - 1] = K
    return LatticeState(tuple(tuple(r) for r in h), tuple(tuple(r) for r in v))


def enumerate_states(spec: ModelSpec, max_n: int = DEFAULT_MAX_N, max_L: int = DEFAULT_MAX_L) -> Iterator[LatticeState]:
    """Depth-first generation of every admissible state, each exactly once."""
    n, L, sigma, params = spec.n, spec.L, spec.sigma, spec.params
    _check_bounds(n, L, max_n, max_L)
    top = spec.top_boundary()
    steps = _steps(n, L)
    budget = _Budget(max_visited())
    records: list = []

    def walk(k: int, carried: int, profile) -> Iterator[LatticeState]:
        budget.tick()
        if k == len(steps):
            if profile == top:
                yield _build_state(n, L, sigma, records)
            return
        kind, p, col = steps[k]
        for out, new, _w, rec in _branches(kind, p, col, carried, profile, params, n):
            nxt = out
            if kind == "D" and col == L:
                if out != 0:
                    continue
                nxt = sigma(p - 1) if p > 1 else 0
            records.append(rec)
            yield from walk(k + 1, nxt, new)
            records.pop()

    yield from walk(0, sigma(n), (zero_vector(n),) * L)


def state_weight(state: LatticeState, spec: ModelSpec) -> Fraction:
    params = spec.params
    factors = []
    for vert in state.vertices():
        if vert[0] == "C":
            _, p, b, t = vert
            factors.append(cap_weight("standard", b, t, params.x[p - 1], params))
            continue
        kind, row, col, I, j, K, l = vert
        x = params.x[(row + 1) // 2 - 1]
        w = gamma_weight if kind == "G" else delta_weight
        factors.append(w(I, j, K, l, x, params))
    return product(factors)


def _forward(n: int, L: int, sigma: SignedPermutation, params: ParamPoint, prune_exits: bool, budget: _Budget):
    """Transfer-style sweep merging partial states with equal (carried, profile, exits)."""
    layer = {(sigma(n), (zero_vector(n),) * L, ()): Fraction(1)}
    for kind, p, col in _steps(n, L):
        nxt: dict = defaultdict(Fraction)
        for (carried, profile, exits), w in layer.items():
            budget.tick()
            for out, new, bw, _rec in _branches(kind, p, col, carried, profile, params, n):
                if bw == 0:
                    continue
                ex, c = exits, out
                if kind == "D" and col == L:
                    if prune_exits and out != 0:
                        continue
                    ex = exits + (out,)
                    c = sigma(p - 1) if p > 1 else 0
                nxt[(c, new, ex)] += w * bw
        layer = nxt
    return layer


def partition_function(spec: ModelSpec, mode: str = "dfs", max_n: int = DEFAULT_MAX_N, max_L: int = DEFAULT_MAX_L) -> Fraction:
    """``f_mu^sigma(x)``: sum of state weights.

    ``mode="dfs"`` sums :func:`state_weight` over :func:`enumerate_states`;
    ``mode="memo"`` runs a forward sweep that merges partial states with the
    same (step, carried color, vertical profile); the sweep is shared by all
    ``mu`` and cached per ``(n, L, sigma, params)``. Both modes are exact and
    must agree.
    """
    if mode == "dfs":
        return sum((state_weight(st, spec) for st in enumerate_states(spec, max_n, max_L)), Fraction(0))
    if mode != "memo":
        raise ValueError(f"unknown mode {mode!r}")
    _check_bounds(spec.n, spec.L, max_n, max_L)
    return _top_table(spec.n, spec.L, spec.sigma, spec.params).get(spec.top_boundary(), Fraction(0))


@lru_cache(maxsize=512)
def _top_table(n: int, L: int, sigma: SignedPermutation, params: ParamPoint) -> dict:
    """Zero-left-exit mass of every top profile, from one pruned forward sweep."""
    layer = _forward(n, L, sigma, params, True, _Budget(max_visited()))
    out: dict = defaultdict(Fraction)
    for (_c, prof, _e), w in layer.items():
        out[prof] += w
    return dict(out)


def total_mass(n: int, L: int, sigma: SignedPermutation, params: ParamPoint,
               max_n: int = DEFAULT_MAX_N, max_L: int = DEFAULT_MAX_L) -> tuple[dict, Fraction]:
    """Mass of every terminal outcome with boundary pruning switched off.

    Returns ``({(top_profile, left_exits): mass}, total)``; ``left_exits``
    lists the color leaving each Delta row, row 2n-1 first. The total is 1
    by vertex stochasticity.
    """
    _check_bounds(n, L, max_n, max_L)
    layer = _forward(n, L, sigma, params, False, _Budget(max_visited()))
    out: dict = defaultdict(Fraction)
    for (_c, prof, exits), w in layer.items():
        out[(prof, exits)] += w
    masses = {k: v for k, v in out.items() if v != 0}
    return masses, sum(masses.values(), Fraction(0))


def mu_from_profile(profile, n: int) -> tuple[int, ...] | None:
    """Invert the top-boundary formula; None if the profile is not of that form."""
    mu = [0] * n
    for col, vec in enumerate(profile, start=1):
        for k, cnt in enumerate(vec):
            if cnt == 0:
                continue
            if cnt > 1:
                return None
            i = k + 1 if k < n else 2 * n - k
            sign = 1 if k < n else -1
            if mu[i - 1] != 0:
                return None
            mu[i - 1] = sign * col
    if any(m == 0 for m in mu):
        return None
    return tuple(mu)


def all_mu(n: int, L: int) -> list[tuple[int, ...]]:
    vals = [c for c in range(1, L + 1)] + [-c for c in range(1, L + 1)]
    return list(cartesian(vals, repeat=n))


@dataclass
class SampleResult:
    rejected: bool
    mu: tuple[int, ...] | None
    exit_row: int | None
    state: LatticeState | None
    trace: list = field(default_factory=list)


def _check_distribution(options, location):
    total = Fraction(0)
    for _out, _new, w, _rec in options:
        if not isinstance(w, Fraction):
            raise NonStochasticError("non-rational weight", location)
        if w < 0 or w > 1:
            raise NonStochasticError(f"weight {w} outside [0,1]", location)
        total += w
    if total != 1:
        raise NonStochasticError(f"branch weights sum to {total}", location)


def sample_state(n: int, L: int, sigma: SignedPermutation, params: ParamPoint, seed: int) -> SampleResult:
    """Forward-sample one configuration.

    Each vertex output is drawn from its weight distribution in the
    enumeration order; every distribution met is checked to be a probability
    vector. A Delta row leaving with a nonzero color ends the run as a
    rejection. Deterministic given ``seed``.
    """
    rng = random.Random(seed)
    carried = sigma(n)
    profile = (zero_vector(n),) * L
    records: list = []
    trace: list = []
    for kind, p, col in _steps(n, L):
        location = (kind, 2 * p if kind == "G" else 2 * p - 1, col) if kind != "C" else ("C", p)
        options = list(_branches(kind, p, col, carried, profile, params, n))
        _check_distribution(options, location)
        u = Fraction(rng.random())
        acc = Fraction(0)
        chosen = options[-1]
        for opt in options:
            acc += opt[2]
            if u < acc:
                chosen = opt
                break
        out, profile, _w, rec = chosen
        records.append(rec)
        trace.append((location, out))
        carried = out
        if kind == "D" and col == L:
            if out != 0:
                return SampleResult(True, None, 2 * p - 1, None, trace)
            carried = sigma(p - 1) if p > 1 else 0
    state = _build_state(n, L, sigma, records)
    return SampleResult(False, mu_from_profile(profile, n), None, state, trace)


def validate_regime(n: int, L: int, sigma: SignedPermutation, params: ParamPoint) -> None:
    """Check every branch distribution reachable by the forward process.

    Raises :class:`NonStochasticError` naming the first offending vertex.
    """
    layer = {(sigma(n), (zero_vector(n),) * L)}
    for kind, p, col in _steps(n, L):
        location = (kind, 2 * p if kind == "G" else 2 * p - 1, col) if kind != "C" else ("C", p)
        nxt = set()
        for carried, profile in sorted(layer):
            options = list(_branches(kind, p, col, carried, profile, params, n))
            _check_distribution(options, location)
            for out, new, w, _rec in options:
                if w == 0:
                    continue
                c = out
                if kind == "D" and col == L:
                    c = sigma(p - 1) if p > 1 else 0
                nxt.add((c, new))
        layer = nxt
