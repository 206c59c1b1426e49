"""Signed colors, color vectors and the hyperoctahedral group B_n.

Colors are plain ints: ``i > 0`` is color ``i``, ``0`` is the empty ("+")
label, ``-i`` is the barred color. The total order is
``1 < ... < n < 0 < -n < ... < -1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, Sequence

__all__ = [
    "rank",
    "color_compare",
    "all_colors",
    "bar",
    "format_color",
    "ColorVector",
    "zero_vector",
    "basis",
    "vector_index",
    "index_color",
    "partial_sum",
    "add_color",
    "SignedPermutation",
    "identity",
    "simple_reflection",
    "compose",
    "length",
    "all_signed_permutations",
    "parse_one_line",
    "MAX_LENGTH_N",
]

MAX_LENGTH_N = 5


def rank(c: int, n: int) -> int:
    if c > 0:
        return c
    if c == 0:
        return n + 1
    return 2 * n + 2 + c


def color_compare(a: int, b: int, n: int) -> int:
    """Return -1, 0 or 1 as ``a`` is below, equal to or above ``b``."""
    ra, rb = rank(a, n), rank(b, n)
    return (ra > rb) - (ra < rb)


def all_colors(n: int) -> list[int]:
    """``{0} ∪ [±n]`` listed in increasing color order."""
    return sorted(range(-n, n + 1), key=lambda c: rank(c, n))


def bar(c: int) -> int:
    return -c


def format_color(c: int) -> str:
    if c == 0:
        return "+"
    return str(c) if c > 0 else f"{-c}bar"


# A color vector is a tuple of 2n counts ordered (1..n, nbar..1bar).
ColorVector = tuple


def zero_vector(n: int) -> tuple[int, ...]:
    return (0,) * (2 * n)


def vector_index(c: int, n: int) -> int:
    if c == 0:
        raise ValueError("color 0 has no slot in a color vector")
    return c - 1 if c > 0 else 2 * n + c


def index_color(k: int, n: int) -> int:
    return k + 1 if k < n else k - 2 * n


def basis(c: int, n: int) -> tuple[int, ...]:
    v = [0] * (2 * n)
    if c != 0:
        v[vector_index(c, n)] = 1
    return tuple(v)


def add_color(v: Sequence[int], c: int, n: int, k: int = 1) -> tuple[int, ...]:
    """``v + k*e_c`` (``e_0`` is zero)."""
    if c == 0:
        return tuple(v)
    out = list(v)
    out[vector_index(c, n)] += k
    return tuple(out)


_RELATIONS = {
    "le": lambda rk, rb: rk <= rb,
    "lt": lambda rk, rb: rk < rb,
    "ge": lambda rk, rb: rk >= rb,
    "gt": lambda rk, rb: rk > rb,
}


def partial_sum(v: Sequence[int], relation: str, bound, n: int) -> int:
    """Sum ``v_k`` over signed colors ``k`` related to ``bound`` in color order.

    ``relation`` is one of ``le, lt, ge, gt`` with a single color bound, or
    ``interval`` with a pair ``(lo, hi)`` (inclusive on both ends).
    """
    total = 0
    if relation == "interval":
        lo, hi = (rank(c, n) for c in bound)
        for k, cnt in enumerate(v):
            if lo <= rank(index_color(k, n), n) <= hi:
                total += cnt
        return total
    test = _RELATIONS[relation]
    rb = rank(bound, n)
    for k, cnt in enumerate(v):
        if cnt and test(rank(index_color(k, n), n), rb):
            total += cnt
    return total


@dataclass(frozen=True)
class SignedPermutation:
    """An element of B_n in one-line notation; negative entries are barred."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(v) for v in self.images))
        if sorted(abs(v) for v in self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a signed permutation: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, c: int) -> int:
        if c == 0:
            return 0
        v = self.images[abs(c) - 1]
        return v if c > 0 else -v

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.images)

    def inverse(self) -> "SignedPermutation":
        out = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            out[abs(v) - 1] = i if v > 0 else -i
        return SignedPermutation(tuple(out))

    def negatives(self) -> int:
        return sum(1 for v in self.images if v < 0)


def parse_one_line(text: str) -> SignedPermutation:
    """Parse ``"2,-1,3"``. Cycle notation is not accepted."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    try:
        return SignedPermutation(tuple(int(p) for p in parts))
    except ValueError as exc:
        raise ValueError(f"bad one-line signed permutation {text!r}: {exc}") from None


def identity(n: int) -> SignedPermutation:
    return SignedPermutation(tuple(range(1, n + 1)))


def simple_reflection(i: int, n: int) -> SignedPermutation:
    """``s_i`` swaps ``i, i+1`` for ``i < n``; ``s_n`` sends ``n`` to ``nbar``."""
    if not 1 <= i <= n:
        raise ValueError(f"generator index {i} outside 1..{n}")
    img = list(range(1, n + 1))
    if i < n:
        img[i - 1], img[i] = img[i], img[i - 1]
    else:
        img[n - 1] = -n
    return SignedPermutation(tuple(img))


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """``(a∘b)(j) = a(b(j))``."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: B_{a.n} vs B_{b.n}")
    return SignedPermutation(tuple(a(v) for v in b.images))


@lru_cache(maxsize=None)
def _lengths(n: int) -> dict[tuple[int, ...], int]:
    gens = [simple_reflection(i, n) for i in range(1, n + 1)]
    start = identity(n)
    dist = {start.images: 0}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        d = dist[w.images]
        for g in gens:
            u = compose(w, g)
            if u.images not in dist:
                dist[u.images] = d + 1
                queue.append(u)
    return dist


def length(sigma: SignedPermutation, max_n: int = MAX_LENGTH_N) -> int:
    """Word length in the generators ``s_1..s_n``, by breadth-first search."""
    if sigma.n > max_n:
        raise ValueError(f"length: n={sigma.n} above the configured bound {max_n}")
    return _lengths(sigma.n)[sigma.images]


def all_signed_permutations(n: int) -> Iterator[SignedPermutation]:
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            yield SignedPermutation(tuple(p * s for p, s in zip(perm, signs)))
