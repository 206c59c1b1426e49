"""Brute-force state enumerators used as an oracle for the lattice module.

They share no code with ``uturn.lattice``: every horizontal edge is filled
with every color and every internal vertical edge with every vector up to a
cap, and a labeling is kept when all its vertex weights (read from the
table transcription) are nonzero.

Geometry: rows 1..2n from the top, columns 1..L from the right. Row 2p is
a Gamma row entered on the left by sigma(p); row 2p-1 is a Delta row whose
left exit must be empty; the two meet at a cap on the right.
"""

from fractions import Fraction
from itertools import product

from weight_tables import table_cap, table_vertex


def colors(n):
    return [0, *range(1, n + 1), *range(-n, 0)]


def top_profile(n, L, mu):
    cols = [[0] * (2 * n) for _ in range(L)]
    for i, m in enumerate(mu, start=1):
        slot = i - 1 if m > 0 else 2 * n - i
        cols[abs(m) - 1][slot] += 1
    return tuple(tuple(c) for c in cols)


def _gamma_row(I_row, K_row, h, x, p):
    # h[k]: edge k steps from the right; paths move right, so vertex col has left h[col], right h[col-1]
    w = Fraction(1)
    for col in range(len(I_row), 0, -1):
        w *= table_vertex("G", I_row[col - 1], h[col], K_row[col - 1], h[col - 1], x, p)
        if w == 0:
            return w
    return w


def _delta_row(I_row, K_row, h, x, p):
    w = Fraction(1)
    for col in range(1, len(I_row) + 1):
        w *= table_vertex("D", I_row[col - 1], h[col - 1], K_row[col - 1], h[col], x, p)
        if w == 0:
            return w
    return w


def full_blind(n, L, sigma, mu, p, cap=2):
    """Every labeling of every edge at once (tiny n, L only)."""
    cs = colors(n)
    vecs = list(product(range(cap + 1), repeat=2 * n))
    zero = tuple((0,) * (2 * n) for _ in range(L))
    top = top_profile(n, L, mu)
    n_h = 2 * n * L  # free horizontal edges: L per row (left boundary fixed)
    n_v = (2 * n - 1) * L
    found = {}
    for hs in product(cs, repeat=n_h):
        for vs in product(vecs, repeat=n_v):
            levels = [top] + [tuple(vs[k * L:(k + 1) * L]) for k in range(2 * n - 1)] + [zero]
            rows = []
            for r in range(2 * n):
                free = list(hs[r * L:(r + 1) * L])
                left = sigma[r // 2] if r % 2 else 0
                rows.append(tuple(free + [left]))
            w = Fraction(1)
            for pp in range(1, n + 1):
                g, d = 2 * pp, 2 * pp - 1
                x = p.x[pp - 1]
                w *= _gamma_row(levels[g], levels[g - 1], rows[g - 1], x, p)
                w *= table_cap(rows[g - 1][0], rows[d - 1][0], x, p)
                w *= _delta_row(levels[d], levels[d - 1], rows[d - 1], x, p)
                if w == 0:
                    break
            if w != 0:
                found[(tuple(rows), tuple(levels))] = w
    return found


def row_blind(n, L, sigma, mu, p, cap=1):
    """Rows filled one at a time, bottom to top; each row is filled blindly."""
    cs = colors(n)
    vecs = list(product(range(cap + 1), repeat=2 * n))
    zero = tuple((0,) * (2 * n) for _ in range(L))
    top = top_profile(n, L, mu)
    # partial: (rows top..bottom filled so far as dict, levels dict) -> weight
    partial = {((), (zero,)): Fraction(1)}  # rows listed bottom-up, levels bottom-up
    for r in range(2 * n, 0, -1):
        pp = (r + 1) // 2
        x = p.x[pp - 1]
        is_gamma = r % 2 == 0
        nxt = {}
        tops = [top] if r == 1 else list(product(vecs, repeat=L))
        for (rows, levels), w0 in partial.items():
            below = levels[-1]
            for h_free in product(cs, repeat=L):
                h = tuple(h_free) + ((sigma[pp - 1] if is_gamma else 0),)
                cap_w = Fraction(1) if is_gamma else table_cap(rows[-1][0], h[0], x, p)
                if cap_w == 0:
                    continue
                for above in tops:
                    row_w = (_gamma_row if is_gamma else _delta_row)(below, above, h, x, p)
                    if row_w:
                        nxt[(rows + (h,), levels + (tuple(above),))] = w0 * cap_w * row_w
        partial = nxt
    return {(tuple(reversed(rows)), tuple(reversed(levels))): w for (rows, levels), w in partial.items()}
