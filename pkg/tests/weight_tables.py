"""Second, table-literal transcription of the vertex weights (test oracle).

Kept deliberately separate from ``uturn.weights``: entries are strings read
straight off the tables and evaluated with their own partial sums below.

Variables: ``pos`` = I_[1,n], ``neg`` = I_[nbar,1bar], ``Il`` = I_l, and
``le, lt, gt, ge`` = I_{<=l}, I_{<l}, I_{>l}, I_{>=l}.
"""

from fractions import Fraction

# (relation of j to l, class of l) -> numerator / denominator
GAMMA = {
    ("eq", "zero"): "(q**-pos - s*x*q**neg) / (1 - s*x)",
    ("eq", "pos"): "(s*q**Il - x) * q**-le / (s*(1 - s*x))",
    ("eq", "neg"): "s*(s*q**Il - x) * q**gt / (1 - s*x)",
    ("lt", "zero"): "(x*q**-pos - s**2*x*q**neg) / (s*(1 - s*x))",
    ("lt", "pos"): "-x*(1 - q**Il) * q**-le / (s*(1 - s*x))",
    ("lt", "neg"): "-s*x*(1 - q**Il) * q**gt / (1 - s*x)",
    ("gt", "zero"): "(q**-pos - s**2*q**neg) / (1 - s*x)",
    ("gt", "pos"): "-(1 - q**Il) * q**-le / (1 - s*x)",
    ("gt", "neg"): "-s**2*(1 - q**Il) * q**gt / (1 - s*x)",
}

DELTA = {
    ("eq", "zero"): "(q**-neg - s*x*q**pos) / (1 - s*x)",
    ("eq", "pos"): "s*(s*q**Il - x) * q**lt / (1 - s*x)",
    ("eq", "neg"): "(1 - x*q**-Il/s) * q**-gt / (1 - s*x)",
    ("lt", "zero"): "(q**-neg - s**2*q**pos) / (1 - s*x)",
    ("lt", "pos"): "-s**2*(1 - q**Il) * q**lt / (1 - s*x)",
    ("lt", "neg"): "-(1 - q**Il) * q**-ge / (1 - s*x)",
    ("gt", "zero"): "x*(q**-neg/s - s*q**pos) / (1 - s*x)",
    ("gt", "pos"): "-s*x*(1 - q**Il) * q**lt / (1 - s*x)",
    ("gt", "neg"): "-x*(1 - q**Il) * q**-ge / (s*(1 - s*x))",
}

# R vertices: pattern over (alpha, beta, gamma, delta) with i < j
R_TABLES = {
    "GG": {("i", "j", "i", "j"): "(x - y)/(x - q*y)", ("j", "i", "j", "i"): "q*(x - y)/(x - q*y)",
           ("j", "i", "i", "j"): "(1 - q)*x/(x - q*y)", ("i", "j", "j", "i"): "(1 - q)*y/(x - q*y)"},
    "DG": {("i", "j", "i", "j"): "(q*x*y - 1)/(x*y - 1)", ("j", "i", "j", "i"): "(q*x*y - 1)/(q*(x*y - 1))",
           ("j", "j", "i", "i"): "(1 - q)/(q*(x*y - 1))", ("i", "i", "j", "j"): "(1 - q)*x*y/(x*y - 1)"},
    "DD": {("i", "j", "i", "j"): "(y - x)/(y - q*x)", ("j", "i", "j", "i"): "q*(y - x)/(y - q*x)",
           ("j", "i", "i", "j"): "(1 - q)*x/(y - q*x)", ("i", "j", "j", "i"): "(1 - q)*y/(y - q*x)"},
}

# standard cap, (bottom, top) with i > 0; F = phi(1/(r x))
CAP = {("+", "+"): "1", ("i", "ibar"): "t*F", ("i", "i"): "1 - t*F", ("ibar", "i"): "F", ("ibar", "ibar"): "1 - F"}


def order(n):
    return list(range(1, n + 1)) + [0] + list(range(-n, 0))


def slot(c, n):
    return c - 1 if c > 0 else 2 * n + c


def _sums(I, l, n):
    seq = order(n)
    counts = {c: I[slot(c, n)] for c in seq if c != 0}
    pos = sum(counts[c] for c in range(1, n + 1))
    neg = sum(counts[-c] for c in range(1, n + 1))
    env = {"pos": pos, "neg": neg}
    if l != 0:
        k = seq.index(l)
        below = [c for c in seq[:k] if c != 0]
        above = [c for c in seq[k + 1:] if c != 0]
        env.update(Il=counts[l], lt=sum(counts[c] for c in below), le=sum(counts[c] for c in below) + counts[l],
                   gt=sum(counts[c] for c in above), ge=sum(counts[c] for c in above) + counts[l])
    return env


def table_vertex(kind, I, j, K, l, x, p):
    n = len(I) // 2
    lhs, rhs = list(I), list(K)
    if j:
        lhs[slot(j, n)] += 1
    if l:
        rhs[slot(l, n)] += 1
    if lhs != rhs:
        return Fraction(0)
    seq = order(n)
    rel = "eq" if j == l else ("lt" if seq.index(j) < seq.index(l) else "gt")
    cls = "zero" if l == 0 else ("pos" if l > 0 else "neg")
    expr = (GAMMA if kind == "G" else DELTA)[(rel, cls)]
    env = _sums(I, l, n)
    env.update(q=p.r * p.r, s=p.s, x=Fraction(x))
    return Fraction(eval(expr, {}, env))


def table_r(family, a, b, c, d, x, y, p):
    if a == b == c == d:
        return Fraction(1)
    cols = {a, b, c, d}
    if len(cols) != 2:
        return Fraction(0)
    n = max(abs(v) for v in cols)
    seq = order(n)
    i, j = sorted(cols, key=seq.index)
    name = {i: "i", j: "j"}
    key = tuple(name[v] for v in (a, b, c, d))
    expr = R_TABLES[family].get(key)
    if expr is None:
        return Fraction(0)
    return Fraction(eval(expr, {}, {"q": p.r * p.r, "x": Fraction(x), "y": Fraction(y)}))


def table_cap(bottom, top, x, p):
    def nm(c):
        if c == 0:
            return "+"
        return "i" if c > 0 else "ibar"
    if (bottom == 0) != (top == 0) or (bottom and abs(bottom) != abs(top)):
        return Fraction(0)
    expr = CAP.get((nm(bottom), nm(top)))
    if expr is None:
        return Fraction(0)
    z = 1 / (p.r * Fraction(x))
    F = (1 - z * z) / ((1 - p.nu * p.t * z) * (1 + z / p.nu))
    return Fraction(eval(expr, {}, {"t": p.t, "F": F}))
