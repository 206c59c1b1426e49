import random
from fractions import Fraction
from itertools import product

import pytest

from uturn.colors import add_color, all_colors
from uturn.scalar import ParamPoint, PoleError, random_param_point
from uturn.weights import (
    R_FAMILIES,
    cap_transitions,
    cap_weight,
    delta_weight,
    gamma_weight,
    phi,
    r_weight,
    vertex_outputs,
)
from weight_tables import table_cap, table_r, table_vertex

F = Fraction
COLS2 = all_colors(2)


def _points(k, n=2, seed=11):
    rng = random.Random(seed)
    return [random_param_point(rng, n) for _ in range(k)]


def test_gamma_example_empty_vertex():
    # nothing in, nothing out: (q^0 - s x q^0)/(1 - s x) = 1
    p = ParamPoint(F(2), F(1, 3), F(1), F(1), (F(1, 5), F(2, 7)))
    assert gamma_weight((0, 0, 0, 0), 0, (0, 0, 0, 0), 0, F(1, 5), p) == 1
    assert delta_weight((0, 0, 0, 0), 0, (0, 0, 0, 0), 0, F(1, 5), p) == 1


def test_gamma_hand_value():
    # color 1 passes straight through; partial sums are taken over the input vector
    p = ParamPoint(F(2), F(1, 3), F(1), F(1), (F(1, 5), F(2, 7)))
    q, s, x = F(4), F(1, 3), F(1, 5)
    assert gamma_weight((0, 0, 0, 0), 1, (0, 0, 0, 0), 1, x, p) == F(3, 7)
    expected = (s * q - x) / q / (s * (1 - s * x))
    assert gamma_weight((1, 0, 0, 0), 1, (1, 0, 0, 0), 1, x, p) == expected


def test_conservation_violation_is_zero():
    p = _points(1)[0]
    assert gamma_weight((1, 0, 0, 0), 2, (1, 0, 0, 0), 1, p.x[0], p) == 0
    assert delta_weight((0, 0, 0, 0), 1, (0, 0, 0, 0), 2, p.x[0], p) == 0


@pytest.mark.parametrize("p", _points(3))
def test_against_table_transcription(p):
    x = p.x[0]
    for I in product(range(3), repeat=4):
        for j, l in product(COLS2, repeat=2):
            K = add_color(add_color(I, j, 2), l, 2, -1)
            if min(K) < 0:
                continue
            assert gamma_weight(I, j, K, l, x, p) == table_vertex("G", I, j, K, l, x, p)
            assert delta_weight(I, j, K, l, x, p) == table_vertex("D", I, j, K, l, x, p)


@pytest.mark.parametrize("p", _points(3, seed=12))
def test_r_and_cap_against_table(p):
    x, y = p.x
    for fam in R_FAMILIES:
        for e in product(COLS2, repeat=4):
            assert r_weight(fam, *e, x, y, p) == table_r(fam, *e, x, y, p)
    for b, t in product(COLS2, repeat=2):
        assert cap_weight("standard", b, t, x, p) == table_cap(b, t, x, p)


@pytest.mark.parametrize("p", _points(4, seed=13))
def test_vertex_stochastic(p):
    x = p.x[1]
    for kind in "GD":
        for I in product(range(3), repeat=4):
            for j in COLS2:
                outs = list(vertex_outputs(kind, I, j, x, p))
                assert sum(w for _, _, w in outs) == 1


@pytest.mark.parametrize("p", _points(4, seed=14))
def test_cap_stochastic(p):
    for b in COLS2:
        assert sum(cap_weight("standard", b, t, p.x[0], p) for bb, t in cap_transitions(2) if bb == b) == 1


# which two edges are held fixed when an R vertex is read as a probability
R_INPUTS = {"GG": (0, 1), "DG": (0, 3), "DD": (2, 3)}


@pytest.mark.parametrize("p", _points(3, seed=15))
def test_r_row_sums(p):
    x, y = p.x
    for fam, fixed in R_INPUTS.items():
        free = [k for k in range(4) if k not in fixed]
        for u, v in product(COLS2, repeat=2):
            total = F(0)
            for w, z in product(COLS2, repeat=2):
                e = [0] * 4
                e[fixed[0]], e[fixed[1]], e[free[0]], e[free[1]] = u, v, w, z
                total += r_weight(fam, *e, x, y, p)
            assert total == 1


def test_r_unlisted_patterns_vanish():
    p = _points(1)[0]
    x, y = p.x
    assert r_weight("GG", 1, 2, 2, 2, x, y, p) == 0
    assert r_weight("GG", 1, 1, 2, 2, x, y, p) == 0  # listed only for DG
    assert r_weight("DG", 1, 2, 2, 1, x, y, p) == 0
    assert r_weight("DD", 0, 0, 0, 0, x, y, p) == 1


def test_poles():
    p = ParamPoint(F(2), F(1, 3), F(1), F(1), (F(3), F(1, 2)))
    with pytest.raises(PoleError) as exc:
        gamma_weight((0, 0), 0, (0, 0), 0, F(3), p.with_x((F(3),)))
    assert exc.value.factor == "1-s*x"
    with pytest.raises(PoleError):
        r_weight("GG", 1, 2, 1, 2, F(4), F(1), p)  # x = q y
    with pytest.raises(PoleError):
        r_weight("DG", 1, 2, 1, 2, F(2), F(1, 2), p)  # x y = 1
    with pytest.raises(PoleError):
        phi(F(-1), ParamPoint(F(2), F(1, 3), F(1), F(1), (F(1, 2),)))  # 1 + z/nu = 0


def test_phi_examples():
    p = ParamPoint(F(2), F(1, 3), F(3), F(1, 2), (F(1, 2),))
    assert phi(F(0), p) == 1
    assert phi(F(1), p) == 0
    z = F(1, 5)
    assert phi(z, p) == (1 - z * z) / ((1 - F(3, 2) * z) * (1 + z / 3))


def test_auxiliary_caps():
    p = _points(1)[0]
    x = p.x[0]
    assert cap_weight("C1", 1, 0, x, p, color=1) == -1
    assert cap_weight("C2", -1, 0, x, p, color=1) == -1
    assert cap_weight("recolored", 2, 0, x, p, color=2) == -1
    tphi = p.t * phi(x / p.r, p)
    assert cap_weight("C1", 0, -1, x, p, color=1) == tphi
    assert cap_weight("C1", 0, 1, x, p, color=1) == 1 - tphi
    assert cap_weight("C2", 0, 1, x, p, color=1) == phi(x / p.r, p)
    with pytest.raises(ValueError):
        cap_weight("bogus", 0, 0, x, p)
