import json
import math
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from feynkit.feynman import (Action, Coupling, Expansion, SymTensor, connected_expansion, correlator_expansion,
                             effective_action, effective_tree_level, legendre_numeric, legendre_series,
                             log_partition_numeric, one_loop, partition_expansion, tree_level)
from feynkit.gaussian import moment_1d
from feynkit.series import Series


def key(hbar, **deg):
    return (tuple(sorted(deg.items())), Fraction(hbar))


def test_cubic_vacuum_terms_from_moments():
    # <x^{3k}> / (3!^k k!) at order g^k
    Z = partition_expansion(Action.one_dim([("g", 3, 1)]), 4)
    for k in (2, 4):
        expected = moment_1d(3 * k) / (6 ** k * factorial(k))
        assert Z.terms[key(Fraction(k, 2), g=k)] == expected


def test_quartic_vacuum_terms_from_moments():
    Z = partition_expansion(Action.one_dim([("l", 4, 1)]), 3)
    for k in (1, 2, 3):
        assert Z.terms[key(k, l=k)] == moment_1d(4 * k) / (24 ** k * factorial(k))


def test_normalized_two_point():
    e = correlator_expansion(Action.one_dim([("l", 4, 1)]), [[1], [1]], 1, normalized=True)
    # <x^6>/24 - <x^2><x^4>/24
    assert e.terms[key(2, l=1)] == (moment_1d(6) - moment_1d(2) * moment_1d(4)) / 24
    assert e.terms[key(1)] == 1


def random_action(dim, seed):
    import random
    rnd = random.Random(seed)
    vals3 = [rnd.randint(-2, 2) for _ in range(3 * dim)]
    vals4 = [rnd.randint(-2, 2) for _ in range(4 * dim)]
    c3 = Coupling("a", 3, SymTensor.from_function(3, dim, lambda i: vals3[sum(i)]))
    c4 = Coupling("b", 4, SymTensor.from_function(4, dim, lambda i: vals4[sum(i)]))
    B = [[2, 1], [1, 3]] if dim == 2 else [[rnd.randint(1, 3)]]
    return Action(B, [c3, c4])


@pytest.mark.parametrize("seed", range(3))
def test_three_modes_agree(seed):
    a = random_action(2, seed)
    g = partition_expansion(a, 3, "graph")
    assert g == partition_expansion(a, 3, "matching")
    assert partition_expansion(a, 2, "raw") == partition_expansion(a, 2, "graph")


@pytest.mark.parametrize("seed", range(3))
def test_log_of_partition_is_connected(seed):
    a = random_action(2, seed)
    Z = partition_expansion(a, 3)
    C = connected_expansion(a, 3)
    assert C.exp(3) == Z
    assert Z.log(3) == C


def test_only_integer_hbar_powers_survive():
    a = random_action(1, 7)
    for e in (partition_expansion(a, 4), connected_expansion(a, 4)):
        assert all(h.denominator == 1 for h in e.hbar_exponents())


def test_loop_slices():
    a = Action.one_dim([("a", 3, 1), ("b", 4, 1), ("c", 1, 1)])
    C = connected_expansion(a, 4)
    assert C.hbar_slice(-1) == tree_level(a, 4)
    assert C.hbar_slice(0) == one_loop(a, 4)


def test_tree_level_is_critical_value():
    # S = x^2/2 - c x - g x^3/6; tree level is -S at the perturbative critical point
    T = tree_level(Action.one_dim([("c", 1, 1), ("g", 3, 1)]), 10)
    c, g = 0.1, 0.1
    xc = (1 - math.sqrt(1 - 2 * g * c)) / g
    assert T.evaluate({"c": c, "g": g}, 1.0) == pytest.approx(-(xc ** 2 / 2 - c * xc - g * xc ** 3 / 6), rel=1e-9)


def test_effective_action_tree_level():
    a = Action.one_dim([("g", 3, 1)])
    assert effective_tree_level(effective_action(a, 3), 3) == connected_expansion(a, 3)


@pytest.mark.parametrize("p", [0.0, 0.2])
def test_legendre_duality_numeric(p):
    q = Action.one_dim([("g", 4, -1)])
    eff = effective_action(q, 3)
    hbar = 0.05
    c = eff.numeric_1d({"g": 0.1}, hbar)
    f = lambda x: sum(v * x ** k for k, v in c.items())
    df = lambda x: sum(k * v * x ** (k - 1) for k, v in c.items() if k)
    d2f = lambda x: sum(k * (k - 1) * v * x ** (k - 2) for k, v in c.items() if k > 1)
    assert legendre_numeric(f, df, p, 0.0, d2f) == pytest.approx(log_partition_numeric(q, {"g": 0.1}, hbar, p), abs=1e-8)
    assert legendre_numeric(f, df, p) == pytest.approx(legendre_numeric(f, df, p, 0.0, d2f), abs=1e-12)


@given(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=5),
       st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=5), min_size=3, max_size=3))
def test_legendre_series_is_involutive(a, rest):
    n = 7
    f = Series([0, 0, 1 / (2 * a)] + rest, n)
    assert legendre_series(legendre_series(f)).agrees(f, n - 2)


def test_expansion_json_roundtrip():
    C = connected_expansion(random_action(1, 3), 3)
    assert Expansion.from_json(json.loads(json.dumps(C.to_json()))) == C


def test_action_json_roundtrip():
    a = random_action(2, 1)
    b = Action.from_json(json.loads(json.dumps(a.to_json())))
    assert partition_expansion(a, 2) == partition_expansion(b, 2)
