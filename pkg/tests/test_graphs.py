from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from feynkit.graphs import (Multigraph, Profile, enumerate_matchings, enumerate_multigraphs, graph_of,
                            matching_count, matchings_by_class, orbit_size, skeleton, weighted_graph_count,
                            weighted_graph_count_formula)
from feynkit.series import double_factorial


def test_matching_counts():
    for k in range(1, 9):
        assert matching_count(2 * k) == double_factorial(2 * k - 1)
    assert len(list(enumerate_matchings(8))) == 105


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_weighted_graph_identity(n, k):
    expected = Fraction(n ** (2 * k), 2 ** k * factorial(k) * factorial(n))
    assert weighted_graph_count(n, k) == expected == weighted_graph_count_formula(n, k)


def test_known_automorphism_orders():
    # theta graph: two trivalent vertices joined by three edges
    theta = Multigraph([(3, 3), (3, 3)], 0, [(0, 1)] * 3)
    assert theta.aut_order() == 12
    # dumbbell: two self-loops joined by a bridge
    dumbbell = Multigraph([(3, 3), (3, 3)], 0, [(0, 0), (0, 1), (1, 1)])
    assert dumbbell.aut_order() == 8
    # figure eight
    assert Multigraph([(4, 4)], 0, [(0, 0), (0, 0)]).aut_order() == 8
    # external legs are fixed by automorphisms
    assert Multigraph([(3, 3)], 2, [(0, 2), (1, 2), (2, 2)]).aut_order() == 2


profiles = st.sampled_from([
    Profile({3: 2}), Profile({4: 1}, 2), Profile({3: 2, 4: 1}), Profile({3: 4}), Profile({4: 2}),
    Profile({3: 1}, 1), Profile({3: 2}, 2), Profile({1: 2, 3: 2}), Profile({4: 1, 3: 2}, 2),
])


@given(profiles)
def test_orbit_decomposition(profile):
    """Each isomorphism class is hit by symmetry/|Aut| matchings."""
    classes = matchings_by_class(profile)
    for g, count in classes.values():
        assert count == orbit_size(g)
    assert sum(c for _, c in classes.values()) == matching_count(profile.half_edges())
    assert set(classes) == set(enumerate_multigraphs(profile))


@given(profiles, st.randoms(use_true_random=False))
def test_certificate_is_isomorphism_invariant(profile, rnd):
    ms = list(enumerate_matchings(profile.half_edges()))
    m = ms[rnd.randrange(len(ms))]
    g = graph_of(m, profile)
    # relabel internal vertices of the same kind
    groups = {}
    for i, kind in enumerate(g.kinds):
        groups.setdefault(kind, []).append(g.legs + i)
    perm = list(range(g.nvertices))
    for members in groups.values():
        shuffled = members[:]
        rnd.shuffle(shuffled)
        for a, b in zip(members, shuffled):
            perm[a] = b
    h = Multigraph(g.kinds, g.legs, [(perm[a], perm[b]) for a, b in g.edges])
    assert g.certificate() == h.certificate()
    assert g.aut_order() == h.aut_order()


@given(profiles)
def test_loop_number_and_connectivity(profile):
    for g in enumerate_multigraphs(profile).values():
        g.check()
        assert g.loop_number() == len(g.edges) - len(g.kinds)
        if g.is_connected():
            betti = len(g.edges) - g.nvertices + 1
            assert betti == g.loop_number() - g.legs + 1
            sk = skeleton(g)
            assert sk.reassemble() == g


def test_one_particle_irreducible():
    dumbbell = Multigraph([(3, 3), (3, 3)], 0, [(0, 0), (0, 1), (1, 1)])
    theta = Multigraph([(3, 3), (3, 3)], 0, [(0, 1)] * 3)
    assert not dumbbell.is_1pi()
    assert theta.is_1pi()
