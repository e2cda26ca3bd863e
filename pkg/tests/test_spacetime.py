from fractions import Fraction

import pytest

from ghostcoal.spacetime import (CapExceeded, LatticeKernels, ModelError, ModelSpec, SRWKernels,
                                 SpacetimeGraph, WindowClippedError, build_model, check_planarity,
                                 enumerate_paths, path_weight, path_weight_sum, path_weight_table,
                                 transition_kernel, vertex_key)

H = Fraction(1, 2)


def cb(T=2, sources=(0,), window=(-4, 6), **params):
    return build_model(ModelSpec("checkerboard-srw", T, window, params, tuple(sources)))


def test_checkerboard_graph():
    G = cb(2, (0, 2))
    assert all(w == H for _, _, w in G.edges())
    assert all((x + t) % 2 == 0 for x, t in G.vertices)
    assert G.T == 2
    assert G.probabilistic
    assert list(G.slice(2)) == [(-2, 2), (0, 2), (2, 2), (4, 2)]


def test_vertex_order_is_time_major():
    G = cb(2, (0, 2))
    vs = list(G.vertices)
    assert vs == sorted(vs, key=vertex_key())


def test_ne_lattice_step_rule():
    G = build_model(ModelSpec("ne-lattice", 2, (0, 4), {"north": "1/3"}, (0, 1)))
    assert list(G.successors((1, 1))) == [((1, 2), Fraction(1, 3)), ((2, 2), Fraction(2, 3))]


def test_birth_death_stochastic():
    G = build_model(ModelSpec("birth-death", 3, (-5, 5), {"up": "1/3", "down": "2/3"}, (0,)))
    for v in G.vertices:
        if v[1] < G.T:
            assert sum(w for _, w in G.successors(v)) == 1
    lazy = build_model(ModelSpec("birth-death", 2, (-5, 5), {"up": "1/4", "down": "1/4"}, (0,)))
    assert dict(lazy.successors((0, 0)))[(0, 1)] == H


def test_birth_death_per_site_rates():
    G = build_model(ModelSpec("birth-death", 1, (-3, 3),
                              {"up": {"default": "1/2", "1": "1/5"}, "down": {"default": "1/2", "1": "4/5"}},
                              (0, 1)))
    assert dict(G.successors((1, 0))) == {(0, 1): Fraction(4, 5), (2, 1): Fraction(1, 5)}


def test_model_errors():
    with pytest.raises(WindowClippedError):
        cb(3, (0,), window=(-2, 2))
    with pytest.raises(ModelError):
        cb(2, (1,))
    with pytest.raises(ModelError):
        cb(2, (0,), up="2/3", down="2/3")
    with pytest.raises(ModelError):
        build_model(ModelSpec("birth-death", 1, (-2, 2), {"up": "3/2"}, (0,)))
    with pytest.raises(ModelError):
        build_model(ModelSpec("spiral", 1, (0, 1), {}, (0,)))


def test_graph_invariants():
    with pytest.raises(ValueError):
        SpacetimeGraph([((0, 0), (0, 2), 1)])
    with pytest.raises(ValueError):
        SpacetimeGraph([((0, 0), (1, 1), -1)])


def test_path_weight_sums():
    G = cb(2)
    assert path_weight_sum(G, (0, 0), (0, 2)) == H
    assert path_weight_sum(G, (0, 0), (2, 2)) == Fraction(1, 4)
    assert path_weight_sum(G, (0, 0), (0, 0)) == 1
    assert path_weight_sum(G, (0, 0), (6, 2)) == 0


def test_paths_enumeration():
    G = cb(2)
    ps = enumerate_paths(G, (0, 0), (0, 2))
    assert len(ps) == 2
    assert ps == sorted(ps)
    assert enumerate_paths(G, (0, 0), (0, 0)) == [((0, 0),)]
    assert enumerate_paths(G, (0, 0), (3, 2)) == []
    with pytest.raises(CapExceeded):
        enumerate_paths(cb(6, window=(-6, 6)), (0, 0), (0, 6), cap=5)


def test_weight_table_matches_enumeration():
    G = cb(4, (0, 2))
    tab = path_weight_table(G, (0, 0))
    for y in G.slice(4):
        ps = enumerate_paths(G, (0, 0), y)
        assert tab.get(y, 0) == sum((path_weight(G, p) for p in ps), Fraction(0))
    assert sum(tab[y] for y in G.slice(4) if y in tab) == 1


def test_kernels():
    pmf, cdf = transition_kernel(ModelSpec("checkerboard-srw", 2, (-4, 4)), 0)
    assert (pmf(-2), pmf(0), pmf(2)) == (Fraction(1, 4), H, Fraction(1, 4))
    assert cdf(0) == Fraction(3, 4)
    assert cdf(2) == 1 and cdf(-3) == 0
    k = pmf.__self__
    assert k.mass(-2, 0) == Fraction(3, 4) and k.mass(1, 0) == 0


def test_binomial_kernels_match_graph():
    G = cb(5, (0, 2, 4), window=(-6, 10))
    L, S = LatticeKernels(G), SRWKernels(5)
    for x in (0, 2, 4):
        for y in range(-6, 11):
            assert L(x).pmf(y) == S(x).pmf(y)
            assert L(x).cdf(y) == S(x).cdf(y)


def test_kernels_need_probabilities():
    G = SpacetimeGraph([((0, 0), (0, 1), 2)])
    with pytest.raises(ModelError):
        LatticeKernels(G)


def test_planarity_of_standard_models():
    G = cb(3, (0, 2, 4), window=(-4, 8))
    rep = check_planarity(G, [0, 2, 4], G.slice(3))
    assert rep.p1 and rep.p2 and rep.checked_pairs > 0 and rep.checked_triples > 0
    ne = build_model(ModelSpec("ne-lattice", 3, (0, 6), {}, (0, 1, 2)))
    assert check_planarity(ne, [0, 1, 2], ne.slice(3)).planar
    bd = build_model(ModelSpec("birth-death", 3, (-4, 8), {"up": "1/3", "down": "2/3"}, (0, 2, 4)))
    assert check_planarity(bd, [0, 2, 4], bd.slice(3)).planar


def test_teleport_edge_breaks_consecutive_collisions():
    # the outer walkers meet at (1, 1) while the middle one sits at (1, 0) -> (3, 1)
    edges = [((0, 0), (1, 1), H), ((0, 0), (0, 1), H),
             ((1, 0), (3, 1), 1),
             ((2, 0), (1, 1), H), ((2, 0), (2, 1), H)]
    G = SpacetimeGraph(edges)
    rep = check_planarity(G, [0, 1, 2], G.slice(1))
    assert not rep.p2
    p, q, r, v = rep.p2_counterexample
    assert v == (1, 1) and q == ((1, 0), (3, 1))


def test_lazy_walk_is_not_planar():
    # with holding, two walkers can swap places without sharing a vertex
    G = build_model(ModelSpec("birth-death", 1, (-2, 3), {"up": "1/3", "down": "1/3"}, (0, 1)))
    assert not check_planarity(G, [0, 1], G.slice(1)).p1
