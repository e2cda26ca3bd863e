import itertools
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from ghostcoal.exact import det, perm_sign
from ghostcoal.ghost_formula import (bijection_sign, build_ghost_matrix, candidate_bijections,
                                     coalescence_Z, extracted_det, is_candidate, symbolic_Z)
from ghostcoal.ghostfree import heir_mass, normal_cdf
from ghostcoal.instances import final_sites, ghost_sets
from ghostcoal.involution import segment_swap
from ghostcoal.labels import FinalState, Interval, Junction, label_less, roles_in_rank_order
from ghostcoal.oracle import enumerate_castings, interacting_dp
from ghostcoal.spacetime import LatticeKernels, ModelSpec, build_model

SLOW = settings(max_examples=40, deadline=None)


def _model(T, n, up=Fraction(1, 2)):
    xs = tuple(range(0, 2 * n, 2))
    spec = ModelSpec("checkerboard-srw", T, (-T, 2 * n - 2 + T), {"up": up}, xs)
    return build_model(spec), xs


@st.composite
def placed_states(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    T = draw(st.integers(1, 3 if n <= 4 else 2))
    G, xs = _model(T, n)
    ghosts = draw(st.sets(st.integers(2, n)) if n > 1 else st.just(set()))
    roles = roles_in_rank_order(n, ghosts)
    sites = final_sites(xs, G)
    k = sum(isinstance(r, Interval) for r in roles)
    heirs = iter(sorted(draw(st.lists(st.sampled_from(sites), min_size=k, max_size=k, unique=True))))
    pos = [next(heirs) if isinstance(r, Interval) else draw(st.sampled_from(sites)) for r in roles]
    return G, xs, FinalState(n, ghosts, pos)


@SLOW
@given(placed_states())
def test_three_evaluations_of_Z_agree(case):
    G, xs, s = case
    M = build_ghost_matrix(xs, s, G)
    assert coalescence_Z(xs, s, G) == symbolic_Z(M, s.signs) == extracted_det(M, s.signs)


@SLOW
@given(placed_states(max_n=4))
def test_candidate_list_is_exactly_the_constraint_set(case):
    _, _, s = case
    brute = [pi for pi in itertools.permutations(s.roles) if is_candidate(pi, s)]
    assert sorted(map(str, brute)) == sorted(map(str, candidate_bijections(s)))


@SLOW
@given(placed_states(max_n=3))
def test_segment_swap_is_an_involution_flipping_sign(case):
    G, xs, s = case
    for c in enumerate_castings(xs, s, G)[:20]:
        for I, J in itertools.combinations(range(s.n), 2):
            common = sorted(set(c.paths[I]) & set(c.paths[J]))
            for v in common[:2]:
                d = segment_swap(c, I, J, v)
                assert segment_swap(d, I, J, v) == c
                assert d.weight(G) == c.weight(G)
                assert bijection_sign(d.pi) == -bijection_sign(c.pi)


@SLOW
@given(st.integers(1, 3), st.integers(1, 3), st.fractions(0, 1, max_denominator=5))
def test_heir_law_is_a_probability_and_matches_dynamics(n, T, up):
    G, xs = _model(T, n, up)
    K = LatticeKernels(G)
    sites = final_sites(xs, G)
    total = Fraction(0)
    for gs in ghost_sets(n):
        dp = interacting_dp(G, xs, gs)
        for ys in itertools.combinations(sites, n - len(gs)):
            m = heir_mass(xs, gs, ys, K)
            assert m == dp.get(ys, 0)
            total += m
    assert total == 1


@given(st.integers(1, 7), st.data())
def test_rank_order_of_roles(n, data):
    ghosts = data.draw(st.sets(st.integers(2, n)) if n > 1 else st.just(set()))
    roles = roles_in_rank_order(n, ghosts)
    assert [r.rank for r in roles] == list(range(1, n + 1))
    for u, v in itertools.combinations(roles, 2):
        inside = isinstance(u, Interval) and isinstance(v, Junction) and u.contains_junction(v.g)
        if inside:
            assert not label_less(u, v) and not label_less(v, u)
        else:
            assert label_less(u, v) and not label_less(v, u)


@given(st.permutations(range(6)), st.permutations(range(6)))
def test_perm_sign_is_multiplicative(p, q):
    pq = [p[q[i]] for i in range(6)]
    assert perm_sign(pq) == perm_sign(p) * perm_sign(q)


@given(st.permutations(range(5)), st.integers(0, 4), st.integers(0, 4))
def test_transposition_flips_sign(p, i, j):
    if i == j:
        return
    q = list(p)
    q[i], q[j] = q[j], q[i]
    assert perm_sign(q) == -perm_sign(p)


@given(st.lists(st.lists(st.fractions(-3, 3, max_denominator=4), min_size=4, max_size=4),
                min_size=4, max_size=4))
def test_det_matches_leibniz(rows):
    leibniz = sum(perm_sign(p) * rows[0][p[0]] * rows[1][p[1]] * rows[2][p[2]] * rows[3][p[3]]
                  for p in itertools.permutations(range(4)))
    assert det(rows) == leibniz


@given(st.floats(-12, 12), st.floats(-12, 12))
def test_normal_cdf_monotone_and_symmetric(a, b):
    if a > b:
        a, b = b, a
    assert normal_cdf(a) <= normal_cdf(b)
    assert abs(normal_cdf(a) + normal_cdf(-a) - 1) < 1e-15
