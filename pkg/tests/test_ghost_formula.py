from fractions import Fraction
import itertools

import pytest

from ghostcoal.exact import det
from ghostcoal.ghost_formula import (SYMBOLIC_MAX_N, build_ghost_matrix, candidate_bijections,
                                     coalescence_Z, extracted_det, is_candidate, source_sign,
                                     symbolic_determinant, symbolic_Z, weight_matrix)
from ghostcoal.instances import checkerboard
from ghostcoal.labels import FinalState, Interval, Junction
from ghostcoal.spacetime import path_weight_sum

H = Interval(1, 3)


def test_worked_matrix(worked):
    s = FinalState(2, {2}, {H: 0, Junction(2): 2})
    M = build_ghost_matrix(worked.xs, s, worked.G)
    assert [[e.coef for e in row] for row in M.entries] == [[Fraction(1, 2), Fraction(-1, 4)],
                                                            [Fraction(1, 4), Fraction(1, 2)]]
    assert [[e.var for e in row] for row in M.entries] == [[None, (2, -1)], [None, (2, 1)]]
    assert symbolic_determinant(M) == {((2, -1),): Fraction(1, 16), ((2, 1),): Fraction(1, 4)}


def test_worked_Z(worked):
    G, xs = worked.G, worked.xs
    right = FinalState(2, {2}, {H: 0, Junction(2): 2})
    assert right.ghost_sign(2) == -1
    assert coalescence_Z(xs, right, G) == Fraction(1, 16)
    tie = FinalState(2, {2}, {H: 0, Junction(2): 0})
    assert coalescence_Z(xs, tie, G) == Fraction(2, 16)
    left = FinalState(2, {2}, {H: 0, Junction(2): -2})
    total = sum(coalescence_Z(xs, s, G) for s in (right, tie, left))
    assert total == Fraction(3, 16)


def test_three_walker_staircase():
    inst = checkerboard(4, (0, 2, 4))
    s = FinalState(3, {2}, {Interval(1, 3): 0, Junction(2): 2, Interval(3, 4): 4})
    M = build_ghost_matrix(inst.xs, s, inst.G)
    col = [row[1] for row in M.entries]
    assert col[0].var == (2, -1) and col[0].coef <= 0
    assert [e.var for e in col[1:]] == [(2, 1), (2, 1)]


def _p(G, x, y):
    return path_weight_sum(G, (x, 0), (y, G.T))


def _det2(a, b, c, d):
    return a * d - b * c


def test_cofactor_expansions_three_walkers():
    inst = checkerboard(4, (0, 2, 4))
    G, (x1, x2, x3) = inst.G, inst.xs
    h1, h2 = 0, 4
    for g in (-2, 0, 2, 6):
        s = FinalState(3, {2}, {Interval(1, 3): h1, Junction(2): g, Interval(3, 4): h2})
        if g <= h1:
            want = (_p(G, x2, g) * _det2(_p(G, x1, h1), _p(G, x1, h2), _p(G, x3, h1), _p(G, x3, h2))
                    - _p(G, x3, g) * _det2(_p(G, x1, h1), _p(G, x1, h2), _p(G, x2, h1), _p(G, x2, h2)))
        else:
            want = _p(G, x1, g) * _det2(_p(G, x2, h1), _p(G, x2, h2), _p(G, x3, h1), _p(G, x3, h2))
        M = build_ghost_matrix(inst.xs, s, G)
        assert symbolic_Z(M, s.signs) == want
        assert coalescence_Z(inst.xs, s, G) == want


def test_one_walker():
    inst = checkerboard(2, (0,))
    s = FinalState(1, (), [2])
    M = build_ghost_matrix(inst.xs, s, inst.G)
    assert M.n == 1 and M[0, 0].coef == Fraction(1, 4)
    assert symbolic_Z(M, {}) == coalescence_Z(inst.xs, s, inst.G) == Fraction(1, 4)


def test_source_sign():
    g2, g3 = Junction(2), Junction(3)
    assert source_sign((Interval(1, 4), g3, g2), 2) == 1
    assert source_sign((g2, Interval(1, 3), Interval(3, 4)), 2) == -1
    assert source_sign((Interval(1, 4), g3, g2), 3) == -1


def test_candidates_three_walker_example():
    s = FinalState(3, {2, 3}, signs={2: 1, 3: -1})
    h = Interval(1, 4)
    g2, g3 = Junction(2), Junction(3)
    got = candidate_bijections(s)
    assert set(got) == {(h, g3, g2), (g3, g2, h), (g3, h, g2)}
    ranks = [tuple(f.rank for f in pi) for pi in got]
    assert ranks == sorted(ranks)


def test_candidates_without_ghosts_are_everything():
    s = FinalState(3, (), signs={})
    assert len(candidate_bijections(s)) == 6


def test_single_candidate_for_left_ghost():
    s = FinalState(2, {2}, signs={2: 1})
    assert candidate_bijections(s) == [(H, Junction(2))]


def test_candidates_match_brute_force():
    for n in range(1, 6):
        for mask in range(2 ** (n - 1)):
            ghosts = sorted(g for g in range(2, n + 1) if mask >> (g - 2) & 1)
            for signs in itertools.product((1, -1), repeat=len(ghosts)):
                s = FinalState(n, ghosts, signs=dict(zip(ghosts, signs)))
                brute = {p for p in itertools.permutations(s.roles) if is_candidate(p, s)}
                assert set(candidate_bijections(s)) == brute


def test_no_ghost_Z_is_plain_determinant(worked):
    s = FinalState(2, (), [-2, 0])
    W = weight_matrix(worked.xs, s, worked.G)
    assert coalescence_Z(worked.xs, s, worked.G) == det(W) == Fraction(1, 16)


def test_extracted_det_agrees(three):
    s = FinalState(3, {2, 3}, {Interval(1, 4): 2, Junction(2): 0, Junction(3): 4})
    M = build_ghost_matrix(three.xs, s, three.G)
    assert extracted_det(M, s.signs) == symbolic_Z(M, s.signs) == coalescence_Z(three.xs, s, three.G)


def test_detail_contributions_sum(three):
    s = FinalState(3, {2, 3}, {Interval(1, 4): 2, Junction(2): 0, Junction(3): 4})
    z, parts = coalescence_Z(three.xs, s, three.G, detail=True)
    assert len(parts) == 3 and sum(c for _, c in parts) == z


def test_errors(worked):
    s = FinalState(2, {2}, signs={2: 1})
    with pytest.raises(ValueError):
        build_ghost_matrix(worked.xs, s, worked.G)
    s = FinalState(2, {2}, [0, 2])
    with pytest.raises(ValueError):
        build_ghost_matrix((0,), s, worked.G)
    with pytest.raises(ValueError):
        build_ghost_matrix((2, 0), s, worked.G)


def test_symbolic_cap():
    inst = checkerboard(1, tuple(range(0, 2 * (SYMBOLIC_MAX_N + 1), 2)))
    n = SYMBOLIC_MAX_N + 1
    s = FinalState(n, (), list(range(-1, 2 * n - 1, 2)))
    M = build_ghost_matrix(inst.xs, s, inst.G)
    with pytest.raises(ValueError):
        symbolic_determinant(M)
