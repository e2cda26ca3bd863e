import pytest

from ghostcoal.labels import (FinalState, Interval, Junction, actor, heir_intervals, heir_of,
                              label_leq, label_less, rank, roles_in_rank_order, state_sign)


def test_label_validation():
    with pytest.raises(ValueError):
        Interval(2, 2)
    with pytest.raises(ValueError):
        Junction(1)


def test_chain_of_unit_intervals_and_junctions():
    chain = [actor(1), Junction(2), actor(2), Junction(3), actor(3)]
    for u, v in zip(chain, chain[1:]):
        assert label_less(u, v)
        assert not label_less(v, u)


def test_label_order_examples():
    assert label_less(Interval(1, 3), Junction(3))
    assert not label_less(Junction(2), Interval(1, 3))
    # a junction inside an interval is incomparable with it
    assert not label_less(Interval(1, 3), Junction(2))
    assert label_leq(Junction(2), Junction(2))


def test_overlapping_intervals_are_a_usage_error():
    with pytest.raises(ValueError):
        label_less(Interval(1, 3), Interval(2, 4))


def test_rank_min_identification():
    assert [rank(r) for r in (Interval(1, 4), Junction(2), Junction(3), Interval(4, 5))] == [1, 2, 3, 4]
    assert rank(actor(5)) == 5


def test_roles_in_rank_order():
    assert roles_in_rank_order(4, {2, 3}) == (Interval(1, 4), Junction(2), Junction(3), Interval(4, 5))


@pytest.mark.parametrize("n,ghosts,g,heir", [
    (4, {2, 3}, 2, Interval(1, 4)),
    (4, {2, 3}, 3, Interval(1, 4)),
    (2, {2}, 2, Interval(1, 3)),
    (3, {2}, 2, Interval(1, 3)),
])
def test_heir_of(n, ghosts, g, heir):
    s = FinalState(n, ghosts, signs={h: 1 for h in ghosts})
    assert heir_of(s, g) == heir


def test_heir_of_non_ghost():
    s = FinalState(3, {2}, signs={2: 1})
    with pytest.raises(KeyError):
        s.heir_of(3)


def test_heirs_partition():
    for n in range(1, 7):
        for mask in range(2 ** (n - 1)):
            ghosts = {g for g in range(2, n + 1) if mask >> (g - 2) & 1}
            hs = heir_intervals(n, ghosts)
            assert hs[0].a == 1 and hs[-1].b == n + 1
            assert all(a.b == b.a for a, b in zip(hs, hs[1:]))
            assert len(hs) + len(ghosts) == n


def test_sign_from_positions_and_tie_rule():
    s = FinalState(3, {2, 3}, {Interval(1, 4): 2, Junction(2): 0, Junction(3): 4})
    assert s.ghost_sign(2) == 1 and s.ghost_sign(3) == -1
    assert state_sign(s) == -1
    tie = FinalState(2, {2}, [0, 0])
    assert tie.ghost_sign(2) == 1
    left = FinalState(3, {2, 3}, [5, 1, 2])
    assert left.sign == 1


def test_positions_by_rank_sequence():
    s = FinalState(4, {3}, [0, 2, 1, 9])
    assert s.position(Interval(2, 4)) == 2
    assert s.position(Junction(3)) == 1
    assert s.position_tuple() == (0, 2, 1, 9)


def test_heir_positions_must_increase():
    with pytest.raises(ValueError):
        FinalState(2, (), [2, 0])
    with pytest.raises(ValueError):
        FinalState(2, (), [0, 0])


def test_signs_without_positions():
    s = FinalState(3, {2, 3}, signs={2: "+", 3: "-"})
    assert s.signs == {2: 1, 3: -1}
    assert not s.fully_placed
    with pytest.raises(ValueError):
        FinalState(3, {2})
    with pytest.raises(ValueError):
        FinalState(2, {2}, [0, 2], signs={2: 1})


def test_equality_and_hash():
    a = FinalState(2, {2}, [0, 2])
    b = FinalState(2, [2], {Interval(1, 3): 0, Junction(2): 2})
    assert a == b and hash(a) == hash(b)
