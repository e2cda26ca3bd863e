"""Interval labels, junctions, the label order, and final states.

Actors (initial particles) are the unit intervals ``I_j = [j, j+1]`` for
``j = 1..n``.  A coalescence of ``[a, b]`` with ``[b, c]`` produces the heir
``[a, c]`` and the ghost labelled by the dissolved junction ``b``.  Under the
min identification every role and every actor is an integer in ``1..n``
(``[a, b] -> a``, ``g -> g``), which is how bijections become permutations.
"""
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Union


@dataclass(frozen=True)
class Interval:
    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("interval endpoints must be integers")
        if not 1 <= self.a < self.b:
            raise ValueError(f"empty or out-of-range interval [{self.a},{self.b}]")

    @property
    def rank(self):
        return self.a

    def contains_junction(self, g):
        return self.a < g < self.b

    def __str__(self):
        return f"[{self.a},{self.b}]"


@dataclass(frozen=True)
class Junction:
    g: int

    def __post_init__(self):
        if not isinstance(self.g, int) or self.g < 2:
            raise ValueError(f"junction must be an integer >= 2, got {self.g!r}")

    @property
    def rank(self):
        return self.g

    def __str__(self):
        return str(self.g)


Label = Union[Interval, Junction]


def actor(j):
    """The unit interval ``I_j``."""
    return Interval(j, j + 1)


def rank(label):
    return label.rank


def label_less(u, v):
    """Strict label order ``u ◁ v``.

    ``[a,b] ◁ g`` iff ``b <= g``; ``g ◁ [a,b]`` iff ``g <= a``; junctions
    compare as integers and disjoint intervals through the junctions between
    them.  A junction strictly inside an interval is incomparable with it
    (both directions are False).  Distinct overlapping intervals raise.
    """
    if isinstance(u, Interval) and isinstance(v, Junction):
        return u.b <= v.g
    if isinstance(u, Junction) and isinstance(v, Interval):
        return u.g <= v.a
    if isinstance(u, Junction) and isinstance(v, Junction):
        return u.g < v.g
    if u == v:
        return False
    if u.b <= v.a:
        return True
    if v.b <= u.a:
        return False
    raise ValueError(f"overlapping intervals {u} and {v} are not comparable")


def label_leq(u, v):
    return u == v or label_less(u, v)


def heir_intervals(n, ghosts):
    """Maximal subintervals of ``[1, n+1]`` that avoid the ghost junctions."""
    cuts = [1] + sorted(ghosts_complement(n, ghosts)) + [n + 1]
    return tuple(Interval(a, b) for a, b in zip(cuts, cuts[1:]))


def ghosts_complement(n, ghosts):
    return set(range(2, n + 1)) - set(ghosts)


def roles_in_rank_order(n, ghosts):
    roles = list(heir_intervals(n, ghosts)) + [Junction(g) for g in ghosts]
    roles.sort(key=rank)
    return tuple(roles)


def _parse_role_key(key, by_rank):
    if isinstance(key, (Interval, Junction)):
        return key
    if isinstance(key, int) and not isinstance(key, bool):
        try:
            return by_rank[key]
        except KeyError:
            raise ValueError(f"no role of rank {key}") from None
    raise TypeError(f"cannot interpret {key!r} as a role")


@dataclass(frozen=True, eq=False)
class FinalState:
    """Ghost set, derived heirs, and (some or all) final positions.

    ``positions`` may be a sequence indexed by rank (``positions[r-1]`` is
    the space coordinate of the role of rank ``r``) or a mapping keyed by
    roles or ranks.  Ghost signs are derived from positions when the ghost
    and its heir are both placed, otherwise they must come from ``signs``.
    """

    n: int
    ghosts: frozenset
    positions: Mapping = None
    signs: Mapping = None

    def __init__(self, n, ghosts=(), positions=None, signs=None):
        if n < 1:
            raise ValueError("n must be >= 1")
        ghosts = frozenset(int(g) for g in ghosts)
        bad = [g for g in ghosts if not 2 <= g <= n]
        if bad:
            raise ValueError(f"ghost junctions out of range 2..{n}: {sorted(bad)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "ghosts", ghosts)
        roles = roles_in_rank_order(n, ghosts)
        by_rank = {r.rank: r for r in roles}

        pos = {}
        if positions is not None:
            if isinstance(positions, Mapping):
                items = positions.items()
            else:
                positions = list(positions)
                if len(positions) != n:
                    raise ValueError(f"expected {n} positions in rank order")
                items = zip(range(1, n + 1), positions)
            for key, y in items:
                role = _parse_role_key(key, by_rank)
                if role not in by_rank.values():
                    raise ValueError(f"{role} is not a role of this final state")
                pos[role] = int(y)

        heirs = [r for r in roles if isinstance(r, Interval)]
        placed = [pos[h] for h in heirs if h in pos]
        if len(placed) == len(heirs) and any(p >= q for p, q in zip(placed, placed[1:])):
            raise ValueError("heir positions must be strictly increasing in label order")

        sg = {}
        for g in sorted(ghosts):
            h = _heir_of(heirs, g)
            if Junction(g) in pos and h in pos:
                sg[g] = 1 if pos[Junction(g)] <= pos[h] else -1
        if signs is not None:
            for key, s in signs.items():
                g = key.g if isinstance(key, Junction) else int(key)
                s = _parse_sign(s)
                if g not in ghosts:
                    raise ValueError(f"sign given for non-ghost {g}")
                if g in sg and sg[g] != s:
                    raise ValueError(f"sign of ghost {g} contradicts its position")
                sg[g] = s
        missing = ghosts - set(sg)
        if missing:
            raise ValueError(f"no sign or position for ghosts {sorted(missing)}")
        object.__setattr__(self, "positions", MappingProxyType(pos))
        object.__setattr__(self, "signs", MappingProxyType(dict(sorted(sg.items()))))

    @property
    def heirs(self):
        return heir_intervals(self.n, self.ghosts)

    @property
    def roles(self):
        return roles_in_rank_order(self.n, self.ghosts)

    @property
    def actors(self):
        return tuple(actor(j) for j in range(1, self.n + 1))

    @property
    def fully_placed(self):
        return len(self.positions) == self.n

    def heir_of(self, g):
        g = g.g if isinstance(g, Junction) else g
        if g not in self.ghosts:
            raise KeyError(f"{g} is not a ghost of this final state")
        return _heir_of(self.heirs, g)

    def ghost_sign(self, g):
        g = g.g if isinstance(g, Junction) else g
        return self.signs[g]

    @property
    def sign(self):
        s = 1
        for v in self.signs.values():
            s *= v
        return s

    def position(self, role):
        return self.positions[role]

    def position_tuple(self):
        """Positions in rank order (requires a fully placed state)."""
        return tuple(self.positions[r] for r in self.roles)

    def _key(self):
        return (self.n, tuple(sorted(self.ghosts)),
                tuple(sorted((r.rank, y) for r, y in self.positions.items())),
                tuple(self.signs.items()))

    def __eq__(self, other):
        return isinstance(other, FinalState) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        pos = ", ".join(f"{r}: {y}" for r, y in sorted(self.positions.items(),
                                                        key=lambda kv: kv[0].rank))
        signs = ", ".join(f"{g}: {'+' if s > 0 else '-'}" for g, s in self.signs.items())
        return f"FinalState(n={self.n}, ghosts={sorted(self.ghosts)}, positions={{{pos}}}, signs={{{signs}}})"


def _heir_of(heirs, g):
    for h in heirs:
        if h.contains_junction(g):
            return h
    raise KeyError(g)


def _parse_sign(s):
    if s in (1, "+", "+1"):
        return 1
    if s in (-1, "-", "-1"):
        return -1
    raise ValueError(f"bad ghost sign {s!r}")


def heir_of(state, g):
    return state.heir_of(g)


def ghost_sign(state, g):
    return state.ghost_sign(g)


def state_sign(state):
    return state.sign
