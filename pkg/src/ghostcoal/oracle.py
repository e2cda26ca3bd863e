"""Brute-force oracles, kept independent of the determinant machinery.

* performances by forward simulation of coalescing bundles, ghost paths
  enumerated afterwards;
* the interacting chain as an exact dynamic program, with or without
  ghosts carried along as independent walkers;
* candidate castings by path enumeration;
* vertex-disjoint path tuples for the classical LGV value.

Merge rule everywhere: particles landing on one vertex merge, at any time
including the horizon.  A simultaneous multi-way meeting dissolves all the
junctions of the consecutive block at that vertex.
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List

from .ghost_formula import candidate_bijections
from .involution import Casting, Performance
from .labels import Interval, Junction, roles_in_rank_order, actor
from .spacetime import CapExceeded, ModelError, as_vertex, enumerate_paths

DEFAULT_CAP = 10**6


class ConsecutivityViolation(RuntimeError):
    """Non-adjacent bundles met without the ones between them."""


@dataclass
class OracleReport:
    description: str
    count: int = 0
    total: Fraction = Fraction(0)
    items: List[Any] = field(default_factory=list)

    def add(self, item, weight, keep=True):
        self.count += 1
        self.total += weight
        if keep:
            self.items.append((item, weight))


def _merge(bundles):
    """Group ``(interval, vertex)`` bundles by vertex; returns new bundles and dissolved junctions."""
    by_vertex = {}
    for iv, v in bundles:
        by_vertex.setdefault(v, []).append(iv)
    out = []
    dissolved = []
    for v, ivs in by_vertex.items():
        ivs.sort(key=lambda i: i.a)
        for left, right in zip(ivs, ivs[1:]):
            if left.b != right.a:
                raise ConsecutivityViolation(f"{left} and {right} meet at {v} without the interval between")
            dissolved.append((left.b, v))
        out.append((Interval(ivs[0].a, ivs[-1].b), v))
    out.sort(key=lambda b: b[1][0])
    return out, dissolved


def _forests(xs, G, cap):
    """Yield ``(edges, collisions, bundles, weight)`` for every genealogy forest."""
    start = [(actor(j + 1), x) for j, x in enumerate(xs)]
    count = [0]

    def step(bundles, edges, collisions, weight, t):
        if t == G.T:
            count[0] += 1
            if count[0] > cap:
                raise CapExceeded(f"more than {cap} genealogy forests")
            yield edges, collisions, bundles, weight
            return
        choices = [G.successors(v) for _, v in bundles]
        for moves in itertools.product(*choices):
            w = weight
            new_edges = list(edges)
            moved = []
            for (iv, v), (u, wt) in zip(bundles, moves):
                w *= wt
                new_edges.append((v, u))
                moved.append((iv, u))
            if w == 0:
                continue
            merged, dissolved = _merge(moved)
            yield from step(merged, new_edges, collisions + dissolved, w, t + 1)

    yield from step(start, [], [], Fraction(1), 0)


def _ghost_path_choices(G, c, target=None, cap=DEFAULT_CAP):
    if target is not None:
        return enumerate_paths(G, c, target, cap)
    out = []
    for y in G.slice(G.T):
        out.extend(enumerate_paths(G, c, y, cap))
    return out


def _performance(edges, collisions, gammas):
    return Performance(frozenset(edges), tuple(sorted(collisions)),
                       tuple(sorted(gammas)))


def enumerate_performances(xs, state, G, cap=DEFAULT_CAP, keep=True):
    """Every performance with final state ``state`` and its weight."""
    xs = [as_vertex(x, 0) for x in xs]
    ghosts = state.ghosts
    heirs = {h: (state.positions[h], G.T) for h in state.heirs}
    report = OracleReport(f"performances n={state.n} ghosts={sorted(ghosts)} "
                          f"positions={state.position_tuple()}")
    for edges, collisions, bundles, w in _forests(xs, G, cap):
        if {g for g, _ in collisions} != ghosts:
            continue
        if dict(bundles) != heirs:
            continue
        where = dict(collisions)
        options = [[(g, p) for p in _ghost_path_choices(
                       G, where[g], (state.positions[Junction(g)], G.T), cap)]
                   for g in sorted(ghosts)]
        for gammas in itertools.product(*options):
            gw = w
            for _, p in gammas:
                for a, b in zip(p, p[1:]):
                    gw *= G.weight(a, b)
            if report.count >= cap:
                raise CapExceeded(f"more than {cap} performances")
            report.add(_performance(edges, collisions, gammas), gw, keep)
    return report


def enumerate_all_performances(xs, G, cap=DEFAULT_CAP):
    """All performances of all final states, bucketed.

    Returns ``{(ghosts, positions_in_rank_order): [(performance, weight), ...]}``.
    """
    xs = [as_vertex(x, 0) for x in xs]
    n = len(xs)
    out = {}
    total = 0
    for edges, collisions, bundles, w in _forests(xs, G, cap):
        ghosts = frozenset(g for g, _ in collisions)
        roles = roles_in_rank_order(n, ghosts)
        heir_pos = {iv: v[0] for iv, v in bundles}
        where = dict(collisions)
        options = [[(g, p) for p in _ghost_path_choices(G, where[g], None, cap)]
                   for g in sorted(ghosts)]
        for gammas in itertools.product(*options):
            gw = w
            for _, p in gammas:
                for a, b in zip(p, p[1:]):
                    gw *= G.weight(a, b)
            end = {Junction(g): p[-1][0] for g, p in gammas}
            pos = tuple(heir_pos[r] if isinstance(r, Interval) else end[r] for r in roles)
            total += 1
            if total > cap:
                raise CapExceeded(f"more than {cap} performances")
            out.setdefault((ghosts, pos), []).append(
                (_performance(edges, collisions, gammas), gw))
    return out


def _require_probabilistic(G):
    if not G.probabilistic:
        raise ModelError("the interacting chain needs a probabilistic model")


def interacting_distribution(G, xs):
    """Exact law of ``(ghost set, heir positions)`` for the coalescing system.

    Heir positions are space coordinates listed in label order.
    """
    _require_probabilistic(G)
    xs = [as_vertex(x, 0) for x in xs]
    dist = {(tuple((actor(j + 1), x) for j, x in enumerate(xs)), frozenset()): Fraction(1)}
    for _ in range(G.T):
        nxt = {}
        for (bundles, ghosts), p in dist.items():
            choices = [G.successors(v) for _, v in bundles]
            for moves in itertools.product(*choices):
                q = p
                moved = []
                for (iv, _), (u, w) in zip(bundles, moves):
                    q *= w
                    moved.append((iv, u))
                if not q:
                    continue
                merged, dissolved = _merge(moved)
                key = (tuple(merged), ghosts | {g for g, _ in dissolved})
                nxt[key] = nxt.get(key, 0) + q
        dist = nxt
    out = {}
    for (bundles, ghosts), p in dist.items():
        key = (ghosts, tuple(v[0] for _, v in bundles))
        out[key] = out.get(key, 0) + p
    return out


def interacting_dp(G, xs, ghosts):
    """Heir-position law restricted to one coalescence pattern.

    Returns ``{heir_positions: probability}``; heir positions are a tuple in
    label order (a bare integer is not unwrapped even for one heir).
    """
    ghosts = frozenset(ghosts)
    return {y: p for (gs, y), p in interacting_distribution(G, xs).items() if gs == ghosts}


def interacting_distribution_with_ghosts(G, xs):
    """Law of ``(ghost set, all role positions in rank order)``.

    A ghost is born at its collision vertex and then walks independently,
    which under the coupling is the discarded trajectory.
    """
    _require_probabilistic(G)
    xs = [as_vertex(x, 0) for x in xs]
    n = len(xs)
    init = (tuple((actor(j + 1), x) for j, x in enumerate(xs)), ())
    dist = {init: Fraction(1)}
    for _ in range(G.T):
        nxt = {}
        for (bundles, walkers), p in dist.items():
            choices = [G.successors(v) for _, v in bundles] + \
                      [G.successors(v) for _, v in walkers]
            k = len(bundles)
            for moves in itertools.product(*choices):
                q = p
                for _, w in moves:
                    q *= w
                if not q:
                    continue
                moved = [(iv, u) for (iv, _), (u, _) in zip(bundles, moves[:k])]
                ghosts = [(g, u) for (g, _), (u, _) in zip(walkers, moves[k:])]
                merged, dissolved = _merge(moved)
                key = (tuple(merged), tuple(sorted(ghosts + dissolved)))
                nxt[key] = nxt.get(key, 0) + q
        dist = nxt
    out = {}
    for (bundles, walkers), p in dist.items():
        ghosts = frozenset(g for g, _ in walkers)
        place = {iv: v[0] for iv, v in bundles}
        place.update({Junction(g): v[0] for g, v in walkers})
        pos = tuple(place[r] for r in roles_in_rank_order(n, ghosts))
        key = (ghosts, pos)
        out[key] = out.get(key, 0) + p
    return out


def enumerate_castings(xs, state, G, cap=DEFAULT_CAP):
    """All candidate castings ``(pi, paths)`` for ``state``."""
    xs = [as_vertex(x, 0) for x in xs]
    ys = {r: (state.positions[r], G.T) for r in state.roles}
    cache = {}

    def paths(x, y):
        if (x, y) not in cache:
            cache[(x, y)] = enumerate_paths(G, x, y, cap)
        return cache[(x, y)]

    out = []
    for pi in candidate_bijections(state):
        lists = [paths(x, ys[f]) for x, f in zip(xs, pi)]
        for combo in itertools.product(*lists):
            if len(out) >= cap:
                raise CapExceeded(f"more than {cap} castings")
            out.append(Casting(pi, combo))
    return out


def lgv_enumerate(xs, ys, G, cap=DEFAULT_CAP, keep=False):
    """Weight of pairwise vertex-disjoint path tuples ``x_i -> y_i``."""
    xs = [as_vertex(x, 0) for x in xs]
    ys = [as_vertex(y, G.T) for y in ys]
    report = OracleReport(f"disjoint tuples {[x[0] for x in xs]} -> {[y[0] for y in ys]}")
    lists = [enumerate_paths(G, x, y, cap) for x, y in zip(xs, ys)]
    seen = 0
    for combo in itertools.product(*lists):
        seen += 1
        if seen > cap:
            raise CapExceeded(f"more than {cap} path tuples")
        sets = [set(p) for p in combo]
        if any(not a.isdisjoint(b) for a, b in itertools.combinations(sets, 2)):
            continue
        w = Fraction(1)
        for p in combo:
            for a, b in zip(p, p[1:]):
                w *= G.weight(a, b)
        report.add(combo, w, keep)
    return report
