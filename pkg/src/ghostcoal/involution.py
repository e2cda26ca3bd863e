"""Castings, attribution, rehearsal and the sign-reversing involution.

A casting pairs a bijection ``pi`` (actor index -> role) with one
non-interacting path per actor.  Actors are addressed by 0-based index:
index ``j`` is the unit interval ``I_{j+1}``.

A performance is stored role-based: the set of genealogy-forest edges, the
collision vertex of each ghost, and each ghost path.  Two performances
are equal iff these three pieces agree.
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .ghost_formula import bijection_sign, is_candidate
from .labels import Interval, Junction, actor, heir_intervals, label_less
from .spacetime import path_weight, vertex_key


class RehearsalError(RuntimeError):
    """Rehearsal met a situation a planar instance cannot produce."""


class NotCandidate(ValueError):
    pass


@dataclass(frozen=True)
class Casting:
    pi: tuple
    paths: tuple

    def __post_init__(self):
        if len(self.pi) != len(self.paths):
            raise ValueError("one path per actor required")

    @property
    def n(self):
        return len(self.pi)

    @property
    def sign(self):
        return bijection_sign(self.pi)

    def weight(self, G):
        w = Fraction(1)
        for p in self.paths:
            w *= path_weight(G, p)
        return w

    def check_endpoints(self, xs, state, T):
        for j, (f, p) in enumerate(zip(self.pi, self.paths)):
            if p[0] != xs[j] or p[-1] != (state.positions[f], T):
                raise ValueError(f"path of actor {j + 1} has wrong endpoints")


@dataclass(frozen=True)
class Performance:
    edges: frozenset
    collisions: tuple
    ghost_paths: tuple

    def weight(self, G):
        w = Fraction(1)
        for u, v in self.edges:
            w *= G.weight(u, v)
        for _, path in self.ghost_paths:
            w *= path_weight(G, path)
        return w

    def collision_vertex(self, g):
        return dict(self.collisions)[g]

    def labels(self, xs):
        """Vertex labels ``I_v`` of the genealogy forest as ``{v: Interval}``.

        Returns ``None`` for a vertex whose label is not an interval, which a
        planar instance never produces.
        """
        parent = dict(self.edges)
        members = {}
        for j, x in enumerate(xs):
            v = x
            while True:
                members.setdefault(v, set()).add(j + 1)
                if v not in parent:
                    break
                v = parent[v]
        out = {}
        for v, js in members.items():
            lo, hi = min(js), max(js)
            out[v] = Interval(lo, hi + 1) if len(js) == hi - lo + 1 else None
        return out


@dataclass(frozen=True)
class Success:
    performance: Performance
    trace: tuple = ()

    ok = True


@dataclass(frozen=True)
class Failure:
    partner: Casting
    crossing: tuple
    trace: tuple = ()

    ok = False


def segment_swap(c, I, J, v):
    """Exchange the suffixes of actors ``I`` and ``J`` after the shared vertex ``v``."""
    p, q = c.paths[I], c.paths[J]
    try:
        a, b = p.index(v), q.index(v)
    except ValueError:
        raise ValueError(f"vertex {v} is not on both paths") from None
    paths = list(c.paths)
    paths[I] = p[:a] + q[b:]
    paths[J] = q[:b] + p[a:]
    pi = list(c.pi)
    pi[I], pi[J] = pi[J], pi[I]
    return Casting(tuple(pi), tuple(paths))


def first_intersection(p, q, key):
    common = set(p).intersection(q)
    return min(common, key=key) if common else None


def local_involution(c, state, I, J, extension="time-space"):
    """Swap ``I`` and ``J`` at their first intersection if the result is a candidate."""
    v = first_intersection(c.paths[I], c.paths[J], vertex_key(extension))
    if v is None:
        return c
    d = segment_swap(c, I, J, v)
    return d if is_candidate(d.pi, state) else c


def rehearse(c, state, extension="time-space"):
    """Scan crossings of active paths in time order.

    At the first crossing of the active set, between adjacent intervals
    ``L ◁ R`` meeting at junction ``g``, the crossing is valid iff one of
    them is destined for ghost ``g``; that path retires and its suffix
    becomes the ghost path.  A spurious crossing ends the scan with the
    segment-swapped partner.  Ties at one vertex go to the pair with the
    lexicographically smallest interval labels.

    The ``trace`` lists ``(actor_a, actor_b, vertex, valid)`` for every
    checked pair, in order.
    """
    if not is_candidate(c.pi, state):
        raise NotCandidate("rehearsal input is not a candidate casting")
    key = vertex_key(extension)
    n = c.n
    meet = {}
    for a, b in itertools.combinations(range(n), 2):
        v = first_intersection(c.paths[a], c.paths[b], key)
        if v is not None:
            meet[(a, b)] = v
    interval = {j: actor(j + 1) for j in range(n)}
    sigma = {j: c.pi[j] for j in range(n)}
    active = set(range(n))
    retired = {}
    collisions = []
    trace = []
    while True:
        best = None
        for (a, b), v in meet.items():
            if a in active and b in active:
                la, lb = interval[a], interval[b]
                left, right = (a, b) if la.a < lb.a else (b, a)
                k = (key(v), interval[left].a, interval[right].a)
                if best is None or k < best[0]:
                    best = (k, left, right, v)
        if best is None:
            break
        _, left, right, v = best
        L, R = interval[left], interval[right]
        if L.b != R.a:
            raise RehearsalError(f"first crossing at {v} is between non-adjacent {L} and {R}")
        g = Junction(L.b)
        if sigma[left] == g:
            ghost, survivor = left, right
        elif sigma[right] == g:
            ghost, survivor = right, left
        else:
            trace.append((left, right, v, False))
            partner = segment_swap(c, left, right, v)
            return Failure(partner, (L, R, v), tuple(trace))
        trace.append((left, right, v, True))
        active.discard(ghost)
        retired[ghost] = v
        collisions.append((g.g, v))
        interval[survivor] = Interval(L.a, R.b)
        del interval[ghost]
        del sigma[ghost]

    leftover = [j for j in active if isinstance(sigma[j], Junction)]
    if leftover:
        raise RehearsalError("ghost roles left unfilled with no crossings remaining")
    heirs = set(heir_intervals(n, state.ghosts))
    for j in active:
        if interval[j] not in heirs or sigma[j] != interval[j]:
            raise RehearsalError(f"survivor {interval[j]} is cast as {sigma[j]}")

    edges = set()
    ghost_paths = []
    for j, p in enumerate(c.paths):
        if j in retired:
            k = p.index(retired[j])
            prefix = p[:k + 1]
            ghost_paths.append((c.pi[j].g, p[k:]))
        else:
            prefix = p
        edges.update(zip(prefix, prefix[1:]))
    perf = Performance(frozenset(edges), tuple(sorted(collisions)), tuple(sorted(ghost_paths)))
    return Success(perf, tuple(trace))


def involution(c, state, extension="time-space"):
    out = rehearse(c, state, extension)
    return c if out.ok else out.partner


def attribute(perf, xs, state, extension="time-space", T=None):
    """Glue a performance into a casting by the swap principle.

    At a collision the ghost role goes to the right incoming interval when
    the ghost ends weakly left of its heir (sign ``+1``) and to the left
    one otherwise.  ``m > 2`` intervals meeting at one vertex are paired
    left to right, the running heir meeting the next interval.
    """
    key = vertex_key(extension)
    parent = dict(perf.edges)
    if len(parent) != len(perf.edges):
        raise ValueError("forest vertex with two outgoing tree edges")
    ghost_path = dict(perf.ghost_paths)
    collision = dict(perf.collisions)
    if set(ghost_path) != set(state.ghosts) or set(collision) != set(state.ghosts):
        raise ValueError("performance ghosts do not match the final state")

    n = state.n
    pi = [None] * n
    paths = [None] * n
    arrivals = {}
    for j, x in enumerate(xs):
        arrivals.setdefault(x, []).append((actor(j + 1), j, [x]))
    pending = set(arrivals)
    while pending:
        v = min(pending, key=key)
        pending.discard(v)
        bundle = sorted(arrivals.pop(v), key=lambda t: t[0].a)
        cur_int, cur_actor, cur_path = bundle[0]
        for nxt_int, nxt_actor, nxt_path in bundle[1:]:
            if cur_int.b != nxt_int.a:
                raise ValueError(f"non-consecutive intervals meet at {v}")
            g = cur_int.b
            if collision.get(g) != v:
                raise ValueError(f"junction {g} dissolves at {v}, not at its recorded vertex")
            gamma = ghost_path[g]
            if gamma[0] != v or gamma[-1][0] != state.positions[Junction(g)]:
                raise ValueError(f"ghost path of {g} inconsistent with the final state")
            if state.ghost_sign(g) > 0:
                ghost, surv = (nxt_actor, nxt_path), (cur_actor, cur_path)
            else:
                ghost, surv = (cur_actor, cur_path), (nxt_actor, nxt_path)
            pi[ghost[0]] = Junction(g)
            paths[ghost[0]] = tuple(ghost[1]) + tuple(gamma[1:])
            cur_int = Interval(cur_int.a, nxt_int.b)
            cur_actor, cur_path = surv
        if v in parent:
            u = parent[v]
            arrivals.setdefault(u, []).append((cur_int, cur_actor, cur_path + [u]))
            pending.add(u)
        else:
            if cur_int not in state.heirs or state.positions[cur_int] != v[0]:
                raise ValueError(f"tree root {v} does not match heir {cur_int}")
            if T is not None and v[1] != T:
                raise ValueError(f"tree root {v} is not on the final slice")
            pi[cur_actor] = cur_int
            paths[cur_actor] = tuple(cur_path)
    if any(p is None for p in pi):
        raise ValueError("performance does not cast every actor")
    return Casting(tuple(pi), tuple(paths))


def ghost_constraint_ok(pi, state):
    """Heir ordering (i) and the ghost constraint (G1)/(G2) for one bijection."""
    inv = {f: actor(j + 1) for j, f in enumerate(pi)}
    heirs = state.heirs
    for h, h2 in zip(heirs, heirs[1:]):
        if not label_less(inv[h], inv[h2]):
            return False
    for g in state.ghosts:
        G = Junction(g)
        H = state.heir_of(g)
        pg, ph = inv[G], inv[H]
        g1 = label_less(G, pg) and label_less(pg, ph)
        g2 = label_less(ph, pg) and label_less(pg, G)
        if g1 == g2:
            return False
    return True


def no_ghosts_allowed_check(n, state_or_ghosts):
    """Exhaustively check that only ``I_j -> H_j`` satisfies (i) and (G1)/(G2).

    True iff every bijection meeting both conditions sends each actor to
    the heir of the same index, so for a nonempty ghost set no bijection
    may qualify at all.
    """
    from .labels import FinalState
    ghosts = getattr(state_or_ghosts, "ghosts", state_or_ghosts)
    state = FinalState(n, ghosts, signs={g: 1 for g in ghosts})
    roles = state.roles
    heirs = state.heirs
    for perm in itertools.permutations(roles):
        if not ghost_constraint_ok(perm, state):
            continue
        if len(heirs) < n or any(perm[j] != heirs[j] for j in range(n)):
            return False
    return True
