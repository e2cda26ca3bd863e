"""Exhaustive audit of the sign-reversing involution on one final state."""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from .ghost_formula import coalescence_Z, is_candidate
from .involution import (RehearsalError, attribute, first_intersection, rehearse,
                         segment_swap)
from .labels import Interval, Junction, actor
from .oracle import DEFAULT_CAP, enumerate_castings, enumerate_performances
from .spacetime import as_vertex, vertex_key


@dataclass
class AuditReport:
    state: object
    castings: int = 0
    fixed_points: int = 0
    paired: int = 0
    performances: int = 0
    signed_casting_sum: Fraction = Fraction(0)
    signed_fixed_sum: Fraction = Fraction(0)
    performance_total: Fraction = Fraction(0)
    Z: Fraction = Fraction(0)
    replays: int = 0
    violations: List[tuple] = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def fail(self, check, witness):
        self.violations.append((check, witness))


def audit_instance(xs, state, G, extension="time-space", cap=DEFAULT_CAP,
                   performances=None, replay=True):
    """Check every involution property on the castings of ``state``.

    Checks: the first crossing is always between adjacent intervals;
    ``iota`` is an involution, weight-preserving and sign-reversing off its
    fixed points; fixed points are exactly the attributed performances and
    attribution / rehearsal are mutually inverse; signed sums agree with
    the performance total and with ``Z``; every fixed point has
    ``sgn(pi) = sgn(F)``.  With ``replay``, also checks restricted
    commutativity: swapping at a later checked pair leaves the outcome of
    every earlier check unchanged.

    ``performances`` may be a precomputed list of ``(performance, weight)``.
    """
    vx = [as_vertex(x, 0) for x in xs]
    rep = AuditReport(state)
    if performances is None:
        performances = enumerate_performances(xs, state, G, cap).items
    rep.performances = len(performances)
    rep.performance_total = sum((w for _, w in performances), Fraction(0))
    rep.Z = coalescence_Z(xs, state, G)

    castings = enumerate_castings(xs, state, G, cap)
    rep.castings = len(castings)
    outcome = {}
    for c in castings:
        try:
            out = rehearse(c, state, extension)
        except RehearsalError as e:
            rep.fail("adjacent-first-crossing", (c, str(e)))
            continue
        outcome[c] = out
        w = c.weight(G)
        rep.signed_casting_sum += c.sign * w
        if out.ok:
            rep.fixed_points += 1
            rep.signed_fixed_sum += c.sign * w
            if c.sign != state.sign:
                rep.fail("sign-identity", c)
            if not all(valid for *_, valid in out.trace):
                rep.fail("fixed-point-valid-crossings", c)
            continue
        d = out.partner
        rep.paired += 1
        if d == c:
            rep.fail("non-fixed-partner-differs", c)
        if not is_candidate(d.pi, state):
            rep.fail("partner-is-candidate", (c, d))
            continue
        if d.weight(G) != w or d.sign != -c.sign:
            rep.fail("weight-preserving-sign-reversing", (c, d))
        try:
            back = rehearse(d, state, extension)
        except RehearsalError as e:
            rep.fail("adjacent-first-crossing", (d, str(e)))
            continue
        if back.ok or back.partner != c:
            rep.fail("involution", (c, d))

    if rep.signed_casting_sum != rep.signed_fixed_sum:
        rep.fail("cancellation", (rep.signed_casting_sum, rep.signed_fixed_sum))
    if rep.signed_fixed_sum * state.sign != rep.performance_total:
        rep.fail("fixed-sum-equals-performances", (rep.signed_fixed_sum, rep.performance_total))
    if rep.Z != rep.performance_total:
        rep.fail("Z-equals-performances", (rep.Z, rep.performance_total))

    fixed = {c: out.performance for c, out in outcome.items() if out.ok}
    attributed = set()
    for p, _ in performances:
        try:
            c = attribute(p, vx, state, extension, G.T)
        except ValueError as e:
            rep.fail("attribution", (p, str(e)))
            continue
        attributed.add(c)
        if c not in fixed:
            rep.fail("attribution-is-fixed-point", (p, c))
        elif fixed[c] != p:
            rep.fail("rehearse-after-attribute", (p, fixed[c]))
    if len(attributed) != len(performances):
        rep.fail("attribution-injective", (len(attributed), len(performances)))
    for c, p in fixed.items():
        if c not in attributed:
            rep.fail("fixed-point-is-attributed", c)
        elif attribute(p, vx, state, extension, G.T) != c:
            rep.fail("attribute-after-rehearse", c)

    if replay:
        for c, out in outcome.items():
            _replay(c, out, state, extension, rep)
    return rep


def _replay(c, out, state, extension, rep):
    """Swapping at a later checked pair keeps every earlier check's outcome.

    For each pair ``(K, L)`` checked by the scan, swap unconditionally at
    the first intersection of ``P_K`` and ``P_L``; every pair ``(I, J)``
    checked before it must still first meet at the same vertex with the
    same validity.
    """
    key = vertex_key(extension)
    trace = out.trace
    junctions = []
    interval = {j: actor(j + 1) for j in range(c.n)}
    for a, b, _, valid in trace:
        junctions.append(Junction(interval[a].b))
        if valid:
            merged = Interval(interval[a].a, interval[b].b)
            interval[a] = interval[b] = merged
    for k in range(1, len(trace)):
        K, L, v, _ = trace[k]
        d = segment_swap(c, K, L, v)
        rep.replays += 1
        for (I, J, u, valid), g in zip(trace[:k], junctions):
            if (first_intersection(d.paths[I], d.paths[J], key) != u
                    or (g in (d.pi[I], d.pi[J])) != valid):
                rep.fail("restricted-commutativity", (c, trace[k], (I, J, u)))
