"""The ten acceptance checks, runnable from tests or the command line.

Each ``criterion_k`` returns a :class:`CriterionResult`; :func:`run_all`
runs them in order.  Runtime budgets are part of the pass condition.
"""
import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .audit import audit_instance
from .exact import det
from .ghost_formula import (build_ghost_matrix, candidate_bijections, coalescence_Z,
                            extracted_det, symbolic_Z, weight_matrix)
from .ghostfree import (BrownianKernels, HeirBox, ProductBox, heir_box_probability,
                        heir_mass, permuted_set_probability, scaled_lattice_heir_density)
from .instances import (checkerboard, final_sites, final_states, ghost_sets, sweep_grid,
                        three_walker_instance, worked_instance)
from .involution import no_ghosts_allowed_check, rehearse
from .labels import FinalState, Interval, Junction
from .oracle import (enumerate_all_performances, enumerate_castings,
                     interacting_distribution, interacting_distribution_with_ghosts,
                     interacting_dp, lgv_enumerate)
from .spacetime import LatticeKernels


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} {verdict}  {self.title}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number, title, budget, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if ok and dt >= budget:
        ok, detail = False, f"{detail}; over the {budget:g}s budget"
    return CriterionResult(number, title, ok, detail, dt)


def criterion_1():
    def run():
        inst = worked_instance()
        G, xs = inst.G, inst.xs
        K = LatticeKernels(G)
        s = FinalState(2, {2}, {Interval(1, 3): 0, Junction(2): 2})
        z = coalescence_Z(xs, s, G)
        sites = final_sites(xs, G)
        total = sum(coalescence_Z(xs, FinalState(2, {2}, {Interval(1, 3): 0, Junction(2): y}), G)
                    for y in sites)
        hm = heir_mass(xs, {2}, (0,), K)
        dp = interacting_dp(G, xs, {2}).get((0,), Fraction(0))
        ok = (s.ghost_sign(2) == -1 and z == Fraction(1, 16) and total == Fraction(3, 16)
              and hm == Fraction(3, 16) and dp == Fraction(3, 16))
        return ok, f"Z={z}, ghost sum={total}, heir_mass={hm}, dp={dp}"
    return _timed(1, "worked example", 1.0, run)


def _sweep_formula(inst):
    G, xs = inst.G, inst.xs
    buckets = enumerate_all_performances(xs, G)
    seen = 0
    covered = Fraction(0)
    bad = []
    for s in final_states(xs, G):
        key = (s.ghosts, s.position_tuple())
        oracle = sum((w for _, w in buckets.get(key, ())), Fraction(0))
        covered += oracle
        M = build_ghost_matrix(xs, s, G)
        z = coalescence_Z(xs, s, G)
        sz = symbolic_Z(M, s.signs)
        ez = extracted_det(M, s.signs)
        seen += 1
        if not (z == sz == ez == oracle):
            bad.append((s, z, sz, ez, oracle))
    everything = sum((w for items in buckets.values() for _, w in items), Fraction(0))
    if covered != everything:
        bad.append(("uncovered performance weight", covered, everything))
    return seen, bad


def criterion_2(grid=None):
    def run():
        states = 0
        bad = []
        for inst in grid or sweep_grid():
            n, b = _sweep_formula(inst)
            states += n
            bad += [(inst.label,) + tuple(x) for x in b]
        return not bad, f"{states} final states, {len(bad)} mismatches" + (f", first {bad[0]}" if bad else "")
    return _timed(2, "formula vs performance oracle", 300.0, run)


def _sweep_ghostfree(inst):
    G, xs = inst.G, inst.xs
    K = LatticeKernels(G)
    sites = final_sites(xs, G)
    dist = interacting_distribution(G, xs)
    bad = []
    total = Fraction(0)
    checked = 0
    for gs in ghost_sets(len(xs)):
        k = len(xs) - len(gs)
        mine = {}
        for ys in itertools.combinations(sites, k):
            m = heir_mass(xs, gs, ys, K)
            checked += 1
            total += m
            if m:
                mine[ys] = m
        truth = {y: p for (g, y), p in dist.items() if g == gs and p}
        if mine != truth:
            bad.append((gs, mine, truth))
    if total != 1:
        bad.append(("normalization", total))
    return checked, bad


def criterion_3(grid=None):
    def run():
        checked = 0
        bad = []
        for inst in grid or sweep_grid():
            n, b = _sweep_ghostfree(inst)
            checked += n
            bad += [(inst.label,) + tuple(x) for x in b]
        return not bad, f"{checked} heir tuples, normalization exact, {len(bad)} mismatches" + (
            f", first {bad[0]}" if bad else "")
    return _timed(3, "ghost-free vs interacting dynamics", 300.0, run)


def criterion_4(grid=None):
    def run():
        checked = 0
        bad = []
        for inst in grid or sweep_grid():
            G, xs = inst.G, inst.xs
            for s in final_states(xs, G, ghosts=()):
                ys = s.position_tuple()
                z = coalescence_Z(xs, s, G)
                d = det(weight_matrix(xs, s, G))
                e = lgv_enumerate(xs, ys, G).total
                checked += 1
                if not z == d == e:
                    bad.append((inst.label, ys, z, d, e))
        return not bad, f"{checked} target tuples, {len(bad)} mismatches" + (f", first {bad[0]}" if bad else "")
    return _timed(4, "no-ghost reduction to LGV", 300.0, run)


def three_walker_state():
    """Full coalescence of three walkers, ghost 2 left and ghost 3 right of the heir."""
    return FinalState(3, {2, 3}, {Interval(1, 4): 2, Junction(2): 0, Junction(3): 4})


def criterion_5():
    def run():
        inst = three_walker_instance()
        G, xs = inst.G, inst.xs
        s = three_walker_state()
        H, g2, g3 = Interval(1, 4), Junction(2), Junction(3)
        pi1, pi2, pi3 = (H, g3, g2), (g3, g2, H), (g3, H, g2)
        cands = candidate_bijections(s)
        notes = []
        ok = set(cands) == {pi1, pi2, pi3} and len(cands) == 3 and s.sign == -1
        if not ok:
            notes.append(f"candidates {cands}")
        fams = {pi1: [0, 0], pi2: [0, 0], pi3: [0, 0]}
        for c in enumerate_castings(xs, s, G):
            out = rehearse(c, s)
            fams[c.pi][0] += 1
            if out.ok:
                fams[c.pi][1] += 1
                if c.sign != -1:
                    ok = False
                    notes.append("successful casting with sign +1")
            elif c.pi == pi3:
                d = out.partner
                back = rehearse(d, s)
                if (d.pi not in (pi1, pi2) or d.weight(G) != c.weight(G) or d.sign != -c.sign
                        or back.ok or back.partner != c):
                    ok = False
                    notes.append("pi3 casting badly paired")
        if fams[pi3][1] != 0 or fams[pi3][0] == 0 or fams[pi1][1] == 0 or fams[pi2][1] == 0:
            ok = False
            notes.append(f"families {fams}")
        rep = audit_instance(xs, s, G)
        if not rep.ok:
            ok = False
            notes.append(f"audit {rep.violations[:1]}")
        fam = ", ".join(f"pi{i + 1}: {fams[p][0]} castings/{fams[p][1]} fixed"
                        for i, p in enumerate((pi1, pi2, pi3)))
        return ok, f"3 candidates; {fam}; Z={rep.Z}" + ("; " + "; ".join(notes) if notes else "")
    return _timed(5, "three-walker example", 30.0, run)


def criterion_6(grid=None, extension="time-space"):
    def run():
        states = castings = fixed = replays = 0
        bad = []
        for inst in grid or sweep_grid():
            G, xs = inst.G, inst.xs
            buckets = enumerate_all_performances(xs, G)
            for s in final_states(xs, G):
                perfs = buckets.get((s.ghosts, s.position_tuple()), [])
                rep = audit_instance(xs, s, G, extension, performances=perfs)
                states += 1
                castings += rep.castings
                fixed += rep.fixed_points
                replays += rep.replays
                if not rep.ok:
                    bad.append((inst.label, s, rep.violations[0]))
        return not bad, (f"{states} states, {castings} castings, {fixed} fixed points, "
                         f"{replays} commutativity replays, {len(bad)} violations" + (f", first {bad[0]}" if bad else ""))
    return _timed(6, "involution audit", 600.0, run)


def criterion_7(max_n=6):
    def run():
        checked = 0
        bad = []
        for n in range(1, max_n + 1):
            for gs in ghost_sets(n):
                checked += 1
                if not no_ghosts_allowed_check(n, gs):
                    bad.append((n, sorted(gs)))
        return not bad, f"{checked} (n, ghost set) pairs up to n={max_n}, {len(bad)} counterexamples"
    return _timed(7, "no ghosts allowed", 10.0, run)


def _admissible_boxes(state, sites):
    """All admissible product boxes with endpoints on the reachable sites."""
    ivs = [(a, b) for a, b in itertools.combinations_with_replacement(sites, 2)]
    roles = state.roles
    for combo in itertools.product(ivs, repeat=len(roles)):
        box = dict(zip(roles, combo))
        heirs = state.heirs
        if any(box[a][1] >= box[b][0] for a, b in zip(heirs, heirs[1:])):
            continue
        good = True
        for g in state.ghosts:
            G, H = box[Junction(g)], box[state.heir_of(g)]
            if state.ghost_sign(g) > 0 and not G[1] <= H[0]:
                good = False
            if state.ghost_sign(g) < 0 and not G[0] > H[1]:
                good = False
        if good:
            yield ProductBox(tuple(combo))


def _interacting_box(dist, state, box):
    total = Fraction(0)
    for (gs, pos), p in dist.items():
        if gs == state.ghosts and all(lo <= y <= hi for y, (lo, hi) in zip(pos, box.intervals)):
            total += p
    return total


def permuted_set_sweep(inst):
    G, xs = inst.G, inst.xs
    K = LatticeKernels(G)
    sites = final_sites(xs, G)
    dist = interacting_distribution_with_ghosts(G, xs)
    n = len(xs)
    checked = 0
    bad = []
    for gs in ghost_sets(n):
        for signs in itertools.product((1, -1), repeat=len(gs)):
            s = FinalState(n, gs, signs=dict(zip(sorted(gs), signs)))
            first = None
            for box in _admissible_boxes(s, sites):
                first = first or box
                lhs = permuted_set_probability(xs, box, s, K)
                rhs = _interacting_box(dist, s, box)
                checked += 1
                if lhs != rhs:
                    bad.append((inst.label, s, box, lhs, rhs))
            if gs and first is not None:
                # an empty ghost interval makes the set empty
                empty = list(first.intervals)
                empty[min(gs) - 1] = (sites[-1], sites[0])
                lhs = permuted_set_probability(xs, ProductBox(tuple(empty)), s, K)
                checked += 1
                if lhs != 0:
                    bad.append((inst.label, s, "empty", lhs))
    return checked, bad


def criterion_8():
    def run():
        checked = 0
        bad = []
        for inst in (worked_instance(), checkerboard(2, (0, 2, 4))):
            n, b = permuted_set_sweep(inst)
            checked += n
            bad += b
        return not bad, f"{checked} admissible boxes, {len(bad)} mismatches" + (f", first {bad[0]}" if bad else "")
    return _timed(8, "permuted-set identity", 120.0, run)


DONSKER_STEPS = (256, 1024, 4096)


def donsker_errors(steps=DONSKER_STEPS):
    target = heir_mass((0.0, 1.0), {2}, (0.0,), BrownianKernels(1.0))
    vals = [scaled_lattice_heir_density((0, 1), {2}, (0,), N) for N in steps]
    return target, vals, [abs(v - target) / target for v in vals]


def criterion_9():
    def run():
        target, vals, errs = donsker_errors()
        by_n = dict(zip(DONSKER_STEPS, errs))
        ok = by_n[1024] < 0.05 and all(a > b for a, b in zip(errs, errs[1:]))
        errs_s = ", ".join(f"N={N}: {e:.2e}" for N, e in by_n.items())
        return ok, f"Brownian density {target:.8f}; relative errors {errs_s}"
    return _timed(9, "Donsker convergence", 120.0, run)


def brownian_normalization(tol=1e-7):
    B = BrownianKernels(1.0)
    line = (-math.inf, math.inf)
    a, ea = heir_box_probability((0.0, 1.0), {2}, HeirBox((line,)), B, tol, full_output=True)
    b, eb = heir_box_probability((0.0, 1.0), (), HeirBox((line, line), ordered=True), B, tol,
                                 full_output=True)
    return a + b, ea + eb, (a, b)


def criterion_10():
    def run():
        total, err, (a, b) = brownian_normalization()
        ok = abs(total - 1) < 1e-6
        return ok, f"merged {a:.9f} + separate {b:.9f} = {total:.12f} (quadrature error <= {err:.1e})"
    return _timed(10, "Brownian normalization", 60.0, run)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all(echo=None):
    results = []
    for fn in CRITERIA:
        r = fn()
        results.append(r)
        if echo:
            echo(r.line())
    return results
