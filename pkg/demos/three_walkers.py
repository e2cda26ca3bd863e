"""Three walkers that fully coalesce, and the involution that cancels the bad terms.

Walkers start at 0, 2, 4 and take four steps.  All three merge; ghost 2
ends left of the heir, ghost 3 right.  Three bijections are allowed.
Rehearsal scans each casting's crossings in time order; a casting either
survives (a fixed point, giving a performance) or is paired with a
partner of opposite sign and equal weight.
"""
from collections import Counter

from ghostcoal import FinalState, Interval, Junction, candidate_bijections, coalescence_Z, rehearse
from ghostcoal.audit import audit_instance
from ghostcoal.instances import three_walker_instance
from ghostcoal.oracle import enumerate_castings

inst = three_walker_instance()
G, xs = inst.G, inst.xs
state = FinalState(3, {2, 3}, {Interval(1, 4): 2, Junction(2): 0, Junction(3): 4})

cands = candidate_bijections(state)
print(f"{len(cands)} candidate bijections, state sign {state.sign}")

tally = Counter()
for c in enumerate_castings(xs, state, G):
    out = rehearse(c, state)
    key = " ".join(str(f) for f in c.pi)
    tally[key, "fixed" if out.ok else "paired"] += 1

for pi in cands:
    key = " ".join(str(f) for f in pi)
    print(f"  {key:12s} fixed {tally[key, 'fixed']:3d}  paired {tally[key, 'paired']:3d}")

# the family with no fixed points is cancelled entirely
rep = audit_instance(xs, state, G)
print(f"castings {rep.castings}, fixed points {rep.fixed_points}, replays {rep.replays}")
print("signed casting sum", rep.signed_casting_sum, "= signed fixed sum", rep.signed_fixed_sum)
print("Z =", coalescence_Z(xs, state, G), " performances total", rep.performance_total)
print("violations:", rep.violations or "none")
