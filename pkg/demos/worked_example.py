"""Two walkers, two steps: the smallest case with a ghost.

Walkers start at 0 and 2 on the checkerboard lattice and take two fair
+-1 steps.  When they meet they merge; the discarded trajectory keeps
walking as a ghost.  We compute the chance that the merged walker ends
at 0 and its ghost at 2 three ways, then sum out the ghost.
"""
from fractions import Fraction

from ghostcoal import (FinalState, Interval, Junction, LatticeKernels, build_ghost_matrix,
                       candidate_bijections, coalescence_Z, extracted_det, heir_mass,
                       interacting_dp, symbolic_Z)
from ghostcoal.instances import final_sites, worked_instance
from ghostcoal.oracle import enumerate_performances

inst = worked_instance()
G, xs = inst.G, inst.xs
H, g = Interval(1, 3), Junction(2)

state = FinalState(2, {2}, {H: 0, g: 2})
print("ghost 2 ends right of its heir, sign", state.ghost_sign(2))

# only one bijection survives the sign constraint
for pi in candidate_bijections(state):
    print("candidate:", " ".join(str(f) for f in pi))

M = build_ghost_matrix(xs, state, G)
print("Z by candidates  =", coalescence_Z(xs, state, G))
print("Z by expansion   =", symbolic_Z(M, state.signs))
print("Z by extraction  =", extracted_det(M, state.signs))

perf = enumerate_performances(xs, state, G)
print(f"brute force: {perf.count} performance(s), total {perf.total}")

# summing over where the ghost ended leaves the law of the heir alone
total = sum(coalescence_Z(xs, FinalState(2, {2}, {H: 0, g: y}), G) for y in final_sites(xs, G))
print("sum over ghost positions =", total)
print("ghost-free determinant   =", heir_mass(xs, {2}, (0,), LatticeKernels(G)))
print("interacting dynamics     =", interacting_dp(G, xs, {2})[(0,)])
assert total == Fraction(3, 16)
