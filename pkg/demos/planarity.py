"""Which graphs the formulas apply to.

Everything rests on two properties of the spacetime graph: paths that
swap order must share a vertex, and three walkers cannot have the outer
pair meet before the middle one is hit.  Nearest-neighbour walks have
both.  A lazy walk breaks the first, since two neighbours can trade
places in one step without touching.
"""
from ghostcoal import ModelSpec, build_model, check_planarity

cases = [
    ("checkerboard", ModelSpec("checkerboard-srw", 3, (-4, 8), {}, (0, 2, 4))),
    ("north-east lattice", ModelSpec("ne-lattice", 3, (0, 6), {}, (0, 1, 2))),
    ("birth-death", ModelSpec("birth-death", 3, (-4, 8), {"up": "1/3", "down": "2/3"}, (0, 2, 4))),
    ("lazy walk", ModelSpec("birth-death", 2, (-4, 5), {"up": "1/4", "down": "1/4"}, (0, 1))),
]
for name, spec in cases:
    G = build_model(spec)
    rep = check_planarity(G, list(spec.sources), G.slice(spec.T))
    print(f"{name:20s} crossing {'ok' if rep.p1 else 'FAILS'}, "
          f"consecutive collisions {'ok' if rep.p2 else 'FAILS'} "
          f"({rep.checked_pairs} pairs, {rep.checked_triples} triples)")
    if not rep.p1:
        p, q = rep.p1_counterexample
        print("   swapping paths:", p, q)
