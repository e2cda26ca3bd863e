"""Standard instances and exhaustive final-state grids."""
import itertools
from dataclasses import dataclass
from functools import cached_property

from .labels import FinalState, roles_in_rank_order, Interval
from .spacetime import ModelSpec, as_vertex, build_model, path_weight_table


@dataclass(frozen=True)
class Instance:
    """A model together with its starting points (space coordinates on slice 0)."""

    spec: ModelSpec
    xs: tuple

    @cached_property
    def G(self):
        return build_model(self.spec.with_sources(self.xs))

    @property
    def n(self):
        return len(self.xs)

    @property
    def label(self):
        return f"{self.spec.kind} T={self.spec.T} xs={self.xs}"


def checkerboard(T, xs, window=None):
    if window is None:
        window = (min(xs) - T, max(xs) + T)
    return Instance(ModelSpec("checkerboard-srw", T, window), tuple(xs))


def ne_lattice(T, xs, window=None):
    if window is None:
        window = (min(xs), max(xs) + T)
    return Instance(ModelSpec("ne-lattice", T, window), tuple(xs))


def worked_instance():
    """Two walkers from 0 and 2, two checkerboard steps."""
    return checkerboard(2, (0, 2))


def three_walker_instance():
    """Three walkers from 0, 2, 4, four checkerboard steps."""
    return checkerboard(4, (0, 2, 4))


def sweep_grid():
    """The grid of the exhaustive formula-vs-oracle sweeps."""
    out = []
    for T in (2, 3, 4):
        out.append(checkerboard(T, (0, 2)))
        out.append(checkerboard(T, (0, 2, 4)))
    for T in (1, 2, 3):
        out.append(ne_lattice(T, (0, 1, 2, 3)))
    return out


def small_grid():
    """A lighter grid for quick checks."""
    return [checkerboard(2, (0, 2)), checkerboard(3, (0, 2, 4)), ne_lattice(2, (0, 1, 2, 3))]


def final_sites(xs, G):
    """Final-slice sites reachable from some starting point, sorted."""
    sites = set()
    for x in xs:
        for (y, t), w in path_weight_table(G, as_vertex(x, 0)).items():
            if t == G.T and w:
                sites.add(y)
    return sorted(sites)


def ghost_sets(n):
    junctions = range(2, n + 1)
    for k in range(len(junctions) + 1):
        for gs in itertools.combinations(junctions, k):
            yield frozenset(gs)


def final_states(xs, G, ghosts=None):
    """Every fully placed final state over the reachable final sites.

    Heir positions run over strictly increasing tuples, ghost positions
    over all sites independently.  ``ghosts`` restricts to one pattern.
    """
    n = len(xs)
    sites = final_sites(xs, G)
    patterns = [frozenset(ghosts)] if ghosts is not None else list(ghost_sets(n))
    for gs in patterns:
        roles = roles_in_rank_order(n, gs)
        heir_idx = [i for i, r in enumerate(roles) if isinstance(r, Interval)]
        ghost_idx = [i for i, r in enumerate(roles) if not isinstance(r, Interval)]
        for hp in itertools.combinations(sites, len(heir_idx)):
            for gp in itertools.product(sites, repeat=len(ghost_idx)):
                pos = [None] * n
                for i, y in zip(heir_idx, hp):
                    pos[i] = y
                for i, y in zip(ghost_idx, gp):
                    pos[i] = y
                yield FinalState(n, gs, pos)
