"""Time-graded weighted spacetime DAGs.

A vertex is a pair ``(x, t)`` of integer space and time coordinates and
every edge advances time by exactly one step.  Vertices are enumerated
time-major, then by space; that order is also the default linear
extension used to decide which crossing comes "first".
"""
import bisect
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Tuple

from .exact import to_fraction

Vertex = Tuple[int, int]

EXTENSIONS = ("time-space", "time-space-reversed")


class ModelError(ValueError):
    """Invalid model description or graph."""


class WindowClippedError(ModelError):
    """A vertex reachable from a source would leave the spatial window."""


class CapExceeded(RuntimeError):
    """An exhaustive enumeration produced more objects than allowed."""


def vertex_key(extension="time-space"):
    """Sort key realising a linear extension of the time order."""
    if extension == "time-space":
        return lambda v: (v[1], v[0])
    if extension == "time-space-reversed":
        return lambda v: (v[1], -v[0])
    raise ValueError(f"unknown extension {extension!r}; expected one of {EXTENSIONS}")


class SpacetimeGraph:
    """Immutable weighted DAG whose edges go from time ``t`` to ``t + 1``.

    Parameters
    ----------
    edges : iterable of ``(u, v, weight)``
        Weights are exact nonnegative rationals.
    vertices : iterable of vertices, optional
        Extra isolated vertices (every edge endpoint is included anyway).
    """

    def __init__(self, edges, vertices=()):
        succ: Dict[Vertex, Dict[Vertex, Fraction]] = {}
        verts = {tuple(v) for v in vertices}
        for u, v, w in edges:
            u, v = tuple(u), tuple(v)
            w = to_fraction(w)
            if w < 0:
                raise ModelError(f"negative weight {w} on edge {u}->{v}")
            if v[1] != u[1] + 1:
                raise ModelError(f"edge {u}->{v} does not advance time by one")
            if v in succ.get(u, {}):
                raise ModelError(f"duplicate edge {u}->{v}")
            succ.setdefault(u, {})[v] = w
            verts.add(u)
            verts.add(v)
        if any(t < 0 for _, t in verts):
            raise ModelError("times must be nonnegative")
        order = sorted(verts, key=lambda v: (v[1], v[0]))
        self._vertices = tuple(order)
        self._succ = {u: tuple(sorted(succ.get(u, {}).items(), key=lambda kv: kv[0][0]))
                      for u in order}
        pred: Dict[Vertex, List] = {u: [] for u in order}
        for u, outs in self._succ.items():
            for v, w in outs:
                pred[v].append((u, w))
        self._pred = {v: tuple(sorted(p, key=lambda kv: kv[0][0])) for v, p in pred.items()}
        self._slices: Dict[int, Tuple[Vertex, ...]] = {}
        for t, group in itertools.groupby(order, key=lambda v: v[1]):
            self._slices[t] = tuple(group)
        self.T = max(self._slices) if self._slices else 0

    @property
    def vertices(self):
        return self._vertices

    def __contains__(self, v):
        return tuple(v) in self._succ

    def successors(self, v):
        return self._succ[v]

    def predecessors(self, v):
        return self._pred[v]

    def weight(self, u, v):
        for w_, wt in self._succ.get(u, ()):
            if w_ == v:
                return wt
        raise KeyError(f"no edge {u}->{v}")

    def slice(self, t):
        return self._slices.get(t, ())

    def edges(self):
        for u in self._vertices:
            for v, w in self._succ[u]:
                yield u, v, w

    @property
    def probabilistic(self):
        """True iff every vertex before the horizon has out-weights summing to 1."""
        return all(sum(w for _, w in self._succ[u]) == 1
                   for u in self._vertices if u[1] < self.T)

    def __repr__(self):
        return f"SpacetimeGraph(|V|={len(self._vertices)}, T={self.T})"


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of a spacetime model.

    ``kind`` is one of ``checkerboard-srw``, ``ne-lattice``, ``birth-death``
    or ``custom``.  ``window`` is an inclusive integer interval of space
    coordinates.  Parameter values may be ints, Fractions or ``"p/q"``
    strings; birth-death rates may also be per-site tables
    ``{"default": w, "<site>": w, ...}``.
    """

    kind: str
    T: int
    window: Tuple[int, int]
    parameters: dict = field(default_factory=dict)
    sources: Optional[Tuple[int, ...]] = None

    def with_sources(self, sources):
        return ModelSpec(self.kind, self.T, self.window, self.parameters, tuple(sources))


KINDS = ("checkerboard-srw", "ne-lattice", "birth-death", "custom")
PROBABILISTIC_KINDS = ("checkerboard-srw", "birth-death")


def _site_table(value, default):
    if value is None:
        value = default
    if isinstance(value, dict):
        table = {int(k): to_fraction(v) for k, v in value.items() if k != "default"}
        base = to_fraction(value.get("default", default))
        return lambda x: table.get(x, base)
    w = to_fraction(value)
    return lambda x: w


def _step_rule(spec):
    p = spec.parameters or {}
    if spec.kind == "checkerboard-srw":
        up = to_fraction(p.get("up", Fraction(1, 2)))
        down = to_fraction(p.get("down", 1 - up))
        return lambda x: ((-1, down), (1, up))
    if spec.kind == "ne-lattice":
        north = to_fraction(p.get("north", Fraction(1, 2)))
        east = to_fraction(p.get("east", 1 - north))
        return lambda x: ((0, north), (1, east))
    if spec.kind == "birth-death":
        # any missing rate among up/down/stay is the complement of the others
        given = {k: _site_table(p[k], 0) for k in ("up", "down", "stay") if k in p}
        if not given:
            given = {"up": _site_table("1/2", 0), "down": _site_table("1/2", 0)}
        elif len(given) == 1 and "stay" not in given:
            given["stay"] = _site_table(0, 0)
        rates = dict(given)
        for k in ("up", "down", "stay"):
            if k not in rates:
                others = [given[o] for o in given]
                rates[k] = lambda x, _o=others: 1 - sum(f(x) for f in _o)
        up, down, stay = rates["up"], rates["down"], rates["stay"]
        return lambda x: ((-1, down(x)), (0, stay(x)), (1, up(x)))
    raise ModelError(f"unknown model kind {spec.kind!r}")


def build_model(spec, sources=None):
    """Build the spacetime graph described by ``spec``.

    The vertex set is everything reachable from the sources (space
    coordinates on slice 0) within ``spec.T`` steps.  Raises
    :class:`WindowClippedError` if a reachable vertex falls outside the
    window, :class:`ModelError` for negative or non-stochastic weights.
    """
    if spec.kind not in KINDS:
        raise ModelError(f"unknown model kind {spec.kind!r}")
    if spec.T < 1:
        raise ModelError("horizon T must be >= 1")
    lo, hi = spec.window
    if lo > hi:
        raise ModelError("empty window")
    if spec.kind == "custom":
        return _build_custom(spec)
    sources = spec.sources if sources is None else tuple(sources)
    if not sources:
        raise ModelError("at least one source is required")
    if spec.kind == "checkerboard-srw" and any(x % 2 for x in sources):
        raise ModelError("checkerboard sources must have even space coordinate at t=0")
    rule = _step_rule(spec)
    edges = []
    frontier = sorted(set(sources))
    for x in frontier:
        if not lo <= x <= hi:
            raise WindowClippedError(f"source {x} outside window {spec.window}")
    for t in range(spec.T):
        nxt = set()
        for x in frontier:
            steps = rule(x)
            for _, w in steps:
                if w < 0:
                    raise ModelError(f"negative weight {w} at site {x}")
            if spec.kind in PROBABILISTIC_KINDS and sum(w for _, w in steps) != 1:
                raise ModelError(f"out-weights at site {x} do not sum to 1")
            for dx, w in steps:
                if w == 0:
                    continue
                y = x + dx
                if not lo <= y <= hi:
                    raise WindowClippedError(
                        f"vertex {(y, t + 1)} reachable but outside window {spec.window}")
                edges.append(((x, t), (y, t + 1), w))
                nxt.add(y)
        frontier = sorted(nxt)
    return SpacetimeGraph(edges, vertices=[(x, 0) for x in sources])


def _build_custom(spec):
    p = spec.parameters or {}
    try:
        raw = p["edges"]
    except KeyError:
        raise ModelError("custom model needs parameters.edges") from None
    edges = [(tuple(u), tuple(v), w) for u, v, w in raw]
    G = SpacetimeGraph(edges, vertices=[tuple(v) for v in p.get("vertices", ())])
    lo, hi = spec.window
    for x, _ in G.vertices:
        if not lo <= x <= hi:
            raise WindowClippedError(f"custom vertex at space {x} outside window")
    if G.T > spec.T:
        raise ModelError(f"custom edges exceed horizon T={spec.T}")
    if p.get("probabilistic") and not G.probabilistic:
        raise ModelError("custom model declared probabilistic but out-weights do not sum to 1")
    return G


def as_vertex(v, t):
    """Interpret ``v`` as a vertex, placing bare integers on slice ``t``."""
    if isinstance(v, tuple):
        return v
    return (int(v), t)


def path_weight_table(G, x):
    """``{v: W(x -> v)}`` for every ``v`` reachable from ``x``."""
    x = as_vertex(x, 0)
    if x not in G:
        return {}
    table = {x: Fraction(1)}
    for t in range(x[1], G.T):
        for u in G.slice(t):
            wu = table.get(u)
            if not wu:
                continue
            for v, w in G.successors(u):
                table[v] = table.get(v, 0) + wu * w
    return table


def path_weight_sum(G, x, y):
    """Path generating function ``W(x -> y)``; zero when unreachable."""
    x = as_vertex(x, 0)
    y = as_vertex(y, G.T)
    return path_weight_table(G, x).get(y, Fraction(0))


def path_weight(G, path):
    w = Fraction(1)
    for u, v in zip(path, path[1:]):
        w *= G.weight(u, v)
    return w


def _coreachable(G, y):
    seen = {y}
    for t in range(y[1], 0, -1):
        for v in G.slice(t):
            if v in seen:
                for u, _ in G.predecessors(v):
                    seen.add(u)
    return seen


def enumerate_paths(G, x, y, cap=10**6):
    """All directed ``x -> y`` paths as vertex tuples, lexicographic by space.

    Raises :class:`CapExceeded` when more than ``cap`` paths exist.
    """
    x = as_vertex(x, 0)
    y = as_vertex(y, G.T)
    if x not in G or y not in G or y[1] < x[1]:
        return []
    good = _coreachable(G, y)
    if x not in good:
        return []
    out = []
    stack = [x]

    def walk(u):
        if u == y:
            if len(out) >= cap:
                raise CapExceeded(f"more than {cap} paths from {x} to {y}")
            out.append(tuple(stack))
            return
        for v, w in G.successors(u):
            if v in good and w != 0:
                stack.append(v)
                walk(v)
                stack.pop()

    walk(x)
    return out


@dataclass
class PlanarityReport:
    p1: bool
    p2: bool
    p1_counterexample: Optional[tuple] = None
    p2_counterexample: Optional[tuple] = None
    checked_pairs: int = 0
    checked_triples: int = 0

    @property
    def planar(self):
        return self.p1 and self.p2


def first_common_vertex(p, q, key):
    common = set(p).intersection(q)
    return min(common, key=key) if common else None


def check_planarity(G, sources, targets, cap=10**5, extension="time-space"):
    """Exhaustively test the crossing (P1) and consecutive-collision (P2) properties.

    P1: for sources ``x < x'`` and targets ``y' < y`` every ``x -> y`` path
    meets every ``x' -> y'`` path.  P2: for sources ``x < x' < x''``, if
    paths from ``x`` and ``x''`` first meet at ``v`` then every path from
    ``x'`` passes through ``v`` or meets one of them no later than ``v``.
    Checking the first meeting suffices: the condition only weakens at
    later common vertices.  Paths for P2 run to any vertex of ``targets``.
    """
    key = vertex_key(extension)
    xs = [as_vertex(x, 0) for x in sources]
    ys = [as_vertex(y, G.T) for y in targets]
    paths = {}

    def between(a, b):
        if (a, b) not in paths:
            paths[(a, b)] = enumerate_paths(G, a, b, cap)
        return paths[(a, b)]

    report = PlanarityReport(True, True)
    for i, j in itertools.combinations(range(len(xs)), 2):
        for a, b in itertools.combinations(range(len(ys)), 2):
            # x_i -> y_b together with x_j -> y_a has swapped targets
            for p in between(xs[i], ys[b]):
                ps = set(p)
                for q in between(xs[j], ys[a]):
                    report.checked_pairs += 1
                    if ps.isdisjoint(q):
                        if report.p1:
                            report.p1 = False
                            report.p1_counterexample = (p, q)
                        break
                if not report.p1:
                    break
    to_targets = {x: [p for y in ys for p in between(x, y)] for x in xs}
    for i, j, k in itertools.combinations(range(len(xs)), 3):
        for p in to_targets[xs[i]]:
            for r in to_targets[xs[k]]:
                v = first_common_vertex(p, r, key)
                if v is None:
                    continue
                kv = key(v)
                early = {u for u in itertools.chain(p, r) if key(u) <= kv}
                for q in to_targets[xs[j]]:
                    report.checked_triples += 1
                    if early.isdisjoint(q):
                        if report.p2:
                            report.p2 = False
                            report.p2_counterexample = (p, q, r, v)
                        break
    return report


class SiteKernel:
    """Law of a single walker started at ``x`` after the full horizon.

    ``pmf`` is exact on the final slice; ``cdf(y) = sum of pmf(z), z <= y``.
    """

    discrete = True

    def __init__(self, x, pmf):
        self.x = x
        items = sorted((y, Fraction(p)) for y, p in pmf.items() if p)
        self.support = tuple(y for y, _ in items)
        self._pmf = dict(items)
        acc = Fraction(0)
        self._cum = []
        for _, p in items:
            acc += p
            self._cum.append(acc)

    @property
    def total(self):
        return self._cum[-1] if self._cum else Fraction(0)

    def pmf(self, y):
        return self._pmf.get(y, Fraction(0))

    def cdf(self, y):
        i = bisect.bisect_right(self.support, y)
        return self._cum[i - 1] if i else Fraction(0)

    def mass(self, lo, hi):
        """Probability of landing in the inclusive site interval ``[lo, hi]``."""
        if hi < lo:
            return Fraction(0)
        return self.cdf(hi) - self.cdf(lo - 1)

    def __repr__(self):
        return f"SiteKernel(x={self.x}, support={self.support[:1]}..{self.support[-1:]})"


class LatticeKernels:
    """Kernel family ``x -> SiteKernel`` read off a probabilistic graph."""

    def __init__(self, G):
        if not G.probabilistic:
            raise ModelError("transition kernels need a probabilistic model")
        self.G = G
        self.T = G.T
        self._cache = {}

    def __call__(self, x):
        if x not in self._cache:
            table = path_weight_table(self.G, (x, 0))
            self._cache[x] = SiteKernel(
                x, {y: w for (y, t), w in table.items() if t == self.T})
        return self._cache[x]


class SRWKernels:
    """Closed-form binomial kernels for the homogeneous checkerboard walk.

    Agrees with :class:`LatticeKernels` on ``checkerboard-srw`` models but
    avoids building the graph, which matters for long horizons.
    """

    def __init__(self, T, up=Fraction(1, 2)):
        self.T = T
        self.up = to_fraction(up)
        self._cache = {}

    def __call__(self, x):
        if x not in self._cache:
            T, up = self.T, self.up
            pmf = {x - T + 2 * k: comb(T, k) * up**k * (1 - up) ** (T - k)
                   for k in range(T + 1)}
            self._cache[x] = SiteKernel(x, pmf)
        return self._cache[x]


def transition_kernel(spec, x):
    """Single-walker law from site ``x`` at time 0 to the horizon ``spec.T``.

    Returns ``(pmf, cdf)`` as callables on space coordinates of the final
    slice.  The full :class:`SiteKernel` is available as ``pmf.__self__``.
    """
    G = build_model(spec.with_sources((x,)))
    if not G.probabilistic:
        raise ModelError("transition kernels need a probabilistic model")
    k = LatticeKernels(G)(x)
    return k.pmf, k.cdf
