"""The ghost matrix and two evaluations of the coalescence generating function.

Rows of the ghost matrix are actors in label order, columns are roles in
rank order.  Heir columns hold ``W(x_I -> y_H)``; the column of ghost ``g``
holds ``+W(x_I -> y_g) t_g^+`` in rows ``I ⊵ g`` and ``-W(x_I -> y_g) t_g^-``
in rows ``I ◁ g``.

:func:`coalescence_Z` sums the restricted Leibniz expansion over candidate
bijections only.  :func:`symbolic_Z` expands the full determinant keeping
the formal variables and extracts a coefficient; :func:`extracted_det`
gets the same coefficient by substituting 0/1 for the variables.
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from . import exact
from .labels import Interval, Junction, actor, label_less
from .spacetime import as_vertex, path_weight_table

SYMBOLIC_MAX_N = 8


@dataclass(frozen=True)
class LinearForm:
    """``coef * var`` where ``var`` is ``None`` (the constant 1) or ``(g, ±1)``."""

    coef: Fraction
    var: Optional[Tuple[int, int]] = None

    def __str__(self):
        if self.var is None:
            return str(self.coef)
        g, s = self.var
        return f"{self.coef}*t{g}{'+' if s > 0 else '-'}"


@dataclass(frozen=True)
class GhostMatrix:
    actors: tuple
    roles: tuple
    entries: tuple

    @property
    def n(self):
        return len(self.actors)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def ghost_columns(self):
        return [j for j, r in enumerate(self.roles) if isinstance(r, Junction)]

    def __str__(self):
        head = "      " + "  ".join(f"{str(r):>12}" for r in self.roles)
        rows = [f"{str(a):>6}" + "  ".join(f"{str(e):>12}" for e in row)
                for a, row in zip(self.actors, self.entries)]
        return "\n".join([head] + rows)


def _targets(state, G):
    if not state.fully_placed:
        raise ValueError("the ghost matrix needs positions for every role")
    return {r: as_vertex(state.positions[r], G.T) for r in state.roles}


def _sources(xs, n, G):
    if len(xs) != n:
        raise ValueError(f"expected {n} starting points, got {len(xs)}")
    xs = [as_vertex(x, 0) for x in xs]
    if any(a[0] >= b[0] for a, b in zip(xs, xs[1:])):
        raise ValueError("starting points must be strictly increasing in space")
    missing = [x for x in xs if x not in G]
    if missing:
        raise ValueError(f"starting points not in the graph: {missing}")
    return xs


def weight_matrix(xs, state, G):
    """Plain ``W(x_I -> y_f)`` matrix, rows actors, columns roles in rank order."""
    xs = _sources(xs, state.n, G)
    ys = _targets(state, G)
    tables = [path_weight_table(G, x) for x in xs]
    return [[tab.get(ys[r], Fraction(0)) for r in state.roles] for tab in tables]


def build_ghost_matrix(xs, state, G):
    W = weight_matrix(xs, state, G)
    actors = state.actors
    entries = []
    for i, I in enumerate(actors):
        row = []
        for j, f in enumerate(state.roles):
            w = W[i][j]
            if isinstance(f, Interval):
                row.append(LinearForm(w))
            elif label_less(I, f):
                row.append(LinearForm(-w, (f.g, -1)))
            else:
                row.append(LinearForm(w, (f.g, 1)))
        entries.append(tuple(row))
    return GhostMatrix(actors, state.roles, tuple(entries))


def source_sign(pi, g):
    """``+1`` if the performer of ghost ``g`` lies right of ``g``, else ``-1``.

    ``pi`` is a sequence of roles indexed by actor (``pi[j-1] = pi(I_j)``).
    """
    g = g if isinstance(g, Junction) else Junction(g)
    performer = actor(pi.index(g) + 1)
    return 1 if label_less(g, performer) else -1


def is_candidate(pi, state):
    return all(source_sign(pi, g) == s for g, s in state.signs.items())


def candidate_bijections(state):
    """All candidate bijections in lexicographic order of their rank permutation.

    Junction ``g`` with sign ``+1`` may only be taken by actors ``I_j`` with
    ``j >= g``; sign ``-1`` needs ``j < g``.  Heirs are unconstrained.
    """
    roles = state.roles
    n = state.n

    def allowed(j, f):
        if isinstance(f, Interval):
            return True
        return (j >= f.g) if state.signs[f.g] > 0 else (j < f.g)

    out = []
    chosen = []
    used = [False] * n

    def extend(j):
        if j > n:
            out.append(tuple(chosen))
            return
        for k, f in enumerate(roles):
            if not used[k] and allowed(j, f):
                used[k] = True
                chosen.append(f)
                extend(j + 1)
                chosen.pop()
                used[k] = False

    extend(1)
    return out


def permutation(pi):
    """Rank permutation of ``{1..n}`` under the min identification."""
    return tuple(f.rank for f in pi)


def bijection_sign(pi):
    return exact.perm_sign(permutation(pi))


def coalescence_Z(xs, state, G, detail=False):
    """Performance generating function via the restricted Leibniz expansion.

    ``Z = sgn(F) * sum over candidates pi of sgn(pi) * prod_I W(x_I -> y_pi(I))``.
    With ``detail=True`` returns ``(Z, [(pi, signed contribution), ...])``
    where contributions already include ``sgn(F)``.
    """
    W = weight_matrix(xs, state, G)
    col = {r: j for j, r in enumerate(state.roles)}
    sF = state.sign
    total = Fraction(0)
    parts = []
    for pi in candidate_bijections(state):
        term = Fraction(sF * bijection_sign(pi))
        for i, f in enumerate(pi):
            term *= W[i][col[f]]
            if not term:
                break
        total += term
        parts.append((pi, term))
    return (total, parts) if detail else total


def symbolic_determinant(matrix):
    """Expand ``det(M)`` with formal variables kept.

    Returns ``{monomial: coefficient}`` where a monomial is a sorted tuple of
    ``(g, ±1)`` variables.  Raises if a Leibniz term would contain two
    variables of the same ghost, which the column structure rules out.
    """
    n = matrix.n
    if n > SYMBOLIC_MAX_N:
        raise ValueError(f"symbolic expansion is capped at n <= {SYMBOLIC_MAX_N}")
    poly = {}
    for perm in itertools.permutations(range(n)):
        coef = Fraction(exact.perm_sign(perm))
        mono = []
        for i, j in enumerate(perm):
            e = matrix.entries[i][j]
            coef *= e.coef
            if e.var is not None:
                mono.append(e.var)
        ghosts = [g for g, _ in mono]
        if len(set(ghosts)) != len(ghosts):
            raise AssertionError(f"repeated ghost variable in Leibniz term {mono}")
        if coef:
            key = tuple(sorted(mono))
            poly[key] = poly.get(key, 0) + coef
    return {k: v for k, v in poly.items() if v}


def symbolic_Z(matrix, signs):
    """Coefficient of ``prod_g t_g^{signs[g]}`` in the expanded determinant."""
    want = tuple(sorted((int(g.g if isinstance(g, Junction) else g), s)
                        for g, s in dict(signs).items()))
    return symbolic_determinant(matrix).get(want, Fraction(0))


def extracted_det(matrix, signs):
    """Same coefficient as :func:`symbolic_Z`, by substitution.

    Every Leibniz term carries exactly one variable per ghost column, so the
    coefficient equals the determinant with ``t_g^{signs[g]} = 1`` and
    ``t_g^{-signs[g]} = 0``.
    """
    signs = {int(g.g if isinstance(g, Junction) else g): s for g, s in dict(signs).items()}
    rows = []
    for row in matrix.entries:
        r = []
        for e in row:
            if e.var is None:
                r.append(e.coef)
            else:
                g, s = e.var
                r.append(e.coef if signs[g] == s else Fraction(0))
        rows.append(r)
    return exact.det(rows)
