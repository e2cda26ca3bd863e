"""Ghost-free coalescence matrix, heir-position laws, and the Brownian case.

The matrix has one column per role in rank order.  An heir column at
position ``y_H`` holds ``p_{x_i}(y_H)``.  The column of ghost ``g`` (rank
``r``) attached to heir ``H`` holds ``F_{x_i}(y_H)`` for rows ``i >= r``
and ``F_{x_i}(y_H) - 1`` above.  Its determinant is the heir-position mass
function (discrete) or density (continuous) of the coalescing system for
that ghost set.

Kernels are passed as callables ``x -> kernel`` where the kernel exposes
``pmf(y)``, ``cdf(y)``, ``mass(lo, hi)`` and a ``discrete`` flag;
:class:`ghostcoal.spacetime.LatticeKernels` and :class:`BrownianKernels`
both qualify.
"""
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np
from scipy import integrate

from . import exact
from .ghost_formula import bijection_sign, candidate_bijections
from .labels import Interval, Junction, roles_in_rank_order

SQRT2 = math.sqrt(2.0)


class QuadratureError(RuntimeError):
    pass


def normal_cdf(z):
    """Standard normal distribution function.

    Uses ``erfc(-z / sqrt 2) / 2``; libm's ``erfc`` keeps full relative
    precision in the lower tail, where ``1 + erf`` would cancel.
    """
    return 0.5 * math.erfc(-z / SQRT2)


def normal_pdf(z):
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


class BrownianKernel:
    """Gaussian law with mean ``x`` and variance ``T``."""

    discrete = False

    def __init__(self, x, T):
        if T <= 0:
            raise ValueError("Brownian horizon T must be positive")
        self.x = float(x)
        self.T = float(T)
        self._s = math.sqrt(self.T)

    def pmf(self, y):
        return normal_pdf((y - self.x) / self._s) / self._s

    def cdf(self, y):
        return normal_cdf((y - self.x) / self._s)

    def mass(self, lo, hi):
        if hi <= lo:
            return 0.0
        zl, zh = (lo - self.x) / self._s, (hi - self.x) / self._s
        if zl > 0:
            # upper tail: difference of survival functions keeps precision
            return 0.5 * (math.erfc(zl / SQRT2) - math.erfc(zh / SQRT2))
        return normal_cdf(zh) - normal_cdf(zl)


def brownian_kernel(x, T):
    return BrownianKernel(x, T)


class BrownianKernels:
    """Kernel family ``x -> BrownianKernel(x, T)``."""

    def __init__(self, T):
        if T <= 0:
            raise ValueError("Brownian horizon T must be positive")
        self.T = T

    def __call__(self, x):
        return BrownianKernel(x, self.T)


@dataclass(frozen=True)
class CoalescenceMatrix:
    roles: tuple
    entries: tuple
    discrete: bool

    def det(self):
        if self.discrete:
            return exact.det(self.entries)
        return float(np.linalg.det(np.array(self.entries, dtype=float)))

    def as_array(self):
        return np.array(self.entries, dtype=object if self.discrete else float)


def build_coalescence_matrix(xs, ghosts, heir_positions, kernel):
    """Ghost-free matrix for starting points ``xs`` and pattern ``ghosts``.

    ``heir_positions`` lists the heirs' positions in label order and must be
    strictly increasing.
    """
    n = len(xs)
    if any(a >= b for a, b in zip(xs, xs[1:])):
        raise ValueError("starting points must be strictly increasing")
    roles = roles_in_rank_order(n, ghosts)
    heirs = [r for r in roles if isinstance(r, Interval)]
    heir_positions = tuple(heir_positions)
    if len(heir_positions) != len(heirs):
        raise ValueError(f"expected {len(heirs)} heir positions, got {len(heir_positions)}")
    if any(a >= b for a, b in zip(heir_positions, heir_positions[1:])):
        raise ValueError("heir positions must be strictly increasing")
    where = dict(zip(heirs, heir_positions))
    ks = [kernel(x) for x in xs]
    discrete = all(k.discrete for k in ks)
    rows = []
    for i, k in enumerate(ks, start=1):
        row = []
        for f in roles:
            if isinstance(f, Interval):
                row.append(k.pmf(where[f]))
            else:
                h = next(h for h in heirs if h.contains_junction(f.g))
                F = k.cdf(where[h])
                row.append(F if i >= f.g else F - 1)
        rows.append(tuple(row))
    return CoalescenceMatrix(roles, tuple(rows), discrete)


def heir_mass(xs, ghosts, heir_positions, kernel):
    """Determinant of the ghost-free matrix (mass or density of the heirs)."""
    return build_coalescence_matrix(xs, ghosts, heir_positions, kernel).det()


@dataclass(frozen=True)
class HeirBox:
    """Per-heir position intervals, optionally intersected with ``y_1 < y_2 < ...``.

    Intervals are inclusive site ranges for discrete kernels and ordinary
    real intervals (infinite ends allowed) for continuous ones.  Without
    ``ordered`` the intervals must be disjoint and increasing.
    """

    intervals: Tuple[Tuple[float, float], ...]
    ordered: bool = False

    def __post_init__(self):
        ivs = tuple(tuple(iv) for iv in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        if not self.ordered:
            for (lo1, hi1), (lo2, hi2) in zip(ivs, ivs[1:]):
                if hi1 >= lo2:
                    raise ValueError("heir boxes must be disjoint and increasing "
                                     "(pass ordered=True to intersect with y_1 < y_2 < ...)")


def _discrete_sites(xs, kernel, lo, hi):
    sites = set()
    for x in xs:
        sites.update(y for y in kernel(x).support if lo <= y <= hi)
    return sorted(sites)


def heir_box_probability(xs, ghosts, box, kernel, tol=1e-8, full_output=False):
    """Probability that the heirs land in ``box`` with coalescence pattern ``ghosts``.

    Discrete kernels give the exact sum of :func:`heir_mass` over the box.
    Continuous kernels use nested adaptive Gauss-Kronrod quadrature
    (``scipy.integrate.nquad``); the returned error is QUADPACK's absolute
    error estimate and must not exceed ``tol``.
    """
    n = len(xs)
    k = n - len(set(ghosts))
    if len(box.intervals) != k:
        raise ValueError(f"box needs {k} heir intervals")
    probe = kernel(xs[0])
    if probe.discrete:
        axes = [_discrete_sites(xs, kernel, lo, hi) for lo, hi in box.intervals]
        total = Fraction(0)
        for ys in itertools.product(*axes):
            if any(a >= b for a, b in zip(ys, ys[1:])):
                continue
            total += heir_mass(xs, ghosts, ys, kernel)
        return (total, Fraction(0)) if full_output else total

    def density(*ys):
        return heir_mass(xs, ghosts, ys, kernel)

    ranges = []
    for i, (lo, hi) in enumerate(box.intervals):
        if box.ordered and i < k - 1:
            def rng(*later, _lo=lo, _hi=hi):
                top = min(_hi, later[0])
                return (_lo, max(_lo, top))
            ranges.append(rng)
        else:
            ranges.append((lo, hi))
    opts = {"epsabs": tol / 10, "epsrel": 0.0, "limit": 200}
    value, err = integrate.nquad(density, ranges, opts=[opts] * k)
    if err > tol:
        raise QuadratureError(f"quadrature error estimate {err:.3g} exceeds tol {tol:.3g}")
    return (value, err) if full_output else value


@dataclass(frozen=True)
class ProductBox:
    """Admissible product set: one interval per role, keyed by rank.

    ``intervals[r-1]`` is the interval of the role with rank ``r``; an
    interval with ``hi < lo`` (discrete) or ``hi <= lo`` (continuous) is
    empty.
    """

    intervals: Tuple[Tuple[float, float], ...]


def _empty(iv, discrete):
    lo, hi = iv
    return hi < lo if discrete else hi <= lo


def check_admissible(box, state, discrete=True):
    """Raise unless ``box`` places every ghost on its signed side of its heir."""
    roles = state.roles
    if len(box.intervals) != len(roles):
        raise ValueError(f"box needs {len(roles)} intervals in rank order")
    iv = {r: box.intervals[r.rank - 1] for r in roles}
    heirs = state.heirs
    for a, b in zip(heirs, heirs[1:]):
        if _empty(iv[a], discrete) or _empty(iv[b], discrete):
            continue
        if iv[a][1] >= iv[b][0]:
            raise ValueError(f"heir boxes of {a} and {b} overlap or are out of order")
    for g in state.ghosts:
        G, H = Junction(g), state.heir_of(g)
        if _empty(iv[G], discrete) or _empty(iv[H], discrete):
            continue
        if state.ghost_sign(g) > 0:
            ok = iv[G][1] <= iv[H][0]
        else:
            ok = iv[G][0] > iv[H][1]
        if not ok:
            raise ValueError(f"ghost {g} box is not on the {'left' if state.ghost_sign(g) > 0 else 'right'} of heir {H}")


def permuted_set_probability(xs, box, state, kernel):
    """``sgn(A) * sum over candidates pi of sgn(pi) * P(X_T in A_pi)`` for independent walkers.

    ``state`` supplies the ghost set and signs (positions are not used).
    For an admissible product set ``A`` the permuted set ``A_pi`` puts
    walker ``j`` in the interval of role ``pi(I_j)``.
    """
    ks = [kernel(x) for x in xs]
    discrete = all(k.discrete for k in ks)
    check_admissible(box, state, discrete)
    iv = {r: box.intervals[r.rank - 1] for r in state.roles}
    zero = Fraction(0) if discrete else 0.0
    if any(_empty(v, discrete) for v in iv.values()):
        return zero
    total = zero
    for pi in candidate_bijections(state):
        term = bijection_sign(pi) * state.sign
        for k, f in zip(ks, pi):
            term *= k.mass(*iv[f])
            if not term:
                break
        total += term
    return total


def lattice_site(x, N, T=1.0):
    """Checkerboard site for Brownian coordinate ``x`` at ``N`` steps per time ``T``."""
    s = x * math.sqrt(N / T)
    site = round(s)
    if abs(s - site) > 1e-9 or site % 2:
        raise ValueError(f"{x} is not an even lattice site for N={N}")
    return site


def scaled_lattice_heir_density(xs, ghosts, ys, N, T=1.0):
    """Diffusively rescaled checkerboard heir mass, as a density.

    ``N`` walk steps play the role of time ``T`` with space step
    ``h = sqrt(T / N)``; reachable sites are ``2h`` apart, so the mass is
    divided by ``(2h)^k`` for ``k`` heirs.
    """
    from .spacetime import SRWKernels
    sx = [lattice_site(x, N, T) for x in xs]
    sy = [lattice_site(y, N, T) for y in ys]
    mass = heir_mass(sx, ghosts, sy, SRWKernels(N))
    h = math.sqrt(T / N)
    return float(mass) / (2 * h) ** len(ys)


def density_grid(xs, ghosts, axes, kernel):
    """``[(ys, heir_mass)]`` over the strictly increasing tuples of a grid."""
    out = []
    for ys in itertools.product(*axes):
        if any(a >= b for a, b in zip(ys, ys[1:])):
            continue
        out.append((ys, heir_mass(xs, ghosts, ys, kernel)))
    return out
