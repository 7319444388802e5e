"""Okounkov semigroups, the function Phi, Chebyshev envelopes and the
limiting spectral measures, for O(1) on projective d-space.

Sections are polynomials in the affine coordinates of the torus-fixed chart,
so the valuation attached to a monomial order is just the order-minimal
exponent.  Every exponent of degree <= m is a section of O(m), hence the
semigroup slice in degree m is the full lattice simplex.
"""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence

from . import kernels
from .field import FieldElem, rat, rat_text
from .linalg import Matrix, min_val_on_translate
from .section_ring import _exponents, _valid_degrees, h0, norm_at, weights_at


# -- monomial orders and the valuation ----------------------------------------------

@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "lex"
    d: int = 1

    def __post_init__(self):
        if self.kind not in ("lex", "grlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, alpha) -> tuple:
        alpha = tuple(alpha)
        if self.kind == "grlex":
            return (sum(alpha),) + alpha
        return alpha

    def less(self, a, b) -> bool:
        return self.key(a) < self.key(b)


def ord_val(f, order: MonomialOrder) -> tuple:
    """Order-minimal exponent of a polynomial given as ``{alpha: coeff}``."""
    support = [tuple(a) if not isinstance(a, int) else (a,) for a, c in f.items() if c != 0]
    if not support:
        raise ValueError("valuation of the zero section")
    return min(support, key=order.key)


def poly_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for a, x in f.items():
        for b, y in g.items():
            s = tuple(p + q for p, q in zip(a, b))
            out[s] = out.get(s, 0) + x * y
    return {a: c for a, c in out.items() if c != 0}


# -- semigroups ---------------------------------------------------------------------

def gamma_slice(d: int, m: int) -> frozenset:
    if m < 0:
        raise ValueError("m >= 0")
    return frozenset(_exponents(d, m)) if m else frozenset({(0,) * d})


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass
class OkSemigroup:
    d: int
    slices: dict  # n -> frozenset of exponents
    provenance: str = "full simplex"

    @property
    def levels(self) -> list:
        return sorted(self.slices)

    def count(self, n: int) -> int:
        return len(self.slices[n])

    def volume_estimate(self, n: int) -> Fraction:
        """Lattice-count estimate ``|Gamma_n| / n^d`` of the body's volume."""
        return Fraction(self.count(n), n ** self.d)

    def semigroup_violation(self) -> Optional[tuple]:
        """First ``(m, alpha, n, beta)`` with ``alpha + beta`` missing, or None."""
        lv = self.levels
        for m in lv:
            for n in lv:
                if n < m or m + n not in self.slices:
                    continue
                tgt = self.slices[m + n]
                for a in self.slices[m]:
                    for b in self.slices[n]:
                        if _add(a, b) not in tgt:
                            return (m, a, n, b)
        return None

    def growth_bound(self) -> Fraction:
        """``max |alpha| / n`` over stored slices (linear growth constant)."""
        return max((Fraction(sum(a), n) for n, s in self.slices.items() if n for a in s),
                   default=Fraction(0))

    def compact_slice_violation(self, box: Sequence, m: int) -> Optional[tuple]:
        """A lattice point of ``box / m`` missing from the slice, or None.

        ``box`` is a list of (lo, hi) rational bounds, one per coordinate.
        """
        ranges = [range(math.ceil(rat(lo) * m), math.floor(rat(hi) * m) + 1) for lo, hi in box]
        from itertools import product
        for a in product(*ranges):
            if sum(a) <= m and a not in self.slices[m]:
                return a
        return None


def full_semigroup(d: int, N: int) -> OkSemigroup:
    return OkSemigroup(d, {n: gamma_slice(d, n) for n in range(N + 1)})


def corner_deleted_semigroup(N: int) -> OkSemigroup:
    """Plane simplex semigroup with the corner ``(0, 1)`` removed from level 1."""
    sl = {n: gamma_slice(2, n) for n in range(N + 1)}
    if N >= 1:
        sl[1] = frozenset({(0, 0), (1, 0)})
    return OkSemigroup(2, sl, "corner-deleted simplex")


def sumset_power(S: Iterable, r: int, d: int) -> frozenset:
    """The r-fold sumset ``S + ... + S``."""
    S = list(S)
    if r < 1:
        raise ValueError("r >= 1")
    if d <= 2:
        side = max(max(a) for a in S) + 1
        if d == 1:
            g = [kernels.NEG] * side
            for (a,) in S:
                g[a] = 0
            out = kernels.maxplus_power(g, r, 1)
            return frozenset((i,) for i, v in enumerate(out) if v != kernels.NEG)
        g = [[kernels.NEG] * side for _ in range(side)]
        for a, b in S:
            g[a][b] = 0
        out = kernels.maxplus_power(g, r, 2)
        return frozenset((i, j) for i, row in enumerate(out) for j, v in enumerate(row) if v != kernels.NEG)
    cur = set(S)
    for _ in range(r - 1):
        cur = {_add(a, b) for a in cur for b in S}
    return frozenset(cur)


# -- Phi --------------------------------------------------------------------------

def phi(spec, n: int, alpha, order: Optional[MonomialOrder] = None) -> Fraction:
    """Valuation of the class of ``z^alpha`` modulo sections of larger order."""
    alpha = tuple(alpha)
    d = spec.n
    order = order or MonomialOrder("lex", d)
    if n == 0:
        if any(alpha):
            raise ValueError(f"{alpha} is not in Gamma_0")
        return Fraction(0)
    exps = _exponents(d, n)
    if len(alpha) != d or sum(alpha) > n or min(alpha) < 0:
        raise ValueError(f"{alpha} is not in Gamma_{n}")
    w = weights_at(spec, n)
    if w is not None:
        return w[exps.index(alpha)]
    return phi_general(spec, n, alpha, order)


def phi_general(spec, n: int, alpha, order: MonomialOrder) -> Fraction:
    """Phi through the quotient norm, with no monomial shortcut."""
    exps = _exponents(spec.n, n)
    nrm = norm_at(spec, n)
    N = nrm.N
    one, zero = FieldElem.one(N), FieldElem.zero(N)
    target = [one if e == tuple(alpha) else zero for e in exps]
    higher = [e for e in exps if order.less(alpha, e)]
    S = None
    if higher:
        S = Matrix.from_columns([[one if e == h else zero for e in exps] for h in higher], N)
    return min_val_on_translate(target, S, nrm)


@dataclass
class PhiData:
    spec: object
    table: dict = field(default_factory=dict)  # (n, alpha) -> Fraction

    @classmethod
    def build(cls, spec, N: int, order: Optional[MonomialOrder] = None) -> "PhiData":
        """Table on degrees <= N where the graded norm is defined (multiples of k
        for a truncation)."""
        out = cls(spec)
        out.table[(0, (0,) * spec.n)] = Fraction(0)
        for n in _valid_degrees(spec, N):
            for a in _exponents(spec.n, n):
                out.table[(n, a)] = phi(spec, n, a, order)
        return out

    def superadditivity_violation(self) -> Optional[tuple]:
        keys = sorted(self.table, key=lambda k: (k[0], k[1]))
        byn: dict = {}
        for n, a in keys:
            byn.setdefault(n, []).append(a)
        for m in byn:
            for n in byn:
                if n < m or m + n not in byn:
                    continue
                for a in byn[m]:
                    x = self.table[(m, a)]
                    for b in byn[n]:
                        z = self.table.get((m + n, _add(a, b)))
                        if z is not None and z < x + self.table[(n, b)]:
                            return ((m, a), (n, b), z)
        return None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        d = self.spec.n
        w.writerow(["n"] + [f"alpha_{i + 1}" for i in range(d)] + ["phi", "phi_over_n"])
        for (n, a), v in sorted(self.table.items()):
            w.writerow([n, *a, rat_text(v), rat_text(v / n) if n else ""])
        return buf.getvalue()


def theta(spec, N: int) -> tuple[Fraction, list]:
    """``sup_alpha Phi(N, alpha)/N`` and the whole sequence for n = 1..N."""
    if N < 1:
        raise ValueError("N >= 1")
    seq = [max(phi(spec, n, a) for a in _exponents(spec.n, n)) / n for n in range(1, N + 1)]
    return seq[-1], seq


def superlevel(spec, t, N: int) -> OkSemigroup:
    """Slices ``{alpha : Phi(n, alpha) >= n t}``; ``t = None`` means minus infinity."""
    d = spec.n
    sl = {0: frozenset({(0,) * d})}
    if t is None:
        for n in range(1, N + 1):
            sl[n] = gamma_slice(d, n)
        return OkSemigroup(d, sl, "superlevel t=-inf")
    t = rat(t)
    for n in range(1, N + 1):
        sl[n] = frozenset(a for a in _exponents(d, n) if phi(spec, n, a) >= n * t)
    return OkSemigroup(d, sl, f"superlevel t={rat_text(t)}")


# -- Chebyshev envelope -------------------------------------------------------------

def phi_points(spec, N: int) -> list:
    """The cloud ``(alpha/n, Phi(n, alpha)/n)`` for 1 <= n <= N."""
    pts = set()
    for n in range(1, N + 1):
        for a in _exponents(spec.n, n):
            pts.add((tuple(Fraction(x, n) for x in a), phi(spec, n, a) / n))
    return sorted(pts)


def _upper_hull_1d(pts: list) -> list:
    """Vertices of the upper concave envelope, left to right."""
    best: dict = {}
    for (x,), y in pts:
        if x not in best or y > best[x]:
            best[x] = y
    hull: list = []
    for x, y in sorted(best.items()):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (x - x1) <= (y - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    return hull


@dataclass
class Envelope1D:
    """Concave piecewise-linear function on [0, 1] through its vertices."""

    vertices: list

    def __call__(self, x) -> Fraction:
        x = rat(x)
        xs = [v[0] for v in self.vertices]
        if x < xs[0] or x > xs[-1]:
            raise ValueError("point outside the simplex")
        i = bisect_left(xs, x)
        if xs[i] == x:
            return self.vertices[i][1]
        (x1, y1), (x2, y2) = self.vertices[i - 1], self.vertices[i]
        return y1 + (y2 - y1) * (x - x1) / (x2 - x1)

    def pushforward_cdf(self, x, strict: bool = False) -> Fraction:
        """Lebesgue measure of ``{s : G(s) <= x}`` (``< x`` when strict)."""
        x = rat(x)
        total = Fraction(0)
        for (x1, y1), (x2, y2) in zip(self.vertices, self.vertices[1:]):
            L = x2 - x1
            lo, hi = min(y1, y2), max(y1, y2)
            if y1 == y2:
                if (y1 < x) if strict else (y1 <= x):
                    total += L
                continue
            if x <= lo if strict else x < lo:
                continue
            if x > hi or (not strict and x == hi):
                total += L
                continue
            total += L * (x - lo) / (hi - lo)
        return total

    def breakpoints(self) -> list:
        return sorted({v[1] for v in self.vertices})


def envelope_1d(spec, N: int) -> Envelope1D:
    hull = _upper_hull_1d(phi_points(spec, N))
    if hull[0][0] != 0 or hull[-1][0] != 1:
        raise ValueError("point cloud does not span the segment")
    return Envelope1D(hull)


def _envelope_2d_factory(spec, N: int) -> Callable:
    """Exact evaluation over candidate upper facets found by a float hull."""
    import numpy as np
    from scipy.spatial import ConvexHull, QhullError

    best: dict = {}
    for (x, y), z in phi_points(spec, N):
        if (x, y) not in best or z > best[(x, y)]:
            best[(x, y)] = z
    keys = list(best)
    zs = [best[k] for k in keys]
    if len(set(zs)) == 1:
        c = zs[0]
        return lambda p: c
    arr = np.array([[float(a), float(b), float(z)] for (a, b), z in zip(keys, zs)])
    try:
        hull = ConvexHull(arr)
    except QhullError:
        hull = ConvexHull(arr, qhull_options="QJ")
    tris = [tuple(s) for s, eq in zip(hull.simplices, hull.equations) if eq[2] > 1e-12]

    def G(p):
        px, py = rat(p[0]), rat(p[1])
        out = None
        for i, j, k in tris:
            (x1, y1), (x2, y2), (x3, y3) = keys[i], keys[j], keys[k]
            det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
            if det == 0:
                continue
            l2 = ((px - x1) * (y3 - y1) - (x3 - x1) * (py - y1)) / det
            l3 = ((x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)) / det
            l1 = 1 - l2 - l3
            if min(l1, l2, l3) < 0:
                continue
            v = l1 * zs[i] + l2 * zs[j] + l3 * zs[k]
            if out is None or v > out:
                out = v
        if out is None:
            raise ValueError("point outside the simplex")
        return out

    return G


def chebyshev_transform(spec, N: int, grid: Sequence) -> list:
    """Upper concave envelope of the Phi cloud up to level N, at grid points."""
    if spec.n == 1:
        G = envelope_1d(spec, N)
        return [G(p[0] if isinstance(p, (tuple, list)) else p) for p in grid]
    if spec.n == 2:
        G2 = _envelope_2d_factory(spec, N)
        return [G2(p) for p in grid]
    raise NotImplementedError("Chebyshev envelopes are available for d <= 2")


def simplex_grid(d: int, q: int) -> list:
    """Barycentres of the cells ``(alpha + 1/(d+1)) / q`` lying inside the simplex."""
    out = []
    for a in _exponents(d, q):
        p = tuple(Fraction(x * (d + 1) + 1, (d + 1) * q) for x in a)
        if sum(p) < 1:
            out.append(p)
    return out


# -- measures ---------------------------------------------------------------------

@dataclass
class AtomicMeasure:
    atoms: list  # sorted (location, mass)

    @classmethod
    def from_values(cls, values: Iterable) -> "AtomicMeasure":
        vals = list(values)
        cnt: dict = {}
        for v in vals:
            cnt[v] = cnt.get(v, 0) + 1
        return cls([(x, Fraction(c, len(vals))) for x, c in sorted(cnt.items())])

    @property
    def locations(self) -> list:
        return [x for x, _ in self.atoms]

    @property
    def total(self) -> Fraction:
        return sum((m for _, m in self.atoms), Fraction(0))

    def cdf(self, x, strict: bool = False) -> Fraction:
        x = rat(x)
        locs = self.locations
        i = bisect_left(locs, x) if strict else bisect_right(locs, x)
        return sum((m for _, m in self.atoms[:i]), Fraction(0))

    def mass_at_least(self, t) -> Fraction:
        return self.total - self.cdf(t, strict=True)

    def mean(self) -> Fraction:
        return sum((x * m for x, m in self.atoms), Fraction(0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["location", "mass"])
        for x, m in self.atoms:
            w.writerow([rat_text(x), rat_text(m)])
        return buf.getvalue()


def mu_measure(spec, k: int) -> AtomicMeasure:
    """Normalized ``mu(k)``: mass ``1/|Gamma_k|`` at each ``Phi(k, alpha)/k``."""
    if k < 1:
        raise ValueError("k >= 1")
    return AtomicMeasure.from_values(phi(spec, k, a) / k for a in _exponents(spec.n, k))


def kolmogorov_distance(mu: AtomicMeasure, F: Callable, jumps: Iterable) -> Fraction:
    """``sup_x |mu(-inf, x] - F(x)|`` for a CDF F that is piecewise linear
    between the points of ``jumps``; F(x, strict=True) gives the left limit."""
    cands = sorted(set(mu.locations) | set(jumps))
    best = Fraction(0)
    for c in cands:
        best = max(best, abs(mu.cdf(c) - F(c)), abs(mu.cdf(c, strict=True) - F(c, strict=True)))
    return best


@dataclass
class EquidistributionRow:
    k: int
    distance: Fraction
    superlevel_ok: bool

    def record(self) -> dict:
        return {"k": self.k, "distance": rat_text(self.distance), "superlevel_ok": self.superlevel_ok}


def equidistribution_check(spec, ks: Sequence[int], grid: Optional[Sequence] = None,
                           N: Optional[int] = None, levels: Optional[Sequence] = None) -> list:
    """Distance between ``mu(k)`` and the envelope pushforward, for each k.

    On the line the pushforward of Lebesgue measure is exact.  In dimension 2
    it is replaced by the empirical measure of the envelope on ``grid``.
    The superlevel identity is checked at ``levels`` (default: the atoms).
    """
    ks = list(ks)
    if any(x >= y for x, y in zip(ks, ks[1:])):
        raise ValueError("ks must be increasing")
    N = N or ks[-1]
    if spec.n == 1:
        G = envelope_1d(spec, N)
        F = G.pushforward_cdf
        jumps = G.breakpoints()
    else:
        grid = grid or simplex_grid(spec.n, 12)
        ref = AtomicMeasure.from_values(chebyshev_transform(spec, N, grid))
        F = ref.cdf
        jumps = ref.locations
    rows = []
    for k in ks:
        mu = mu_measure(spec, k)
        dist = kolmogorov_distance(mu, F, jumps)
        ts = mu.locations if levels is None else [rat(t) for t in levels]
        ok = all(superlevel_ratio(spec, t, k) == mu.mass_at_least(t) for t in ts)
        rows.append(EquidistributionRow(k, dist, ok))
    return rows


def superlevel_ratio(spec, t, k: int) -> Fraction:
    """``|Gamma_k^{>= t}| / |Gamma_k|`` counted on the superlevel slice."""
    t = rat(t)
    cnt = sum(1 for a in _exponents(spec.n, k) if phi(spec, k, a) >= k * t)
    return Fraction(cnt, h0(spec.n, k))


# -- Fujita-type approximation --------------------------------------------------------

@dataclass
class FujitaRow:
    k: int
    r: int
    count: int
    estimate: Fraction
    full_estimate: Fraction
    inclusion_ok: bool

    @property
    def gap(self) -> Fraction:
        return abs(self.full_estimate - self.estimate)

    def record(self) -> dict:
        return {"k": self.k, "r": self.r, "count": self.count, "estimate": rat_text(self.estimate),
                "full_estimate": rat_text(self.full_estimate), "gap": rat_text(self.gap),
                "inclusion_ok": self.inclusion_ok}


def fujita_check(sg: OkSemigroup, ks: Sequence[int], N: int) -> list:
    """Count estimates of the body generated by the level-k slice.

    For each k the slice ``Gamma_k`` is summed ``r = N // k`` times and the
    count is rescaled by ``(k r)^-d``; the reference is ``|Gamma_N| / N^d``.
    """
    if N not in sg.slices:
        raise ValueError(f"semigroup has no slice at level {N}")
    full = sg.volume_estimate(N)
    rows = []
    for k in ks:
        if k not in sg.slices or k < 1:
            raise ValueError(f"semigroup has no slice at level {k}")
        r = N // k
        if r < 1:
            raise ValueError(f"k = {k} exceeds the level {N}")
        S = sumset_power(sg.slices[k], r, sg.d)
        incl = (k * r not in sg.slices) or S <= sg.slices[k * r]
        rows.append(FujitaRow(k, r, len(S), Fraction(len(S), (k * r) ** sg.d), full, incl))
    return rows
