"""Toric potentials on the skeleton of the projective line.

The skeleton is parameterized by ``r = nu(z)``.  A torus-invariant potential
is a convex piecewise-linear function of r with slopes in [-1, 0], stored as
the max of its affine pieces.  Its Monge-Ampere measure is the sum of slope
jumps at the kinks; this identification is the standard toric description
and is taken as given here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .field import rat, rat_text
from .norms import DiagNorm
from .okounkov import AtomicMeasure
from .section_ring import weights_at


class PotentialError(ValueError):
    pass


@dataclass(frozen=True)
class PLConvex:
    """``u(r) = max_i (s_i r + c_i)``; pieces sorted by slope, none dominated."""

    pieces: tuple

    @classmethod
    def from_pieces(cls, pieces: Sequence) -> "PLConvex":
        best: dict = {}
        for s, c in pieces:
            s, c = rat(s), rat(c)
            if not -1 <= s <= 0:
                raise PotentialError(f"slope {s} outside [-1, 0]")
            if s not in best or c > best[s]:
                best[s] = c
        if not best:
            raise PotentialError("a potential needs at least one piece")
        hull: list = []
        for s, c in sorted(best.items()):
            # drop the middle line when it never reaches the top
            while len(hull) >= 2:
                (s1, c1), (s2, c2) = hull[-2], hull[-1]
                if (c1 - c2) * (s - s2) >= (c2 - c) * (s2 - s1):
                    hull.pop()
                else:
                    break
            hull.append((s, c))
        return cls(tuple(hull))

    def __call__(self, r) -> Fraction:
        r = rat(r)
        return max(s * r + c for s, c in self.pieces)

    @property
    def slope_range(self) -> tuple:
        return self.pieces[0][0], self.pieces[-1][0]

    def kinks(self) -> list:
        """``(r, jump)`` where consecutive pieces meet, increasing in r."""
        out = []
        for (s1, c1), (s2, c2) in zip(self.pieces, self.pieces[1:]):
            out.append(((c1 - c2) / (s2 - s1), s2 - s1))
        return out

    def to_pairs(self) -> list:
        return [[rat_text(s), rat_text(c)] for s, c in self.pieces]

    @classmethod
    def from_pairs(cls, pairs) -> "PLConvex":
        return cls.from_pieces([(s, c) for s, c in pairs])


def fs_skeleton(norm: DiagNorm, m: int) -> PLConvex:
    """``u(r) = m^-1 max_j (w_j - j r)`` for a monomial-diagonal norm on O(m)."""
    if norm.dim != m + 1:
        raise PotentialError(f"degree-{m} sections of O(1) on the line need dimension {m + 1}")
    if not norm.is_monomial():
        raise PotentialError("only norms diagonal in the monomial basis have skeletal potentials")
    return fs_from_weights(norm.monomial_weights(), m)


def fs_from_weights(w: Sequence, m: int) -> PLConvex:
    return PLConvex.from_pieces([(Fraction(-j, m), rat(x) / m) for j, x in enumerate(w)])


def ma_measure(u: PLConvex) -> AtomicMeasure:
    return AtomicMeasure(u.kinks())


def _mass(u: PLConvex) -> Fraction:
    lo, hi = u.slope_range
    return hi - lo


def energy(u: PLConvex, v: PLConvex) -> Fraction:
    """``(1/2) [ int (u - v) MA(u) + int (u - v) MA(v) ]``."""
    if _mass(u) != 1 or _mass(v) != 1:
        raise PotentialError("energy needs potentials of Monge-Ampere mass 1")
    tot = Fraction(0)
    for w in (u, v):
        for r, jump in w.kinks():
            tot += jump * (u(r) - v(r))
    return tot / 2


def supnorm_weights(u: PLConvex, m: int) -> list:
    """``w_j = inf_r (j r + m u(r))`` for j = 0..m."""
    lo, hi = u.slope_range
    if lo != -1 or hi != 0:
        raise PotentialError("the sup-norm needs slopes reaching both -1 and 0")
    kinks = [r for r, _ in u.kinks()]
    c_lo, c_hi = u.pieces[0][1], u.pieces[-1][1]
    out = []
    for j in range(m + 1):
        vals = [j * r + m * u(r) for r in kinks]
        if j == 0:
            vals.append(m * c_hi)  # limit r -> +inf
        if j == m:
            vals.append(m * c_lo)  # limit r -> -inf
        out.append(min(vals))
    return out


def supnorm_toric(u: PLConvex, m: int) -> DiagNorm:
    return DiagNorm.monomial(supnorm_weights(u, m))


def sup_abs_diff(u: PLConvex, v: PLConvex) -> Fraction:
    """``sup_r |u - v|``, including the limits at both ends of the skeleton."""
    if u.slope_range != v.slope_range:
        raise PotentialError("potentials with different end slopes differ unboundedly")
    pts = [r for r, _ in u.kinks()] + [r for r, _ in v.kinks()]
    vals = [abs(u(r) - v(r)) for r in pts]
    vals.append(abs(u.pieces[0][1] - v.pieces[0][1]))
    vals.append(abs(u.pieces[-1][1] - v.pieces[-1][1]))
    return max(vals)


def dominates(u: PLConvex, v: PLConvex) -> bool:
    """``u >= v`` everywhere (checked on kinks and at both ends)."""
    if u.slope_range != v.slope_range:
        return False
    pts = [r for r, _ in u.kinks()] + [r for r, _ in v.kinks()]
    return (all(u(r) >= v(r) for r in pts) and u.pieces[0][1] >= v.pieces[0][1]
            and u.pieces[-1][1] >= v.pieces[-1][1])


def random_potential(rng: random.Random, m: int, spread: int = 4) -> PLConvex:
    """FS potential of a random monomial norm on O(m): slopes in (1/m)Z."""
    w = [Fraction(rng.randint(-spread * m, spread * m), rng.choice([1, 2, 3])) for _ in range(m + 1)]
    return fs_from_weights(w, m)


@dataclass
class TheoremBRow:
    m: int
    energy: Fraction
    vol_over_m: Fraction

    @property
    def gap(self) -> Fraction:
        return abs(self.energy - self.vol_over_m)

    def record(self) -> dict:
        return {"m": self.m, "energy": rat_text(self.energy),
                "vol_over_m": rat_text(self.vol_over_m), "gap": rat_text(self.gap)}


def theorem_b_experiment(a, b, degrees: Sequence[int]) -> list:
    """Per-degree energy of the FS potentials against the rescaled volume."""
    if a.n != 1 or b.n != 1:
        raise PotentialError("energies are computed on the projective line only")
    rows = []
    for m in degrees:
        wa, wb = weights_at(a, m), weights_at(b, m)
        if wa is None or wb is None:
            raise PotentialError("both specs must be diagonal in the monomial basis")
        E = energy(fs_from_weights(wa, m), fs_from_weights(wb, m))
        v = sum((x - y for x, y in zip(wa, wb)), Fraction(0)) / (m + 1) / m
        rows.append(TheoremBRow(m, E, v))
    return rows
