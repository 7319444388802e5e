"""Diagonalizable norms on finite-dimensional K-spaces.

Everything is in valuation units.  A norm is stored through a diagonalizing
basis ``(b_i)`` and weights ``w_i = -log norm(b_i)``; evaluation returns

    nu(v) = min_i (nu(a_i) + w_i),    v = sum_i a_i b_i,

which is ``-log norm(v)``.  Relative spectra follow the convention
``lambda_i = log b(s_i) - log a(s_i) = nu_a(s_i) - nu_b(s_i)``, so that
``relative_spectrum(a, scale(a, c))`` is constantly ``-c``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from typing import Optional, Sequence

from .field import INF, FieldElem, rat, rat_text
from .linalg import (
    Matrix,
    column_reduce,
    det,
    min_val_on_translate,
    solve_in_basis,
    valuated_smith,
)


class DimensionError(ValueError):
    pass


class DiagNorm:
    """Norm diagonal in the columns of ``basis`` with the given weights."""

    __slots__ = ("basis", "weights", "dim", "_diag")

    def __init__(self, basis: Matrix, weights: Sequence):
        if basis.nrows != basis.ncols:
            raise DimensionError("basis must be square")
        if len(weights) != basis.ncols:
            raise DimensionError("one weight per basis vector")
        self.basis = basis
        self.weights = tuple(rat(w) for w in weights)
        self.dim = basis.ncols
        self._diag = None

    @classmethod
    def monomial(cls, weights: Sequence, N: int = 1) -> "DiagNorm":
        """Norm diagonal in the standard basis."""
        if not weights:
            raise DimensionError("dimension-0 spaces are not supported")
        out = cls(Matrix.identity(len(weights), N), weights)
        out._diag = True
        return out

    @classmethod
    def trivial(cls, d: int, N: int = 1) -> "DiagNorm":
        return cls.monomial([0] * d, N)

    @property
    def N(self) -> int:
        return self.basis.N

    @property
    def is_lattice(self) -> bool:
        return all(w == 0 for w in self.weights)

    def is_monomial(self) -> bool:
        if self._diag is None:
            self._diag = self.basis.is_diagonal()
        return self._diag

    def monomial_weights(self) -> list:
        """Valuations of the standard basis vectors, for a diagonal basis."""
        if not self.is_monomial():
            raise ValueError("norm is not diagonal in the standard basis")
        return [w - self.basis.rows[i][i].val() for i, w in enumerate(self.weights)]

    def __call__(self, v) -> Fraction:
        return eval_norm(self, v)

    def to_record(self) -> dict:
        return {
            "dim": self.dim,
            "basis": self.basis.to_text(),
            "weights": [rat_text(w) for w in self.weights],
            "ramification": self.N,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "DiagNorm":
        N = int(rec.get("ramification", 1))
        d = int(rec["dim"])
        if "basis" in rec and rec["basis"] is not None:
            basis = Matrix.from_text(rec["basis"], N)
        else:
            basis = Matrix.identity(d, N)
        if basis.shape != (d, d):
            raise DimensionError("basis shape does not match dim")
        return cls(basis, [rat(w) for w in rec["weights"]])

    def __repr__(self):
        return f"DiagNorm(dim={self.dim}, weights={[rat_text(w) for w in self.weights]}, N={self.N})"


@dataclass(frozen=True)
class SpectralData:
    """Relative spectrum, sorted descending, with its derived quantities."""

    lambdas: tuple

    @property
    def dim(self) -> int:
        return len(self.lambdas)

    @property
    def vol(self) -> Fraction:
        return sum(self.lambdas, Fraction(0)) / self.dim

    @property
    def d1(self) -> Fraction:
        return sum((abs(x) for x in self.lambdas), Fraction(0)) / self.dim

    @property
    def dinf(self) -> Fraction:
        return max(abs(x) for x in self.lambdas)

    def dp_pow(self, p: int) -> Fraction:
        """``d_p ** p``, the p-th absolute moment."""
        return sum((abs(x) ** p for x in self.lambdas), Fraction(0)) / self.dim

    def dp(self, p: int) -> Fraction:
        """Exact ``d_p``; raises when the p-th root is irrational."""
        m = self.dp_pow(p)
        a, b = _iroot(m.numerator, p), _iroot(m.denominator, p)
        if a is None or b is None:
            raise ValueError(f"d_{p} is irrational here; use dp_pow")
        return Fraction(a, b)

    def measure(self) -> list:
        """Spectral measure as sorted ``(location, mass)`` atoms."""
        c = Counter(self.lambdas)
        return [(x, Fraction(n, self.dim)) for x, n in sorted(c.items())]

    def scaled(self, m) -> "SpectralData":
        m = rat(m)
        return SpectralData(tuple(x / m for x in self.lambdas))


def _iroot(n: int, p: int):
    r = round(n ** (1.0 / p)) if n else 0
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** p == n:
            return c
    return None


def _check_same(a: DiagNorm, b: DiagNorm):
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _common(a: DiagNorm, b: DiagNorm) -> tuple[DiagNorm, DiagNorm]:
    if a.N == b.N:
        return a, b
    N = a.N * b.N // math.gcd(a.N, b.N)
    return ground_field_extension(a, N // a.N), ground_field_extension(b, N // b.N)


# -- evaluation and spectra -----------------------------------------------------

def eval_norm(n: DiagNorm, v: Sequence):
    """``-log n(v)``; ``INF`` for the zero vector."""
    if len(v) != n.dim:
        raise DimensionError("vector does not live in the norm's space")
    x = solve_in_basis(n.basis, v)
    vals = [c.val() + w for c, w in zip(x, n.weights) if not c.is_zero]
    return min(vals) if vals else INF


def _spectrum_pairs(a: DiagNorm, b: DiagNorm) -> list:
    """``[(nu_a(s), nu_b(s), column index in a's reduced basis)]`` for a joint
    diagonalizing basis, unsorted."""
    if a.is_monomial() and b.is_monomial():
        wa, wb = a.monomial_weights(), b.monomial_weights()
        return [(x, y, i) for i, (x, y) in enumerate(zip(wa, wb))]
    T = a.basis.solve(b.basis)
    pivots, _, _ = valuated_smith(T, a.weights, [-w for w in b.weights])
    return [(a.weights[i], a.weights[i] - s, i) for i, _, s in pivots]


def relative_spectrum(a: DiagNorm, b: DiagNorm) -> SpectralData:
    _check_same(a, b)
    a, b = _common(a, b)
    lam = sorted((x - y for x, y, _ in _spectrum_pairs(a, b)), reverse=True)
    return SpectralData(tuple(lam))


def joint_basis(a: DiagNorm, b: DiagNorm) -> tuple[Matrix, list, list]:
    """A basis diagonalizing both norms, with the valuations of each norm."""
    _check_same(a, b)
    a, b = _common(a, b)
    if a.is_monomial() and b.is_monomial():
        wa, wb = a.monomial_weights(), b.monomial_weights()
        return Matrix.identity(a.dim, a.N), wa, wb
    T = a.basis.solve(b.basis)
    pivots, Linv, _ = valuated_smith(T, a.weights, [-w for w in b.weights], track=True)
    A = a.basis @ Matrix(Linv, a.N)
    cols = A.columns()
    order = [i for i, _, _ in pivots]
    S = Matrix.from_columns([cols[i] for i in order], a.N)
    wa = [a.weights[i] for i in order]
    wb = [a.weights[i] - s for i, _, s in pivots]
    return S, wa, wb


def vol(a: DiagNorm, b: DiagNorm) -> Fraction:
    return relative_spectrum(a, b).vol


def vol_det(a: DiagNorm, b: DiagNorm) -> Fraction:
    """Relative volume from top exterior powers of the standard basis,
    independent of any joint diagonalization."""
    _check_same(a, b)
    top_a = sum(a.weights, Fraction(0)) - det(a.basis).val()
    top_b = sum(b.weights, Fraction(0)) - det(b.basis).val()
    return (top_a - top_b) / a.dim


def d1(a, b) -> Fraction:
    return relative_spectrum(a, b).d1


def dinf(a, b) -> Fraction:
    return relative_spectrum(a, b).dinf


def dp(a, b, p: int) -> Fraction:
    return relative_spectrum(a, b).dp(p)


# -- constructions ---------------------------------------------------------------

def scale(n: DiagNorm, c) -> DiagNorm:
    """Multiply the norm by ``e^{-c}``: every weight gains ``c``."""
    c = rat(c)
    return DiagNorm(n.basis, [w + c for w in n.weights])


def max_norm(a: DiagNorm, b: DiagNorm) -> DiagNorm:
    """Pointwise maximum of two norms (minimum of valuations)."""
    S, wa, wb = joint_basis(a, b)
    return DiagNorm(S, [min(x, y) for x, y in zip(wa, wb)])


def tensor_power(n: DiagNorm, k: int) -> DiagNorm:
    if k < 1:
        raise ValueError("k >= 1")
    d = n.dim
    cols = n.basis.columns()
    idx = list(product(range(d), repeat=k))
    new_cols, weights = [], []
    for I in idx:
        col = []
        for J in idx:
            x = FieldElem.one(n.N)
            for i, j in zip(I, J):
                x = x * cols[i][j]
                if x.is_zero:
                    break
            col.append(x)
        new_cols.append(col)
        weights.append(sum((n.weights[i] for i in I), Fraction(0)))
    return DiagNorm(Matrix.from_columns(new_cols, n.N), weights)


def sym_monomials(d: int, k: int) -> list:
    """Multisets of size k from range(d), the standard basis of Sym^k."""
    return list(combinations_with_replacement(range(d), k))


def sym_power(n: DiagNorm, k: int) -> DiagNorm:
    """Induced norm on Sym^k, diagonal in products of basis vectors."""
    if k < 1:
        raise ValueError("k >= 1")
    d = n.dim
    mons = sym_monomials(d, k)
    pos = {m: i for i, m in enumerate(mons)}
    cols = n.basis.columns()
    zero = FieldElem.zero(n.N)
    if n.is_monomial():
        diag = [cols[i][i] for i in range(d)]
        new_cols = []
        for m in mons:
            x = FieldElem.one(n.N)
            for i in m:
                x = x * diag[i]
            col = [zero] * len(mons)
            col[pos[m]] = x
            new_cols.append(col)
    else:
        new_cols = []
        for m in mons:
            poly = {(): FieldElem.one(n.N)}
            for i in m:
                nxt: dict = {}
                for key, c in poly.items():
                    for r in range(d):
                        e = cols[i][r]
                        if e.is_zero:
                            continue
                        kk = tuple(sorted(key + (r,)))
                        nxt[kk] = nxt[kk] + c * e if kk in nxt else c * e
                poly = nxt
            col = [zero] * len(mons)
            for key, c in poly.items():
                col[pos[key]] = c
            new_cols.append(col)
    weights = [sum((n.weights[i] for i in m), Fraction(0)) for m in mons]
    return DiagNorm(Matrix.from_columns(new_cols, n.N), weights)


def ext_power(n: DiagNorm, k: int) -> DiagNorm:
    """Induced norm on the k-th exterior power, basis of wedges."""
    d = n.dim
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= dim")
    subsets = list(combinations(range(d), k))
    new_cols = []
    for I in subsets:
        col = []
        for J in subsets:
            sub = Matrix([[n.basis.rows[r][c] for c in I] for r in J], n.N)
            col.append(det(sub))
        new_cols.append(col)
    weights = [sum((n.weights[i] for i in I), Fraction(0)) for I in subsets]
    return DiagNorm(Matrix.from_columns(new_cols, n.N), weights)


def quotient_norm(n: DiagNorm, A: Matrix) -> DiagNorm:
    """Quotient norm along a surjection ``A: V -> W`` (columns index V)."""
    if A.ncols != n.dim:
        raise DimensionError("surjection source does not match the norm")
    N = max(A.N, n.N)
    if A.N != n.N:
        N = A.N * n.N // math.gcd(A.N, n.N)
    C = A.at(N) @ n.basis.at(N)
    cols, shifts = column_reduce(C, [-w for w in n.weights])
    if len(cols) < A.nrows:
        raise ValueError("map is not surjective")
    return DiagNorm(Matrix.from_columns(cols, N), [-s for s in shifts])


def ground_field_extension(n: DiagNorm, M: int) -> DiagNorm:
    if M < 1:
        raise ValueError("M >= 1")
    if M == 1:
        return n
    return DiagNorm(n.basis.ramify(M), n.weights)


def lattice_approximation(n: DiagNorm, eps) -> DiagNorm:
    """A lattice norm within ``d_inf <= 1/(2N') < eps`` of ``n``.

    Ramifies to the least multiple ``N'`` of ``n.N`` with ``1/N' < eps``,
    rounds each weight to ``(1/N') Z`` and folds it into the basis.
    """
    eps = rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if n.is_lattice:
        return n
    N0 = n.N
    M = 1
    while Fraction(1, N0 * M) >= eps:
        M += 1
    Np = N0 * M
    ext = ground_field_extension(n, M)
    cols = ext.basis.columns()
    new_cols = []
    for col, w in zip(cols, ext.weights):
        r = _round_half_down(w * Np)
        s = FieldElem.upow(-r, 1, Np)
        new_cols.append([x * s for x in col])
    return DiagNorm(Matrix.from_columns(new_cols, Np), [0] * n.dim)


def _round_half_down(x: Fraction) -> int:
    f = math.floor(x)
    return f if x - f <= Fraction(1, 2) else f + 1


def quotient_value(n: DiagNorm, target, S: Optional[Matrix]):
    """``-log`` of the quotient norm of ``target`` modulo ``span(S)``."""
    return min_val_on_translate(target, S, n)
