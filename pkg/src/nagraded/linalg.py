"""Exact linear algebra over K with valuation-aware pivoting.

The central routine is :func:`valuated_smith`, an elimination that always
pivots on the entry of least *shifted* valuation

    nu(T[i][j]) + row_shifts[i] + col_shifts[j].

Every row/column operation it performs has a multiplier of non-negative
shifted valuation, so it is unimodular over the valuation ring after the
shifts are absorbed.  The pivot values are therefore the invariant factors of
the shifted matrix, with no need to ramify.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .field import INF, FieldElem, common_ramification, rat


class SingularMatrixError(ArithmeticError):
    pass


class Matrix:
    """Dense matrix of FieldElem entries sharing one ramification index."""

    __slots__ = ("rows", "nrows", "ncols", "N")

    def __init__(self, rows, N: Optional[int] = None):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrices must be non-empty")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        if N is None:
            N = common_ramification(x for r in rows for x in r if isinstance(x, FieldElem))
        self.rows = [[_elem(x, N) for x in r] for r in rows]
        self.nrows = len(rows)
        self.ncols = ncols
        self.N = N

    @classmethod
    def identity(cls, d: int, N: int = 1) -> "Matrix":
        one, zero = FieldElem.one(N), FieldElem.zero(N)
        return cls([[one if i == j else zero for j in range(d)] for i in range(d)], N)

    @classmethod
    def diagonal(cls, entries: Sequence, N: Optional[int] = None) -> "Matrix":
        d = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(d)] for i in range(d)], N)

    @classmethod
    def from_columns(cls, cols, N: Optional[int] = None) -> "Matrix":
        cols = [list(c) for c in cols]
        return cls([list(r) for r in zip(*cols)], N)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def copy_rows(self) -> list:
        return [list(r) for r in self.rows]

    def ramify(self, M: int) -> "Matrix":
        if M == 1:
            return self
        return Matrix([[x.ramify(M) for x in r] for r in self.rows], self.N * M)

    def at(self, N: int) -> "Matrix":
        return self if N == self.N else self.ramify(N // self.N)

    def transpose(self) -> "Matrix":
        return Matrix([list(c) for c in zip(*self.rows)], self.N)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("dimension mismatch")
            cols = other.columns()
            return Matrix([[_dot(r, c) for c in cols] for r in self.rows])
        v = list(other)
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        return [_dot(r, v) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and all(
            x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    def is_diagonal(self) -> bool:
        return self.nrows == self.ncols and all(
            x.is_zero for i, r in enumerate(self.rows) for j, x in enumerate(r) if i != j)

    def det(self) -> FieldElem:
        return det(self)

    def inverse(self) -> "Matrix":
        d = self.nrows
        if d != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        sol = _gauss_solve(self.rows, Matrix.identity(d, self.N).rows)
        return Matrix(sol, self.N)

    def solve(self, rhs: "Matrix") -> "Matrix":
        """``X`` with ``self @ X == rhs``."""
        if self.nrows != self.ncols or rhs.nrows != self.nrows:
            raise ValueError("dimension mismatch")
        N = common_ramification([FieldElem.one(self.N), FieldElem.one(rhs.N)])
        return Matrix(_gauss_solve(self.at(N).rows, rhs.at(N).rows), N)

    def to_text(self) -> list:
        return [[x.to_text() for x in r] for r in self.rows]

    @classmethod
    def from_text(cls, rows, N: int = 1) -> "Matrix":
        return cls([[FieldElem.from_text(x, N) for x in r] for r in rows], N)

    def __repr__(self):
        return f"Matrix({self.to_text()!r}, N={self.N})"


def _elem(x, N: int) -> FieldElem:
    if isinstance(x, FieldElem):
        return x.at(N)
    return FieldElem.const(rat(x), N)


def _dot(r, c):
    acc = None
    for x, y in zip(r, c):
        if x.is_zero or y.is_zero:
            continue
        p = x * y
        acc = p if acc is None else acc + p
    if acc is None:
        return FieldElem.zero(r[0].N if r else 1)
    return acc


def _gauss_solve(A_rows, B_rows):
    """Solve A X = B for square invertible A (lists of rows)."""
    d = len(A_rows)
    A = [list(r) for r in A_rows]
    B = [list(r) for r in B_rows]
    for c in range(d):
        # any nonzero pivot works for exact arithmetic; prefer least valuation
        best, bv = None, INF
        for r in range(c, d):
            x = A[r][c]
            if not x.is_zero:
                v = x.val()
                if best is None or v < bv:
                    best, bv = r, v
        if best is None:
            raise SingularMatrixError("matrix is singular")
        A[c], A[best] = A[best], A[c]
        B[c], B[best] = B[best], B[c]
        inv = A[c][c].inv()
        A[c] = [x * inv for x in A[c]]
        B[c] = [x * inv for x in B[c]]
        for r in range(d):
            if r != c and not A[r][c].is_zero:
                m = A[r][c]
                A[r] = [x - m * y if not y.is_zero else x for x, y in zip(A[r], A[c])]
                B[r] = [x - m * y if not y.is_zero else x for x, y in zip(B[r], B[c])]
    return B


def det(M: Matrix) -> FieldElem:
    d = M.nrows
    if d != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    A = M.copy_rows()
    out = FieldElem.one(M.N)
    for c in range(d):
        piv = next((r for r in range(c, d) if not A[r][c].is_zero), None)
        if piv is None:
            return FieldElem.zero(M.N)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            out = -out
        p = A[c][c]
        out = out * p
        inv = p.inv()
        for r in range(c + 1, d):
            if not A[r][c].is_zero:
                m = A[r][c] * inv
                A[r] = [x - m * y if not y.is_zero else x for x, y in zip(A[r], A[c])]
    return out


def solve_in_basis(B: Matrix, v: Sequence) -> list:
    """Coordinates ``x`` with ``B @ x == v``."""
    if B.nrows != B.ncols:
        raise ValueError("basis matrix must be square")
    if len(v) != B.nrows:
        raise ValueError("dimension mismatch")
    N = common_ramification([FieldElem.one(B.N)] + [x for x in v if isinstance(x, FieldElem)])
    Bn = B.at(N)
    sol = _gauss_solve(Bn.rows, [[_elem(x, N)] for x in v])
    return [r[0] for r in sol]


# -- valuation-pivoted Smith reduction ----------------------------------------

def valuated_smith(T: Matrix, row_shifts, col_shifts, track: bool = False):
    """Valuation-pivoted elimination of a square invertible matrix.

    Returns ``(pivots, Linv, R)`` where ``pivots`` lists ``(i, j, s)`` in
    elimination order with ``s`` the shifted valuation of the pivot.  When
    ``track`` is set, ``Linv`` and ``R`` (row lists) satisfy
    ``inverse(Linv) @ T @ R == final`` where ``final`` has exactly the pivot
    entries; otherwise they are ``None``.
    """
    d = T.nrows
    if d != T.ncols:
        raise ValueError("weighted invariants need a square matrix")
    rs = [rat(x) for x in row_shifts]
    cs = [rat(x) for x in col_shifts]
    if len(rs) != d or len(cs) != d:
        raise ValueError("shift lists must match the matrix size")
    A = T.copy_rows()
    rows_left = list(range(d))
    cols_left = list(range(d))
    Linv = Matrix.identity(d, T.N).copy_rows() if track else None
    R = Matrix.identity(d, T.N).copy_rows() if track else None
    pivots = []
    while rows_left:
        best = None
        for i in rows_left:
            row = A[i]
            ri = rs[i]
            for j in cols_left:
                x = row[j]
                if x.is_zero:
                    continue
                s = Fraction(x.k, x.N) + ri + cs[j]
                # strict '<' with row-major scan = lexicographic tie-break
                if best is None or s < best[2]:
                    best = (i, j, s)
        if best is None:
            raise SingularMatrixError("matrix is singular")
        i, j, s = best
        p_inv = A[i][j].inv()
        prow = A[i]
        for k in rows_left:
            if k == i or A[k][j].is_zero:
                continue
            m = A[k][j] * p_inv
            rk = A[k]
            for c in cols_left:
                y = prow[c]
                if not y.is_zero:
                    rk[c] = rk[c] - m * y
            rk[j] = FieldElem.zero(T.N)
            if track:
                # row_k -= m row_i  <=>  Linv[:, i] += m * Linv[:, k]
                for r in Linv:
                    if not r[k].is_zero:
                        r[i] = r[i] + m * r[k]
        if track:
            for c in cols_left:
                if c == j or prow[c].is_zero:
                    continue
                m = prow[c] * p_inv
                # col_c -= m col_j
                for r in R:
                    if not r[j].is_zero:
                        r[c] = r[c] - m * r[j]
        pivots.append(best)
        rows_left.remove(i)
        cols_left.remove(j)
    return pivots, Linv, R


def weighted_invariants(T: Matrix, row_shifts, col_shifts, method: str = "elimination") -> list:
    """Invariant-factor valuations of the shifted matrix, ascending.

    ``method`` is ``"elimination"``, ``"minors"`` (d <= 8) or ``"both"``,
    which runs the two and raises if they disagree.
    """
    if method == "elimination":
        pivots, _, _ = valuated_smith(T, row_shifts, col_shifts)
        return sorted(p[2] for p in pivots)
    if method == "minors":
        return _invariants_by_minors(T, row_shifts, col_shifts)
    if method == "both":
        a = weighted_invariants(T, row_shifts, col_shifts, "elimination")
        b = _invariants_by_minors(T, row_shifts, col_shifts)
        if a != b:
            raise AssertionError(f"minor and elimination invariants disagree: {b} vs {a}")
        return a
    raise ValueError(f"unknown method {method!r}")


def minor_valuations(T: Matrix) -> dict:
    """``{(I, J): nu(det T[I, J])}`` for every square submatrix, by Laplace
    expansion reusing the minors one size down."""
    d = T.nrows
    prev = {((), ()): FieldElem.one(T.N)}
    out = {}
    for k in range(1, d + 1):
        cur = {}
        for I in combinations(range(d), k):
            i0, rest = I[0], I[1:]
            for J in combinations(range(T.ncols), k):
                acc = None
                for pos, j in enumerate(J):
                    x = T.rows[i0][j]
                    if x.is_zero:
                        continue
                    sub = prev[(rest, J[:pos] + J[pos + 1:])]
                    if sub.is_zero:
                        continue
                    term = x * sub
                    if pos % 2:
                        term = -term
                    acc = term if acc is None else acc + term
                cur[(I, J)] = acc if acc is not None else FieldElem.zero(T.N)
        for key, x in cur.items():
            out[key] = x.val()
        prev = cur
    return out


def _invariants_by_minors(T: Matrix, row_shifts, col_shifts) -> list:
    d = T.nrows
    if d != T.ncols:
        raise ValueError("weighted invariants need a square matrix")
    if d > 8:
        raise ValueError("minor enumeration is limited to d <= 8")
    rs = [rat(x) for x in row_shifts]
    cs = [rat(x) for x in col_shifts]
    mins = [Fraction(0)] + [None] * d
    for (I, J), v in minor_valuations(T).items():
        if v == INF:
            continue
        s = v + sum(rs[i] for i in I) + sum(cs[j] for j in J)
        k = len(I)
        if mins[k] is None or s < mins[k]:
            mins[k] = s
    if mins[d] is None:
        raise SingularMatrixError("matrix is singular")
    return [mins[k] - mins[k - 1] for k in range(1, d + 1)]


# -- quotient norms -------------------------------------------------------------

def min_val_on_translate(target: Sequence, S: Optional[Matrix], norm) -> Fraction:
    """Largest norm-valuation on the affine set ``target + span(S)``.

    ``norm`` needs ``basis`` (Matrix) and ``weights``; the value is
    ``-log`` of the quotient norm of the class of ``target`` modulo the span of
    the columns of ``S``.
    """
    x = solve_in_basis(norm.basis, target)
    w = list(norm.weights)
    cols = [] if S is None else [solve_in_basis(norm.basis, c) for c in S.columns()]
    coords = list(range(len(x)))
    while cols:
        best = None
        for ci, y in enumerate(cols):
            for i in coords:
                if y[i].is_zero:
                    continue
                s = y[i].val() + w[i]
                if best is None or s < best[2]:
                    best = (ci, i, s)
        if best is None:
            cols = []  # remaining columns vanish on the coordinates left
            break
        ci, i, _ = best
        y = cols.pop(ci)
        inv = y[i].inv()
        y = [c * inv for c in y]
        if not x[i].is_zero:
            m = x[i]
            x = [a - m * b if not b.is_zero else a for a, b in zip(x, y)]
        for n, z in enumerate(cols):
            if not z[i].is_zero:
                m = z[i]
                cols[n] = [a - m * b if not b.is_zero else a for a, b in zip(z, y)]
        coords.remove(i)
    vals = [x[i].val() + w[i] for i in coords if not x[i].is_zero]
    if not vals:
        raise ValueError("class is zero: target lies in the span")
    return min(vals)


def column_reduce(C: Matrix, col_shifts) -> tuple[list, list]:
    """Pick an O-basis of the module spanned by shifted columns.

    Returns ``(basis_columns, shifts)``: pivot columns after
    valuation-pivoted column operations, together with their shifts.  The
    number of columns returned is the rank.
    """
    cols = C.columns()
    cs = [rat(x) for x in col_shifts]
    live = [n for n, c in enumerate(cols) if any(not x.is_zero for x in c)]
    rows = list(range(C.nrows))
    out_cols, out_shifts = [], []
    while live and rows:
        best = None
        for n in live:
            c = cols[n]
            for i in rows:
                x = c[i]
                if x.is_zero:
                    continue
                s = Fraction(x.k, x.N) + cs[n]
                if best is None or s < best[2]:
                    best = (n, i, s)
        if best is None:
            break
        n, i, _ = best
        p = cols[n]
        p_inv = p[i].inv()
        live.remove(n)
        for o in list(live):
            z = cols[o]
            if not z[i].is_zero:
                m = z[i] * p_inv
                cols[o] = [a - m * b if not b.is_zero else a for a, b in zip(z, p)]
                if all(x.is_zero for x in cols[o]):
                    live.remove(o)
        rows.remove(i)
        out_cols.append(p)
        out_shifts.append(cs[n])
    return out_cols, out_shifts
