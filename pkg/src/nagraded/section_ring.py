"""The section ring of O(1) on projective n-space.

H^0(P^n, O(m)) is identified with polynomials of degree <= m in the affine
coordinates ``z_1..z_n``; a section is a column of coefficients indexed by
exponents ``alpha`` (``|alpha| <= m``) in lexicographic order.

Graded norms are declared through :class:`GradedNormSpec` records and turned
into one :class:`DiagNorm` per degree by :func:`norm_at`.  Specs whose norms
are diagonal in the monomial basis never build a full basis matrix on the way:
their weights travel through :func:`weights_at` and the max-plus kernels.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence, Union

from . import kernels
from .field import FieldElem, rat, rat_text
from .linalg import Matrix
from .norms import DiagNorm, eval_norm, max_norm, quotient_norm, scale, sym_monomials, sym_power


class SpecError(ValueError):
    """Malformed or inapplicable graded-norm spec."""


# -- section spaces ---------------------------------------------------------------

@dataclass(frozen=True)
class SectionSpace:
    n: int
    m: int
    exponents: tuple

    @property
    def h0(self) -> int:
        return len(self.exponents)

    def index(self, alpha) -> int:
        return _index(self.n, self.m)[tuple(alpha)]


@lru_cache(maxsize=None)
def _exponents(n: int, m: int) -> tuple:
    return tuple(a for a in product(range(m + 1), repeat=n) if sum(a) <= m)


@lru_cache(maxsize=None)
def _index(n: int, m: int) -> dict:
    return {a: i for i, a in enumerate(_exponents(n, m))}


def monomials(n: int, m: int) -> SectionSpace:
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    return SectionSpace(n, m, _exponents(n, m))


def h0(n: int, m: int) -> int:
    return math.comb(m + n, n)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sym_surjection(n: int, m: int, k: int = 1) -> Matrix:
    """The multiplication map Sym^m H^0(kL) -> H^0(mkL).

    Columns follow :func:`sym_monomials` over the degree-k exponents; a
    multiset of monomials goes to the monomial of the summed exponent.
    """
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    src = _exponents(n, k)
    tgt = _index(n, m * k)
    mons = sym_monomials(len(src), m)
    one, zero = FieldElem.one(), FieldElem.zero()
    rows = [[zero] * len(mons) for _ in range(len(tgt))]
    for c, ms in enumerate(mons):
        alpha = (0,) * n
        for i in ms:
            alpha = _add(alpha, src[i])
        rows[tgt[alpha]][c] = one
    return Matrix(rows, 1)


def multiply_sections(n: int, s: Sequence, m: int, s2: Sequence, m2: int) -> list:
    """Product of a degree-m and a degree-m2 section (coefficient columns)."""
    ea, eb = _exponents(n, m), _exponents(n, m2)
    idx = _index(n, m + m2)
    N = math.lcm(*[x.N for x in list(s) + list(s2)])
    out = [FieldElem.zero(N)] * len(idx)
    for a, x in zip(ea, s):
        if x.is_zero:
            continue
        for b, y in zip(eb, s2):
            if not y.is_zero:
                j = idx[_add(a, b)]
                out[j] = out[j] + x * y
    return out


# -- graded norm specs ------------------------------------------------------------

@dataclass(frozen=True)
class MonomialWeights:
    """Monomial-diagonal norms with weight ``w_m(alpha)`` given by a rule.

    rules: ``zero``; ``linear`` with ``coeffs = (a_0..a_n)`` giving
    ``a_0 (m - |alpha|) + sum a_i alpha_i``; ``floor_concave`` with pieces
    ``(c, s)`` giving ``floor(min_i (c_i m + s_i . alpha))``; ``table`` with
    explicit per-degree weight lists in exponent order.
    """

    n: int
    rule: str
    coeffs: tuple = ()
    pieces: tuple = ()
    table: tuple = ()  # ((m, (w, ...)), ...)

    def weight(self, m: int, alpha) -> Fraction:
        if self.rule == "zero":
            return Fraction(0)
        if self.rule == "linear":
            a0, rest = self.coeffs[0], self.coeffs[1:]
            return a0 * (m - sum(alpha)) + sum((c * x for c, x in zip(rest, alpha)), Fraction(0))
        if self.rule == "floor_concave":
            v = min(c * m + sum((s * x for s, x in zip(sl, alpha)), Fraction(0)) for c, sl in self.pieces)
            return Fraction(math.floor(v))
        if self.rule == "table":
            return self._table_row(m)[_index(self.n, m)[tuple(alpha)]]
        raise SpecError(f"unknown weight rule {self.rule!r}")

    def _table_row(self, m: int):
        for mm, row in self.table:
            if mm == m:
                return row
        raise SpecError(f"weight table has no degree {m}")

    def degrees(self) -> Optional[tuple]:
        return tuple(mm for mm, _ in self.table) if self.rule == "table" else None


@dataclass(frozen=True)
class DegreeOneGenerated:
    n: int
    base: DiagNorm

    def __hash__(self):
        return hash(("d1", self.n, tuple(map(str, self.base.basis.to_text())), self.base.weights))

    def __eq__(self, other):
        return (isinstance(other, DegreeOneGenerated) and self.n == other.n
                and self.base.weights == other.base.weights and self.base.basis == other.base.basis)


@dataclass(frozen=True)
class Truncated:
    parent: "GradedNormSpec"
    k: int

    @property
    def n(self) -> int:
        return self.parent.n


SCALE_RULES = ("const", "sqrt_ceil", "linear")


@dataclass(frozen=True)
class Scaled:
    """``scale(parent_m, c_m)``; ``c_m`` is ``c``, ``ceil(sqrt m) c`` or ``c m``."""

    parent: "GradedNormSpec"
    rule: str
    c: Fraction

    @property
    def n(self) -> int:
        return self.parent.n

    def c_m(self, m: int) -> Fraction:
        if self.rule == "const":
            return self.c
        if self.rule == "sqrt_ceil":
            return (math.isqrt(m - 1) + 1) * self.c if m > 0 else Fraction(0)
        if self.rule == "linear":
            return self.c * m
        raise SpecError(f"unknown scaling rule {self.rule!r}")


@dataclass(frozen=True)
class MaxOf:
    a: "GradedNormSpec"
    b: "GradedNormSpec"

    @property
    def n(self) -> int:
        return self.a.n


GradedNormSpec = Union[MonomialWeights, DegreeOneGenerated, Truncated, Scaled, MaxOf]


# constructors with exact-rational coercion

def zero_weights(n: int) -> MonomialWeights:
    return MonomialWeights(n, "zero")


def linear_weights(coeffs: Sequence) -> MonomialWeights:
    c = tuple(rat(x) for x in coeffs)
    return MonomialWeights(len(c) - 1, "linear", coeffs=c)


def floor_concave(pieces: Sequence) -> MonomialWeights:
    """``w_m(alpha) = floor(m g(alpha/m))`` with ``g = min_i (c_i + s_i . x)``."""
    ps = tuple((rat(c), tuple(rat(x) for x in s)) for c, s in pieces)
    if not ps:
        raise SpecError("floor_concave needs at least one piece")
    return MonomialWeights(len(ps[0][1]), "floor_concave", pieces=ps)


def table_weights(n: int, table: dict) -> MonomialWeights:
    rows = []
    for m, row in sorted((int(k), v) for k, v in table.items()):
        if len(row) != h0(n, m):
            raise SpecError(f"table row for degree {m} needs {h0(n, m)} weights")
        rows.append((m, tuple(rat(w) for w in row)))
    return MonomialWeights(n, "table", table=tuple(rows))


def degree_one(base: DiagNorm, n: Optional[int] = None) -> DegreeOneGenerated:
    n = base.dim - 1 if n is None else n
    if base.dim != n + 1:
        raise SpecError("degree-one base must live on H^0(L), of dimension n + 1")
    return DegreeOneGenerated(n, base)


def truncated(parent, k: int) -> Truncated:
    if k < 1:
        raise SpecError("truncation degree k must be >= 1")
    return Truncated(parent, k)


def scaled(parent, rule: str, c) -> Scaled:
    if rule not in SCALE_RULES:
        raise SpecError(f"unknown scaling rule {rule!r}")
    return Scaled(parent, rule, rat(c))


def max_of(a, b) -> MaxOf:
    if a.n != b.n:
        raise SpecError("max of specs on different spaces")
    return MaxOf(a, b)


# -- evaluation -------------------------------------------------------------------

def _check_degree(spec, m: int):
    if m < 1:
        raise SpecError("degrees start at 1")
    if isinstance(spec, Truncated):
        if m % spec.k:
            raise SpecError(f"truncation at k={spec.k} is defined only in degrees divisible by k, got {m}")
        _check_degree(spec.parent, spec.k)
    elif isinstance(spec, MonomialWeights):
        degs = spec.degrees()
        if degs is not None and m not in degs:
            raise SpecError(f"weight table has no degree {m}")
    elif isinstance(spec, Scaled):
        _check_degree(spec.parent, m)
    elif isinstance(spec, MaxOf):
        _check_degree(spec.a, m)
        _check_degree(spec.b, m)


@lru_cache(maxsize=None)
def weights_at(spec, m: int) -> Optional[tuple]:
    """Monomial weights in degree m when the norm is monomial-diagonal, else None."""
    _check_degree(spec, m)
    if isinstance(spec, MonomialWeights):
        return tuple(spec.weight(m, a) for a in _exponents(spec.n, m))
    if isinstance(spec, DegreeOneGenerated):
        if not spec.base.is_monomial():
            return None
        return _convolve_power(spec.n, tuple(spec.base.monomial_weights()), 1, m)
    if isinstance(spec, Truncated):
        w = weights_at(spec.parent, spec.k)
        if w is None:
            return None
        return _convolve_power(spec.n, w, spec.k, m // spec.k)
    if isinstance(spec, Scaled):
        w = weights_at(spec.parent, m)
        if w is None:
            return None
        c = spec.c_m(m)
        return tuple(x + c for x in w)
    if isinstance(spec, MaxOf):
        wa, wb = weights_at(spec.a, m), weights_at(spec.b, m)
        if wa is None or wb is None:
            return None
        return tuple(min(x, y) for x, y in zip(wa, wb))
    raise SpecError(f"not a graded norm spec: {spec!r}")


def _grid(n: int, k: int, ints: Sequence):
    """Dense grid (side k + 1) for n = 1 or 2, NEG outside the simplex."""
    if n == 1:
        return list(ints)
    g = [[kernels.NEG] * (k + 1) for _ in range(k + 1)]
    for (a, b), v in zip(_exponents(2, k), ints):
        g[a][b] = v
    return g


def _ungrid(n: int, m: int, g) -> list:
    if n == 1:
        return list(g[: m + 1])
    return [g[a][b] for a, b in _exponents(2, m)]


def _convolve_power(n: int, w: Sequence, k: int, r: int) -> tuple:
    """Degree-one generation from degree k on the monomial level.

    The quotient of the symmetric power keeps each monomial and gives it the
    best weight over all ways of writing it as a sum of r degree-k exponents.
    """
    if r == 1:
        return tuple(w)
    if n <= 2:
        D, ints = kernels.scale_to_ints(w)
        out = kernels.maxplus_power(_grid(n, k, ints), r, n)
        return tuple(Fraction(v, D) for v in _ungrid(n, r * k, out))
    src = _exponents(n, k)
    cur = dict(zip(src, w))
    for _ in range(r - 1):
        nxt: dict = {}
        for a, x in cur.items():
            for b, y in zip(src, w):
                s = _add(a, b)
                if s not in nxt or x + y > nxt[s]:
                    nxt[s] = x + y
        cur = nxt
    return tuple(cur[a] for a in _exponents(n, r * k))


@lru_cache(maxsize=None)
def norm_at(spec, m: int) -> DiagNorm:
    """The degree-m norm of a graded norm spec."""
    w = weights_at(spec, m)
    if w is not None:
        return DiagNorm.monomial(w)
    if isinstance(spec, DegreeOneGenerated):
        if m == 1:
            return spec.base
        return quotient_norm(sym_power(spec.base, m), sym_surjection(spec.n, m))
    if isinstance(spec, Truncated):
        base = norm_at(spec.parent, spec.k)
        r = m // spec.k
        if r == 1:
            return base
        return quotient_norm(sym_power(base, r), sym_surjection(spec.n, r, spec.k))
    if isinstance(spec, Scaled):
        return scale(norm_at(spec.parent, m), spec.c_m(m))
    if isinstance(spec, MaxOf):
        return max_norm(norm_at(spec.a, m), norm_at(spec.b, m))
    raise SpecError(f"not a graded norm spec: {spec!r}")


def degree_one_general(spec: DegreeOneGenerated, m: int) -> DiagNorm:
    """Degree-one generation through the symmetric power, without shortcuts."""
    if m == 1:
        return spec.base
    return quotient_norm(sym_power(spec.base, m), sym_surjection(spec.n, m))


# -- submultiplicativity audit ----------------------------------------------------

@dataclass
class SubmultReport:
    ok: bool
    checked: int
    witness: Optional[dict] = None


def submultiplicativity_check(spec, M: int, samples: int = 0, seed: int = 0) -> SubmultReport:
    """Check ``nu_{m+m'}(s s') >= nu_m(s) + nu_{m'}(s')`` for all m + m' <= M.

    Basis products are checked exhaustively (exact and sufficient for
    monomial-diagonal specs); ``samples`` random section pairs are added per
    degree pair.
    """
    if M < 2:
        raise ValueError("M >= 2")
    rng = random.Random(seed)
    n = spec.n
    checked = 0
    degs = _valid_degrees(spec, M)
    for m in degs:
        for m2 in degs:
            if m2 < m or m + m2 > M or (m + m2) not in degs:
                continue
            wa, wb, wc = weights_at(spec, m), weights_at(spec, m2), weights_at(spec, m + m2)
            if wa is not None and wb is not None and wc is not None:
                idx = _index(n, m + m2)
                for a, x in zip(_exponents(n, m), wa):
                    for b, y in zip(_exponents(n, m2), wb):
                        checked += 1
                        z = wc[idx[_add(a, b)]]
                        if z < x + y:
                            return SubmultReport(False, checked, _witness(m, a, x, m2, b, y, z))
                pairs = []
            else:
                pairs = _basis_pairs(spec, m, m2)
            pairs += [_random_pair(spec, m, m2, rng) for _ in range(samples)]
            A, B, C = norm_at(spec, m), norm_at(spec, m2), norm_at(spec, m + m2)
            for s, s2 in pairs:
                checked += 1
                x, y = eval_norm(A, s), eval_norm(B, s2)
                z = eval_norm(C, multiply_sections(n, s, m, s2, m2))
                if z < x + y:
                    return SubmultReport(False, checked, {
                        "m": m, "m2": m2, "s": [e.to_text() for e in s],
                        "s2": [e.to_text() for e in s2],
                        "nu_s": rat_text(x), "nu_s2": rat_text(y), "nu_product": rat_text(z)})
    return SubmultReport(True, checked)


def _valid_degrees(spec, M: int) -> list:
    out = []
    for m in range(1, M + 1):
        try:
            _check_degree(spec, m)
        except SpecError:
            continue
        out.append(m)
    return out


def _witness(m, a, x, m2, b, y, z) -> dict:
    return {"m": m, "alpha": list(a), "m2": m2, "beta": list(b),
            "w_alpha": rat_text(x), "w_beta": rat_text(y), "w_sum": rat_text(z)}


def _basis_pairs(spec, m: int, m2: int) -> list:
    A, B = norm_at(spec, m), norm_at(spec, m2)
    return [(s, s2) for s in A.basis.columns() for s2 in B.basis.columns()]


def _random_pair(spec, m: int, m2: int, rng: random.Random):
    out = []
    for d in (m, m2):
        nrm = norm_at(spec, d)
        cols = nrm.basis.columns()
        v = [FieldElem.zero(nrm.N)] * nrm.dim
        for col in cols:
            c = FieldElem.tpow(rng.randint(0, 2), rng.randint(-3, 3), nrm.N)
            v = [x + c * y for x, y in zip(v, col)]
        out.append(v)
    return tuple(out)


# -- spec files -------------------------------------------------------------------

def spec_to_record(spec) -> dict:
    if isinstance(spec, MonomialWeights):
        rec: dict = {"variant": "monomial_weights", "n": spec.n, "rule": spec.rule}
        if spec.rule == "linear":
            rec["coeffs"] = [rat_text(c) for c in spec.coeffs]
        elif spec.rule == "floor_concave":
            rec["pieces"] = [{"const": rat_text(c), "slope": [rat_text(x) for x in s]}
                             for c, s in spec.pieces]
        elif spec.rule == "table":
            rec["table"] = {str(m): [rat_text(w) for w in row] for m, row in spec.table}
        return rec
    if isinstance(spec, DegreeOneGenerated):
        return {"variant": "degree_one", "n": spec.n, "base": spec.base.to_record()}
    if isinstance(spec, Truncated):
        return {"variant": "truncated", "k": spec.k, "parent": spec_to_record(spec.parent)}
    if isinstance(spec, Scaled):
        return {"variant": "scaled", "rule": spec.rule, "c": rat_text(spec.c),
                "parent": spec_to_record(spec.parent)}
    if isinstance(spec, MaxOf):
        return {"variant": "max", "a": spec_to_record(spec.a), "b": spec_to_record(spec.b)}
    raise SpecError(f"not a graded norm spec: {spec!r}")


def spec_from_record(rec: dict, path: str = "spec"):
    """Parse a spec record; errors name the offending field path."""
    if not isinstance(rec, dict):
        raise SpecError(f"{path}: expected an object")
    v = _field(rec, "variant", path)
    try:
        if v == "monomial_weights":
            rule = _field(rec, "rule", path)
            n = int(_field(rec, "n", path))
            if rule == "zero":
                return zero_weights(n)
            if rule == "linear":
                spec = linear_weights(_field(rec, "coeffs", path))
            elif rule == "floor_concave":
                spec = floor_concave([(p["const"], p["slope"]) for p in _field(rec, "pieces", path)])
            elif rule == "table":
                spec = table_weights(n, _field(rec, "table", path))
            else:
                raise SpecError(f"{path}.rule: unknown weight rule {rule!r}")
            if spec.n != n:
                raise SpecError(f"{path}.n: does not match the weight data")
            return spec
        if v == "degree_one":
            base = DiagNorm.from_record(_field(rec, "base", path))
            return degree_one(base, int(_field(rec, "n", path)))
        if v == "truncated":
            return truncated(spec_from_record(_field(rec, "parent", path), path + ".parent"),
                             int(_field(rec, "k", path)))
        if v == "scaled":
            return scaled(spec_from_record(_field(rec, "parent", path), path + ".parent"),
                          _field(rec, "rule", path), _field(rec, "c", path))
        if v == "max":
            return max_of(spec_from_record(_field(rec, "a", path), path + ".a"),
                          spec_from_record(_field(rec, "b", path), path + ".b"))
    except SpecError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise SpecError(f"{path}: {e}") from e
    raise SpecError(f"{path}.variant: unknown variant {v!r}")


def _field(rec: dict, name: str, path: str):
    if name not in rec:
        raise SpecError(f"{path}.{name}: missing field")
    return rec[name]
