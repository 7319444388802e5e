"""Seeded fixtures with known answers, shared by the CLI and the tests."""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from typing import Sequence

from .field import FieldElem
from .linalg import Matrix, det
from .norms import DiagNorm
from .section_ring import degree_one, floor_concave, linear_weights, zero_weights

# g(x) = min(x, 1/4 + x/2, 3/4 - x/4): concave, rational kinks at 1/2 and 2/3
FLOOR_G = ((0, (1,)), (Fraction(1, 4), (Fraction(1, 2),)), (Fraction(3, 4), (Fraction(-1, 4),)))


def floor_fixture():
    """``w_m(j) = floor(m g(j/m))`` on the line, with g as in ``FLOOR_G``."""
    return floor_concave(FLOOR_G)


def identity_fixture():
    """``w_m(j) = j`` on the line."""
    return linear_weights([0, 1])


def degree_one_pair(c=Fraction(3, 2)):
    """Degree-one generated norms with monomial bases (0, 0) and (c, 0)."""
    return degree_one(DiagNorm.monomial([0, 0])), degree_one(DiagNorm.monomial([c, 0]))


def sub_rng(seed: int, label: str) -> random.Random:
    """Deterministic child generator for one audit of a seeded run."""
    h = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def _rpoly(rng: random.Random) -> FieldElem:
    return FieldElem.from_laurent([rng.randint(-2, 2) for _ in range(2)])


def random_unit_matrix(rng: random.Random, d: int) -> Matrix:
    """Random matrix over the valuation ring with unit determinant."""
    while True:
        G = Matrix([[_rpoly(rng) for _ in range(d)] for _ in range(d)])
        D = det(G)
        if not D.is_zero and D.val() == 0:
            return G


def _unitriangular(rng: random.Random, w: Sequence[Fraction]) -> Matrix:
    """Upper unitriangular matrix keeping a norm with weights w diagonal."""
    d = len(w)
    rows = [[FieldElem.zero()] * d for _ in range(d)]
    for i in range(d):
        rows[i][i] = FieldElem.one()
        for j in range(i + 1, d):
            e = max(Fraction(0), w[j] - w[i])
            e = -(-e.numerator // e.denominator)
            rows[i][j] = FieldElem.tpow(e, rng.randint(-2, 2))
    return Matrix(rows, 1)


def random_weights(rng: random.Random, d: int, span: int = 3, dens=(1, 2, 3)) -> list:
    return [Fraction(rng.randint(-span * q, span * q), q) for q in (rng.choice(dens) for _ in range(d))]


def scrambled_pair(rng: random.Random, d: int):
    """Two norms diagonal in a hidden common basis, presented in scrambled bases.

    Returns ``(a, b, expected_spectrum)`` with the spectrum sorted descending.
    """
    alpha = random_weights(rng, d)
    beta = random_weights(rng, d)
    G = random_unit_matrix(rng, d)
    a = DiagNorm(G @ _unitriangular(rng, alpha), alpha)
    b = DiagNorm(G @ _unitriangular(rng, beta), beta)
    lam = sorted((x - y for x, y in zip(alpha, beta)), reverse=True)
    return a, b, tuple(lam)


def random_monomial_norm(rng: random.Random, d: int) -> DiagNorm:
    return DiagNorm.monomial(random_weights(rng, d))


__all__ = [
    "FLOOR_G", "floor_fixture", "identity_fixture", "degree_one_pair", "sub_rng",
    "random_unit_matrix", "random_weights", "scrambled_pair", "random_monomial_norm", "zero_weights",
]
