"""Rescaled spectral data of pairs of graded norms across degrees.

Values are reported per degree and as a tail estimate (last value and the gap
to the previous degree); nothing here claims a limit.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .field import rat, rat_text
from .norms import SpectralData, relative_spectrum
from .section_ring import SpecError, Truncated, norm_at, weights_at

CSV_COLUMNS = ("m", "h0", "vol_over_m", "d1_over_m", "dinf_over_m", "lambda_min_over_m", "lambda_max_over_m")


def spectrum_at(a, b, m: int) -> SpectralData:
    """Relative spectrum of the degree-m norms; monomial pairs skip linear algebra."""
    wa, wb = weights_at(a, m), weights_at(b, m)
    if wa is not None and wb is not None:
        return SpectralData(tuple(sorted((x - y for x, y in zip(wa, wb)), reverse=True)))
    return relative_spectrum(norm_at(a, m), norm_at(b, m))


@dataclass
class DegreeRow:
    m: int
    spectrum: SpectralData  # already rescaled by 1/m

    @property
    def vol(self) -> Fraction:
        return self.spectrum.vol

    @property
    def d1(self) -> Fraction:
        return self.spectrum.d1

    @property
    def dinf(self) -> Fraction:
        return self.spectrum.dinf

    def histogram(self) -> dict:
        return dict(sorted(Counter(self.spectrum.lambdas).items(), reverse=True))

    def record(self) -> dict:
        lam = self.spectrum.lambdas
        return {
            "m": self.m,
            "h0": len(lam),
            "vol_over_m": rat_text(self.vol),
            "d1_over_m": rat_text(self.d1),
            "dinf_over_m": rat_text(self.dinf),
            "lambda_min_over_m": rat_text(lam[-1]),
            "lambda_max_over_m": rat_text(lam[0]),
        }


@dataclass
class AsymptoticReport:
    degrees: list
    rows: list = field(default_factory=list)

    def series(self, key: str) -> list:
        return [getattr(r, key) for r in self.rows]

    def tail(self, key: str) -> tuple:
        """(last value, |last - previous|); the gap is None for a single degree."""
        xs = self.series(key)
        gap = abs(xs[-1] - xs[-2]) if len(xs) > 1 else None
        return xs[-1], gap

    def extrapolate(self, key: str) -> Optional[Fraction]:
        """Richardson step assuming ``x_m = L + c/m``; informational only."""
        if len(self.rows) < 2:
            return None
        (m1, x1), (m2, x2) = [(r.m, getattr(r, key)) for r in self.rows[-2:]]
        return (m2 * x2 - m1 * x1) / (m2 - m1)

    @property
    def support_bound(self) -> Fraction:
        return max(r.dinf for r in self.rows)

    @property
    def dinf_sup(self) -> Fraction:
        """Sup over computed degrees: a lower bound for the sup over all degrees."""
        return self.support_bound

    def summary(self) -> dict:
        out: dict = {"degrees": list(self.degrees), "support_bound": rat_text(self.support_bound)}
        for key in ("vol", "d1", "dinf"):
            last, gap = self.tail(key)
            ex = self.extrapolate(key)
            out[key] = {"last": rat_text(last), "tail_gap": None if gap is None else rat_text(gap),
                        "richardson": None if ex is None else rat_text(ex)}
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r.record())
        return buf.getvalue()

    def to_jsonl(self) -> str:
        lines = []
        for r in self.rows:
            rec = r.record()
            rec["histogram"] = {rat_text(k): v for k, v in r.histogram().items()}
            lines.append(json.dumps(rec))
        lines.append(json.dumps({"summary": self.summary()}))
        return "\n".join(lines) + "\n"


def spectral_sequence(a, b, degrees: Sequence[int]) -> AsymptoticReport:
    degrees = list(degrees)
    if not degrees:
        raise SpecError("no degrees requested")
    if any(x >= y for x, y in zip(degrees, degrees[1:])):
        raise SpecError("degrees must be strictly increasing")
    if a.n != b.n:
        raise SpecError("degree mismatch: specs live on different spaces")
    rep = AsymptoticReport(degrees)
    for m in degrees:
        rep.rows.append(DegreeRow(m, spectrum_at(a, b, m).scaled(m)))
    return rep


def equivalence_test(a, b, degrees: Sequence[int], tol, window: int = 3) -> tuple[bool, AsymptoticReport]:
    """d1_m/m below ``tol`` at the largest degree and non-increasing on the last
    ``window`` degrees."""
    tol = rat(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    rep = spectral_sequence(a, b, degrees)
    d1s = rep.series("d1")[-window:]
    ok = d1s[-1] < tol and all(x >= y for x, y in zip(d1s, d1s[1:]))
    return ok, rep


@dataclass
class TheoremCRow:
    k: int
    degree: int
    vol_k: Fraction
    vol: Fraction

    @property
    def gap(self) -> Fraction:
        return abs(self.vol_k - self.vol)

    def record(self) -> dict:
        return {"k": self.k, "degree": self.degree, "vol_k_over_m": rat_text(self.vol_k),
                "vol_over_m": rat_text(self.vol), "gap": rat_text(self.gap)}


def theorem_c_experiment(a, b, ks: Sequence[int], degrees: Sequence[int]) -> list:
    """Truncated-versus-full volume estimates, all at the top degree.

    Every k is compared at the same degree ``M = max(degrees)``, so that all
    estimates live on the same scale; each k must divide M.
    """
    M = max(degrees)
    bad = [k for k in ks if M % k]
    if bad:
        raise SpecError(f"truncation degrees {bad} do not divide the top degree {M}")
    full = spectrum_at(a, b, M).scaled(M).vol
    rows = []
    for k in ks:
        vk = spectrum_at(Truncated(a, k), Truncated(b, k), M).scaled(M).vol
        rows.append(TheoremCRow(k, M, vk, full))
    return rows


def theorem_c_csv(rows: Sequence[TheoremCRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=("k", "degree", "vol_k_over_m", "vol_over_m", "gap"),
                       lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.record())
    return buf.getvalue()
