"""Command-line front-end.

    nagraded <command> <config.json> [--set key=value ...] [--format csv|jsonl] [--out DIR]

Exit codes: 0 ok, 2 config error, 3 invariant violation (witness printed),
4 internal error.  See README for the config schema.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import platform
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, kernels
from .asymptotics import spectral_sequence, theorem_c_experiment
from .field import rat, rat_text
from .norms import DiagNorm, relative_spectrum, vol, vol_det
from .okounkov import (
    PhiData,
    chebyshev_transform,
    corner_deleted_semigroup,
    equidistribution_check,
    full_semigroup,
    fujita_check,
    simplex_grid,
    theta,
)
from .potential_p1 import theorem_b_experiment
from .section_ring import SpecError, spec_from_record, submultiplicativity_check
from .fixtures import scrambled_pair, sub_rng

COMMANDS = ("spectrum", "vol", "asymptotics", "theorem-b", "theorem-c", "okounkov",
            "chebyshev", "equidistribution", "fujita")


class ConfigError(Exception):
    pass


class InvariantViolation(Exception):
    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


# -- config helpers -----------------------------------------------------------------

def _need(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError(f"missing required field {key!r}")
    return cfg[key]


def _int(cfg: dict, key: str, default=None) -> int:
    v = cfg.get(key, default) if default is not None else _need(cfg, key)
    if isinstance(v, bool) or not isinstance(v, int):
        try:
            v = int(str(v))
        except ValueError:
            raise ConfigError(f"field {key!r} must be an integer") from None
    return v


def _rat(cfg: dict, key: str, default=None) -> Fraction:
    v = cfg.get(key, default) if default is not None else _need(cfg, key)
    if isinstance(v, float):
        raise ConfigError(f"field {key!r} must be exact rational text, not a float")
    try:
        return rat(v)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ConfigError(f"field {key!r} is not a rational") from None


def _int_list(cfg: dict, key: str) -> list:
    v = _need(cfg, key)
    if isinstance(v, dict):
        try:
            lo, hi, st = int(v["from"]), int(v["to"]), int(v.get("step", 1))
        except (KeyError, ValueError, TypeError):
            raise ConfigError(f"field {key!r}: ranges need integer 'from' and 'to'") from None
        v = list(range(lo, hi + 1, st))
    if not isinstance(v, list) or not v or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ConfigError(f"field {key!r} must be a non-empty list of integers")
    return v


def _spec(cfg: dict, key: str, base: Path):
    rec = _need(cfg, key)
    if isinstance(rec, dict) and "file" in rec:
        try:
            rec = json.loads((base / rec["file"]).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"field {key!r}: cannot read spec file: {e}") from None
    try:
        return spec_from_record(rec, key)
    except SpecError as e:
        raise ConfigError(str(e)) from None


def _norm(rec, key: str) -> DiagNorm:
    try:
        return DiagNorm.from_record(rec)
    except (KeyError, ValueError, TypeError) as e:
        raise ConfigError(f"field {key!r}: bad norm record: {e}") from None


def _pairs(cfg: dict, rng_seed: int) -> list:
    """Explicit ``pairs`` or a seeded ``scrambled`` block; ``expected`` may be None."""
    out = []
    if "pairs" in cfg:
        for i, p in enumerate(cfg["pairs"]):
            if not isinstance(p, dict):
                raise ConfigError(f"field 'pairs[{i}]' must be an object")
            a = _norm(_need(p, "a"), f"pairs[{i}].a")
            b = _norm(_need(p, "b"), f"pairs[{i}].b")
            exp = p.get("expected")
            out.append((a, b, None if exp is None else tuple(rat(x) for x in exp)))
    if "scrambled" in cfg:
        sc = cfg["scrambled"]
        if not isinstance(sc, dict):
            raise ConfigError("field 'scrambled' must be an object")
        dims = _int_list(sc, "dims")
        count = _int(sc, "count")
        for d in dims:
            rng = sub_rng(rng_seed, f"scrambled:{d}")
            out.extend(scrambled_pair(rng, d) for _ in range(count))
    if not out:
        raise ConfigError("missing required field 'pairs' (or 'scrambled')")
    return out


def _set_override(cfg: dict, item: str):
    if "=" not in item:
        raise ConfigError(f"--set expects key=value, got {item!r}")
    key, raw = item.split("=", 1)
    try:
        val = json.loads(raw)
    except json.JSONDecodeError:
        val = raw
    node = cfg
    parts = key.split(".")
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"--set {key}: {p!r} is not an object")
    node[parts[-1]] = val


# -- table writers --------------------------------------------------------------------

def _render(rows: list, fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in rows)
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
    return buf.getvalue()


def _rats(xs) -> str:
    return ";".join(rat_text(x) for x in xs)


# -- commands -------------------------------------------------------------------------

def cmd_spectrum(cfg, seed, base):
    rows = []
    for i, (a, b, exp) in enumerate(_pairs(cfg, seed)):
        s = relative_spectrum(a, b)
        row = {"index": i, "dim": s.dim, "lambdas": _rats(s.lambdas), "vol": rat_text(s.vol),
               "d1": rat_text(s.d1), "dinf": rat_text(s.dinf)}
        if exp is not None:
            row["match"] = s.lambdas == exp
            if not row["match"]:
                raise InvariantViolation("spectrum differs from the constructed one",
                                         {"index": i, "got": _rats(s.lambdas), "expected": _rats(exp)})
        rows.append(row)
    return {"spectrum": rows}


def cmd_vol(cfg, seed, base):
    rows = []
    for i, (a, b, _) in enumerate(_pairs(cfg, seed)):
        v, vd = vol(a, b), vol_det(a, b)
        if v != vd:
            raise InvariantViolation("spectral and determinant volumes differ",
                                     {"index": i, "spectral": rat_text(v), "determinant": rat_text(vd)})
        rows.append({"index": i, "dim": a.dim, "vol": rat_text(v), "vol_det": rat_text(vd)})
    return {"vol": rows}


def _audit_submult(spec, name, cfg, seed):
    M = _int(cfg, "audit_degree", 0)
    if M >= 2:
        rep = submultiplicativity_check(spec, M, _int(cfg, "audit_samples", 0),
                                        seed=sub_rng(seed, f"submult:{name}").randrange(2 ** 63))
        if not rep.ok:
            raise InvariantViolation(f"spec {name!r} is not submultiplicative", rep.witness)


def cmd_asymptotics(cfg, seed, base):
    a, b = _spec(cfg, "a", base), _spec(cfg, "b", base)
    _audit_submult(a, "a", cfg, seed)
    _audit_submult(b, "b", cfg, seed)
    try:
        rep = spectral_sequence(a, b, _int_list(cfg, "degrees"))
    except SpecError as e:
        raise ConfigError(str(e)) from None
    rows = [r.record() for r in rep.rows]
    summ = rep.summary()
    tail = [{"quantity": q, **summ[q], "support_bound": summ["support_bound"]} for q in ("vol", "d1", "dinf")]
    return {"asymptotics": rows, "asymptotics_tail": tail}


def cmd_theorem_b(cfg, seed, base):
    a, b = _spec(cfg, "a", base), _spec(cfg, "b", base)
    try:
        rows = theorem_b_experiment(a, b, _int_list(cfg, "degrees"))
    except (SpecError, ValueError) as e:
        raise ConfigError(str(e)) from None
    return {"theorem-b": [r.record() for r in rows]}


def cmd_theorem_c(cfg, seed, base):
    a, b = _spec(cfg, "a", base), _spec(cfg, "b", base)
    try:
        rows = theorem_c_experiment(a, b, _int_list(cfg, "ks"), _int_list(cfg, "degrees"))
    except SpecError as e:
        raise ConfigError(str(e)) from None
    return {"theorem-c": [r.record() for r in rows]}


def cmd_okounkov(cfg, seed, base):
    spec = _spec(cfg, "spec", base)
    N = _int(cfg, "N")
    data = PhiData.build(spec, N)
    bad = data.superadditivity_violation()
    if bad is not None:
        (m, a), (n, b), z = bad
        raise InvariantViolation("Phi is not superadditive", {
            "m": m, "alpha": list(a), "n": n, "beta": list(b), "phi_sum_degree": rat_text(z)})
    rows = [{"n": n, **{f"alpha_{i + 1}": x for i, x in enumerate(a)}, "phi": rat_text(v),
             "phi_over_n": rat_text(v / n) if n else ""} for (n, a), v in sorted(data.table.items())]
    est, seq = theta(spec, N)
    th = [{"n": i + 1, "theta": rat_text(x)} for i, x in enumerate(seq)]
    return {"okounkov": rows, "theta": th}


def cmd_chebyshev(cfg, seed, base):
    spec = _spec(cfg, "spec", base)
    N = _int(cfg, "N")
    grid = cfg.get("grid", {"q": 8})
    if isinstance(grid, dict):
        q = _int(grid, "q")
        pts = [(Fraction(i, q),) for i in range(q + 1)] if spec.n == 1 else simplex_grid(spec.n, q)
    else:
        try:
            pts = [tuple(rat(x) for x in (p if isinstance(p, list) else [p])) for p in grid]
        except (ValueError, ZeroDivisionError):
            raise ConfigError("field 'grid' must hold rational points") from None
    try:
        vals = chebyshev_transform(spec, N, pts)
    except (ValueError, NotImplementedError) as e:
        raise ConfigError(f"field 'grid': {e}") from None
    rows = [{**{f"x_{i + 1}": rat_text(c) for i, c in enumerate(p)}, "G": rat_text(v)}
            for p, v in zip(pts, vals)]
    return {"chebyshev": rows}


def cmd_equidistribution(cfg, seed, base):
    spec = _spec(cfg, "spec", base)
    ks = _int_list(cfg, "ks")
    N = _int(cfg, "N", max(ks))
    try:
        rows = equidistribution_check(spec, ks, N=N)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    bad = [r for r in rows if not r.superlevel_ok]
    if bad:
        raise InvariantViolation("superlevel counts disagree with mu(k)", bad[0].record())
    return {"equidistribution": [r.record() for r in rows]}


def cmd_fujita(cfg, seed, base):
    N = _int(cfg, "N")
    kind = cfg.get("semigroup", "corner_deleted")
    if kind == "corner_deleted":
        sg = corner_deleted_semigroup(N)
    elif kind == "full":
        sg = full_semigroup(_int(cfg, "d", 2), N)
    else:
        raise ConfigError(f"field 'semigroup': unknown semigroup {kind!r}")
    bad = sg.semigroup_violation() if N <= 24 else None
    if bad is not None:
        raise InvariantViolation("slices are not closed under addition", {"witness": repr(bad)})
    try:
        rows = fujita_check(sg, _int_list(cfg, "ks"), N)
    except ValueError as e:
        raise ConfigError(f"field 'ks': {e}") from None
    return {"fujita": [r.record() for r in rows]}


HANDLERS = {
    "spectrum": cmd_spectrum, "vol": cmd_vol, "asymptotics": cmd_asymptotics,
    "theorem-b": cmd_theorem_b, "theorem-c": cmd_theorem_c, "okounkov": cmd_okounkov,
    "chebyshev": cmd_chebyshev, "equidistribution": cmd_equidistribution, "fujita": cmd_fujita,
}


# -- entry point ----------------------------------------------------------------------

def _versions() -> dict:
    import gmpy2
    return {"nagraded": __version__, "python": platform.python_version(),
            "gmpy2": gmpy2.version(), "kernels": kernels.BACKEND}


def run(command: str, cfg: dict, out_dir: Path, fmt: str, base: Path = Path(".")) -> list:
    """Run one command; returns the written paths.  Raises ConfigError or
    InvariantViolation."""
    if command not in HANDLERS:
        raise ConfigError(f"unknown command {command!r}")
    seed = _int(cfg, "seed")
    if not 0 <= seed < 2 ** 64:
        raise ConfigError("field 'seed' must be a 64-bit unsigned integer")
    t0 = time.perf_counter()
    tables = HANDLERS[command](cfg, seed, base)
    runtime = time.perf_counter() - t0
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, rows in tables.items():
        p = out_dir / f"{name}.{fmt}"
        p.write_text(_render(rows, fmt))
        written.append(p)
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    manifest = {
        "command": command,
        "config_sha256": hashlib.sha256(canon.encode()).hexdigest(),
        "config": cfg,
        "versions": _versions(),
        "runtime_seconds": round(runtime, 6),
        "outputs": [p.name for p in written],
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return written


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="nagraded", description="Exact graded-norm experiments.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("config", help="JSON config file")
    ap.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    ap.add_argument("--format", choices=("csv", "jsonl"), default=None)
    ap.add_argument("--out", default="out", help="output directory")
    args = ap.parse_args(argv)
    try:
        path = Path(args.config)
        try:
            cfg = json.loads(path.read_text())
        except OSError as e:
            raise ConfigError(f"cannot read config: {e}") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        for item in args.overrides:
            _set_override(cfg, item)
        fmt = args.format or cfg.get("format", "csv")
        if fmt not in ("csv", "jsonl"):
            raise ConfigError("field 'format' must be csv or jsonl")
        written = run(args.command, cfg, Path(args.out), fmt, path.parent)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        print(json.dumps({"witness": e.witness}, default=str), file=sys.stderr)
        return 3
    except Exception as e:  # noqa: BLE001 - reported as an internal error
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 4
    for p in written:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
