"""Batch runs over tables of (n, cubic) rows, the field search, and the local cache.

Input lines look like

    n = 29, cubic = "x^3 - 6*x - s"

where ``s`` is sqrt(n).  Blank lines and ``#`` comments are skipped.

Cache format: one JSON file per n (``n<N>.json``) holding

    {"format": 1, "entries": {key: {"checksum": sha256, "payload": ...}}}

with key = "<n>|<modulus>|<kind>|<version>" and checksum the sha256 of the
payload serialized with sorted keys and no whitespace.  A ray class group is
stored as its modulus, invariants and generator ideals together with the
partial zeta values of its classes.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .extensions import (ExtensionError, condition_iv, make_handle, quadratic_handle,
                         roots_of_unity_count, tower)
from .quadfield import is_squarefree, kronecker, make_field
from .rayclass import Modulus, RayClassGroup, characters_of_order
from .shintani import partial_zetas
from .theta import _v3, assemble_theta, classify, norm_action, theta_report

log = logging.getLogger(__name__)

LINE = re.compile(r'^\s*n\s*=\s*(-?\d+)\s*(?:,\s*cubic\s*=\s*"([^"]*)"\s*)?$')


class ParseError(ValueError):
    pass


@dataclass
class Job:
    n: int
    cubic: str | None = None
    line: int = 0


@dataclass
class Options:
    prime_bound: int = 3000
    prime_count: int = 100
    modulus_cap: int = 8
    cache_dir: str | None = None
    timing: bool = False
    workers: int | None = None
    audit: bool = False


def parse_jobs(text: str) -> list[Job]:
    jobs = []
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = LINE.match(line)
        if not m:
            raise ParseError(f"line {i}: cannot parse {raw!r}")
        n = int(m[1])
        if n < 2 or not is_squarefree(n):
            raise ParseError(f"line {i}: n = {n} is not a squarefree integer > 1")
        jobs.append(Job(n, m[2], i))
    return jobs


def read_jobs(path: str | os.PathLike) -> list[Job]:
    return parse_jobs(Path(path).read_text())


# ---------------------------------------------------------------- cache

def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_key(n: int, modulus: str, kind: str) -> str:
    return f"{n}|{modulus}|{kind}|{__version__}"


class Cache:
    """Per-n JSON files; a missing directory means no caching."""

    def __init__(self, root: str | os.PathLike | None):
        self.root = Path(root) if root else None
        self.errors: list[str] = []

    def _file(self, n: int) -> Path:
        return self.root / f"n{n}.json"

    def _read(self, n: int) -> dict:
        p = self._file(n)
        if not p.exists():
            return {}
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError:
            log.warning("cache file %s is not valid JSON; ignoring it", p)
            return {}
        except OSError as e:
            self.errors.append(f"read {p}: {e}")
            log.error("cannot read cache file %s: %s", p, e)
            return {}
        if not isinstance(data, dict) or data.get("format") != 1:
            return {}
        return data.get("entries", {})

    def load(self, n: int, key: str):
        if self.root is None:
            return None
        ent = self._read(n).get(key)
        if not isinstance(ent, dict) or "payload" not in ent:
            return None
        digest = hashlib.sha256(_canonical(ent["payload"]).encode()).hexdigest()
        if digest != ent.get("checksum"):
            log.warning("checksum mismatch for cache entry %s; recomputing", key)
            return None
        return ent["payload"]

    def store(self, n: int, key: str, payload) -> None:
        if self.root is None:
            return
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            entries = self._read(n)
            entries[key] = {"checksum": hashlib.sha256(_canonical(payload).encode()).hexdigest(),
                            "payload": payload}
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                fh.write(_canonical({"format": 1, "entries": entries}))
            os.replace(tmp, self._file(n))
        except OSError as e:
            self.errors.append(f"write {self._file(n)}: {e}")
            log.error("cannot write cache for n=%d: %s", n, e)


def ray_class_payload(G: RayClassGroup, zetas: dict) -> dict:
    return {"modulus": str(G.modulus),
            "invariants": list(G.invariants),
            "generators": [str(P) for P in G.cl.generators],
            "zetas": {",".join(map(str, c)): str(v) for c, v in sorted(zetas.items())}}


def zetas_from_payload(payload: dict) -> dict:
    return {tuple(int(x) for x in k.split(",")) if k else (): Fraction(v)
            for k, v in payload["zetas"].items()}


# ---------------------------------------------------------------- rows

def _frac(x) -> str | None:
    if x is None:
        return None
    return str(x)


def run_row(job: Job, opts: Options | None = None) -> dict:
    """Everything known about one row, as a JSON-ready dict."""
    opts = opts or Options()
    t0 = time.perf_counter()
    report: dict = {"n": job.n, "cubic": job.cubic}
    cache = Cache(opts.cache_dir)
    try:
        if job.cubic is None:
            raise ParseError("row has no cubic")
        K = make_field(job.n)
        T = tower(K, job.cubic, opts.prime_count, opts.prime_bound, opts.modulus_cap)
        G = T.full.chi_f.G
        zkey = cache_key(job.n, str(G.modulus), "ray-class-zetas")
        cached = cache.load(job.n, zkey)
        audit_lines: list[str] | None = [] if opts.audit else None
        if cached is not None and cached["invariants"] == list(G.invariants) and not opts.audit:
            zetas = zetas_from_payload(cached)
        else:
            zetas = partial_zetas(G, audit=audit_lines)
            cache.store(job.n, zkey, ray_class_payload(G, zetas))
        theta = assemble_theta(T, zetas)
        rep = theta_report(T, theta, norm_action(T))
        ckey = cache_key(job.n, "3^k", f"condition-iv-r{T.r}")
        civ = cache.load(job.n, ckey)
        if civ is None:
            civ = condition_iv(K, T.r, cap=opts.modulus_cap)
            cache.store(job.n, ckey, civ)
        cl = classify(T, rep, civ)
        h3, h3_note = None, "theta0 = 0, no derived |c0|"
        if cl.derived_c0 is not None:
            h3 = 3 ** int(_v3(cl.derived_c0))
            h3_note = (f"|c0| = 3 w0 b0 / 2^(|S^min| - 2) = 3*{T.w0}*({rep.b0})"
                       f"/2^{len(T.smin)} = {cl.derived_c0}, 3-part {h3}")
        log.info("n=%d h3 diagnostic: %s", job.n, h3_note)
        failures = [k for k, v in rep.checks.items() if v is False]
        if cl.equivalence is False:
            failures.append("main equivalence")
        report.update({
            "h3_diagnostic": h3,
            "p": 3,
            "kp_trivial": rep.kp_trivial,
            "w1theta": rep.w1theta.canonical(),
            "condition_iv": civ,
            "case": cl.case,
            "equivalence": cl.equivalence,
            "leopoldt_notice": cl.leopoldt_notice,
            "cache_keys": [zkey, ckey],
            "diagnostics": {
                "tower": T.summary(),
                "theta": [str(c) for c in rep.theta.coeffs()],
                "theta0": rep.theta0.canonical(),
                "theta1": rep.theta1.canonical(),
                "b0": str(rep.b0), "b1": str(rep.b1),
                "alpha": rep.alpha.canonical(),
                "norm_chi_theta1": str(rep.norm_value),
                "s_max": rep.s_max if rep.s_max != float("inf") else "inf",
                "derived_c0": _frac(cl.derived_c0),
                "h3_derivation": h3_note,
                "tk": cl.tk, "tkns": cl.tkns, "reasons": cl.reasons,
                "checks": {k: v for k, v in rep.checks.items()},
                "partial_zetas": {",".join(map(str, c)): str(v) for c, v in sorted(zetas.items())},
            },
            "invariant_failures": failures,
        })
        if audit_lines is not None:
            report["audit"] = audit_lines
    except Exception as e:  # one bad row must not stop the table
        log.exception("row n=%d failed", job.n)
        report["error"] = {"type": type(e).__name__, "message": str(e)}
    if cache.errors:
        report["cache_errors"] = cache.errors
    report["timing"] = round(time.perf_counter() - t0, 3) if opts.timing else None
    return report


def _row_worker(args):
    return run_row(*args)


def run_table(jobs: Sequence[Job], opts: Options | None = None) -> list[dict]:
    opts = opts or Options()
    jobs = sorted(jobs, key=lambda j: (j.n, j.line))
    if not jobs:
        return []
    workers = opts.workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) == 1:
        return [run_row(j, opts) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as ex:
        return list(ex.map(_row_worker, [(j, opts) for j in jobs]))


def table_ok(reports: Iterable[dict]) -> tuple[bool, list[dict]]:
    """(all rows computed and passed, machine-readable witnesses)."""
    witnesses = []
    for r in reports:
        if "error" in r:
            witnesses.append({"n": r["n"], "error": r["error"]})
        elif r.get("invariant_failures"):
            witnesses.append({"n": r["n"], "invariant_failures": r["invariant_failures"]})
    return not witnesses, witnesses


# ---------------------------------------------------------------- output

def _md_theta(s: str) -> str:
    return s.replace("*s^2", "σ²").replace("*s", "σ").replace("*(1 - t)", "(1 - τ)")


def render_markdown(reports: Sequence[dict]) -> str:
    head = "| n | h_3 | p | K_p trivial | w_1 θ(0) | (iv) holds | case |"
    lines = [head, "|---|---|---|---|---|---|---|"]
    for r in reports:
        if "error" in r:
            lines.append(f"| {r['n']} |  | 3 | error | {r['error']['type']}: "
                         f"{r['error']['message']} |  |  |")
            continue
        lines.append("| {} | {} | 3 | {} | {} | {} | {} |".format(
            r["n"], r["h3_diagnostic"] if r["h3_diagnostic"] is not None else "",
            "yes" if r["kp_trivial"] else "no", _md_theta(r["w1theta"]),
            "yes" if r["condition_iv"] else "no", r["case"]))
    notes = [f"- n = {r['n']}: {r['leopoldt_notice']}" for r in reports
             if r.get("leopoldt_notice")]
    if notes:
        lines += ["", *notes]
    return "\n".join(lines) + "\n"


def render_json(reports: Sequence[dict]) -> str:
    return json.dumps({"version": __version__, "rows": list(reports)}, indent=2,
                      sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- search

def three_splits_in_K0(n: int) -> bool:
    """Does a prime above 3 split in k0(sqrt(-3))/k0?

    Away from 3 | n, K0/k0 is ramified above 3.  When 3 | n the completion is
    Q3(sqrt(n)), and -3 is a square there iff the unit -n/3 is a square mod 3.
    """
    return n % 3 == 0 and kronecker(-(n // 3), 3) == 1


def quadratic_c0(n: int, opts: Options | None = None) -> tuple[Fraction, dict]:
    """|c0| = w0 L_S(0, psi) / 2^(|S| - 1), with L_S(0, psi) summed from partial zetas."""
    opts = opts or Options()
    K = make_field(n)
    G = RayClassGroup(Modulus.three_power(K, 1))
    quad = quadratic_handle(K, G, opts.prime_count, opts.prime_bound)
    psi = quad.chi_f
    zetas = partial_zetas(psi.G)
    L = sum((v if psi.on_snf(c) == 0 else -v for c, v in zetas.items()), Fraction(0))
    S = 2 + len(quad.conductor.components)
    w0 = roots_of_unity_count(quad.chi, K, 4, [3], opts.prime_count, opts.prime_bound)
    c0 = w0 * L / Fraction(2) ** (S - 1)
    if c0.denominator != 1 or c0 <= 0:
        raise ExtensionError(f"derived |c0| = {c0} is not a positive integer")
    return c0, {"conductor": str(quad.conductor), "L": str(L), "w0": w0}


def cubic_handles(n: int) -> list[dict]:
    """Index-3 subgroups of Cl_{9 oo1 oo2} other than the cyclotomic one."""
    from .extensions import cyclotomic_cubic_character, test_primes
    K = make_field(n)
    G = RayClassGroup(Modulus.three_power(K, 2))
    cyc = cyclotomic_cubic_character(G, test_primes(K, 100))
    out = []
    for chi in characters_of_order(G, 3):
        if cyc is not None and (chi.values == cyc.values or chi.scaled(2).values == cyc.values):
            continue
        h = make_handle("k1", chi)
        out.append({"conductor": str(h.conductor), "kernel": h.kernel_basis()})
    return out


def search_row(n: int, opts: Options | None = None) -> dict:
    rec: dict = {"n": n}
    if three_splits_in_K0(n):
        rec.update(candidate=False, reason="a prime above 3 splits in K0")
        return rec
    c0, info = quadratic_c0(n, opts)
    rec.update(derived_c0=str(c0), **info)
    if c0 % 3:
        rec.update(candidate=False, reason="derived |c0| prime to 3")
        return rec
    rec.update(candidate=True, cubic_handles=cubic_handles(n))
    return rec


def _search_worker(args):
    n, opts = args
    try:
        return search_row(n, opts)
    except Exception as e:
        return {"n": n, "error": {"type": type(e).__name__, "message": str(e)}}


def search_mode(lo: int, hi: int, opts: Options | None = None) -> list[dict]:
    opts = opts or Options()
    ns = [n for n in range(max(lo, 2), hi + 1) if is_squarefree(n)]
    workers = opts.workers or os.cpu_count() or 1
    if workers == 1:
        return [_search_worker((n, opts)) for n in ns]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_search_worker, [(n, opts) for n in ns]))
