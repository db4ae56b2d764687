import json
from math import gcd, isqrt

import pytest

from zeta0 import pipeline
from zeta0.cli import main
from zeta0.extensions import quadratic_handle
from zeta0.pipeline import (Cache, Job, Options, ParseError, parse_jobs, quadratic_c0,
                            render_json, render_markdown, run_row, run_table, search_row,
                            three_splits_in_K0)
from zeta0.quadfield import is_squarefree, make_field, primes_above
from zeta0.rayclass import Modulus, RayClassGroup

from conftest import TABLE_INPUT


def test_parse_jobs():
    jobs = parse_jobs('# comment\n\nn = 29, cubic = "x^3 - 6*x - s"\nn=43\n')
    assert [(j.n, j.cubic) for j in jobs] == [(29, "x^3 - 6*x - s"), (43, None)]
    assert len(parse_jobs(TABLE_INPUT.read_text())) == 28


@pytest.mark.parametrize("text", ['n = 28, cubic = "x^3 - s"', "n = 1", "m = 29", 'n = 29, cubic = x'])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_jobs(text)


def test_empty_table():
    assert run_table([]) == []
    assert render_markdown([]).count("\n") == 2


def _subset(reports, ns):
    return [r for r in reports if r["n"] in ns]


def test_isolation(table_reports):
    """A broken row leaves the other rows exactly as in the clean run."""
    jobs = [Job(29, "x^3 - 6*x - s"), Job(43, "x^3 - 21*x - 2*s"),
            Job(58, "x^3 - 58*x")]
    reports = run_table(jobs, Options(workers=1))
    bad = reports[2]
    assert bad["error"]["type"] == "ExtensionError" and "reducible" in bad["error"]["message"]
    assert reports[:2] == _subset(table_reports["reports"], {29, 43})
    ok, witnesses = pipeline.table_ok(reports)
    assert not ok and witnesses == [{"n": 58, "error": bad["error"]}]


def test_determinism_and_cache_transparency(table_reports):
    cold = table_reports["reports"]
    warm = run_table(table_reports["jobs"], Options(cache_dir=table_reports["cache"]))
    assert render_json(warm) == render_json(cold)
    fresh = run_table([j for j in table_reports["jobs"] if j.n in (29, 183)], Options(workers=1))
    assert render_json(fresh) == render_json(_subset(cold, {29, 183}))


def test_cache_round_trip_and_corruption(tmp_path):
    c = Cache(tmp_path)
    payload = {"modulus": "m", "invariants": [3, 6], "zetas": {"0,1": "-1/3"}}
    c.store(29, "k", payload)
    assert c.load(29, "k") == payload
    data = json.loads((tmp_path / "n29.json").read_text())
    data["entries"]["k"]["payload"]["zetas"]["0,1"] = "1/3"
    (tmp_path / "n29.json").write_text(json.dumps(data))
    assert c.load(29, "k") is None  # checksum mismatch is a miss
    (tmp_path / "n29.json").write_text("{not json")
    assert c.load(29, "k") is None
    job = Job(29, "x^3 - 6*x - s")
    clean = run_row(job, Options())
    assert run_row(job, Options(cache_dir=str(tmp_path))) == clean
    assert run_row(job, Options(cache_dir=str(tmp_path))) == clean
    assert Cache(tmp_path).load(29, clean["cache_keys"][0]) is not None


def test_cache_write_errors_are_reported(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    rep = run_row(Job(29, "x^3 - 6*x - s"), Options(cache_dir=str(blocker / "sub")))
    assert rep["cache_errors"] and "error" not in rep


def test_zeta_payload_round_trip(table_reports):
    rep = table_reports["reports"][0]
    G = RayClassGroup(Modulus(make_field(29), (), (True, True)))
    z = {c: 0 for c in G.group.elements()}
    from fractions import Fraction
    z = {c: Fraction(i, 7) for i, c in enumerate(sorted(z))}
    assert pipeline.zetas_from_payload(pipeline.ray_class_payload(G, z)) == z
    assert rep["n"] == 29


# ---------------------------------------------------------------- search

@pytest.mark.parametrize("n", [n for n in range(2, 80) if is_squarefree(n)])
def test_three_splitting_vs_handle(n):
    K = make_field(n)
    h = quadratic_handle(K, RayClassGroup(Modulus.three_power(K, 1)))
    direct = any(h.frobenius(P) == "split" for P, _ in primes_above(K, 3))
    assert three_splits_in_K0(n) == direct


def imaginary_class_number(d):
    """Class number of Q(sqrt d), d < 0 squarefree, by counting reduced forms."""
    D = d if d % 4 == 1 else 4 * d
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0) or gcd(gcd(a, abs(b)), c) != 1:
                continue
            h += 1
        a += 1
    return h


def v3(x):
    k = 0
    while x % 3 == 0:
        x //= 3
        k += 1
    return k


def squarefree_part(m):
    s = 1 if m > 0 else -1
    m = abs(m)
    out = 1
    p = 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
        if m % p == 0:
            out *= p
            m //= p
        p += 1
    return s * out * m


@pytest.mark.parametrize("n", [n for n in range(2, 90) if is_squarefree(n) and n % 3])
def test_L_value_route_vs_class_number(n):
    """The 3-part of |c0| equals that of h(Q(sqrt(-3n)))."""
    c0, _ = quadratic_c0(n)
    d = squarefree_part(-3 * n)
    assert v3(int(c0)) == v3(imaginary_class_number(d))


def test_search_examples():
    assert search_row(29)["candidate"]
    r = search_row(15)
    assert not r["candidate"] and "splits" in r["reason"]
    r = search_row(2)
    assert not r["candidate"] and r["derived_c0"] == "1"


# ---------------------------------------------------------------- cli

def test_cli_row_and_exit_codes(tmp_path, monkeypatch, capsys):
    inp = tmp_path / "one.input"
    inp.write_text('n = 29, cubic = "x^3 - 6*x - s"\n')
    md, js = tmp_path / "o.md", tmp_path / "o.json"
    assert main(["table", "--input", str(inp), "--out-md", str(md), "--out-json", str(js),
                 "--workers", "1"]) == 0
    assert "(18 - 6σ - 6σ²)(1 - τ)" in md.read_text()
    assert json.loads(js.read_text())["rows"][0]["w1theta"] == "(18 - 6*s - 6*s^2)*(1 - t)"

    real = pipeline.theta_report

    def broken(T, theta, Nact=None):
        rep = real(T, theta, Nact)
        rep.checks["Hayes congruence"] = False
        return rep

    monkeypatch.setattr(pipeline, "theta_report", broken)
    capsys.readouterr()
    assert main(["table", "--input", str(inp), "--out-json", str(js), "--workers", "1"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["failures"][0]["invariant_failures"] == ["Hayes congruence"]
    monkeypatch.setattr(pipeline, "theta_report", real)

    bad = tmp_path / "bad.input"
    bad.write_text("n = 4\n")
    assert main(["table", "--input", str(bad)]) == 1


def test_cli_audit(capsys):
    assert main(["row", "--n", "29", "--cubic", "x^3-6*x-s", "--audit"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("class=") and '"case": "TKNS"' in out


def test_figure(table_reports, tmp_path):
    from zeta0.plots import plot_table
    path = tmp_path / "fig.png"
    plot_table(table_reports["reports"], str(path))
    assert path.stat().st_size > 1000
