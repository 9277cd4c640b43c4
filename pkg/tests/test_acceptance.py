"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager

from conftest import corpus_structures, random_structures

from nilcohom.cli import main
from nilcohom.cohomology import (
    SOLVMANIFOLD_CAVEAT,
    bc_number,
    betti,
    compute_profile,
    degeneration_step,
    froelicher_pages,
    hodge_number,
    map_S_exactness,
    map_Sstar_Tstar,
    sgg_verdict,
)
from nilcohom.corpus import check_entry, get_entry, grid_points, load_entry_object, metric_from_spec, sweep
from nilcohom.exactfield import Matrix, gr, is_pos_def_hermitian
from nilcohom.exterior import diagonal_metric, hermitian_matrix_of_n1n1, standard_metric
from nilcohom.hodge import build_Q, transport_gauduchon
from nilcohom.metrics import check_metric, ddbar_vanishing, positive_feasibility
from nilcohom.structure import family_derived, family_instantiate, validate


@contextmanager
def criterion(k: int, title: str):
    try:
        yield
    except BaseException:
        print(f"\nacceptance {k:2d} FAIL  {title}")
        raise
    print(f"\nacceptance {k:2d} PASS  {title}")


def S(name: str):
    return load_entry_object(get_entry(name))


def test_01_iwasawa_report(capsys):
    with criterion(1, "report iwasawa: h01 = h01_BC = 2, b1 = 4, sGG"):
        start = time.perf_counter()
        code = main(["report", "iwasawa", "--format", "json"])
        elapsed = time.perf_counter() - start
        d = json.loads(capsys.readouterr().out)
        assert code == 0
        assert d["hodge"][0][1] == 2 and d["bc"][0][1] == 2
        assert d["betti"][1] == 4 and d["sgg"]["sgg"] is True
        assert elapsed < 1.0


def test_02_eq14_sgg_iff_rho_one():
    with criterion(2, "eq14 grid: sGG iff rho = 1 in all 30 cells, h01 = 3 or 2"):
        start = time.perf_counter()
        f = S("eq14")
        pts = grid_points({"rho": ["0", "1"], "lam": ["0", "1", "2"], "D": ["0", "1", "i", "-2", "(1+i)/2"]})
        res = sweep(f, pts)
        assert len(res.rows) == 30
        for pt, row in zip(pts, res.rows):
            assert row.error == "", (pt, row.error)
            assert row.sgg == (pt["rho"] == "1"), pt
            assert row.h01 == (2 if pt["rho"] == "1" else 3), pt
        assert time.perf_counter() - start < 10.0


def test_03_prop61_jumping():
    with criterion(3, "prop61: h11_BC = 5,4,4,4,5 and the five derivative formulas"):
        start = time.perf_counter()
        f = S("prop61")
        ts = ["0", "1/4", "i/4", "-1/4", "(1+i)/2"]
        got = [bc_number(family_instantiate(f, {"t": gr(t)}), 1, 1) for t in ts]
        assert got == [5, 4, 4, 4, 5]
        derivs = [r for r in check_entry(get_entry("prop61")) if r.key.startswith("d_monomial")]
        assert len({r.key for r in derivs}) == 5
        assert all(r.passed for r in derivs), [r.as_dict() for r in derivs if not r.passed]
        assert time.perf_counter() - start < 5.0


def test_04_prop52():
    with criterion(4, "prop52: b1 = 5, not sGG, balanced metric verified, E_1 degeneration"):
        e = get_entry("prop52")
        s = load_entry_object(e)
        assert betti(s, 1) == 5 and not sgg_verdict(s).sgg
        omega = metric_from_spec(3, e["metrics"]["half"])
        flags = check_metric(s, omega)
        assert flags.positive and flags.balanced
        assert s.d(omega.wedge(omega)).is_zero()
        assert degeneration_step(froelicher_pages(s)) == 1


def test_05_example1():
    with criterion(5, "example1: sGG, degeneration at E_2, ddbar = 0 on (2,1), no balanced witness"):
        s = S("example1")
        assert sgg_verdict(s).sgg
        assert degeneration_step(froelicher_pages(s)) == 2
        assert ddbar_vanishing(s, 2, 1)
        assert positive_feasibility(s, "balanced").status != "witness"


def test_06_prop62():
    with criterion(6, "prop62: not sGG at t = 0, sGG at t = 1/2 and i/3"):
        f = S("prop62")
        verdicts = [sgg_verdict(family_instantiate(f, {"t": gr(t)})).sgg for t in ("0", "1/2", "i/3")]
        assert verdicts == [False, True, True]


def test_07_nakamura():
    with criterion(7, "nakamura: valid, ddbar = 0 on (2,1), invariant b1 = 2, caveat emitted"):
        s = S("nakamura")
        assert validate(s).ok
        assert ddbar_vanishing(s, 2, 1)
        prof = compute_profile(s)
        assert prof.betti[1] == 2
        assert SOLVMANIFOLD_CAVEAT in prof.caveats


def _property_failures(s) -> list[str]:
    n = s.n
    out = []
    prof = compute_profile(s)
    h, bc, ae, b = prof.hodge, prof.bc, prof.aeppli, prof.betti
    if not bc[0][1] <= h[0][1]:
        out.append("h01_BC <= h01")
    if not b[1] <= 2 * h[0][1]:
        out.append("b1 <= 2 h01")
    if sum((-1) ** k * x for k, x in enumerate(b)) != 0:
        out.append("Euler characteristic")
    pages = froelicher_pages(s)
    if any(pages[1][(p, q)] != hodge_number(s, p, q) for p in range(n + 1) for q in range(n + 1)):
        out.append("E_1 = Dolbeault")
    last = pages[max(pages)]
    for k in range(2 * n + 1):
        if sum(v for (p, q), v in last.items() if p + q == k) != b[k]:
            out.append(f"sum E_inf = b_{k}")
    if prof.unimodular:
        v = sgg_verdict(s)
        if not v.crit_bc == v.crit_betti == (v.t_rank == 0):
            out.append("three sGG criteria")
        if not map_S_exactness(s)["exact"]:
            out.append("Im T = ker S")
        if not map_Sstar_Tstar(s)["exact"]:
            out.append("Im S* = ker T*")
        if any(bc[p][q] != ae[n - p][n - q] for p in range(n + 1) for q in range(n + 1)):
            out.append("BC/Aeppli duality")
    return out


def test_08_property_suite():
    with criterion(8, "property suite on the corpus and 50 random structures: zero failures"):
        structures = corpus_structures() + random_structures(50)
        assert len(structures) >= 60
        failures = {s.name: f for s in structures if (f := _property_failures(s))}
        assert not failures, failures


def test_09_fake_decomposition():
    with criterion(9, "P Q = Id and Q* P* = Id on every sGG corpus structure for two metrics"):
        metrics = [standard_metric(3), diagonal_metric(3, [2, 1, 3])]
        sgg = [s for s in corpus_structures() if compute_profile(s).unimodular and sgg_verdict(s).sgg]
        assert len(sgg) >= 5
        for s in sgg:
            for omega in metrics:
                fd = build_Q(s, omega)
                assert fd.PQ == Matrix.identity(fd.dims["aeppli_n1n1"]), s.name
                assert fd.QstarPstar == Matrix.identity(fd.dims["bc_11"]), s.name
                for lift in fd.lifts:
                    assert s.d(lift.assembled).is_zero() and lift.assembled.is_real(), s.name


def test_10_transport():
    with criterion(10, "transport on prop62: PD and ddbar_t-closed at t = 1/10, -1/10, i/10"):
        f = S("prop62")
        g = standard_metric(3)
        rep = transport_gauduchon(f, g, g, ["1/10", "-1/10", "i/10"])
        assert len(rep.rows) == 3
        for row in rep.rows:
            st = family_derived(f, {"t": gr(row.t)})
            c = row.component
            assert row.pd and row.gauduchon
            assert is_pos_def_hermitian(hermitian_matrix_of_n1n1(c))
            assert st.del_(st.delbar(c)).is_zero()
