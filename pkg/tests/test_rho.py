from __future__ import annotations

import dataclasses

import pytest

from curveatlas.bounds import rho_upper_bound
from curveatlas.catalog import Catalog
from curveatlas.errors import InvariantViolation
from curveatlas.rho import TranscriptCache, certify_rho, positive_degree_step, recheck_certificate
from curveatlas.tables import expected_rho, rho_cells, verify_extremal_table, verify_rho_table

SMALL_CELLS = [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (4, 3), (9, 3), (27, 3)]


@pytest.fixture(scope="module")
def cache():
    return TranscriptCache()


@pytest.mark.parametrize("q,g", SMALL_CELLS)
def test_certificates_recheck_from_scratch(q, g, catalog, cache):
    cert = certify_rho(q, g, catalog, cache)
    assert cert.lower <= cert.upper
    assert cert.status == "Exact" and cert.value == expected_rho(q, g)
    assert recheck_certificate(cert, catalog)


def test_tampered_certificates_fail_the_recheck(catalog, cache):
    cert = certify_rho(2, 3, catalog, cache)
    assert not recheck_certificate(dataclasses.replace(cert, lower=cert.lower + 1), catalog)
    assert not recheck_certificate(dataclasses.replace(cert, upper=cert.upper - 1), catalog)
    # dropping steps or facts breaks the downward walk
    cert = certify_rho(2, 2, catalog, cache)
    assert any(s["kind"] == "fact" for s in cert.upper_chain)
    assert not recheck_certificate(dataclasses.replace(cert, upper_chain=cert.upper_chain[:1]), catalog)
    assert not recheck_certificate(cert, Catalog(catalog.witnesses, ()))


def test_evidence_only_tightens_the_interval(catalog, cache):
    partial = Catalog(catalog.witnesses[: len(catalog.witnesses) // 2], catalog.facts[:5])
    for q, g in rho_cells(tail_upto=16):
        bare = certify_rho(q, g, Catalog(), cache)
        half = certify_rho(q, g, partial, cache)
        full = certify_rho(q, g, catalog, cache)
        assert bare.lower <= half.lower <= full.lower <= full.upper <= half.upper <= bare.upper, (q, g)


def test_upper_chain_walks_down_one_degree_at_a_time(catalog, cache):
    for q, g in rho_cells(tail_upto=16):
        cert = certify_rho(q, g, catalog, cache)
        U, best = rho_upper_bound(q, g)
        assert cert.upper_chain[0] == {"r": U, "kind": "formula", "via": best,
                                       "detail": f"B_r > 0 for every r >= {U}"}
        assert [s["r"] for s in cert.upper_chain] == list(range(U, cert.upper - 1, -1))


def test_genus_zero_and_bad_genus():
    cert = certify_rho(7, 0)
    assert cert.status == "Exact" and cert.value == 1 and recheck_certificate(cert, None)
    with pytest.raises(ValueError):
        certify_rho(7, -1)


def test_contradictory_evidence_is_reported():
    from curveatlas.catalog import parse_catalog

    liar = parse_catalog('fact liar scope="g=1;q=97" effect=forces-existence r=3 cite=X statement="s"\n')
    with pytest.raises(InvariantViolation):
        certify_rho(97, 1, liar)


def test_positive_degree_steps(catalog):
    assert positive_degree_step(2, 2, 4, catalog)["via"] == "lario-g2-q2-degree4"
    assert positive_degree_step(2, 2, 4, None) is None
    chain = positive_degree_step(4, 3, 3, catalog)
    assert chain["kind"] == "chain" and chain["fact"] == "serre-g3-q4-max-points"
    assert chain["N_r_min"] > chain["N_1_max"]
    assert chain["trust"] == positive_degree_step(2, 2, 4, catalog)["trust"] == "external, not re-derived"
    assert "trust" not in positive_degree_step(2, 1, 9, catalog)


def test_certificate_json(catalog, cache):
    js = certify_rho(3, 2, catalog, cache).to_json()
    assert js["status"] == "Exact" and js["value"] == 4
    assert {e["kind"] for e in js["lower_evidence"]} >= {"trivial", "witness"}


def test_full_rho_table(catalog, cache):
    rows = verify_rho_table(catalog, cache=cache)
    assert len(rows) == 132
    assert [r.key for r in rows if not r.ok] == []


def test_full_extremal_table(catalog):
    rows = verify_extremal_table(catalog)
    assert len(rows) == 11 and all(r.ok for r in rows)


@pytest.mark.parametrize("q", [131, 137, 169, 243, 256, 289])
@pytest.mark.parametrize("g", [1, 2, 3])
def test_large_fields_force_a_rational_point(q, g):
    cert = certify_rho(q, g)
    assert cert.status == "Exact" and cert.value == 1 and recheck_certificate(cert, None)
    assert positive_degree_step(q, g, 1) is not None
