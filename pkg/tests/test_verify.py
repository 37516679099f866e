import json

import pytest

from genlift import verify as V
from genlift.nielsen import PairBudgetExceeded


def check(report, claim_id):
    assert report.passed, json.dumps(report.evidence, default=str)
    assert report.claim_id == claim_id
    d = report.to_dict()
    assert set(d) == {
        "claim_id", "parameters", "passed", "evidence",
        "elapsed_ms", "tool_version", "cache_hit",
    }
    json.dumps(d, default=str)  # reports must be serializable
    return report


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11])
def test_trace_table(q):
    check(V.verify_trace_table(q), "trace-table")


def test_prop_key():
    check(V.verify_prop_key(7), "prop-key")
    check(V.verify_prop_key(11), "prop-key")


def test_prop_key_precondition():
    with pytest.raises(V.PreconditionError):
        V.verify_prop_key(5)


def test_lemmas():
    check(V.verify_lemma5(), "lemma5")
    check(V.verify_lemma7(), "lemma7")


@pytest.mark.parametrize("case,q,m", [
    ("i", 4, None), ("i", 5, None), ("i", 7, None), ("i", 8, None), ("i", 11, None),
    ("ii", 7, None), ("ii", 11, None),
    ("iii", 7, 4), ("iii", 7, 7), ("iii", 11, 3), ("iii", 11, 5), ("iii", 11, 6),
    ("iv", 5, None), ("iv", 7, None), ("iv", 9, None), ("iv", 11, None),
])
def test_theorem(case, q, m):
    r = check(V.verify_theorem(case, q, m=m), f"thm-{case}")
    assert r.evidence["free_orbit_count"] >= 1
    assert r.evidence["is_mn_generated"]


@pytest.mark.parametrize("case,q,m", [
    ("i", 9, None),   # the one excluded q
    ("i", 3, None),
    ("ii", 4, None),  # even characteristic
    ("iii", 13, 3),   # q = 1 mod 4
    ("iii", 11, None),  # missing m
    ("iii", 11, 13),  # hypothesis fails
    ("iv", 4, None),
    ("bogus", 7, None),
])
def test_theorem_preconditions(case, q, m):
    with pytest.raises(V.PreconditionError):
        V.verify_theorem(case, q, m=m)


def test_s2p2():
    r = check(V.verify_s2p2(13), "s2p2")
    assert "4" in r.evidence["spectrum_values_outside_set"]


def test_s2p2_precondition():
    with pytest.raises(V.PreconditionError):
        V.verify_s2p2(7)


def test_psl25_lift():
    r = check(V.verify_psl25_lift(), "psl25-lift")
    assert r.evidence["representative_taus"] == ["3", "1", "3"]


def test_remark():
    check(V.verify_remark(7, 13), "remark")


def test_remark_budget():
    # (19,37) and friends are beyond desk scale and must be refused up front
    with pytest.raises(PairBudgetExceeded):
        V.verify_remark(19, 37)


def test_miller():
    r = check(V.verify_miller_332(), "miller-332")
    assert r.evidence["order"] == 288
    assert r.evidence["derived_series_orders"] == [288, 32, 2, 1]
    assert r.evidence["abelianization"] == [3, 3]
    assert r.evidence["second_derived_order"] == 2


@pytest.mark.parametrize("m", range(3, 13))
def test_dihedral(m):
    check(V.verify_dihedral(m), "dihedral")


def test_dihedral_precondition():
    with pytest.raises(V.PreconditionError):
        V.verify_dihedral(2)


def test_example_alt5():
    r = check(V.verify_example_alt5(), "example-alt5")
    assert r.evidence["gamma_size"] == 2280
    assert r.evidence["nielsen_orbit_sizes"] == [600, 600, 1080]
    assert r.evidence["aut_orbit_count"] == 19
    assert r.evidence["joint_orbit_sizes"] == [1080, 1200]


def test_small_q_lifting():
    check(V.verify_small_q_lifting(), "small-q-lift")


def test_expected_spectrum_char2():
    # 2 = 0 in characteristic 2, so the excluded value is 0
    assert 0 not in V.expected_trace_spectrum(4)
    assert len(V.expected_trace_spectrum(4)) == 3


def test_verify_all_small():
    reports = V.verify_all(max_q=5)
    assert all(r.passed for r in reports)
    ids = {r.claim_id for r in reports}
    assert {"trace-table", "lemma5", "lemma7", "thm-i", "thm-iv",
            "psl25-lift", "miller-332", "dihedral", "example-alt5",
            "small-q-lift"} <= ids


def test_disk_cache(tmp_path):
    V._DECOMP.clear()
    cold = V.verify_trace_table(7, cache_dir=tmp_path)
    V._DECOMP.clear()
    warm = V.verify_trace_table(7, cache_dir=tmp_path)
    assert not cold.cache_hit and warm.cache_hit
    assert cold.evidence == warm.evidence
    assert cold.passed and warm.passed
    V._DECOMP.clear()
