"""Smoke tests for the holmatch extension module."""

import holmatch


def test_version():
    assert holmatch.__version__


def test_canonical_term():
    out = holmatch.canonical_term(
        "(clogic.basis.forall (\\V0. ((clogic.basis.eq V0) V0)))"
    )
    assert out == "@ c:clogic.basis.forall L @ @ c:clogic.basis.eq b0 b0"


def test_pattern_extraction():
    body, arity = holmatch.extract_pattern(
        "(clogic.basis.forall (\\V0. ((clogic.basis.eq V0) V0)))"
    )
    assert arity == 2
    assert body == "L L @ b1 L @ @ b1 b0 b0"

    rels = holmatch.relative_patterns(
        "(clogic.basis.forall (\\V0. ((clogic.basis.eq V0) V0)))"
    )
    assert [(c, s) for c, _, s in rels] == [
        ("clogic.basis.forall", 0),
        ("clogic.basis.eq", 1),
    ]


def test_normalize_splits_conjunctions():
    conj = (
        "((clogic.basis.and"
        " (clogic.basis.forall (\\V0. (ca.x.p V0))))"
        " (clogic.basis.forall (\\V0. (ca.x.q V0))))"
    )
    pieces = holmatch.normalize_term(conj)
    assert pieces == [
        "@ c:clogic.basis.forall L @ c:ca.x.p b0",
        "@ c:clogic.basis.forall L @ c:ca.x.q b0",
    ]


def test_generate_and_match_roundtrip():
    twins = holmatch.generate_twins(seed=3, constants=15, theorems=40)
    truth = dict(twins["const_truth"])
    result = holmatch.match(twins["lib1"], twins["lib2"])
    assert result["const_pairs"]
    for c1, c2, _fresh, _score, _shared in result["const_pairs"]:
        assert truth[c1] == c2


def test_mine_reports_properties():
    twins = holmatch.generate_twins(seed=4, constants=12, theorems=30)
    report = holmatch.mine(twins["lib1"])
    assert "pattern-name\tconstant-count\ttheorem-count" in report
    assert "\nComm\t" in report
