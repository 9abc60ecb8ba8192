import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from ontovsm.index import index_term_multisets
from ontovsm.kb import KBError
from ontovsm.search import (NEConstraint, QueryError, class_words, matched_terms, parse_query,
                            score_all, search)
from ontovsm.terms import keyword, ne_class, ne_id
from ontovsm import testbed


def test_parse_class_only(annotator):
    q = parse_query("class:CommercialOrganization", annotator)
    assert q.ne_constraints == [NEConstraint(cls="CommercialOrganization")]
    assert q.free_text_tokens == []


def test_parse_wh_question(bed):
    _, annotator, wh, _ = bed
    q = parse_query("Where was George Washington born?", annotator, wh)
    assert q.wh_class == "Location"
    assert q.ne_constraints == [NEConstraint(entity_id="Person_GW")]
    assert q.free_text_tokens == ["born"]


def test_parse_name_class(annotator):
    q = parse_query('pollution ne:"Paris"/City', annotator)
    assert q.free_text_tokens == ["pollution"]
    assert q.ne_constraints == [NEConstraint(name="Paris", cls="City")]


def test_parse_entity_and_escapes(annotator):
    q = parse_query(r'entity:Company_123 name:"say \"hi\""', annotator)
    assert q.ne_constraints == [NEConstraint(entity_id="Company_123"), NEConstraint(name='say "hi"')]
    assert "intel" in q.constraint_words


def test_wh_word_only_at_start(bed):
    _, annotator, wh, _ = bed
    q = parse_query("born where", annotator, wh)
    assert q.wh_class is None


def test_url_like_colon_is_not_operator(annotator):
    q = parse_query("ratio 3:1", annotator)
    assert q.ne_constraints == []


@pytest.mark.parametrize("text, err", [
    ("foo:bar", QueryError),
    ('name:"open', QueryError),
    ("name:Paris", QueryError),
    ('ne:"Paris"City', QueryError),
    ("class:Nope", KBError),
    ("entity:Nope_1", KBError),
])
def test_parse_errors(annotator, text, err):
    with pytest.raises(err):
        parse_query(text, annotator)


def test_class_words():
    assert class_words("CommercialOrganization") == "Commercial Organization"
    assert class_words("City") == "City"


def test_identical_direction_scores_one():
    a, b, c = keyword("a"), keyword("b"), keyword("c")
    idx = index_term_multisets([("x", Counter({a: 2, b: 1})), ("y", Counter({c: 1})),
                                ("z", Counter({b: 1, c: 3}))])
    result = score_all(Counter({a: 2, b: 1}), idx)
    assert result.entries[0] == ("x", 1.0)


def test_orthogonal_and_empty():
    a, b = keyword("a"), keyword("b")
    idx = index_term_multisets([("x", Counter({a: 1})), ("y", Counter({b: 1}))])
    res = score_all(Counter({keyword("zzz"): 1}), idx)
    assert res.entries == [] and res.empty_query
    both = index_term_multisets([("x", Counter({a: 1, b: 1})), ("y", Counter({b: 1}))])
    # b occurs everywhere, so its weight is zero: empty query, not merely no match
    assert score_all(Counter({b: 1}), both).empty_query


def test_alias_retrieval(bed):
    _, annotator, wh, idx = bed
    docs = search('name:"Sài Gòn"', idx, annotator, wh, "nek", k=40).docnos()
    assert "LA023" in docs  # mentions TPHCM only
    assert "LA001" in docs  # mentions Thành phố Hồ Chí Minh only


def test_keyword_mode_misses_class_members(bed):
    _, annotator, wh, idx = bed
    kw = search("class:CommercialOrganization", idx, annotator, wh, "keyword", k=40).docnos()
    nek = search("class:CommercialOrganization", idx, annotator, wh, "nek", k=40).docnos()
    assert "LA009" not in kw and "LA009" in nek


def test_matched_terms(bed):
    kb, annotator, wh, idx = bed
    from ontovsm.terms import emit_query_terms
    q = emit_query_terms(parse_query("entity:Company_123 plant", annotator), kb, "nek")
    assert matched_terms(q, idx, "LA023") == [keyword("plant"), ne_id("Company_123")]
    assert matched_terms(q, idx, "NOPE") == []


def test_k_truncation_and_validation(bed):
    _, annotator, wh, idx = bed
    assert len(search("class:Location", idx, annotator, wh, "nek", k=3)) == 3
    with pytest.raises(ValueError):
        search("x", idx, annotator, wh, k=0)


def test_idempotent_and_bounded(bed):
    _, annotator, wh, idx = bed
    for _, text, _ in testbed.TOPICS:
        for mode in ("keyword", "nek", "nek+wh"):
            r1 = search(text, idx, annotator, wh, mode, k=100)
            r2 = search(text, idx, annotator, wh, mode, k=100)
            assert r1 == r2
            assert all(0.0 < s <= 1.0 for _, s in r1)


def test_permutation_invariance(bed):
    from ontovsm.index import build_index
    from ontovsm.corpus import parse_trec
    kb, annotator, wh, idx = bed
    docs = [annotator.annotate(d.docno, d.text) for d in parse_trec(testbed.trec_text())]
    rng = random.Random(7)
    for _ in range(3):
        rng.shuffle(docs)
        shuffled = build_index(docs, kb, normalize=annotator.keyword)
        for _, text, _ in testbed.TOPICS:
            for mode in ("keyword", "nek", "nek+wh"):
                assert (search(text, shuffled, annotator, wh, mode, k=100).entries
                        == search(text, idx, annotator, wh, mode, k=100).entries)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.dictionaries(st.sampled_from("abcdef"), st.integers(1, 3), max_size=4),
                min_size=1, max_size=6),
       st.dictionaries(st.sampled_from("abcdefg"), st.integers(1, 3), min_size=1, max_size=4))
def test_scores_in_unit_interval(docs, query):
    idx = index_term_multisets((f"d{i}", Counter({keyword(k): v for k, v in m.items()}))
                               for i, m in enumerate(docs))
    res = score_all(Counter({keyword(k): v for k, v in query.items()}), idx)
    assert all(0.0 < s <= 1.0 for _, s in res)
    assert [e for e in res] == sorted(res, key=lambda e: (-e[1], e[0]))
