from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from ontovsm.annotate import (Annotation, Annotator, load_stoplist, normalize_keyword,
                              parse_gazetteer, tokenize)
from ontovsm.corpus import CorpusError, iter_corpus, parse_trec
from ontovsm.kb import KBError, normalize_name


def surfaces(text):
    return [t.surface for t in tokenize(text)]


def test_tokenize():
    assert surfaces("Intel opens.") == ["Intel", "opens"]
    assert surfaces("") == []
    assert surfaces("13.900 m2") == ["13", "900", "m2"]
    assert surfaces("Brian M.Krzanich") == ["Brian", "M", "Krzanich"]
    assert surfaces("snake_case") == ["snake", "case"]


def test_token_offsets():
    text = "  Sài Gòn, TPHCM!"
    for t in tokenize(text):
        assert text[t.start:t.end] == t.surface


def test_normalize_keyword():
    stop = load_stoplist()
    assert normalize_keyword("Pollution", stop) == "pollution"
    assert normalize_keyword("the", stop) is None
    assert normalize_keyword("300", stop) is None
    assert normalize_keyword("m2", stop) == "m2"
    assert normalize_keyword("Running", stop, stemmer=lambda w: w[:-3]) == "runn"


def test_intel_full_annotation(annotator):
    doc = annotator.annotate("d", "Intel opened a plant.")
    assert len(doc.ne_spans) == 1
    assert doc.ne_spans[0].candidates == (Annotation("intel", "Company", "Company_123"),)
    assert annotator.keywords(doc) == ["opened", "plant"]


def test_longest_match_ambiguity(annotator):
    doc = annotator.annotate("d", "Khu Công Nghệ Cao Sài Gòn mở rộng.")
    assert len(doc.ne_spans) == 1
    span = doc.ne_spans[0]
    assert (span.start, span.end) == (0, 6)
    assert {(a.cls, a.identifier) for a in span.candidates} == {
        ("Location", "Loc_KCNC"), ("Organization", "Org_KCNC")}
    assert all(a.form == 3 for a in span.candidates)


def test_name_only_gazetteer(annotator):
    doc = annotator.annotate("d", "Brian M.Krzanich spoke.")
    [span] = doc.ne_spans
    assert span.candidates == (Annotation("brian m.krzanich", "Person", None),)
    assert span.candidates[0].form == 2


def test_gazetteer_entry_shadowed_by_kb_entity(kb):
    ann = Annotator(kb, [("intel", "Company"), ("intel", "Person")])
    [span] = ann.annotate("d", "Intel").ne_spans
    assert [(a.cls, a.identifier) for a in span.candidates] == [
        ("Company", "Company_123"), ("Person", None)]


def test_alias_spans(annotator):
    doc = annotator.annotate("d", "Thành phố Hồ Chí Minh và TPHCM")
    ids = [a.identifier for s in doc.ne_spans for a in s.candidates]
    assert ids == ["City_SG", "City_SG"]


def test_annotation_requires_class_for_identifier():
    with pytest.raises(ValueError):
        Annotation("x", None, "X_1")


def test_parse_gazetteer_errors(kb):
    with pytest.raises(KBError) as info:
        parse_gazetteer('name "a" class Person\nname "b" class Nope\n', kb)
    assert info.value.line == 2
    with pytest.raises(KBError):
        parse_gazetteer('name "a" Person\n', kb)


WORDS = ["Intel", "Sài", "Gòn", "TPHCM", "Paris", "rice", "the", "Khu", "Công", "Nghệ",
         "Cao", "Thái", "Lan", "Brian", "M", "Krzanich", "300", "plant"]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(WORDS), max_size=25))
def test_span_invariants(annotator, words):
    known = set(annotator.kb.name_index) | {n for n, _ in annotator.extra_names}
    doc = annotator.annotate("d", " ".join(words))
    covered = []
    for s in doc.ne_spans:
        surface = normalize_name(" ".join(t.surface for t in doc.tokens[s.start:s.end]))
        names = {a.name for a in s.candidates}
        assert names <= known
        # names are keyed by tokens, so punctuation inside a name is not compared
        assert any(tokenize(n) and surfaces(n) == surface.split() for n in names)
        covered.extend(range(s.start, s.end))
    assert len(covered) == len(set(covered))
    assert sorted(covered + doc.keyword_tokens) == list(range(len(doc.tokens)))
    assert annotator.annotate("d", " ".join(words)) == doc


def test_alias_invariance_at_annotation(bed):
    annotator = bed[1]
    a = annotator.annotate("a", "Traffic in Sài Gòn and Sài Gòn again")
    b = annotator.annotate("b", "Traffic in TPHCM and Thành phố Hồ Chí Minh again")

    def ids(doc):
        return Counter(c.identifier for s in doc.ne_spans for c in s.candidates)

    assert ids(a) == ids(b)


# --- corpus reader -----------------------------------------------------------

TREC = """<DOC>
<DOCNO> LA1 </DOCNO>
<HEADLINE>Head &amp; line</HEADLINE>
<TEXT><P>Body text.</P></TEXT>
</DOC>
<DOC><DOCNO>LA2</DOCNO><TEXT>Second</TEXT></DOC>
"""


def test_parse_trec():
    docs = parse_trec(TREC)
    assert [d.docno for d in docs] == ["LA1", "LA2"]
    assert "Head & line" in docs[0].text and "Body text." in docs[0].text


@pytest.mark.parametrize("text, line", [
    ("<DOC><TEXT>x</TEXT></DOC>", 1),
    ("<DOC><DOCNO>a</DOCNO></DOC>\n\njunk\n", 3),
    ("<DOC><DOCNO>a</DOCNO></DOC>\n<DOC><DOCNO>b</DOCNO>\n", 2),
])
def test_parse_trec_errors(text, line):
    with pytest.raises(CorpusError) as info:
        parse_trec(text, "f.trec")
    assert info.value.line == line


def test_iter_corpus_lenient(tmp_path):
    (tmp_path / "a.trec").write_text("<DOC><DOCNO>A</DOCNO><TEXT>a</TEXT></DOC>")
    (tmp_path / "b.trec").write_text("<DOC><DOCNO>B</DOCNO>")
    (tmp_path / "c.trec").write_text("<DOC><DOCNO>C</DOCNO><TEXT>c</TEXT></DOC>")
    warnings = []
    docs = list(iter_corpus([tmp_path], strict=False, warn=warnings.append))
    assert [d.docno for d in docs] == ["A", "C"]
    assert len(warnings) == 1 and "b.trec" in warnings[0]
    with pytest.raises(CorpusError):
        list(iter_corpus([tmp_path]))
