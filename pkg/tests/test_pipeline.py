from __future__ import annotations

import json

import pytest

from isounit import Engine, UnbalancedDelimiterError, load_lexicon, tag_sentence
from isounit.pipeline import split_sentences, translate_document, translate_sentence
from worked_examples import CASES, SENTENCES, in_order


@pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
def test_worked_example(engine, case):
    out, trace = translate_sentence(engine, case.sentence)
    assert len(trace.matches) == 1
    m = trace.matches[0]
    assert m["rule"] == case.rule
    unit_text = [c["text"] for c in trace.candidates if [c["start"], c["end"]] == m["unit"]]
    assert unit_text == [case.unit]
    assert m["segment"]["dir"] == case.direction
    seg = m["segment"]["text"]
    if case.exact is not None:
        assert seg == case.exact
    assert in_order(seg, case.ordered)
    assert seg in out


def test_i3_output_has_commas_removed(engine):
    out, _ = translate_sentence(engine, SENTENCES[1])
    assert "전류 즉 I_3" in out
    assert "I_3," not in out and ", 즉" not in out


def test_dc_segment_precedes_anchor_gloss(engine):
    out, _ = translate_sentence(engine, SENTENCES[3])
    assert "전류를 유지하기 위하여 공급되어야 하는 이 에네르기" in out


def test_nice_anchor(engine):
    _, trace = translate_sentence(engine, SENTENCES[4])
    m = trace.matches[0]
    assert m["bindings"]["a"]["text"] == "an international classification"
    assert m["segment"]["anchor"] == m["bindings"]["a"]["span"]


def test_muriel_first_span_rejected_with_warning(engine):
    out, trace = translate_sentence(engine, SENTENCES[0])
    assert [c["text"] for c in trace.candidates] == [
        "only through the collaboration and encouragement by Muriel", "my wife"]
    assert [m["unit"] for m in trace.matches] == [[trace.candidates[1]["start"],
                                                   trace.candidates[1]["end"]]]
    assert any("candidate 0" in w and "matched no rule" in w for w in trace.warnings)
    assert "협조와 고무" in out


def test_no_commas_means_no_candidates(engine):
    sentence = "The current is often a battery."
    out, trace = translate_sentence(engine, sentence)
    assert trace.candidates == [] and trace.matches == []
    assert out == engine.glosser.gloss(tag_sentence(engine.lexicon, sentence))


def test_trace_lists_every_candidate_once(engine):
    for sentence in SENTENCES:
        _, trace = translate_sentence(engine, sentence)
        spans = [(c["start"], c["end"]) for c in trace.candidates]
        assert len(spans) == len(set(spans))
        tried = {a["candidate"] for a in trace.attempts}
        assert tried == set(range(len(spans)))


def test_trace_is_json(engine):
    _, trace = translate_sentence(engine, SENTENCES[2])
    d = json.loads(trace.to_json())
    assert set(d) == {"id", "input", "candidates", "attempts", "matches", "output", "warnings"}


def test_unbalanced_raises(engine):
    with pytest.raises(UnbalancedDelimiterError):
        translate_sentence(engine, "a (b")


def test_nested_unit_rendered_inside_outer_capture(engine):
    out, trace = translate_sentence(
        engine, "Now, we define R_1, using the law (any current, say I_3, is small), as follows.")
    assert [m["rule"] for m in trace.matches] == ["Ad-2"]
    assert out.startswith("법칙 (임의의 전류 즉 I_3 이다 [small])에 따라")
    assert any("small" in w for w in trace.warnings)


def test_inner_unit_outside_captures_keeps_outer_unmatched():
    lex = load_lexicon("using\tIng\t-에 따라\nis\tP\t이다\nif\tCJS\nnot\tAdv\t않\n"
                       "explicitly\tAdv\t명시적으로\nindicated\tEd\t지적되\nit\tN\t그것\n")
    eng = Engine.create(lex)
    # the bracketed Ad-2 unit sits between "if" and "not", outside every Ad-1 capture
    out, trace = translate_sentence(eng, "it is, if (using R) not explicitly indicated, it")
    assert [m["rule"] for m in trace.matches] == ["Ad-2"]
    assert any("matched Ad-1 but would hide a nested unit" in w for w in trace.warnings)
    assert "R에 따라" in out


# --- documents -----------------------------------------------------------------

def test_split_sentences():
    assert split_sentences("One. Two!  Three?") == ["One.", "Two!", "Three?"]
    assert split_sentences("See Eqs. (1) here. Next one.") == ["See Eqs. (1) here.", "Next one."]
    assert split_sentences("Value 2.5 is it. x") == ["Value 2.5 is it. x"]
    assert split_sentences("a\n\nb") == ["a", "b"]
    assert split_sentences("") == []


def test_two_sentences_two_records(engine):
    recs = list(translate_document(engine, "The current is small. The law is known."))
    assert [r.id for r in recs] == [1, 2]
    assert [r.input for r in recs] == ["The current is small.", "The law is known."]


def test_seven_sample_sentences_as_document(engine):
    recs = list(translate_document(engine, " ".join(SENTENCES)))
    assert len(recs) == 7
    for rec, case in zip(recs, CASES):
        assert rec.error is None
        assert [m["rule"] for m in rec.trace.matches] == [case.rule]


def test_error_stays_with_its_sentence(engine):
    recs = list(translate_document(engine, "Fine here. Broken (here. Fine again."))
    assert [r.error is None for r in recs] == [True, False, True]
    assert "(" in recs[1].error and recs[1].trace.error == recs[1].error


def test_parallel_equals_serial(engine):
    text = "\n".join(SENTENCES * 3)
    serial = [(r.output, r.trace.to_json()) for r in translate_document(engine, text)]
    parallel = [(r.output, r.trace.to_json()) for r in translate_document(engine, text, workers=4)]
    assert serial == parallel


def test_document_accepts_iterable_of_lines(engine):
    recs = list(translate_document(engine, iter([SENTENCES[0] + "\n", SENTENCES[1] + "\n"])))
    assert len(recs) == 2
