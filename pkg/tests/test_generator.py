from __future__ import annotations

import pytest

from isounit.generator import (
    AssemblyError, DefaultGlosser, KoreanSegment, assemble_sentence, attach, finalize, glue,
    has_batchim, join_korean, render_template, select_josa,
)
from isounit.lexicon import load_lexicon, tag_sentence
from isounit.matcher import select_rule
from isounit.ruledsl import Direction, JosaAlt
from isounit.units import detect_units
from oracles import jamo_final, oracle_josa
from worked_examples import SENTENCES

ALL_SYLLABLES = [chr(c) for c in range(0xAC00, 0xD7A4)]
PAIRS = [("과", "와"), ("은", "는"), ("이", "가"), ("을", "를"), ("으로", "로")]


def test_syllable_count():
    assert len(ALL_SYLLABLES) == 11172


def test_has_batchim_matches_decomposition():
    assert all(has_batchim(s) == (jamo_final(s) is not None) for s in ALL_SYLLABLES)


@pytest.mark.parametrize("pair", PAIRS)
def test_select_josa_matches_oracle(pair):
    alt = JosaAlt(*pair)
    assert all(select_josa(s, alt) == oracle_josa(s, *pair) for s in ALL_SYLLABLES)


@pytest.mark.parametrize("ch,expected", [("조", False), ("들", True), ("3", True), ("R", True)])
def test_has_batchim_examples(ch, expected):
    assert has_batchim(ch) is expected


@pytest.mark.parametrize("word,pair,expected", [
    ("협조", ("과", "와"), "와"),
    ("봉사들", ("은", "는"), "은"),
    ("클래스씨휘케이슌", ("으로", "로"), "으로"),
    ("길", ("으로", "로"), "로"),
    ("I_3", ("을", "를"), "을"),
    ("", ("과", "와"), "과"),
])
def test_select_josa_examples(word, pair, expected):
    assert select_josa(word, JosaAlt(*pair)) == expected


def test_glue_merges_jamo():
    assert glue("알려지", "ㄴ") == "알려진"
    assert glue("되", "ㄴ다 해도") == "된다 해도"
    assert glue("먹", "ㄴ") == "먹은"
    assert glue("하", "는") == "하는"


def test_attach_and_join():
    assert attach("협조", "-과/와") == "협조와"
    assert attach("법칙", "-에 따라") == "법칙에 따라"
    assert join_korean(["옴의 법칙", "-에 따라"]) == "옴의 법칙에 따라"
    assert join_korean(["마지막으로", ",", "오직"]) == "마지막으로, 오직"
    assert join_korean(["식", "(", "1", ")", "."]) == "식 (1)."
    assert join_korean(["-인", "x"]) == "-인 x"
    assert finalize("-과/와 x") == "과 x"
    assert join_korean([]) == ""


# --- glossing ------------------------------------------------------------------

def test_gloss_span():
    lex = load_lexicon("ohm's\tN1\t옴의\nlaw\tN1\t법칙\n")
    g = DefaultGlosser(lex)
    assert g.gloss(tag_sentence(lex, "Ohm's law")) == "옴의 법칙"
    assert g.gloss([]) == ""


def test_gloss_unknown_is_bracketed():
    lex = load_lexicon("law\tN1\t법칙\n")
    toks = tag_sentence(lex, "flux law")
    assert toks[0].oov
    assert DefaultGlosser(lex).gloss(toks) == "[flux] 법칙"


# --- rendering -----------------------------------------------------------------

def render_first(engine, sentence, text):
    toks = tag_sentence(engine.lexicon, sentence)
    unit = next(u for u in detect_units(toks) if u.text(toks) == text)
    res = select_rule(engine.catalog, toks, unit)
    return toks, res, render_template(engine.rule(res.rule_id), res, engine.glosser)


def test_n2_segment(engine):
    _, _, seg = render_first(engine, SENTENCES[1], "say I_3")
    assert (seg.text, seg.direction, seg.bound) == ("즉 I_3", Direction.RIGHT, False)


def test_n1_segment_with_minimal_lexicon(engine):
    from isounit import Engine
    lex = load_lexicon("my\tDET\t나의\nwife\tN1\t안해\nmuriel\tN1\t무리엘\nhas\tP\n")
    small = Engine.create(lex)
    _, _, seg = render_first(small, "by Muriel , my wife , has", "my wife")
    assert (seg.text, seg.direction) == ("나의 안해", Direction.LEFT)


def test_at2_segment_ends_with_adnominal(engine):
    _, _, seg = render_first(engine, SENTENCES[3],
                             "which must be supplied in order to maintain the current")
    assert seg.text.endswith("는") and seg.direction is Direction.LEFT


def test_oov_inside_capture_warns(engine):
    _, res, seg = render_first(engine, "Now, we define R_1, using flux law, as follows.",
                               "using flux law")
    assert res.rule_id == "Ad-2"
    assert "[flux]" in seg.text
    assert any("flux" in w for w in seg.warnings)


def test_n4_segment_is_bound(engine):
    _, res, seg = render_first(
        engine, "The resistor, an ohmic device, and the capacitor, an energy store, are connected.",
        "an ohmic device")
    assert res.rule_id == "N-4"
    assert seg.bound and seg.text == "인 옴 소자"
    assert seg.piece() == "-인 옴 소자"


# --- assembly ------------------------------------------------------------------

def test_assembly_i3(engine):
    toks, res, seg = render_first(engine, SENTENCES[1], "say I_3")
    out = assemble_sentence(toks, [(res, seg)], engine.glosser)
    assert "전류 즉 I_3" in out
    assert "," not in out.split("즉 I_3")[0][-3:]


def test_zero_matches_is_pure_gloss(engine):
    toks = tag_sentence(engine.lexicon, "the current is often small, say.")
    assert assemble_sentence(toks, [], engine.glosser) == engine.glosser.gloss(toks)


def test_overlap_rejected(engine):
    toks, res, seg = render_first(engine, SENTENCES[1], "say I_3")
    with pytest.raises(AssemblyError):
        assemble_sentence(toks, [(res, seg), (res, seg)], engine.glosser)


def test_right_before_left_at_shared_boundary():
    from isounit.matcher import MatchResult
    from isounit.units import Delimiter, IsolatedUnit
    lex = load_lexicon("x\tN1\t엑스\ny\tN1\t와이\na\tN1\t에이\nb\tN1\t비\n")
    toks = tag_sentence(lex, "x y , a , b")
    right = (MatchResult("r", IsolatedUnit(3, 4, Delimiter.COMMA), (), (0, 1)),
             KoreanSegment("오른", Direction.RIGHT, (0, 1)))
    left = (MatchResult("l", IsolatedUnit(5, 6, Delimiter.COMMA), (), (1, 2)),
            KoreanSegment("왼", Direction.LEFT, (1, 2)))
    out = assemble_sentence(toks, [left, right], DefaultGlosser(lex))
    assert out == "엑스 오른 왼 와이"


@pytest.mark.parametrize("sentence,expected", [
    ("The resistor, an ohmic device, and the capacitor, an energy store, are connected.",
     "저항기인 옴 소자와 축전기인 에네르기 저장기"),
    ("The resistor, a carbon film, and the capacitor, an energy store, are connected.",
     "저항기인 탄소 막과 축전기인 에네르기 저장기"),
])
def test_n4_coordinated_appositions(engine, sentence, expected):
    from isounit import translate_sentence
    out, trace = translate_sentence(engine, sentence)
    assert [m["rule"] for m in trace.matches] == ["N-4", "N-4"]
    assert expected in out
