"""End-to-end translation of sentences and documents, with JSON-lines tracing."""
from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .generator import (
    DefaultGlosser, GeneralTranslator, KoreanSegment, assemble_sentence, oov_surfaces,
    render_template,
)
from .lexicon import Lexicon, load_lexicon, tag_sentence
from .matcher import Binding, MatchResult, select_rule_traced
from .ruledsl import Rule, builtin_catalog
from .units import IsolatedUnit, UnbalancedDelimiterError, detect_units

DEFAULT_ABBREVIATIONS = frozenset({
    "e.g", "i.e", "etc", "cf", "vs", "eq", "eqs", "fig", "figs", "dr", "mr", "mrs", "no", "ref",
})


@lru_cache(maxsize=1)
def bundled_lexicon() -> Lexicon:
    text = resources.files("isounit").joinpath("data/lexicon.tsv").read_text(encoding="utf-8")
    return load_lexicon(text)


@dataclass(frozen=True)
class Engine:
    lexicon: Lexicon
    catalog: tuple[Rule, ...]
    glosser: GeneralTranslator

    @classmethod
    def create(cls, lexicon=None, catalog=None, glosser=None) -> "Engine":
        lexicon = lexicon if lexicon is not None else bundled_lexicon()
        catalog = tuple(catalog if catalog is not None else builtin_catalog())
        return cls(lexicon, catalog, glosser or DefaultGlosser(lexicon))

    def rule(self, rule_id: str) -> Rule:
        for r in self.catalog:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)


@dataclass
class TraceRecord:
    id: int
    input: str
    candidates: list = field(default_factory=list)
    attempts: list = field(default_factory=list)
    matches: list = field(default_factory=list)
    output: str | None = None
    warnings: list = field(default_factory=list)
    error: str | None = None

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "input": self.input,
            "candidates": self.candidates,
            "attempts": self.attempts,
            "matches": self.matches,
            "output": self.output,
            "warnings": self.warnings,
        }
        if self.error is not None:
            d["error"] = self.error
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=False)


def _candidate_dict(tokens, unit: IsolatedUnit) -> dict:
    return {"start": unit.start, "end": unit.end, "delimiter": unit.delimiter.value,
            "text": unit.text(tokens)}


def _match_dict(tokens, result: MatchResult, segment: KoreanSegment) -> dict:
    return {
        "rule": result.rule_id,
        "unit": [result.unit.start, result.unit.end],
        "type": result.unit.unit_type.value,
        "bindings": {
            b.name: {"span": [b.start, b.end], "role": b.role.value,
                     "text": " ".join(t.surface for t in tokens[b.start:b.end])}
            for b in result.bindings
        },
        "segment": {"text": segment.text, "dir": segment.direction.value,
                    "anchor": list(segment.anchor_span)},
    }


# --- nested units ---------------------------------------------------------------

def _without(tokens, units):
    """View of ``tokens`` with ``units`` and their delimiters removed, plus index map."""
    drop = set()
    for u in units:
        drop |= set(range(u.start, u.end))
        for i in (u.start - 1, u.end):
            if 0 <= i < len(tokens) and tokens[i].delimiter:
                drop.add(i)
    keep = [i for i in range(len(tokens)) if i not in drop]
    return [tokens[i] for i in keep], keep


def _to_original(span, keep, n_orig):
    s, e = span
    if e > s:
        return keep[s], keep[e - 1] + 1
    pos = keep[s] if s < len(keep) else n_orig
    return pos, pos


def _match_nested(catalog, tokens, unit, inner):
    view, keep = _without(tokens, [r.unit for r, _ in inner])
    index = {orig: i for i, orig in enumerate(keep)}
    if unit.start not in index or unit.end - 1 not in index:
        return None, []
    vunit = IsolatedUnit(index[unit.start], index[unit.end - 1] + 1, unit.delimiter)
    result, attempts = select_rule_traced(catalog, view, vunit)
    if result is None:
        return None, attempts
    n = len(tokens)
    bindings = tuple(
        Binding(b.name, *_to_original(b.span, keep, n), b.role) for b in result.bindings
    )
    remapped = MatchResult(result.rule_id, unit.resolved(result.unit.unit_type), bindings,
                           _to_original(result.anchor_span, keep, n), tuple(tokens))
    return remapped, attempts


def translate_sentence(engine: Engine, raw: str, sentence_id: int = 0):
    """Translate one sentence; returns ``(korean, TraceRecord)``.

    Only ``UnbalancedDelimiterError`` propagates.
    """
    trace = TraceRecord(sentence_id, raw)
    tokens = tag_sentence(engine.lexicon, raw)
    candidates = detect_units(tokens)
    trace.candidates = [_candidate_dict(tokens, u) for u in candidates]
    matched: list[tuple[MatchResult, KoreanSegment]] = []
    # innermost first: a contained unit is always shorter than its container
    order = sorted(range(len(candidates)),
                   key=lambda k: (candidates[k].end - candidates[k].start, candidates[k].start))
    for k in order:
        unit = candidates[k]
        inner = [m for m in matched if unit.contains(m[0].unit)]
        if any(_crosses(unit, m[0].unit) for m in matched):
            trace.warnings.append(f"candidate {k} crosses a matched unit; skipped")
            trace.attempts.append({"candidate": k, "rule": None, "matched": False})
            continue
        if inner:
            result, attempts = _match_nested(engine.catalog, tokens, unit, inner)
        else:
            result, attempts = select_rule_traced(engine.catalog, tokens, unit)
        for a in attempts:
            trace.attempts.append({"candidate": k, "rule": a.rule_id, "matched": a.matched,
                                   "failed_at": a.failed_at})
        if result is None:
            trace.warnings.append(
                f"candidate {k} {unit.text(tokens)!r} matched no rule; glossed in place")
            continue
        rule = engine.rule(result.rule_id)
        segment = render_template(rule, result, engine.glosser, nested=inner)
        consumed = [m for m in inner if _inside_some_capture(result, m[0].unit)]
        if len(consumed) != len(inner):
            trace.warnings.append(
                f"candidate {k} matched {rule.id} but would hide a nested unit; kept unmatched")
            continue
        matched = [m for m in matched if m not in consumed]
        matched.append((result, segment))
        trace.warnings.extend(segment.warnings)
    matched.sort(key=lambda m: m[0].unit.start)
    trace.matches = [_match_dict(tokens, r, s) for r, s in matched]
    # outermost-level matches only enter the base assembly
    output = assemble_sentence(tokens, matched, engine.glosser)
    unit_positions = set()
    for r, _ in matched:
        unit_positions |= set(range(r.unit.start, r.unit.end))
    base_oov = [t.surface for i, t in enumerate(tokens)
                if i not in unit_positions and t.oov and t.korean_root is None]
    trace.warnings.extend(f"out-of-vocabulary {s!r}" for s in base_oov)
    trace.output = output
    return output, trace


def _crosses(a: IsolatedUnit, b: IsolatedUnit) -> bool:
    overlap = a.start < b.end and b.start < a.end
    return overlap and not a.contains(b) and not b.contains(a) and a != b


def _inside_some_capture(result: MatchResult, unit: IsolatedUnit) -> bool:
    return any(b.start <= unit.start - 1 and unit.end + 1 <= b.end for b in result.bindings)


# --- documents ----------------------------------------------------------------

_BOUNDARY = re.compile(r"[.?!](?=\s+(?=[A-Z0-9\"'(\[])|\s*$)")


def split_sentences(text: str, abbreviations=DEFAULT_ABBREVIATIONS) -> list[str]:
    """Split on ``.``/``?``/``!`` followed by whitespace and an uppercase start.

    Blank lines also end a sentence.  A period closing a listed abbreviation
    does not split.
    """
    out = []
    for block in re.split(r"\n\s*\n", text):
        start = 0
        for m in _BOUNDARY.finditer(block):
            before = block[start:m.start()]
            word = re.search(r"([\w.]+)$", before)
            if m.group() == "." and word and word.group(1).lower() in abbreviations:
                continue
            piece = block[start:m.end()].strip()
            if piece:
                out.append(piece)
            start = m.end()
        tail = block[start:].strip()
        if tail:
            out.append(tail)
    return out


@dataclass(frozen=True)
class SentenceResult:
    id: int
    input: str
    output: str | None
    trace: TraceRecord
    error: str | None = None


def _one(engine, sid, sentence):
    try:
        out, trace = translate_sentence(engine, sentence, sid)
        return SentenceResult(sid, sentence, out, trace)
    except UnbalancedDelimiterError as err:
        trace = TraceRecord(sid, sentence, error=str(err))
        return SentenceResult(sid, sentence, None, trace, str(err))


def translate_document(engine: Engine, text, workers: int = 1,
                       abbreviations=DEFAULT_ABBREVIATIONS):
    """Yield one ``SentenceResult`` per sentence, in input order.

    ``text`` is a string or an iterable of strings (e.g. an open file).
    Errors stay attached to their sentence's record.
    """
    if not isinstance(text, str):
        text = "".join(text)
    sentences = split_sentences(text, abbreviations)
    if workers <= 1:
        for sid, s in enumerate(sentences, 1):
            yield _one(engine, sid, s)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(lambda item: _one(engine, *item), enumerate(sentences, 1))
