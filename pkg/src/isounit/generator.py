"""Korean rendering: particle allomorphs, template rendering, sentence assembly.

Rendered Korean is handled as a list of *pieces* joined with single spaces.
A piece starting with ``-`` is bound: its first word is glued to the text
before it.  If that word is a particle pair ``과/와`` (consonant-final form
first) the allomorph is chosen from the preceding syllable; if it starts
with a bare final consonant jamo (``ㄴ다``) the jamo is merged into an open
preceding syllable (``되`` + ``ㄴ다`` gives ``된다``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from .ruledsl import (
    CaptureRef, Cat, CatAlt, Direction, Group, JosaAlt, KoreanLiteral, Literal,
    OptionalGroup, Rule,
)

SYLLABLE_FIRST = 0xAC00
SYLLABLE_LAST = 0xD7A3
FINAL_COUNT = 28
RIEUL_FINAL = 8

# compatibility jamo that can close an open syllable, by final-consonant index
COMPAT_FINALS = {
    "ㄱ": 1, "ㄴ": 4, "ㄹ": 8, "ㅁ": 16, "ㅂ": 17, "ㅅ": 19, "ㅆ": 20, "ㅇ": 21,
}

CLOSING_PUNCT = frozenset(",.;:?!)]")
OPENING_PUNCT = frozenset("([")


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True)
class HangulInfo:
    syllable: str
    has_batchim: bool


def is_syllable(ch: str) -> bool:
    return len(ch) == 1 and SYLLABLE_FIRST <= ord(ch) <= SYLLABLE_LAST


def final_index(ch: str) -> int:
    """Final-consonant index (0 = none) of a precomposed syllable."""
    return (ord(ch) - SYLLABLE_FIRST) % FINAL_COUNT


def has_batchim(ch: str) -> bool:
    """Consonant-final test; anything that is not a Hangul syllable counts as consonant-final."""
    if is_syllable(ch):
        return final_index(ch) != 0
    return True


def hangul_info(ch: str) -> HangulInfo:
    return HangulInfo(ch, has_batchim(ch))


def _last_scalar(text: str) -> str:
    stripped = text.rstrip()
    return stripped[-1] if stripped else ""


def select_josa(preceding: str, pair: JosaAlt) -> str:
    last = _last_scalar(preceding)
    if not last:
        return pair.post_consonant
    if (pair.post_consonant, pair.post_vowel) == ("으로", "로") and is_syllable(last) \
            and final_index(last) == RIEUL_FINAL:
        return pair.post_vowel
    return pair.post_consonant if has_batchim(last) else pair.post_vowel


def glue(text: str, suffix: str) -> str:
    """Append a bound suffix, merging a leading bare final consonant."""
    if suffix and suffix[0] in COMPAT_FINALS:
        last = text[-1:]
        if is_syllable(last) and final_index(last) == 0:
            merged = chr(ord(last) + COMPAT_FINALS[suffix[0]])
            return text[:-1] + merged + suffix[1:]
        if last:
            return text + chr(ord("으") + COMPAT_FINALS[suffix[0]]) + suffix[1:]
    return text + suffix


def attach(text: str, piece: str) -> str:
    """Join one bound piece (with its leading ``-``) onto ``text``."""
    body = piece[1:]
    head, sep, tail = body.partition(" ")
    if "/" in head:
        cons, _, vow = head.partition("/")
        head = select_josa(text, JosaAlt(cons, vow))
    return glue(text, head) + sep + tail


def is_bound(piece: str) -> bool:
    return len(piece) > 1 and piece[0] == "-"


def join_korean(pieces) -> str:
    """Join rendered pieces.  A bound piece with nothing before it keeps its ``-``."""
    out = ""
    glue_next = False
    for piece in pieces:
        if not piece:
            continue
        if is_bound(piece):
            out = attach(out, piece) if out else piece
        elif not out or glue_next or piece in CLOSING_PUNCT:
            out += piece
        else:
            out += " " + piece
        glue_next = piece in OPENING_PUNCT
    return out


def finalize(text: str) -> str:
    """Resolve a bound form left dangling at the very start of an output."""
    if is_bound(text):
        return attach("", text)
    return text


# --- glossing -----------------------------------------------------------------

class GeneralTranslator(Protocol):
    def gloss(self, tokens) -> str:
        """Total, deterministic; an empty span glosses to ``""``.

        The result may start with a bound piece (``-...``) that the caller
        attaches to whatever precedes the span.
        """


def token_root(tok, lexicon=None) -> str:
    if tok.delimiter:
        return tok.surface
    root = tok.korean_root
    if root is None and lexicon is not None:
        entry = lexicon.lookup(tok.surface)
        root = entry.korean_root if entry else None
    if root is None:
        return f"[{tok.surface}]"
    return root


class DefaultGlosser:
    """Word-by-word glosser: each token's Korean root in source order."""

    def __init__(self, lexicon=None):
        self.lexicon = lexicon

    def gloss(self, tokens) -> str:
        return join_korean(token_root(t, self.lexicon) for t in tokens)


def default_glosser(lexicon) -> DefaultGlosser:
    return DefaultGlosser(lexicon)


def oov_surfaces(tokens) -> list[str]:
    return [t.surface for t in tokens if t.oov and t.korean_root is None]


# --- template rendering -----------------------------------------------------------

@dataclass(frozen=True)
class KoreanSegment:
    text: str
    direction: Direction
    anchor_span: tuple[int, int]
    rule_id: str = ""
    bound: bool = False
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def piece(self) -> str:
        return "-" + self.text if self.bound else self.text


def _root_join(tokens) -> str:
    return join_korean(token_root(t) for t in tokens)


def render_template(rule: Rule, result, glosser: GeneralTranslator, nested=()) -> KoreanSegment:
    """Render ``rule``'s template for ``result``.

    Arc and wildcard captures go through ``glosser``; category and literal
    captures concatenate lexicon roots.  ``nested`` holds already-rendered
    ``(MatchResult, KoreanSegment)`` pairs for units lying inside a capture;
    such captures are assembled recursively so the inner unit is rendered
    in place.
    """
    tokens = result.tokens
    captures = rule.captures()
    warnings = []

    def render_capture(name):
        b = result.binding(name)
        if b is None or b.start == b.end:
            return ""
        span = tokens[b.start:b.end]
        inner = [(r, s) for r, s in nested
                 if b.start <= r.unit.start - 1 and r.unit.end + 1 <= b.end]
        hidden = {i for r, _ in inner for i in range(r.unit.start, r.unit.end)}
        own = [t for i, t in enumerate(span, b.start) if i not in hidden]
        for surface in oov_surfaces(own):
            warnings.append(f"out-of-vocabulary {surface!r} in ${name}")
        if inner:
            return assemble_sentence(tokens, inner, glosser, window=(b.start, b.end))
        if isinstance(captures[name], (Cat, CatAlt, Literal)):
            return _root_join(span)
        return glosser.gloss(span)

    def bound_nonempty(name):
        b = result.binding(name)
        return b is not None and b.end > b.start

    def walk(elems):
        for el in elems:
            if isinstance(el, KoreanLiteral):
                yield el.text
            elif isinstance(el, CaptureRef):
                yield render_capture(el.name)
            elif isinstance(el, JosaAlt):
                yield f"-{el.post_consonant}/{el.post_vowel}"
            elif isinstance(el, OptionalGroup):
                if bound_nonempty(el.condition) != el.negate:
                    yield from walk(el.inner)
            elif isinstance(el, Group):
                yield from walk(el.inner)

    text = join_korean(walk(rule.template.inner))
    bound = is_bound(text)
    if bound:
        text = text[1:]
    if not text.strip():
        unit = result.unit
        text = "[" + " ".join(t.surface for t in tokens[unit.start:unit.end]) + "]"
        warnings.append("template rendered empty; English surface kept")
    return KoreanSegment(text, rule.direction, result.anchor_span, rule.id, bound, tuple(warnings))


# --- assembly ----------------------------------------------------------------

def _removed_positions(tokens, unit):
    out = set(range(unit.start, unit.end))
    for i in (unit.start - 1, unit.end):
        if 0 <= i < len(tokens) and tokens[i].delimiter:
            out.add(i)
    return out


def assemble_sentence(tokens, matches, glosser: GeneralTranslator, window=None) -> str:
    """Gloss the base sentence and insert each segment beside its anchor.

    ``matches`` is a list of ``(MatchResult, KoreanSegment)``.  Matched units
    and their bounding delimiters are dropped from the base; a Left segment
    goes immediately before its anchor's gloss, a Right segment immediately
    after.  ``window`` restricts assembly to a token sub-range.
    """
    lo, hi = window if window is not None else (0, len(tokens))
    matches = sorted(matches, key=lambda m: (m[0].unit.start, m[0].unit.end))
    for i, (ra, _) in enumerate(matches):
        for rb, _ in matches[i + 1:]:
            if rb.unit.start < ra.unit.end:
                raise AssemblyError(f"overlapping matches: {ra.rule_id} and {rb.rule_id}")
    removed = set()
    for r, _ in matches:
        removed |= _removed_positions(tokens, r.unit)
    pieces = []
    run = []

    def flush():
        if run:
            pieces.append(glosser.gloss(run))
            run.clear()

    for i in range(lo, hi + 1):
        here = [s for _, s in matches if s.direction is Direction.RIGHT and s.anchor_span[1] == i]
        here += [s for _, s in matches if s.direction is Direction.LEFT and s.anchor_span[0] == i]
        if here:
            flush()
            pieces.extend(s.piece() for s in here)
        if i < hi and i not in removed:
            run.append(tokens[i])
    flush()
    text = join_korean(pieces)
    return finalize(text) if window is None else text
