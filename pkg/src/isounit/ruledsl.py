"""Rule file language: contextual-structure patterns paired with Korean templates.

A rule file is a sequence of blocks::

    rule N-2 nominal {
      pattern: ... N:a , <Ih-N> ("say"|"namely"|"that is") (N|L|NUM):x <It> , ... ;
      korean: +<< "즉" $x >> ;
      anchor: a ;
      notes: "free text" ;
    }

Pattern syntax
    ``SB`` sentence start, ``...`` any words, ``arc#k`` a general-translation
    section, ``,`` a unit delimiter, ``<Ih-N>``/``<Ih-At>``/``<Ih-Ad>``/``<It>``
    head and tail markers, ``[ ... ]`` optional elements, ``("a"|"b")``
    literal alternatives, ``(N|L)`` category alternatives, and category atoms
    ``~N1~#2:name`` (``~`` before: modifiers may precede; ``~`` after:
    apposition words may follow; ``#k`` shoulder number; ``:name`` capture).
    A bare string ``"if"`` is shorthand for ``("if")``.

Template syntax
    ``-<< ... >>`` attaches to the left of the anchor, ``+<< ... >>`` to the
    right.  Elements are strings, ``$name`` captures, ``josa("과", "와")``
    (consonant-final form first) and ``[ ... ]?name`` / ``[ ... ]?!name``
    groups rendered only when ``name`` is bound / unbound.  A string
    starting with ``-`` is a bound suffix glued to the preceding text.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources

from .lexicon import Category
from .units import HEAD_MARKERS, TAIL_MARKER, UnitType


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"


# --- pattern elements ------------------------------------------------------

@dataclass(frozen=True)
class SentenceStart:
    pass


@dataclass(frozen=True)
class Wildcard:
    capture: str | None = None


@dataclass(frozen=True)
class Arc:
    index: int
    capture: str


@dataclass(frozen=True)
class Cat:
    category: Category
    tilde_before: bool = False
    tilde_after: bool = False
    index: int | None = None
    capture: str | None = None


@dataclass(frozen=True)
class Literal:
    alternatives: tuple[str, ...]
    capture: str | None = None


@dataclass(frozen=True)
class CatAlt:
    alternatives: tuple[Category, ...]
    capture: str | None = None


@dataclass(frozen=True)
class Comma:
    pass


@dataclass(frozen=True)
class Optional:
    inner: tuple


@dataclass(frozen=True)
class HeadMarker:
    unit_type: UnitType


@dataclass(frozen=True)
class TailMarker:
    pass


# --- template elements -----------------------------------------------------

@dataclass(frozen=True)
class KoreanLiteral:
    text: str


@dataclass(frozen=True)
class CaptureRef:
    name: str


@dataclass(frozen=True)
class JosaAlt:
    post_consonant: str
    post_vowel: str


@dataclass(frozen=True)
class OptionalGroup:
    condition: str
    inner: tuple
    negate: bool = False


@dataclass(frozen=True)
class Group:
    direction: Direction
    inner: tuple


@dataclass(frozen=True)
class Rule:
    id: str
    unit_type: UnitType
    pattern: tuple
    template: Group
    anchor: str
    notes: str = ""
    line: int | None = field(default=None, compare=False)

    @property
    def direction(self) -> Direction:
        return self.template.direction

    def head_index(self) -> int:
        return next(i for i, e in enumerate(self.pattern) if isinstance(e, HeadMarker))

    def tail_index(self) -> int:
        return next(i for i, e in enumerate(self.pattern) if isinstance(e, TailMarker))

    def parts(self) -> tuple[tuple, tuple, tuple]:
        """(context before head, interior, context after tail)."""
        h, t = self.head_index(), self.tail_index()
        return self.pattern[:h], self.pattern[h + 1:t], self.pattern[t + 1:]

    def captures(self) -> dict[str, object]:
        return dict(iter_captures(self.pattern))

    def interior_captures(self) -> set[str]:
        return {name for name, _ in iter_captures(self.parts()[1])}


def iter_captures(elems):
    for el in elems:
        if isinstance(el, Optional):
            yield from iter_captures(el.inner)
        else:
            name = getattr(el, "capture", None)
            if name:
                yield name, el


def iter_template(elems):
    for el in elems:
        yield el
        if isinstance(el, (OptionalGroup, Group)):
            yield from iter_template(el.inner)


# --- errors ----------------------------------------------------------------

class RuleSyntaxError(ValueError):
    def __init__(self, message, line=None, col=None, lexeme=None, rule_id=None):
        self.line, self.col, self.lexeme, self.rule_id = line, col, lexeme, rule_id
        where = f"line {line}, col {col}: " if line is not None else ""
        who = f"rule {rule_id}: " if rule_id else ""
        what = f" (at {lexeme!r})" if lexeme is not None else ""
        super().__init__(f"{where}{who}{message}{what}")


# --- lexer -----------------------------------------------------------------

_LEX = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<marker><Ih-N>|<Ih-At>|<Ih-Ad>|<It>)
  | (?P<open><<)
  | (?P<close>>>)
  | (?P<ellipsis>\.\.\.)
  | (?P<int>\d+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*)
  | (?P<sym>[{}:;,\[\]()|~\#$?!+\-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(source: str) -> list[_Tok]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _LEX.match(source, pos)
        if m is None:
            raise RuleSyntaxError("unexpected character", line, pos - line_start + 1, source[pos])
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            out.append(_Tok(kind, text, line, pos - line_start + 1))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - line_start + 1))
    return out


CATEGORY_NAMES = {c.value: c for c in Category}
KINDS = {t.value: t for t in UnitType}


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0
        self.rule_id = None

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        lexeme = tok.text if tok.kind != "eof" else "<end of file>"
        return RuleSyntaxError(message, tok.line, tok.col, lexeme, self.rule_id)

    def at(self, text, kind=None) -> bool:
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "string"

    def take(self, text=None, kind=None) -> _Tok:
        t = self.tok
        if text is not None and not self.at(text):
            raise self.error(f"expected {text!r}")
        if kind is not None and t.kind != kind:
            raise self.error(f"expected {kind}")
        self.i += 1
        return t

    def name(self) -> str:
        return self.take(kind="word").text

    # rule := "rule" ID kind "{" ... "}"
    def rule(self) -> Rule:
        start = self.take("rule", "word")
        self.rule_id = self.take(kind="word").text
        kind_tok = self.take(kind="word")
        if kind_tok.text not in KINDS:
            raise self.error("unknown rule kind", kind_tok)
        self.take("{")
        self.take("pattern")
        self.take(":")
        pattern = self.pattern(stop=(";",))
        self.take(";")
        self.take("korean")
        self.take(":")
        template = self.template()
        self.take(";")
        self.take("anchor")
        self.take(":")
        anchor = self.name()
        self.end_field()
        notes = ""
        if self.at("notes", "word"):
            self.take()
            self.take(":")
            notes = json.loads(self.take(kind="string").text)
            self.end_field()
        self.take("}")
        rule = Rule(self.rule_id, KINDS[kind_tok.text], tuple(pattern), template, anchor, notes, start.line)
        check_rule(rule)
        return rule

    def end_field(self):
        # the last field's ";" may be left out before "}"
        if not self.at("}"):
            self.take(";")

    def pattern(self, stop) -> list:
        out = []
        while not any(self.at(s) for s in stop):
            if self.tok.kind == "eof":
                raise self.error("unterminated pattern")
            out.append(self.pelem())
        return out

    def capture(self) -> str | None:
        if self.at(":"):
            self.take()
            return self.name()
        return None

    def index(self) -> int | None:
        if self.at("#"):
            self.take()
            return int(self.take(kind="int").text)
        return None

    def pelem(self):
        t = self.tok
        if t.kind == "marker":
            self.take()
            if t.text == TAIL_MARKER:
                return TailMarker()
            return HeadMarker(HEAD_MARKERS[t.text])
        if t.kind == "ellipsis":
            self.take()
            return Wildcard(self.capture())
        if t.kind == "string":
            self.take()
            return Literal((json.loads(t.text),), None)
        if self.at(","):
            self.take()
            return Comma()
        if self.at("["):
            self.take()
            inner = self.pattern(stop=("]",))
            self.take("]")
            if not inner:
                raise self.error("empty optional group", t)
            return Optional(tuple(inner))
        if self.at("("):
            return self.alternation()
        if t.kind == "word" and t.text == "SB":
            self.take()
            return SentenceStart()
        if t.kind == "word" and t.text == "arc":
            self.take()
            if not self.at("#"):
                raise self.error("arc needs a shoulder number '#k'")
            idx = self.index()
            return Arc(idx, self.capture() or f"arc{idx}")
        if self.at("~") or t.kind == "word":
            return self.catom()
        raise self.error("unexpected token in pattern")

    def category(self) -> Category:
        t = self.take(kind="word")
        if t.text not in CATEGORY_NAMES:
            raise self.error("unknown category", t)
        return CATEGORY_NAMES[t.text]

    def catom(self) -> Cat:
        before = after = False
        if self.at("~"):
            self.take()
            before = True
        tok = self.tok
        cat = self.category()
        if self.at("~"):
            self.take()
            after = True
        if cat is Category.S and (before or after):
            raise self.error("S cannot take '~'", tok)
        idx = self.index()
        return Cat(cat, before, after, idx, self.capture())

    def alternation(self):
        open_tok = self.take("(")
        strings, cats = [], []
        while True:
            t = self.tok
            if t.kind == "string":
                self.take()
                strings.append(json.loads(t.text))
            elif t.kind == "word":
                cats.append(self.category())
            else:
                raise self.error("expected string or category in alternation")
            if self.at("|"):
                self.take()
                continue
            break
        self.take(")")
        if strings and cats:
            raise self.error("cannot mix strings and categories in one alternation", open_tok)
        capture = self.capture()
        if strings:
            return Literal(tuple(strings), capture)
        return CatAlt(tuple(cats), capture)

    def template(self) -> Group:
        sign = self.tok
        if not (self.at("-") or self.at("+")):
            raise self.error("template must start with '-' or '+'")
        self.take()
        self.take("<<", None)
        inner = self.telems(stop=">>")
        self.take(">>")
        return Group(Direction.LEFT if sign.text == "-" else Direction.RIGHT, tuple(inner))

    def telems(self, stop) -> list:
        out = []
        while not self.at(stop):
            t = self.tok
            if t.kind == "eof":
                raise self.error("unterminated template")
            if t.kind == "string":
                self.take()
                out.append(KoreanLiteral(json.loads(t.text)))
            elif self.at("$"):
                self.take()
                out.append(CaptureRef(self.name()))
            elif t.kind == "word" and t.text == "josa":
                self.take()
                self.take("(")
                cons = json.loads(self.take(kind="string").text)
                self.take(",")
                vow = json.loads(self.take(kind="string").text)
                self.take(")")
                out.append(JosaAlt(cons, vow))
            elif self.at("["):
                self.take()
                inner = self.telems(stop="]")
                self.take("]")
                self.take("?")
                negate = False
                if self.at("!"):
                    self.take()
                    negate = True
                out.append(OptionalGroup(self.name(), tuple(inner), negate))
            else:
                raise self.error("unexpected token in template")
        return out


def check_rule(rule: Rule) -> None:
    """Static checks: markers, capture names, template references, anchor."""

    def fail(msg):
        raise RuleSyntaxError(msg, rule.line, None, None, rule.id)

    heads = [i for i, e in enumerate(rule.pattern) if isinstance(e, HeadMarker)]
    tails = [i for i, e in enumerate(rule.pattern) if isinstance(e, TailMarker)]
    if len(heads) != 1 or len(tails) != 1:
        fail("pattern needs exactly one head marker and one tail marker at top level")
    if heads[0] > tails[0]:
        fail("head marker must precede tail marker")
    if rule.pattern[heads[0]].unit_type is not rule.unit_type:
        fail("head marker type does not match rule kind")
    if heads[0] + 1 == tails[0]:
        fail("empty unit interior")

    def nested_markers(elems):
        for el in elems:
            if isinstance(el, Optional):
                if any(isinstance(x, (HeadMarker, TailMarker)) for x in el.inner):
                    return True
                if nested_markers(el.inner):
                    return True
        return False

    if nested_markers(rule.pattern):
        fail("markers may not appear inside optional groups")
    for i, el in enumerate(rule.pattern):
        if isinstance(el, SentenceStart) and i != 0:
            fail("SB may only open a pattern")
    names = [n for n, _ in iter_captures(rule.pattern)]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        fail(f"duplicate capture name {sorted(dup)[0]!r}")
    bound = set(names)
    for el in iter_template((rule.template,)):
        if isinstance(el, CaptureRef) and el.name not in bound:
            fail(f"unbound capture reference ${el.name}")
        if isinstance(el, OptionalGroup) and el.condition not in bound:
            fail(f"unbound group condition ?{el.condition}")
    if rule.anchor not in bound:
        fail(f"anchor {rule.anchor!r} is not a capture")
    if rule.anchor in rule.interior_captures():
        fail(f"anchor {rule.anchor!r} must lie outside the unit markers")
    top_level = {getattr(e, "capture", None) for e in rule.pattern}
    if rule.anchor not in top_level:
        fail(f"anchor {rule.anchor!r} may not sit inside an optional group")


def parse_rules(source: str) -> list[Rule]:
    """Parse a rule file; raises ``RuleSyntaxError`` on the first problem."""
    rules, errors = parse_rules_collect(source)
    if errors:
        raise errors[0]
    return rules


def parse_rules_collect(source: str) -> tuple[list[Rule], list[RuleSyntaxError]]:
    """Parse a rule file, skipping to the next ``rule`` keyword after each error."""
    try:
        toks = _lex(source)
    except RuleSyntaxError as err:
        return [], [err]
    p = _Parser(toks)
    rules, errors, seen = [], [], set()
    while p.tok.kind != "eof":
        p.rule_id = None
        try:
            if not p.at("rule", "word"):
                raise p.error("expected 'rule'")
            rule = p.rule()
            if rule.id in seen:
                raise RuleSyntaxError("duplicate rule id", rule.line, None, None, rule.id)
            seen.add(rule.id)
            rules.append(rule)
        except RuleSyntaxError as err:
            errors.append(err)
            if p.tok.kind != "eof" and not p.at("rule", "word"):
                p.i += 1
            while p.tok.kind != "eof" and not p.at("rule", "word"):
                p.i += 1
    return rules, errors


# --- formatting ------------------------------------------------------------

def _q(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def _cap(name):
    return f":{name}" if name else ""


def format_pattern(elems) -> str:
    return " ".join(_fmt_pelem(e) for e in elems)


def _fmt_pelem(el) -> str:
    if isinstance(el, SentenceStart):
        return "SB"
    if isinstance(el, Wildcard):
        return "..." + _cap(el.capture)
    if isinstance(el, Arc):
        return f"arc#{el.index}:{el.capture}"
    if isinstance(el, Comma):
        return ","
    if isinstance(el, HeadMarker):
        return f"<Ih-{el.unit_type.code}>"
    if isinstance(el, TailMarker):
        return TAIL_MARKER
    if isinstance(el, Optional):
        return "[ " + format_pattern(el.inner) + " ]"
    if isinstance(el, Literal):
        if len(el.alternatives) == 1 and not el.capture:
            return _q(el.alternatives[0])
        return "(" + "|".join(_q(a) for a in el.alternatives) + ")" + _cap(el.capture)
    if isinstance(el, CatAlt):
        return "(" + "|".join(c.value for c in el.alternatives) + ")" + _cap(el.capture)
    if isinstance(el, Cat):
        s = ("~" if el.tilde_before else "") + el.category.value + ("~" if el.tilde_after else "")
        if el.index is not None:
            s += f"#{el.index}"
        return s + _cap(el.capture)
    raise TypeError(f"not a pattern element: {el!r}")


def format_template(group: Group) -> str:
    sign = "-" if group.direction is Direction.LEFT else "+"
    return f"{sign}<< {_fmt_telems(group.inner)} >>"


def _fmt_telems(elems) -> str:
    out = []
    for el in elems:
        if isinstance(el, KoreanLiteral):
            out.append(_q(el.text))
        elif isinstance(el, CaptureRef):
            out.append("$" + el.name)
        elif isinstance(el, JosaAlt):
            out.append(f"josa({_q(el.post_consonant)}, {_q(el.post_vowel)})")
        elif isinstance(el, OptionalGroup):
            out.append(f"[ {_fmt_telems(el.inner)} ]?{'!' if el.negate else ''}{el.condition}")
        else:
            raise TypeError(f"not a template element: {el!r}")
    return " ".join(out)


def format_rule(rule: Rule) -> str:
    lines = [
        f"rule {rule.id} {rule.unit_type.value} {{",
        f"  pattern: {format_pattern(rule.pattern)} ;",
        f"  korean: {format_template(rule.template)} ;",
        f"  anchor: {rule.anchor} ;",
    ]
    if rule.notes:
        lines.append(f"  notes: {_q(rule.notes)} ;")
    lines.append("}")
    return "\n".join(lines)


def format_rules(rules) -> str:
    return "\n\n".join(format_rule(r) for r in rules) + ("\n" if rules else "")


@lru_cache(maxsize=1)
def builtin_source() -> str:
    return resources.files("isounit").joinpath("data/builtin.rules").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def _builtin() -> tuple[Rule, ...]:
    return tuple(parse_rules(builtin_source()))


def builtin_catalog() -> list[Rule]:
    """The ten built-in rules: N-1..N-5, At-1..At-3, Ad-1, Ad-2."""
    return list(_builtin())
