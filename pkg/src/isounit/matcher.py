"""Matching rules against a tagged sentence and one candidate unit.

The head and tail markers pin the unit interior to the candidate span, so a
pattern splits into three independent parts: the context before the head,
the interior, and the context after the tail.  The interior must tile the
unit exactly; the left context is matched outward from the head (right to
left) and the right context outward from the tail.  Within each part,
choice points are resolved in matching order, preferring the longest span
for every variable-width element and the present branch for optional
groups.  The winning assignment is therefore the lexicographically
preferred one, which keeps context captures as close to the unit as the
pattern allows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .lexicon import Category, TaggedToken
from .ruledsl import (
    Arc, Cat, CatAlt, Comma, Literal, Optional, Rule, SentenceStart, Wildcard,
)
from .units import UNIT_DELIMITERS, IsolatedUnit

ARC_FORBIDDEN = (Category.P, Category.CJS, Category.CJC, Category.ReP)
MODIFIER_CATEGORIES = (Category.Adj, Category.N, Category.NUM, Category.L)
APPOSITION_CATEGORIES = (Category.L, Category.NUM, Category.CLBN)


class Role(Enum):
    CONTEXT = "context"
    INTERIOR = "interior"


@dataclass(frozen=True)
class Binding:
    name: str
    start: int
    end: int
    role: Role

    @property
    def span(self) -> tuple[int, int]:
        return self.start, self.end


@dataclass(frozen=True)
class MatchResult:
    rule_id: str
    unit: IsolatedUnit
    bindings: tuple[Binding, ...]
    anchor_span: tuple[int, int]
    tokens: tuple[TaggedToken, ...] = field(default=(), compare=False, repr=False)

    def binding(self, name: str) -> Binding | None:
        for b in self.bindings:
            if b.name == name:
                return b
        return None

    def span_of(self, name: str) -> tuple[int, int] | None:
        b = self.binding(name)
        return b.span if b else None

    def surface(self, name: str) -> str | None:
        b = self.binding(name)
        if b is None:
            return None
        return " ".join(t.surface for t in self.tokens[b.start:b.end])

    def as_dict(self) -> dict[str, tuple[int, int]]:
        return {b.name: b.span for b in self.bindings}


# --- single-element span tests ----------------------------------------------

def is_modifier(tok: TaggedToken) -> bool:
    return tok.has_any(MODIFIER_CATEGORIES)


def noun_run(toks, head_cat, before, after, det_ok) -> bool:
    """``~X~`` test: optional modifiers, a head satisfying ``head_cat``, optional appositions."""
    n = len(toks)
    if n == 0:
        return False
    for h in range(n):
        if not toks[h].has(head_cat):
            continue
        if h and not before:
            break
        pre_ok = all(
            is_modifier(t) or (i == 0 and det_ok and t.has(Category.DET))
            for i, t in enumerate(toks[:h])
        )
        if not pre_ok:
            continue
        if h < n - 1 and not after:
            continue
        if all(t.has_any(APPOSITION_CATEGORIES) for t in toks[h + 1:]):
            return True
    return False


def subject_run(toks) -> bool:
    if any(t.has(Category.P) for t in toks):
        return False
    return noun_run(toks, Category.N, True, False, True)


def literal_matches(toks, alternatives) -> bool:
    text = " ".join(" ".join(t.surface.lower().split()) for t in toks)
    return any(text == " ".join(a.lower().split()) for a in alternatives)


@dataclass(frozen=True)
class _Elem:
    """A pattern element compiled with its neighbour-dependent flags."""

    el: object
    det_in_run: bool = True
    pidx: int = 0


def _compile(elems, base=0, fixed=None):
    out = []
    prev = None
    for i, el in enumerate(elems):
        pidx = base + i if fixed is None else fixed
        if isinstance(el, Optional):
            out.append(_Elem(Optional(tuple(_compile(el.inner, fixed=pidx))), pidx=pidx))
        else:
            det_prev = isinstance(prev, Cat) and prev.category is Category.DET and not prev.tilde_before
            out.append(_Elem(el, det_in_run=not det_prev, pidx=pidx))
        prev = el
    return out


def span_ok(ce: _Elem, toks) -> bool:
    el = ce.el
    n = len(toks)
    if isinstance(el, Wildcard):
        return True
    if isinstance(el, Arc):
        return n > 0 and not any(t.has_any(ARC_FORBIDDEN) for t in toks)
    if isinstance(el, Comma):
        return n == 1 and toks[0].delimiter and toks[0].surface in UNIT_DELIMITERS
    if isinstance(el, Literal):
        return n > 0 and literal_matches(toks, el.alternatives)
    if isinstance(el, CatAlt):
        return n == 1 and toks[0].has_any(el.alternatives)
    if isinstance(el, Cat):
        if el.category is Category.S:
            return subject_run(toks)
        if el.tilde_before or el.tilde_after:
            return noun_run(toks, el.category, el.tilde_before, el.tilde_after, ce.det_in_run)
        return n == 1 and toks[0].has(el.category)
    raise TypeError(f"unexpected element {el!r}")


def _max_width(el, avail):
    if isinstance(el, (Comma, CatAlt)) or (isinstance(el, Cat) and not (
            el.tilde_before or el.tilde_after or el.category is Category.S)):
        return min(1, avail)
    if isinstance(el, Literal):
        return min(max(len(a.split()) for a in el.alternatives), avail)
    return avail


# --- search ------------------------------------------------------------------

class _Search:
    def __init__(self, tokens, forward):
        self.tokens = tokens
        self.n = len(tokens)
        self.forward = forward
        self.furthest = -1  # deepest top-level element (in matching order) reached

    def run(self, elems, pos, accept):
        order = elems if self.forward else list(reversed(elems))
        return self._seq(order, 0, pos, (), accept, None)

    def _seq(self, elems, idx, pos, binds, accept, top):
        if idx == len(elems):
            return accept(pos, binds)
        here = idx if top is None else top
        self.furthest = max(self.furthest, here)
        el = elems[idx].el
        if isinstance(el, Optional):
            inner = list(el.inner) if self.forward else list(reversed(el.inner))

            def rest(p, b):
                return self._seq(elems, idx + 1, p, b, accept, top)

            found = self._seq(inner, 0, pos, binds, rest, here)
            if found is not None:
                return found
            return self._seq(elems, idx + 1, pos, binds, accept, top)
        if isinstance(el, SentenceStart):
            if pos != 0:
                return None
            return self._seq(elems, idx + 1, pos, binds, accept, top)
        avail = (self.n - pos) if self.forward else pos
        for width in range(_max_width(el, avail), -1, -1):
            s, e = (pos, pos + width) if self.forward else (pos - width, pos)
            if not span_ok(elems[idx], self.tokens[s:e]):
                continue
            name = getattr(el, "capture", None)
            nb = binds + ((name, s, e),) if name else binds
            found = self._seq(elems, idx + 1, e if self.forward else s, nb, accept, top)
            if found is not None:
                return found
        return None


def explain_match(rule: Rule, tokens, unit: IsolatedUnit) -> tuple[MatchResult | None, int | None]:
    """Match and, on failure, report the pattern index of the element that failed."""
    tokens = tuple(tokens)
    if unit.end > len(tokens):
        return None, rule.head_index()
    pre, interior, post = rule.parts()
    h, t = rule.head_index(), rule.tail_index()
    plans = [
        (_compile(interior, h + 1), True, unit.start, lambda p, b: b if p == unit.end else None,
         Role.INTERIOR),
        (_compile(post, t + 1), True, unit.end, lambda p, b: b, Role.CONTEXT),
        (_compile(pre), False, unit.start, lambda p, b: b, Role.CONTEXT),
    ]
    bindings = []
    for compiled, forward, start, accept, role in plans:
        search = _Search(tokens, forward)
        found = search.run(compiled, start, accept)
        if found is None:
            return None, _failed_index(compiled, forward, search.furthest, rule, role)
        bindings.extend(Binding(name, s, e, role) for name, s, e in found)
    bindings.sort(key=lambda b: (b.start, b.end, b.name))
    anchor = next(b for b in bindings if b.name == rule.anchor)
    result = MatchResult(rule.id, unit.resolved(rule.unit_type), tuple(bindings),
                         anchor.span, tokens)
    return result, None


def _failed_index(compiled, forward, furthest, rule, role):
    order = compiled if forward else list(reversed(compiled))
    if not order:
        return rule.tail_index() if role is Role.INTERIOR else None
    k = min(max(furthest, 0), len(order) - 1)
    return order[k].pidx


def match_rule(rule: Rule, tokens, unit: IsolatedUnit) -> MatchResult | None:
    return explain_match(rule, tokens, unit)[0]


@dataclass(frozen=True)
class Attempt:
    rule_id: str
    matched: bool
    failed_at: int | None = None


def select_rule_traced(catalog, tokens, unit) -> tuple[MatchResult | None, list[Attempt]]:
    attempts = []
    for rule in catalog:
        result, failed = explain_match(rule, tokens, unit)
        attempts.append(Attempt(rule.id, result is not None, failed))
        if result is not None:
            return result, attempts
    return None, attempts


def select_rule(catalog, tokens, unit) -> MatchResult | None:
    """First rule in catalog order that matches ``unit``."""
    return select_rule_traced(catalog, tokens, unit)[0]
