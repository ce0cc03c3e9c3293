"""Candidate isolated units: delimiter-bounded spans and their head/tail markers."""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .lexicon import CLOSERS, DASHES, OPENERS


class UnitType(Enum):
    NOMINAL = "nominal"
    ATTRIBUTIVE = "attributive"
    ADVERBIAL = "adverbial"

    @property
    def code(self) -> str:
        return {"nominal": "N", "attributive": "At", "adverbial": "Ad"}[self.value]


class Delimiter(Enum):
    COMMA = "comma"
    DASH = "dash"
    PAREN = "paren"
    BRACKET = "bracket"


HEAD_MARKERS = {
    "<Ih-N>": UnitType.NOMINAL,
    "<Ih-At>": UnitType.ATTRIBUTIVE,
    "<Ih-Ad>": UnitType.ADVERBIAL,
}
TAIL_MARKER = "<It>"

UNIT_DELIMITERS = frozenset({",", "(", ")", "[", "]"}) | DASHES


class UnbalancedDelimiterError(ValueError):
    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        what = "unclosed" if char in OPENERS else "unopened"
        super().__init__(f"{what} {char!r} at token {position}")


@dataclass(frozen=True)
class UnitMarker:
    """A head marker (``unit_type`` set) or the tail marker (``unit_type`` None)."""

    unit_type: UnitType | None = None

    @property
    def is_head(self) -> bool:
        return self.unit_type is not None

    def __str__(self):
        if self.unit_type is None:
            return TAIL_MARKER
        return f"<Ih-{self.unit_type.code}>"


@dataclass(frozen=True)
class IsolatedUnit:
    start: int
    end: int
    delimiter: Delimiter
    unit_type: UnitType | None = None

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad unit span [{self.start}, {self.end})")

    @property
    def span(self) -> tuple[int, int]:
        return self.start, self.end

    @property
    def head(self) -> int:
        return self.start

    @property
    def tail(self) -> int:
        return self.end

    def resolved(self, unit_type: UnitType) -> "IsolatedUnit":
        return replace(self, unit_type=unit_type)

    def contains(self, other: "IsolatedUnit") -> bool:
        return self.start <= other.start and other.end <= self.end and self != other

    def text(self, tokens) -> str:
        return " ".join(t.surface for t in tokens[self.start:self.end])


def detect_units(tokens) -> list[IsolatedUnit]:
    """Return every candidate unit, ordered by start then end.

    Candidates are spans between consecutive commas at the same bracket
    depth, spans inside paired parentheses or brackets, and spans between
    paired dashes.  Empty spans are dropped.  The detector over-generates;
    rule matching decides which candidates are real units.
    """
    units = []
    # group id -> delimiter positions of commas/dashes directly inside it
    stack: list[tuple[str, int]] = []
    groups: dict[int, list[int]] = {-1: []}
    for i, tok in enumerate(tokens):
        if not tok.delimiter:
            continue
        s = tok.surface
        if s in OPENERS:
            stack.append((s, i))
            groups[i] = []
        elif s in CLOSERS:
            if not stack or stack[-1][0] != CLOSERS[s]:
                if stack:
                    raise UnbalancedDelimiterError(*stack[-1])
                raise UnbalancedDelimiterError(s, i)
            opener, j = stack.pop()
            kind = Delimiter.PAREN if opener == "(" else Delimiter.BRACKET
            if i > j + 1:
                units.append(IsolatedUnit(j + 1, i, kind))
            units.extend(_split_group(tokens, groups.pop(j)))
        elif s == "," or s in DASHES:
            groups[stack[-1][1] if stack else -1].append(i)
    if stack:
        raise UnbalancedDelimiterError(*stack[-1])
    units.extend(_split_group(tokens, groups[-1]))
    units.sort(key=lambda u: (u.start, u.end))
    return units


def _split_group(tokens, positions):
    out = []
    commas = [p for p in positions if tokens[p].surface == ","]
    for a, b in zip(commas, commas[1:]):
        if b > a + 1:
            out.append(IsolatedUnit(a + 1, b, Delimiter.COMMA))
    dashes = [p for p in positions if tokens[p].surface in DASHES]
    for a, b in zip(dashes[0::2], dashes[1::2]):
        if b > a + 1:
            out.append(IsolatedUnit(a + 1, b, Delimiter.DASH))
    return out


def annotate(tokens, unit: IsolatedUnit, resolved_type: UnitType | None = None) -> list:
    """Token stream with head/tail markers inserted around ``unit``."""
    return annotate_all(tokens, [(unit, resolved_type or unit.unit_type)])


def annotate_all(tokens, units) -> list:
    """Insert markers for several ``(unit, unit_type)`` pairs into one stream."""
    heads: dict[int, list] = {}
    tails: dict[int, list] = {}
    for unit, unit_type in units:
        if unit_type is None:
            raise ValueError("cannot annotate an unresolved unit")
        heads.setdefault(unit.start, []).append(UnitMarker(unit_type))
        tails.setdefault(unit.end, []).append(UnitMarker())
    out = []
    for i in range(len(tokens) + 1):
        out.extend(tails.get(i, ()))
        out.extend(heads.get(i, ()))
        if i < len(tokens):
            out.append(tokens[i])
    return out


def render_annotated(stream) -> str:
    return " ".join(str(x) for x in stream)
