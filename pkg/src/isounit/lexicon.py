"""English lexicon loading and sentence tagging.

The lexicon file is UTF-8 TSV, one entry per line::

    surface<TAB>codes<TAB>korean_root

``codes`` is a comma-separated list of category codes (see ``Category``).
``korean_root`` may be empty for function words whose Korean material comes
entirely from rule templates.  Lines starting with ``#`` are comments.

Korean roots use a small notation understood by ``isounit.generator``:
a leading ``-`` marks a bound form that attaches to the preceding word
without a space (``-의``), and ``-과/와`` gives a particle pair written as
consonant-final/vowel-final allomorphs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping


class Category(Enum):
    N1 = "N1"  # singular noun
    N2 = "N2"  # plural noun
    N = "N"  # singular or plural noun
    P = "P"  # predicate
    DET = "DET"
    L = "L"  # letter, e.g. I_3
    NUM = "NUM"
    ReP = "ReP"  # relative pronoun
    CJS = "CJS"  # subordinate conjunction
    CJC = "CJC"  # coordinative conjunction
    G = "G"  # gerund
    Ed = "Ed"  # past participle
    Ing = "Ing"  # present participle
    Prep = "Prep"
    Adv = "Adv"
    Adj = "Adj"
    CLBN = "CLBN"  # capitalized noun; computed, never written in files
    S = "S"  # subject role; pattern-only

    def __str__(self):
        return self.value

    def satisfies(self, wanted: "Category") -> bool:
        """True if a token tagged with ``self`` satisfies a pattern asking for ``wanted``."""
        return self is wanted or (wanted is Category.N and self in NOUN_SUBTYPES)


NOUN_SUBTYPES = frozenset({Category.N1, Category.N2, Category.CLBN})
NOUN_CATEGORIES = NOUN_SUBTYPES | {Category.N}

# codes accepted in lexicon files
FILE_CODES = {
    c.value: c for c in Category if c not in (Category.CLBN, Category.S)
}

LETTER_RE = re.compile(r"^[A-Za-z](?:_\d+)?$")
NUMBER_RE = re.compile(r"^\d+(?:\.\d+)?$")


class LexiconError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class LexEntry:
    lemma: str
    surface_forms: tuple[str, ...]
    categories: frozenset[Category]
    korean_root: str

    def __post_init__(self):
        if not self.lemma:
            raise ValueError("empty lemma")
        if self.lemma not in self.surface_forms:
            raise ValueError(f"lemma {self.lemma!r} missing from surface forms")
        if not self.categories:
            raise ValueError(f"{self.lemma!r} has no categories")


class Lexicon:
    """Immutable surface-form lookup, case-insensitive, with multi-word phrases."""

    def __init__(self, entries: Iterable[LexEntry] = ()):
        table: dict[str, LexEntry] = {}
        for entry in entries:
            for form in entry.surface_forms:
                key = _norm(form)
                old = table.get(key)
                if old is not None:
                    entry = _merge(old, entry)
                table[key] = entry
        self._table: Mapping[str, LexEntry] = MappingProxyType(table)
        self._max_phrase = max((k.count(" ") + 1 for k in table), default=1)

    def lookup(self, surface: str) -> LexEntry | None:
        return self._table.get(_norm(surface))

    def __contains__(self, surface: str) -> bool:
        return _norm(surface) in self._table

    def __len__(self) -> int:
        return len(set(map(id, self._table.values())))

    def __iter__(self):
        seen = set()
        for entry in self._table.values():
            if entry.lemma not in seen:
                seen.add(entry.lemma)
                yield entry

    @property
    def max_phrase_words(self) -> int:
        return self._max_phrase


def _norm(surface: str) -> str:
    return " ".join(surface.lower().split())


def _merge(a: LexEntry, b: LexEntry) -> LexEntry:
    forms = a.surface_forms + tuple(f for f in b.surface_forms if f not in a.surface_forms)
    return LexEntry(a.lemma, forms, a.categories | b.categories, a.korean_root or b.korean_root)


def parse_lexicon_line(line: str, lineno: int | None = None) -> LexEntry | None:
    """Parse one TSV line; returns None for blanks and comments."""
    line = line.rstrip("\r\n")
    if not line.strip() or line.lstrip().startswith("#"):
        return None
    fields = line.split("\t")
    if len(fields) not in (2, 3):
        raise LexiconError(f"expected 2 or 3 tab-separated fields, got {len(fields)}", lineno)
    surface = " ".join(fields[0].split())
    if not surface:
        raise LexiconError("empty surface form", lineno)
    codes = [c.strip() for c in fields[1].split(",") if c.strip()]
    if not codes:
        raise LexiconError(f"no category codes for {surface!r}", lineno)
    cats = set()
    for code in codes:
        if code not in FILE_CODES:
            raise LexiconError(f"unknown category code {code!r}", lineno)
        cats.add(FILE_CODES[code])
    root = fields[2].strip() if len(fields) == 3 else ""
    lemma = surface.lower()
    return LexEntry(lemma, (lemma,), frozenset(cats), root)


def load_lexicon(source) -> Lexicon:
    """Load a lexicon from a string, a file object or any iterable of lines.

    Raises ``LexiconError`` (with ``.line``) on the first bad line.
    """
    entries, errors = load_lexicon_collect(source)
    if errors:
        raise errors[0]
    return Lexicon(entries)


def load_lexicon_collect(source) -> tuple[list[LexEntry], list[LexiconError]]:
    if isinstance(source, str):
        source = source.splitlines()
    entries, errors = [], []
    for lineno, line in enumerate(source, 1):
        try:
            entry = parse_lexicon_line(line, lineno)
        except LexiconError as err:
            errors.append(err)
            continue
        if entry is not None:
            entries.append(entry)
    return entries, errors


# --- tagging ---------------------------------------------------------------

SENTENCE_START = -1

DASHES = frozenset({"—", "–", "-", "--"})
OPENERS = {"(": ")", "[": "]"}
CLOSERS = {v: k for k, v in OPENERS.items()}
PUNCT = frozenset(",.;:?!\"()[]") | DASHES

_TOKEN_RE = re.compile(
    r"""
    \d+\.\d+(?![\w])                        # decimal number
  | \w+(?:['’]\w+)?(?:-\w+(?:['’]\w+)?)*   # word, internal hyphens, possessive
  | --|[—–\-]                     # dashes
  | \S
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    categories: frozenset[Category]
    capitalized: bool
    korean_root: str | None
    position: int
    delimiter: bool = False
    oov: bool = False
    space_before: str = field(default="", compare=False)

    def has(self, cat: Category) -> bool:
        return any(c.satisfies(cat) for c in self.categories)

    def has_any(self, cats) -> bool:
        return any(self.has(c) for c in cats)

    def __str__(self):
        return self.surface


class TokenList(list):
    """A list of ``TaggedToken`` that remembers trailing whitespace of the raw text."""

    trailing = ""


def _raw_tokens(raw: str):
    """Yield (start, end) character offsets of base tokens."""
    for m in _TOKEN_RE.finditer(raw):
        yield m.start(), m.end()


def tag_sentence(lexicon: Lexicon, raw: str) -> TokenList:
    """Tokenize and tag one sentence.

    Multi-word lexicon phrases are merged longest-first.  Punctuation tokens
    get an empty category set and ``delimiter=True``.  Unknown words are
    tagged ``{N}`` with ``oov=True`` unless they look like a letter symbol
    (``I_3``) or a number.
    """
    spans = list(_raw_tokens(raw))
    out = TokenList()
    i = 0
    prev_end = 0
    while i < len(spans):
        start, end = spans[i]
        entry = None
        # longest-first phrase merge, never across punctuation
        for width in range(min(lexicon.max_phrase_words, len(spans) - i), 1, -1):
            group = spans[i:i + width]
            words = [raw[s:e] for s, e in group]
            if any(w in PUNCT for w in words):
                continue
            candidate = lexicon.lookup(" ".join(words))
            if candidate is not None:
                entry = candidate
                end = group[-1][1]
                i += width
                break
        else:
            i += 1
        surface = raw[start:end]
        out.append(_make_token(lexicon, surface, entry, len(out), raw[prev_end:start]))
        prev_end = end
    out.trailing = raw[prev_end:]
    return out


def _make_token(lexicon, surface, entry, position, space_before):
    if entry is None and surface in PUNCT:
        return TaggedToken(surface, frozenset(), False, surface, position,
                           delimiter=True, space_before=space_before)
    if entry is None:
        entry = lexicon.lookup(surface)
    capitalized = "A" <= surface[0] <= "Z"
    oov = False
    if entry is not None:
        cats = set(entry.categories)
        root = entry.korean_root
    elif LETTER_RE.match(surface):
        cats, root = {Category.L}, surface
    elif NUMBER_RE.match(surface):
        cats, root = {Category.NUM}, surface
    else:
        cats, root, oov = {Category.N}, None, True
    if capitalized and cats & NOUN_CATEGORIES:
        cats.add(Category.CLBN)
    return TaggedToken(surface, frozenset(cats), capitalized, root, position,
                       oov=oov, space_before=space_before)


def detokenize(tokens) -> str:
    text = "".join(t.space_before + t.surface for t in tokens)
    return text + getattr(tokens, "trailing", "")
