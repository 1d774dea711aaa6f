"""Word-form <-> symbol dictionary consulted by the preterminal grammar rules.

One entry set, two indexes: by word form for parsing, by (category, symbol)
for generation.  Entries are immutable after load, so one lexicon can be
shared by any number of concurrent derivations.

File format (UTF-8, line oriented, '#' comments):

    category number wform symbol literal-kind

with '+' joining multi-token word forms, e.g.

    tverb sg studies+at study_at pred2
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

CATEGORIES = {
    "pname", "noun", "iverb", "tverb", "adj", "radj",
    # accepted for completeness; the built-in grammar realises these as
    # function words and does not consult user entries for them
    "det", "cqnt", "cond-marker", "then-marker", "neg-marker",
}

CONTENT_CATEGORIES = ("pname", "noun", "iverb", "tverb", "adj", "radj")

NUMBERS = {"sg", "pl", "na"}

KIND_FOR_CATEGORY = {
    "pname": "named",
    "noun": "class",
    "iverb": "pred1",
    "tverb": "pred2",
    "adj": "prop1",
    "radj": "prop2",
}

_SYMBOL_RE = re.compile(r"[a-z][a-z0-9_]*$")


class LexiconError(ValueError):
    pass


class LexiconSyntaxError(LexiconError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class DuplicateEntry(LexiconError):
    def __init__(self, line_no: int, entry: "LexEntry"):
        self.line_no = line_no
        self.entry = entry
        super().__init__(f"line {line_no}: duplicate entry {' '.join(entry.wform)}")


class MissingSurfaceForm(LexiconError):
    """A program symbol has no lexicon entry to realise it."""

    def __init__(self, category: str, symbol: str):
        self.category = category
        self.symbol = symbol
        super().__init__(f"no {category} word form for symbol {symbol!r}")


@dataclass(frozen=True)
class LexEntry:
    category: str
    num: str               # sg | pl | na
    wform: tuple           # token sequence
    symbol: str
    kind: str              # typed-literal kind the entry projects

    def __post_init__(self):
        if not self.wform:
            raise LexiconError("empty word form")


class Lexicon:
    """Both lookup directions over one immutable entry list."""

    def __init__(self, entries):
        self.entries = tuple(entries)
        self._by_first_token: dict = {}
        self._by_symbol: dict = {}
        self._kind_of_symbol: dict = {}
        for e in self.entries:
            self._by_first_token.setdefault(e.wform[0], []).append(e)
            self._by_symbol.setdefault((e.category, e.symbol), []).append(e)
            if e.category in KIND_FOR_CATEGORY:
                self._kind_of_symbol.setdefault(e.symbol, (e.category, e.kind))

    # -- proc direction ----------------------------------------------------

    def lookup_by_form(self, tokens, at: int = 0, category: Optional[str] = None):
        """All entries whose word form matches at position ``at``,
        longest match first.  Unknown words yield the empty list."""
        if at < 0 or at > len(tokens):
            raise IndexError("token position out of range")
        if at == len(tokens):
            return []
        matches = []
        for e in self._by_first_token.get(tokens[at], ()):
            if category is not None and e.category != category:
                continue
            n = len(e.wform)
            if tuple(tokens[at:at + n]) == e.wform:
                matches.append((e, n))
        matches.sort(key=lambda pair: -pair[1])
        return matches

    # -- gen direction -----------------------------------------------------

    def lookup_by_symbol(self, category: str, symbol: str, num: Optional[str] = None):
        """Entries realising ``symbol`` in the requested number, in entry
        order.  Raises MissingSurfaceForm when nothing matches."""
        found = [
            e for e in self._by_symbol.get((category, symbol), ())
            if num is None or e.num == num or e.num == "na"
        ]
        if not found:
            raise MissingSurfaceForm(category, symbol)
        return found

    def has_symbol(self, category: str, symbol: str, num: Optional[str] = None) -> bool:
        try:
            self.lookup_by_symbol(category, symbol, num)
            return True
        except MissingSurfaceForm:
            return False

    def category_of_symbol(self, symbol: str):
        """(category, literal kind) for a program symbol, or None.

        This is what lets the reader recover typed literals from an
        untyped answer set program, and what mechanically enforces the
        naming convention: unknown symbols fail loudly upstream.
        """
        return self._kind_of_symbol.get(symbol)

    def entries_of_category(self, category: str):
        return [e for e in self.entries if e.category == category]

    def __len__(self) -> int:
        return len(self.entries)


def load_lexicon(source: str) -> Lexicon:
    """Parse the line-oriented lexicon format.  Exact duplicates are
    rejected; distinct entries for one symbol (inflection) are welcome."""
    entries = []
    seen = set()
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise LexiconSyntaxError(line_no, f"expected 5 fields, got {len(fields)}")
        category, num, wform_raw, symbol, kind = fields
        if category not in CATEGORIES:
            raise LexiconSyntaxError(line_no, f"unknown category {category!r}")
        if num not in NUMBERS:
            raise LexiconSyntaxError(line_no, f"unknown number {num!r}")
        if not _SYMBOL_RE.match(symbol):
            raise LexiconSyntaxError(
                line_no, f"symbol {symbol!r} is not a lowercase ASP identifier"
            )
        expected_kind = KIND_FOR_CATEGORY.get(category)
        if expected_kind is not None and kind != expected_kind:
            raise LexiconSyntaxError(
                line_no, f"category {category} projects {expected_kind}, not {kind!r}"
            )
        entry = LexEntry(category, num, tuple(wform_raw.split("+")), symbol, kind)
        key = (entry.category, entry.num, entry.wform, entry.symbol)
        if key in seen:
            raise DuplicateEntry(line_no, entry)
        seen.add(key)
        entries.append(entry)
    return Lexicon(entries)


def load_lexicon_file(path: str) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return load_lexicon(fh.read())


#: Default vocabulary: everything the example specifications need.
DEFAULT_LEXICON_TEXT = """\
# proper names
pname sg Tom tom named
pname sg Bob bob named
pname sg Sue+Miller sue_miller named
pname sg Macquarie+University macquarie_university named
pname sg Information+Technology information_technology named
pname sg Linguistics linguistics named
pname sg Biology biology named
pname sg COMP329 comp329 named
pname sg COMP330 comp330 named
pname sg COMP332 comp332 named
pname sg Red red named
pname sg Blue blue named
pname sg Green green named

# nouns
noun sg student student class
noun pl students student class
noun sg node node class
noun pl nodes node class
noun sg colour colour class
noun pl colours colour class
noun sg course course class
noun pl courses course class
noun sg university university class
noun pl universities university class
noun sg book book class
noun pl books book class
noun sg unicorn unicorn class
noun pl unicorns unicorn class

# intransitive verbs (sg form, then base/plural form)
iverb sg works work pred1
iverb pl work work pred1
iverb sg parties party pred1
iverb pl party party pred1
iverb sg studies study pred1
iverb pl study study pred1

# transitive verbs with attached preposition
tverb sg studies+at study_at pred2
tverb pl study+at study_at pred2

# adjectives
adj na successful successful prop1
adj na stressed stressed prop1
adj na expensive expensive prop1

# relational adjectives / participles with preposition
radj na enrolled+in enrolled_in prop2
radj na connected+to connected_to prop2
radj na assigned+to assigned_to prop2
"""


def default_lexicon() -> Lexicon:
    return load_lexicon(DEFAULT_LEXICON_TEXT)
