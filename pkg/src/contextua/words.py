"""Reduced words over the alphabet {a, b} and a small parser for them.

Letters are stored as signed integers: ``1`` is ``a``, ``-1`` is ``a^-1``,
``2`` is ``b`` and ``-2`` is ``b^-1``.  A :class:`Word` is always freely
reduced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

A, AI, B, BI = 1, -1, 2, -2
LETTERS = (A, AI, B, BI)  # fixed letter order used for every tie-break
MAX_POWER = 1 << 20

_NAMES = {A: "a", AI: "A", B: "b", BI: "B"}
_SYMBOLS = {"a": A, "A": AI, "b": B, "B": BI}


class WordSyntaxError(ValueError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class PresentationError(ValueError):
    pass


def reduce(raw: Iterable[int]) -> "Word":
    """Freely reduce a sequence of signed letters."""
    return Word(raw)


def _reduce(raw):
    out = []
    for x in raw:
        if x not in _NAMES:
            raise ValueError(f"not a letter: {x!r}")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word(tuple):
    """An immutable freely reduced word; the empty word is the identity."""

    def __new__(cls, letters=()):
        if isinstance(letters, Word):
            return letters
        return super().__new__(cls, _reduce(letters))

    def __mul__(self, other):
        return Word(tuple.__add__(self, other))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return Word(tuple(self) * k)

    def inverse(self):
        return Word(-x for x in reversed(self))

    def is_identity(self):
        return len(self) == 0

    def __repr__(self):
        return f"Word({render(self)!r})"

    def __str__(self):
        return render(self)


IDENTITY = Word()


def render(w: Iterable[int]) -> str:
    """Canonical text form, e.g. ``ab^9a^-1``; ``e`` for the identity."""
    w = tuple(w)
    if not w:
        return "e"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = j - i
        name = _NAMES[abs(w[i])]
        if w[i] < 0:
            parts.append(f"{name}^-{k}" if k > 1 else f"{name}^-1")
        else:
            parts.append(f"{name}^{k}" if k > 1 else name)
        i = j
    return "".join(parts)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise WordSyntaxError(message, self.text, self.pos)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def word(self):
        letters = []
        terms = 0
        while True:
            c = self.peek()
            if c in _SYMBOLS or c == "(":
                letters.extend(self.term())
                terms += 1
            elif c.isalpha():
                self.error(f"unknown letter {c!r}")
            else:
                break
        if not terms:
            self.error("expected a letter or '('")
        return letters

    def term(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            inner = self.word()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        else:
            self.pos += 1
            inner = [_SYMBOLS[c]]
        if self.peek() == "^":
            self.pos += 1
            k = self.integer()
            inner = list(Word(inner) ** k)
        return inner

    def integer(self):
        self.peek()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.error("expected an integer exponent")
        k = int(self.text[start:self.pos])
        if abs(k) > MAX_POWER:
            self.pos = start
            self.error(f"exponent {k} exceeds 2^20")
        return k

    def parse(self):
        letters = self.word()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return Word(letters)


def parse_word(text: str) -> Word:
    """Parse ``text`` into a reduced word.

    Uppercase letters and ``^-1`` both denote inverses, ``^k`` is a power
    and parentheses group:

    >>> render(parse_word("ab^2(aA)b^7A"))
    'ab^9a^-1'
    """
    return _Parser(text).parse()


@dataclass(frozen=True)
class Presentation:
    """Two-generator presentation <a, b | relators>."""

    relators: tuple = ()
    name: str | None = None

    def __post_init__(self):
        rels = tuple(Word(r) for r in self.relators)
        for i, r in enumerate(rels):
            if not r:
                raise PresentationError(f"relator {i} reduces to the identity")
        object.__setattr__(self, "relators", rels)

    @property
    def label(self):
        if self.name:
            return self.name
        return "<a,b|" + ",".join(render(r) for r in self.relators) + ">"

    def to_json(self):
        doc = {"relators": [render(r) for r in self.relators]}
        if self.name is not None:
            doc["name"] = self.name
        return doc


def parse_words(items, what="word"):
    out = []
    for i, s in enumerate(items):
        if not isinstance(s, str):
            raise PresentationError(f"{what} {i} is not a string")
        try:
            out.append(parse_word(s))
        except WordSyntaxError as exc:
            raise PresentationError(f"{what} {i}: {exc}") from exc
    return out


def parse_presentation(doc):
    """Read a presentation document.

    ``doc`` is a JSON string or an already decoded mapping of the form
    ``{"name": str?, "relators": [str, ...], "subgroup": [str, ...]?}``.
    Returns ``(presentation, subgroup_words_or_None)``.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise PresentationError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise PresentationError("presentation must be a JSON object")
    unknown = set(doc) - {"name", "relators", "subgroup"}
    if unknown:
        raise PresentationError(f"unknown keys: {sorted(unknown)}")
    if "relators" not in doc or not isinstance(doc["relators"], list):
        raise PresentationError("'relators' must be a list of word strings")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise PresentationError("'name' must be a string")
    rels = parse_words(doc["relators"], "relator")
    subgroup = None
    if "subgroup" in doc:
        if not isinstance(doc["subgroup"], list):
            raise PresentationError("'subgroup' must be a list of word strings")
        subgroup = parse_words(doc["subgroup"], "subgroup word")
    return Presentation(tuple(rels), name), subgroup


def load_presentation(path):
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())
