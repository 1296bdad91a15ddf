"""Axis generators: turn one half of a bitext into positioned tokens.

Two modes. Cognate mode tokenizes every letter run, digit run and
punctuation mark. Lexicon mode only plots strings the matching predicate
could ever match: lexicon entries (found by multi-pattern string search, so
overlapping substrings and superstrings each get a position), plus numbers
and punctuation.
"""

from __future__ import annotations

import string
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

WORD = "word"
NUMBER = "number"
PUNCT = "punctuation"

DEFAULT_PUNCT = frozenset(string.punctuation + "«»¡¿“”‘’„–—…。、，．！？：；「」『』（）")


class EmptyText(ValueError):
    pass


class AxisToken(NamedTuple):
    surface: str
    position: float
    start: int
    end: int
    kind: str

    @property
    def char_span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class AxisMap:
    tokens: tuple[AxisToken, ...]
    text_length: int

    def __len__(self):
        return len(self.tokens)

    def __iter__(self) -> Iterator[AxisToken]:
        return iter(self.tokens)

    @property
    def positions(self) -> list[float]:
        return [t.position for t in self.tokens]


def _make_token(surface: str, start: int, end: int, kind: str) -> AxisToken:
    return AxisToken(surface, (start + end - 1) / 2, start, end, kind)


def _build(tokens: Iterable[AxisToken], n: int) -> AxisMap:
    return AxisMap(tuple(sorted(set(tokens), key=lambda t: (t.position, t.start, t.end, t.surface))), n)


@dataclass(frozen=True)
class TokenRules:
    """Per-language character classes.

    ``letter_ranges`` of ``None`` means any Unicode letter (``str.isalpha``).
    """

    letter_ranges: tuple[tuple[str, str], ...] | None = None
    punctuation: frozenset[str] = field(default=DEFAULT_PUNCT)

    def is_letter(self, ch: str) -> bool:
        if self.letter_ranges is None:
            return ch.isalpha()
        return any(lo <= ch <= hi for lo, hi in self.letter_ranges)

    @classmethod
    def parse(cls, text: str) -> "TokenRules":
        """Read ``letters: <ranges>`` / ``punct: <chars>`` lines.

        Ranges are written like ``a-z A-Z à-ÿ``; a lone character is a
        one-character range. Missing lines keep the defaults.
        """
        letters = None
        punct = DEFAULT_PUNCT
        for raw in text.splitlines():
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            key, sep, value = raw.partition(":")
            if not sep:
                raise ValueError(f"bad token rules line: {raw!r}")
            key = key.strip()
            value = value.strip()
            if key == "letters":
                letters = _parse_ranges(value)
            elif key == "punct":
                punct = frozenset(value.replace(" ", ""))
            else:
                raise ValueError(f"unknown token rules key: {key!r}")
        return cls(letters, punct)

    @classmethod
    def load(cls, path: str | Path) -> "TokenRules":
        return cls.parse(Path(path).read_text(encoding="utf-8"))


def _parse_ranges(spec: str) -> tuple[tuple[str, str], ...]:
    chars = spec.replace(" ", "")
    out = []
    i = 0
    while i < len(chars):
        if i + 2 < len(chars) and chars[i + 1] == "-":
            lo, hi = chars[i], chars[i + 2]
            if lo > hi:
                raise ValueError(f"empty letter range {lo}-{hi}")
            out.append((lo, hi))
            i += 3
        else:
            out.append((chars[i], chars[i]))
            i += 1
    return tuple(out)


def fold(text: str) -> str:
    """Lower-case without changing the character count."""
    return "".join(c if len(lc := c.lower()) != 1 else lc for c in text)


def _scan(text: str, rules: TokenRules, with_words: bool) -> Iterator[AxisToken]:
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if ch.isdecimal():
            j = i + 1
            while j < n and text[j].isdecimal():
                j += 1
            yield _make_token(text[i:j], i, j, NUMBER)
            i = j
        elif rules.is_letter(ch):
            j = i + 1
            while j < n and rules.is_letter(text[j]) and not text[j].isdecimal():
                j += 1
            if with_words:
                yield _make_token(fold(text[i:j]), i, j, WORD)
            i = j
        else:
            if ch in rules.punctuation:
                yield _make_token(ch, i, i + 1, PUNCT)
            i += 1


def tokenize_cognate_mode(text: str, rules: TokenRules | None = None) -> AxisMap:
    if not text:
        raise EmptyText("cannot tokenize an empty text")
    rules = rules or TokenRules()
    return _build(_scan(text, rules, with_words=True), len(text))


class Automaton:
    """Aho-Corasick automaton over a fixed set of patterns."""

    def __init__(self, patterns: Iterable[str]):
        self.goto: list[dict[str, int]] = [{}]
        self.fail: list[int] = [0]
        self.out: list[list[str]] = [[]]
        for pat in sorted(set(patterns)):
            if pat:
                self._add(pat)
        self._link()

    def _add(self, pat: str) -> None:
        s = 0
        for ch in pat:
            nxt = self.goto[s].get(ch)
            if nxt is None:
                nxt = len(self.goto)
                self.goto[s][ch] = nxt
                self.goto.append({})
                self.fail.append(0)
                self.out.append([])
            s = nxt
        self.out[s].append(pat)

    def _link(self) -> None:
        queue = deque(self.goto[0].values())
        while queue:
            s = queue.popleft()
            for ch, t in self.goto[s].items():
                queue.append(t)
                f = self.fail[s]
                while f and ch not in self.goto[f]:
                    f = self.fail[f]
                self.fail[t] = self.goto[f].get(ch, 0)
                if self.fail[t] == t:
                    self.fail[t] = 0
                self.out[t] = self.out[t] + self.out[self.fail[t]]

    def iter(self, text: str) -> Iterator[tuple[int, str]]:
        """Yield ``(end, pattern)`` for every occurrence, ``end`` exclusive."""
        s = 0
        goto, fail, out = self.goto, self.fail, self.out
        for i, ch in enumerate(text):
            while s and ch not in goto[s]:
                s = fail[s]
            s = goto[s].get(ch, 0)
            for pat in out[s]:
                yield i + 1, pat


def tokenize_lexicon_mode(text: str, vocab: Iterable[str],
                          rules: TokenRules | None = None) -> AxisMap:
    if not text:
        raise EmptyText("cannot tokenize an empty text")
    rules = rules or TokenRules()
    # numbers and punctuation are emitted by the scanner already
    patterns = (fold(v) for v in vocab)
    automaton = Automaton(p for p in patterns
                          if not p.isdecimal() and not (len(p) == 1 and p in rules.punctuation))
    folded = fold(text)
    tokens = list(_scan(text, rules, with_words=False))
    for end, pat in automaton.iter(folded):
        tokens.append(_make_token(pat, end - len(pat), end, WORD))
    return _build(tokens, len(text))
