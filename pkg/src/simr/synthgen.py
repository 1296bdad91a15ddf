"""Synthetic bitexts with known ground truth.

The "translation" is the source rewritten word by word: letters swapped
through a fixed shuffled alphabet, word lengths jittered, adjacent words
swapped. Omissions cut spans out of the x half. Since every transformation is
tracked, the true correspondence at each surviving word end is known exactly.
"""

from __future__ import annotations

import random
import re
import string
from dataclasses import dataclass, field

from .evaluation import GoldTBM, gold_from_segments


class InvalidSpec(ValueError):
    pass


@dataclass(frozen=True)
class DistortionSpec:
    substitution_rate: float = 0.0
    omission_spans: tuple[tuple[int, int], ...] = ()
    inversion_rate: float = 0.0
    length_jitter: float = 0.0
    rng_seed: int = 0

    def validate(self, source_length: int) -> None:
        if not 0 <= self.substitution_rate <= 1:
            raise InvalidSpec("substitution_rate must lie in [0, 1]")
        if not 0 <= self.inversion_rate <= 1:
            raise InvalidSpec("inversion_rate must lie in [0, 1]")
        if self.length_jitter < 0:
            raise InvalidSpec("length_jitter must be >= 0")
        last_end = 0
        for pos, length in sorted(self.omission_spans):
            if length <= 0 or pos < 0 or pos + length > source_length:
                raise InvalidSpec(f"omission ({pos}, {length}) is outside the source")
            if pos < last_end:
                raise InvalidSpec("omission spans overlap")
            last_end = pos + length


@dataclass
class SyntheticBitext:
    text_x: str
    text_y: str
    gold: GoldTBM
    segments_x: list[str] = field(repr=False)
    segments_y: list[str] = field(repr=False)
    changed_letters: int = 0
    total_letters: int = 0


def shuffled_alphabet(rng: random.Random) -> dict[str, str]:
    """A derangement of a-z, so every substitution really changes the letter."""
    letters = list(string.ascii_lowercase)
    while True:
        perm = letters[:]
        rng.shuffle(perm)
        if all(a != b for a, b in zip(letters, perm)):
            return dict(zip(letters, perm))


def random_source(n_chars: int, seed: int = 0, vocab_size: int = 3000, zipf: float = 1.1) -> str:
    """Text-like filler: Zipf-distributed invented words with sentences,
    commas and the odd number. Close to ``n_chars`` long, ends on a word."""
    rng = random.Random(seed)
    lengths = [2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 9, 10, 11, 12]
    vocab = sorted({"".join(rng.choice(string.ascii_lowercase) for _ in range(rng.choice(lengths)))
                    for _ in range(vocab_size)})
    rng.shuffle(vocab)
    weights = [1.0 / (rank + 1) ** zipf for rank in range(len(vocab))]
    words: list[str] = []
    total = 0
    sentence = 0
    while total < n_chars:
        if rng.random() < 0.03:
            w = str(rng.randint(1, 2500))
        else:
            w = rng.choices(vocab, weights)[0]
        if sentence == 0:
            w = w.capitalize()
        sentence += 1
        if sentence > 6 and rng.random() < 0.15:
            w += "."
            sentence = 0
        elif rng.random() < 0.06:
            w += ","
        words.append(w)
        total += len(w) + 1
    text = " ".join(words)
    return text


_WORD = re.compile(r"\S+")
_CORE = re.compile(r"^(.*?)([^\w]*)$", re.S)


def _rewrite(word: str, spec: DistortionSpec, table: dict[str, str], rng: random.Random,
             tally: list[int]) -> str:
    core, tail = _CORE.match(word).groups()
    if spec.length_jitter and core.isalpha():
        factor = max(0.2, 1.0 + rng.gauss(0.0, spec.length_jitter))
        n = max(1, round(len(core) * factor))
        if n < len(core):
            core = core[:n]
        else:
            core = core + "".join(rng.choice(string.ascii_lowercase) for _ in range(n - len(core)))
    out = []
    for ch in core:
        low = ch.lower()
        if low in table:
            tally[1] += 1
            if spec.substitution_rate and rng.random() < spec.substitution_rate:
                tally[0] += 1
                sub = table[low]
                ch = sub.upper() if ch.isupper() else sub
        out.append(ch)
    return "".join(out) + tail


def generate(source: str, spec: DistortionSpec | None = None) -> SyntheticBitext:
    spec = spec or DistortionSpec()
    if not source or not _WORD.search(source):
        raise InvalidSpec("source must contain at least one word")
    spec.validate(len(source))
    rng = random.Random(spec.rng_seed)
    table = shuffled_alphabet(rng)

    spans = [(m.start(), m.end()) for m in _WORD.finditer(source)]
    n = len(spans)
    tally = [0, 0]
    rewritten = [_rewrite(source[s:e], spec, table, rng, tally) for s, e in spans]

    # order[k] = index of the source word printed in slot k of the y text
    order = list(range(n))
    swapped = [False] * n
    k = 0
    while k < n - 1:
        if spec.inversion_rate and rng.random() < spec.inversion_rate:
            order[k], order[k + 1] = order[k + 1], order[k]
            swapped[k] = swapped[k + 1] = True
            k += 2
        else:
            k += 1

    pieces = []
    y_end = [0] * n  # y end offset of slot k
    cursor = 0
    prev_end = 0
    for k, (s, e) in enumerate(spans):
        sep = source[prev_end:s]
        word = rewritten[order[k]]
        pieces.append(sep)
        pieces.append(word)
        cursor += len(sep) + len(word)
        y_end[k] = cursor
        prev_end = e
    pieces.append(source[prev_end:])
    text_y = "".join(pieces)

    omissions = sorted(spec.omission_spans)
    kept = []
    last = 0
    for pos, length in omissions:
        kept.append(source[last:pos])
        last = pos + length
    kept.append(source[last:])
    text_x = "".join(kept)

    def x_offset(o: int) -> int:
        return o - sum(length for pos, length in omissions if pos + length <= o)

    def survives(s: int, e: int) -> bool:
        return all(e <= pos or s >= pos + length for pos, length in omissions)

    cuts = []
    for k, (s, e) in enumerate(spans):
        # inside a swapped pair only the pair's end is a true correspondence
        if swapped[k] and (k + 1 < n and swapped[k + 1] and order[k] == k + 1):
            continue
        first = spans[k - 1][0] if swapped[k] else s
        if not survives(first, e):
            continue
        cuts.append((x_offset(e), y_end[k]))

    segments_x, segments_y = [], []
    px = py = 0
    for cx, cy in cuts:
        if px < cx < len(text_x) and py < cy < len(text_y):
            segments_x.append(text_x[px:cx])
            segments_y.append(text_y[py:cy])
            px, py = cx, cy
    segments_x.append(text_x[px:])
    segments_y.append(text_y[py:])
    gold = gold_from_segments(segments_x, segments_y, text_x, text_y)
    return SyntheticBitext(text_x, text_y, gold, segments_x, segments_y, tally[0], tally[1])
