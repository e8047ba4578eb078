"""Words and finite presentations.

A word is a tuple of nonzero ints: ``+i`` is generator ``i`` (1-based) and
``-i`` its inverse.  On disk, generators are written as letters: ``a``..``z``
for generators 1..26 and ``A``..``Z`` for their inverses, read left to right.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

from .zlinalg import IntMatrix

Word = Tuple[int, ...]

MAX_GENERATORS = 26


class CorpusError(ValueError):
    """Malformed corpus input.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CorpusParseError(CorpusError):
    pass


class CorpusValidationError(CorpusError):
    pass


def free_reduce(word: Iterable[int]) -> Word:
    """Cancel adjacent ``x x^-1`` pairs until none remain."""
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def cyclically_reduce(word: Iterable[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def inverse_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def word_from_letters(text: str) -> Word:
    letters = []
    for ch in text:
        if "a" <= ch <= "z":
            letters.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"invalid letter {ch!r} in word {text!r}")
    return tuple(letters)


def word_to_letters(word: Sequence[int]) -> str:
    chars = []
    for x in word:
        if x > 0:
            chars.append(string.ascii_lowercase[x - 1])
        else:
            chars.append(string.ascii_uppercase[-x - 1])
    return "".join(chars)


@dataclass(frozen=True)
class Presentation:
    """A named finite presentation ``<x_1..x_ngens | relators>``.

    Relators are stored freely reduced; empty relators are dropped on
    construction.  ``volume`` is optional metadata and never enters any
    group-theoretic computation.
    """

    name: str
    ngens: int
    relators: Tuple[Word, ...] = ()
    volume: Optional[float] = field(default=None, compare=True)

    def __post_init__(self):
        if not isinstance(self.ngens, int) or self.ngens < 1:
            raise CorpusValidationError(f"{self.name}: ngens must be a positive integer")
        if self.ngens > MAX_GENERATORS:
            raise CorpusValidationError(
                f"{self.name}: at most {MAX_GENERATORS} generators are supported"
            )
        rels = []
        for rel in self.relators:
            for x in rel:
                if x == 0 or abs(x) > self.ngens:
                    raise CorpusValidationError(
                        f"{self.name}: generator index {x} out of range 1..{self.ngens}"
                    )
            reduced = free_reduce(rel)
            if reduced:
                rels.append(reduced)
        object.__setattr__(self, "relators", tuple(rels))
        if self.volume is not None:
            vol = float(self.volume)
            if not vol > 0:
                raise CorpusValidationError(f"{self.name}: volume must be positive")
            object.__setattr__(self, "volume", vol)

    @classmethod
    def from_letters(cls, name: str, ngens: int, relators: Sequence[str],
                     volume: Optional[float] = None) -> "Presentation":
        words = []
        for text in relators:
            w = word_from_letters(text)
            for x in w:
                if abs(x) > ngens:
                    raise CorpusValidationError(
                        f"{name}: letter {word_to_letters((x,))!r} exceeds {ngens} generators"
                    )
            words.append(w)
        return cls(name, ngens, tuple(words), volume)

    def to_json(self) -> dict:
        obj = {
            "name": self.name,
            "gens": self.ngens,
            "relators": [word_to_letters(r) for r in self.relators],
        }
        if self.volume is not None:
            obj["volume"] = self.volume
        return obj


def exponent_sum_matrix(P: Presentation) -> IntMatrix:
    """Relator-by-generator matrix of signed letter counts."""
    rows = []
    for rel in P.relators:
        row = [0] * P.ngens
        for x in rel:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return IntMatrix.from_rows(rows, cols=P.ngens)


def _parse_line(obj, lineno: int) -> Presentation:
    if not isinstance(obj, dict):
        raise CorpusParseError("expected a JSON object", lineno)
    for key in ("name", "gens", "relators"):
        if key not in obj:
            raise CorpusParseError(f"missing required field {key!r}", lineno)
    name, gens, relators = obj["name"], obj["gens"], obj["relators"]
    if not isinstance(name, str) or not name:
        raise CorpusParseError("'name' must be a nonempty string", lineno)
    if isinstance(gens, bool) or not isinstance(gens, int):
        raise CorpusParseError("'gens' must be an integer", lineno)
    if not isinstance(relators, list) or not all(isinstance(r, str) for r in relators):
        raise CorpusParseError("'relators' must be an array of strings", lineno)
    volume = obj.get("volume")
    if volume is not None and (isinstance(volume, bool) or not isinstance(volume, (int, float))):
        raise CorpusParseError("'volume' must be a number", lineno)
    try:
        words = [word_from_letters(r) for r in relators]
    except ValueError as exc:
        raise CorpusParseError(str(exc), lineno) from None
    for w in words:
        for x in w:
            if abs(x) > gens:
                raise CorpusValidationError(
                    f"{name}: letter {word_to_letters((x,))!r} exceeds {gens} generators",
                    lineno,
                )
    try:
        return Presentation(name, gens, tuple(words), volume)
    except CorpusValidationError as exc:
        raise CorpusValidationError(str(exc), lineno) from None


def parse_corpus(text: str) -> list[Presentation]:
    """Parse a JSON-lines corpus.  Blank lines are skipped."""
    out: list[Presentation] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusParseError(f"invalid JSON ({exc.msg})", lineno) from None
        P = _parse_line(obj, lineno)
        if P.name in seen:
            raise CorpusValidationError(f"duplicate group name {P.name!r}", lineno)
        seen.add(P.name)
        out.append(P)
    return out


def serialize_corpus(presentations: Iterable[Presentation]) -> str:
    return "".join(json.dumps(P.to_json()) + "\n" for P in presentations)


def load_corpus(path) -> list[Presentation]:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh.read())
