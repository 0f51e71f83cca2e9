"""Token counting behind a small pluggable interface.

The real system counted tokens with its model's tokenizer; that model is
not part of this artifact, so thresholds (920/1048) are interpreted under
a configurable counter.  Implementations must be deterministic and safe
for concurrent read-only use.
"""

from __future__ import annotations

import math
import re
from typing import Protocol

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


class Tokenizer(Protocol):
    name: str

    def count(self, text: str) -> int:
        """Deterministic token count; >= 1 for non-empty text."""
        ...


class WordTokenizer:
    """Counts words and standalone punctuation marks."""

    name = "word"

    def count(self, text: str) -> int:
        return len(_TOKEN_RE.findall(text))


class BytePairApproxTokenizer:
    """Byte-pair-style approximation: long words cost several tokens.

    Subword vocabularies average a few characters per token; this counts
    ceil(len/chars_per_token) per word, one per punctuation mark.
    """

    name = "bpe"

    def __init__(self, chars_per_token: int = 4):
        if chars_per_token < 1:
            raise ValueError("chars_per_token must be positive")
        self.chars_per_token = chars_per_token

    def count(self, text: str) -> int:
        total = 0
        for token in _TOKEN_RE.findall(text):
            if token.isalnum() or "_" in token:
                total += math.ceil(len(token) / self.chars_per_token)
            else:
                total += 1
        return total


def is_single_token(tokenizer: Tokenizer, word: str) -> bool:
    return bool(word) and tokenizer.count(word) == 1


def get_tokenizer(name: str = "bpe", **options) -> Tokenizer:
    if name == "word":
        return WordTokenizer()
    if name == "bpe":
        return BytePairApproxTokenizer(**options)
    raise ValueError(f"unknown tokenizer: {name!r}")
