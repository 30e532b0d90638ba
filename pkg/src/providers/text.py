"""
Text helpers shared by the mock providers, prompt assembly and metrics.
"""

import math
import re
from functools import lru_cache
from pathlib import Path
from typing import FrozenSet, List

TOKEN_PATTERN = re.compile(r"[^\W_]+")

# whitespace-split words times this factor; an estimate, not a tokenizer count
TOKENS_PER_WORD = 1.3

_STOPWORDS_FILE = Path(__file__).with_name("stopwords.txt")


def tokenize(text: str) -> List[str]:
    """Lowercase and split on runs of non-alphanumeric characters."""
    return TOKEN_PATTERN.findall(text.lower())


def estimate_tokens(text: str) -> int:
    return math.ceil(len(text.split()) * TOKENS_PER_WORD)


@lru_cache(maxsize=1)
def load_stopwords() -> FrozenSet[str]:
    words = set()
    for line in _STOPWORDS_FILE.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def content_tokens(text: str) -> List[str]:
    """Tokens that are neither stopwords nor pure digits."""
    stopwords = load_stopwords()
    return [token for token in tokenize(text) if token not in stopwords and not token.isdigit()]


_WHITESPACE = re.compile(r"\s+")


def collapse_whitespace(text: str) -> str:
    return _WHITESPACE.sub(" ", text).strip()
