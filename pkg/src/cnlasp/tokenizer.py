"""Sentence tokenisation for the controlled language, and the inverse.

The tokeniser is deliberately grammar-free: it splits on whitespace, makes
'.', '?' and ',' standalone tokens, turns digit runs into number tokens and
leaves everything else alone.  Whether a single capital letter is a variable
name is the grammar's business, not ours.
"""

from __future__ import annotations

import re


class UnterminatedSentence(ValueError):
    """Input ended with tokens not closed off by '.' or '?'."""

    def __init__(self, tokens):
        self.tokens = list(tokens)
        super().__init__(
            "unterminated sentence: %s" % " ".join(self.tokens)
        )


_TOKEN_RE = re.compile(r"[.?,]|[^\s.?,]+")


def tokenize(text: str) -> list:
    """Split ``text`` into one token list per sentence.

    Sentence boundaries sit at '.' and '?' tokens; commas are ordinary
    tokens (needed for enumerations like "2, 3 and 4") and never end a
    sentence.
    """
    sentences = []
    current: list = []
    for tok in _TOKEN_RE.findall(text):
        current.append(tok)
        if tok in (".", "?"):
            sentences.append(current)
            current = []
    if current:
        raise UnterminatedSentence(current)
    return sentences


_NO_SPACE_BEFORE = {".", "?", ","}


def detokenize(sentences) -> str:
    """Render token sequences back to text, one sentence per line.

    Accepts either a list of sentence token lists or a single flat token
    list (treated as one sentence).  Words are joined with single spaces;
    '.', '?' and ',' attach to the preceding token.
    """
    if sentences and isinstance(sentences[0], str):
        sentences = [sentences]
    lines = []
    for toks in sentences:
        parts: list = []
        for tok in toks:
            if parts and tok not in _NO_SPACE_BEFORE:
                parts.append(" ")
            parts.append(tok)
        lines.append("".join(parts))
    return "\n".join(lines)


def is_number_token(tok: str) -> bool:
    return tok.isdigit()


def is_variable_token(tok: str) -> bool:
    return len(tok) == 1 and tok.isalpha() and tok.isupper()
