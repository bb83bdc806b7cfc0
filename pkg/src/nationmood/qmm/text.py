"""Query tokenization with a pluggable tokenizer registry.

The shipped tokenizer splits on Unicode whitespace, lowercases ASCII
letters, and strips surrounding ASCII punctuation, so a multi-word query
contributes one token per word. Language-specific tokenizers (e.g. a
Japanese morphological analyzer) can be registered under their own id.
"""

import string

from ..errors import ValidationError

_PUNCT = string.punctuation

_ASCII_LOWER = {ord(c): ord(c) + 32 for c in string.ascii_uppercase}


def whitespace_tokenize(raw_query: str) -> list:
    tokens = []
    for piece in raw_query.split():
        piece = piece.translate(_ASCII_LOWER).strip(_PUNCT)
        if piece:
            tokens.append(piece)
    return tokens


TOKENIZERS = {"whitespace": whitespace_tokenize}


def register_tokenizer(name: str, fn) -> None:
    if name in TOKENIZERS:
        raise ValidationError(f"tokenizer {name!r} already registered")
    TOKENIZERS[name] = fn


def tokenize(raw_query: str, tokenizer: str = "whitespace") -> list:
    try:
        fn = TOKENIZERS[tokenizer]
    except KeyError:
        raise ValidationError(f"unknown tokenizer {tokenizer!r}") from None
    return fn(raw_query)


def session_tokens(session, tokenizer: str = "whitespace") -> frozenset:
    """Distinct tokens searched in one session (binary presence semantics)."""
    out = set()
    for _, raw in session.queries:
        out.update(tokenize(raw, tokenizer))
    return frozenset(out)
