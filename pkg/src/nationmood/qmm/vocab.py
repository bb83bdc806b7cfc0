"""Query-token vocabulary and sparse binary session vectors."""

import csv
import hashlib
from dataclasses import dataclass

from ..errors import ValidationError


@dataclass(frozen=True)
class Vocabulary:
    """token -> dense feature index, frozen after construction."""

    tokens: tuple  # index -> token
    frequencies: tuple  # index -> session frequency in the training split
    min_count: int
    tokenizer_id: str

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.tokens)})
        if len(self._index) != len(self.tokens):
            raise ValidationError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def index_of(self, token: str) -> int:
        return self._index[token]

    def get(self, token: str, default=None):
        return self._index.get(token, default)

    def fingerprint(self) -> str:
        cached = getattr(self, "_fingerprint", None)
        if cached is None:
            h = hashlib.sha256()
            h.update(f"tokenizer={self.tokenizer_id};min_count={self.min_count}\n".encode("utf-8"))
            for i, (t, f) in enumerate(zip(self.tokens, self.frequencies)):
                h.update(f"{t},{i},{f}\n".encode("utf-8"))
            cached = h.hexdigest()
            object.__setattr__(self, "_fingerprint", cached)
        return cached

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["token", "index", "frequency"])
            writer.writerow(["#tokenizer", self.tokenizer_id, self.min_count])
            for i, (t, f) in enumerate(zip(self.tokens, self.frequencies)):
                writer.writerow([t, i, f])

    @staticmethod
    def from_csv(path) -> "Vocabulary":
        tokens = []
        freqs = []
        tokenizer_id = "whitespace"
        min_count = 0
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["token", "index", "frequency"]:
                raise ValidationError(f"{path}: not a vocabulary file")
            for row in reader:
                if not row:
                    continue
                if row[0] == "#tokenizer":
                    tokenizer_id, min_count = row[1], int(row[2])
                    continue
                if int(row[1]) != len(tokens):
                    raise ValidationError(f"{path}: vocabulary indices are not dense")
                tokens.append(row[0])
                freqs.append(int(row[2]))
        return Vocabulary(tuple(tokens), tuple(freqs), min_count, tokenizer_id)


def build_vocabulary(session_token_sets, min_count: int = 3,
                     tokenizer_id: str = "whitespace") -> Vocabulary:
    """Vocabulary over the training sessions' distinct-token sets.

    A token is kept when it appears in at least ``min_count`` sessions;
    indices run by descending session frequency, ties lexicographic.
    """
    freq: dict = {}
    for tokens in session_token_sets:
        for t in tokens:
            freq[t] = freq.get(t, 0) + 1
    kept = [(t, f) for t, f in freq.items() if f >= min_count]
    if not kept:
        raise ValidationError(f"no token reaches min_count={min_count}; vocabulary would be empty")
    kept.sort(key=lambda tf: (-tf[1], tf[0]))
    return Vocabulary(
        tokens=tuple(t for t, _ in kept),
        frequencies=tuple(f for _, f in kept),
        min_count=min_count,
        tokenizer_id=tokenizer_id,
    )


@dataclass(frozen=True)
class QuerySessionVector:
    """Sparse binary presence vector of one session against one vocabulary."""

    session_key: tuple  # (user_id, window_start_iso)
    active: tuple  # sorted distinct feature indices
    vocab_fingerprint: str


def vectorize(token_set, vocabulary: Vocabulary, session_key=("", "")) -> QuerySessionVector:
    """Active-index set of a session; repeats collapse, OOV tokens drop."""
    active = sorted({vocabulary.index_of(t) for t in token_set if t in vocabulary})
    return QuerySessionVector(
        session_key=tuple(session_key),
        active=tuple(active),
        vocab_fingerprint=vocabulary.fingerprint(),
    )
