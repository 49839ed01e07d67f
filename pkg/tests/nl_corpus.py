"""Deterministic English-like corpus for index tests.

Sentences are assembled from a fixed vocabulary with a seeded generator,
giving realistic letter skew and word-level repetition without shipping a
large text file.
"""

import numpy as np

_VOCAB = (
    "the quick brown fox jumps over a lazy dog while rivers run deep "
    "through quiet valleys and old stone bridges carry travelers home "
    "before winter storms gather strength along northern coasts where "
    "fishing boats rest beneath grey skies waiting for calmer tides "
    "children read worn books by candle light as wind rattles shutters "
    "merchants count copper coins near market squares every morning "
    "gardens bloom with pale roses climbing weathered walls each spring"
).split()

_PUNCT = [". ", ", ", "; ", " "]


def natural_text(min_bytes: int, seed: int = 2024) -> bytes:
    rng = np.random.default_rng(seed)
    parts = []
    size = 0
    while size < min_bytes:
        length = int(rng.integers(4, 14))
        words = rng.choice(len(_VOCAB), size=length)
        sentence = " ".join(_VOCAB[w] for w in words)
        tail = _PUNCT[int(rng.integers(0, len(_PUNCT)))]
        piece = sentence.capitalize() + tail
        parts.append(piece)
        size += len(piece)
    return "".join(parts).encode("ascii")
