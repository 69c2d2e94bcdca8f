"""Deterministic random-stream derivation.

Every stochastic step draws from a Generator derived from a root seed plus
string or integer tags, so runs reproduce bit-for-bit across processes and
are independent of execution order. Python's builtin ``hash()`` is salted
per process and must never be used here; tags are hashed with blake2b.
"""

import hashlib

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def _token(part) -> int:
    if isinstance(part, (bool, int, np.integer)):
        return int(part) & _MASK64
    if isinstance(part, str):
        digest = hashlib.blake2b(part.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big")
    raise TypeError(f"cannot derive an rng token from {type(part).__name__}")


def derive_seed(*parts) -> int:
    """Collapse seed parts into one uint64, stable across processes."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(_token(part).to_bytes(8, "big"))
    return int.from_bytes(h.digest(), "big")


def derive_rng(*parts) -> np.random.Generator:
    """A fresh Generator for the substream named by ``parts``."""
    return np.random.default_rng(derive_seed(*parts))
