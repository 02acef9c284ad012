"""Counter-based random streams keyed by (seed, purpose, step).

Every consumer of randomness in the package draws from a Philox stream whose
key encodes the run seed, a purpose tag and (for tie-breaking) the step index.
The value used for vertex x is element x of the keyed stream, so a draw is a
pure function of (seed, purpose, step, x): results do not depend on iteration
order, chunking or thread count, and re-running any step reproduces it bit for
bit without replaying earlier steps.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

_PURPOSE_INIT = 1
_PURPOSE_SHIFT = 2
_PURPOSE_TIE = 3

# step/index share the low 56 bits of the second key word; purposes the top 8.
_INDEX_BITS = 56
_MASK64 = (1 << 64) - 1


def _stream(seed: int, purpose: int, index: int = 0) -> Generator:
    if not 0 <= index < (1 << _INDEX_BITS):
        raise ValueError(f"stream index out of range: {index}")
    key = np.array([seed & _MASK64, (purpose << _INDEX_BITS) | index], dtype=np.uint64)
    return Generator(Philox(key=key))


def init_uniforms(seed: int, n: int) -> np.ndarray:
    """Uniforms in [0, 1) feeding the inverse-CDF transforms of initial fields."""
    return _stream(seed, _PURPOSE_INIT).random(n)


def shift_uniforms(seed: int, n: int) -> np.ndarray:
    """Uniforms for the random cyclic shift of pattern fields (one per axis)."""
    return _stream(seed, _PURPOSE_SHIFT).random(n)


def tie_uniforms(seed: int, step: int, n: int) -> np.ndarray:
    """Per-vertex uniforms resolving argmax ties at one step.

    Fresh independent stream each step; element x belongs to vertex x whether
    or not x is tied, so the draw consumed by one vertex never shifts another's.
    """
    return _stream(seed, _PURPOSE_TIE, step).random(n)
