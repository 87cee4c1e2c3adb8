"""Counter-based random numbers for scheduling-independent reproducibility.

Every variate is a pure function of (seed, flat index): a Philox counter
keyed by the seed is jumped directly to the index, so any block of draws
can be produced on its own and still agree with a single sequential run.
Normal variates come from the inverse CDF, keeping the mapping one raw
64-bit word per variate.
"""

import numpy as np
from numpy.random import Philox
from scipy.special import ndtri

from .errors import ValidationError

# Philox-4x64 emits 4 words per counter increment; advance() moves in blocks.
_WORDS_PER_BLOCK = 4
_U64_11 = np.uint64(11)
_INV_2_53 = 2.0 ** -53


def check_seed(seed):
    """Validate and return a seed usable as a Philox key (64-bit, nonnegative)."""
    if not isinstance(seed, (int, np.integer)):
        raise ValidationError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValidationError(f"seed must be in [0, 2^64), got {seed}")
    return seed


def raw_words(seed, offset, count):
    """Raw 64-bit words number offset..offset+count-1 of the keyed stream."""
    bitgen = Philox(key=check_seed(seed))
    block, skip = divmod(int(offset), _WORDS_PER_BLOCK)
    if block:
        bitgen.advance(block)
    return bitgen.random_raw(skip + int(count))[skip:]


def uniforms(seed, offset, count):
    """Strictly interior (0, 1) uniforms from the top 53 bits of each word."""
    raw = raw_words(seed, offset, count)
    return ((raw >> _U64_11).astype(np.float64) + 0.5) * _INV_2_53


def normal_rows(seed, row_start, row_count, dim):
    """Standard-normal block of shape (row_count, dim).

    Entry (i, j) depends only on (seed, row_start + i, j), so disjoint row
    ranges concatenate to exactly the matrix a single call would produce.
    """
    if dim < 1 or row_count < 0:
        raise ValidationError("normal_rows needs dim >= 1 and row_count >= 0")
    u = uniforms(seed, row_start * dim, row_count * dim)
    return ndtri(u).reshape(row_count, dim)
