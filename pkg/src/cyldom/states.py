"""Ternary column states for strips of a cylindrical grid.

A column of height ``h`` is described by a word of ``h`` trits, one per
row with row 1 first: 0 = occupied, 1 = dominated by this column or the
previous one, 2 = not yet dominated.  A word is *valid* when no entry 2
is adjacent (within the column) to an entry 0, since an occupied vertex
always dominates its in-column neighbours.  Only valid words can occur,
so everything downstream indexes into the dense enumeration built here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OCCUPIED = 0
DOMINATED = 1
UNDOMINATED = 2

DEFAULT_MAX_HEIGHT = 16


def word_is_valid(word) -> bool:
    """True if no entry 2 sits next to an entry 0 (rows j, j+1)."""
    w = tuple(word)
    if not w or any(x not in (0, 1, 2) for x in w):
        return False
    return all({a, b} != {0, 2} for a, b in zip(w, w[1:]))


def _check_word(word) -> tuple[int, ...]:
    w = tuple(int(x) for x in word)
    if not w or any(x not in (0, 1, 2) for x in w):
        raise ValueError(f"malformed state word: {word!r}")
    return w


def zeros_count(word) -> int:
    """Number of occupied rows (entries equal to 0) in a state word."""
    return _check_word(word).count(0)


def reflect(word) -> tuple[int, ...]:
    """Row-reversed state word; validity is preserved."""
    return tuple(reversed(_check_word(word)))


def encode(word) -> int:
    """Base-3 value of a word, entry for row 1 least significant."""
    code = 0
    for x in reversed(_check_word(word)):
        code = 3 * code + x
    return code


def decode(code: int, height: int) -> tuple[int, ...]:
    """Inverse of :func:`encode` for a word of the given height."""
    if code < 0 or code >= 3 ** height:
        raise ValueError(f"code {code} out of range for height {height}")
    out = []
    for _ in range(height):
        out.append(code % 3)
        code //= 3
    return tuple(out)


def count_valid_states(height: int) -> int:
    """Count valid words of the given height via the last-trit recurrence."""
    if height < 1:
        raise ValueError("height must be >= 1")
    c0, c1, c2 = 1, 1, 1
    for _ in range(height - 1):
        c0, c1, c2 = c0 + c1, c0 + c1 + c2, c1 + c2
    return c0 + c1 + c2


@dataclass(frozen=True, eq=False)
class StateTable:
    """Dense enumeration of all valid words of one height.

    States are ordered by ascending base-3 value (row 1 least
    significant); ``trits[k, j]`` is the entry of state ``k`` at row
    ``j + 1``.
    """

    height: int
    trits: np.ndarray        # (S, h) int8
    codes: np.ndarray        # (S,) int64, strictly ascending
    zeros: np.ndarray        # (S,) int16, occupied-row counts
    reflect_map: np.ndarray  # (S,) int32, involution

    def __len__(self) -> int:
        return self.codes.shape[0]

    def word(self, index: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.trits[index])

    def index_of_code(self, code: int) -> int:
        k = int(np.searchsorted(self.codes, code))
        if k >= len(self) or self.codes[k] != code:
            raise KeyError(f"code {code} is not a valid state of height {self.height}")
        return k

    def index_of(self, word) -> int:
        return self.index_of_code(encode(word))


def enumerate_valid_states(height: int, max_height: int = DEFAULT_MAX_HEIGHT) -> StateTable:
    """Enumerate all valid words of one height, ascending by base-3 value.

    Raises ValueError for ``height < 1`` or above ``max_height`` (the
    state count grows like (1 + sqrt(2))**height).
    """
    if height < 1 or height > max_height:
        raise ValueError(f"height must be in [1, {max_height}], got {height}")
    trits = np.array([[0], [1], [2]], dtype=np.int8)
    for _ in range(height - 1):
        last = trits[:, -1]
        parts = []
        # Appending the most significant trit in ascending order keeps
        # the enumeration sorted by code.
        for new in (0, 1, 2):
            keep = ~(((last == 0) & (new == 2)) | ((last == 2) & (new == 0)))
            block = trits[keep]
            col = np.full((block.shape[0], 1), new, dtype=np.int8)
            parts.append(np.hstack([block, col]))
        trits = np.vstack(parts)
    pow3 = 3 ** np.arange(height, dtype=np.int64)
    codes = trits.astype(np.int64) @ pow3
    zeros = (trits == 0).sum(axis=1).astype(np.int16)
    reflected_codes = trits[:, ::-1].astype(np.int64) @ pow3
    reflect_map = np.searchsorted(codes, reflected_codes).astype(np.int32)
    table = StateTable(height=height, trits=trits, codes=codes,
                       zeros=zeros, reflect_map=reflect_map)
    if len(table) != count_valid_states(height):
        raise AssertionError("state enumeration disagrees with the counting recurrence")
    return table
