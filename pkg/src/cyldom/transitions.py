"""Column-to-column transitions of the waste recurrence.

Placing a column with state ``t`` after a column with state ``u`` costs

    5 * z(t) - nd(u, t)

where ``z(t)`` counts the occupants of the new column and ``nd(u, t)``
counts the vertices newly dominated by the placement: occupants resolve
undominated vertices behind them, vertices of the new column are counted
once they are dominated (unless the previous column already paid for
them), occupants pre-pay the vertices in front of them, and occupants in
the outermost rows earn credit for the adjacent phantom row(s).  Summed
along a closed walk the costs telescope to the wasted domination
``5|S| - |N[S]|`` of the walk's vertex set, with neighbourhoods taken in
the phantom-extended strip.

Rows whose domination may be postponed ("exempt" rows) depend on the
strip role: a boundary strip faces the rest of the cylinder with row 1
only, an interior strip with both row 1 and row h.  Every other row with
an undominated vertex must be resolved immediately by occupying the row
in the next column.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .states import StateTable, UNDOMINATED, word_is_valid

DEFAULT_MAX_TRANSITIONS = 150_000_000
_DUMP_FORMAT = 1


class Variant(enum.Enum):
    """Strip role: which rows are exempt and which phantom rows exist."""

    BOUNDARY = "boundary"
    INTERIOR = "interior"

    def exempt_rows(self, height: int) -> frozenset[int]:
        if self is Variant.BOUNDARY:
            return frozenset({1})
        return frozenset({1, height})

    @property
    def phantom_below(self) -> bool:
        return True

    @property
    def phantom_above(self) -> bool:
        return self is Variant.INTERIOR


def nd(u, t, variant: Variant) -> int:
    """Newly dominated vertices when a column in state t follows state u."""
    u = tuple(u)
    t = tuple(t)
    if len(u) != len(t):
        raise ValueError("state words of different heights")
    total = 0
    for uj, tj in zip(u, t):
        if tj == 0 and uj == 2:
            total += 1          # the vertex behind the new occupant
        if tj <= 1 and uj >= 1:
            total += 1          # the vertex in the new column itself
        if tj == 0:
            total += 1          # the vertex in front, paid in advance
    if t[0] == 0:
        total += 1              # phantom row below
    if variant.phantom_above and t[-1] == 0:
        total += 1              # phantom row above
    return total


def transition_cost(u, t, variant: Variant) -> int:
    return 5 * tuple(t).count(0) - nd(u, t, variant)


def successors(u, variant: Variant, height: int | None = None):
    """All (occupied rows, next state) pairs reachable from state u.

    Each non-exempt row holding a 2 must be occupied in the next column
    (it is the last chance to dominate that vertex); every other row is
    free.  Pairs are listed by ascending occupancy bitmask (bit j-1 for
    row j).  The emitted states are always valid.
    """
    u = tuple(int(x) for x in u)
    h = len(u) if height is None else height
    if len(u) != h or not word_is_valid(u):
        raise ValueError(f"invalid source state: {u!r}")
    exempt = variant.exempt_rows(h)
    forced = 0
    for j in range(1, h + 1):
        if u[j - 1] == UNDOMINATED and j not in exempt:
            forced |= 1 << (j - 1)
    free = ((1 << h) - 1) & ~forced
    out = []
    sub = 0
    while True:
        occ = forced | sub
        t = []
        for j in range(1, h + 1):
            if occ >> (j - 1) & 1:
                t.append(0)
            elif u[j - 1] == 0 or (j > 1 and occ >> (j - 2) & 1) or (j < h and occ >> j & 1):
                t.append(1)
            else:
                t.append(2)
        rows = tuple(j for j in range(1, h + 1) if occ >> (j - 1) & 1)
        out.append((rows, tuple(t)))
        if sub == free:
            break
        sub = (sub - free) & free
    return out


@dataclass(frozen=True, eq=False)
class TransitionTable:
    """All transitions for one (height, variant), grouped by destination.

    Edges are stored CSR-style keyed by the destination state: edge k
    with ``indptr[t] <= k < indptr[t+1]`` enters state ``t`` from
    ``src[k]`` at cost ``cost[k]``; within a destination block sources
    are ascending.  The predecessor set of ``t`` is exactly the block's
    sources, which is what the column relaxation minimises over.
    """

    height: int
    variant: Variant
    n_states: int
    indptr: np.ndarray  # (S+1,) int64
    src: np.ndarray     # (E,) int32
    cost: np.ndarray    # (E,) int8

    @property
    def n_transitions(self) -> int:
        return int(self.src.shape[0])

    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.src, minlength=self.n_states).astype(np.int64)

    def save(self, path) -> None:
        """Dump to ``.npz``: header scalars + the destination-grouped edge list."""
        np.savez_compressed(
            path,
            format=np.int64(_DUMP_FORMAT),
            height=np.int64(self.height),
            variant=np.bytes_(self.variant.value.encode()),
            n_states=np.int64(self.n_states),
            n_transitions=np.int64(self.n_transitions),
            indptr=self.indptr,
            src=self.src,
            cost=self.cost,
        )

    @classmethod
    def load(cls, path) -> "TransitionTable":
        with np.load(path) as data:
            if int(data["format"]) != _DUMP_FORMAT:
                raise ValueError(f"unsupported dump format {int(data['format'])}")
            return cls(
                height=int(data["height"]),
                variant=Variant(bytes(data["variant"]).decode()),
                n_states=int(data["n_states"]),
                indptr=data["indptr"].astype(np.int64),
                src=data["src"].astype(np.int32),
                cost=data["cost"].astype(np.int8),
            )


def count_transitions(table: StateTable, variant: Variant) -> int:
    """Exact transition count: sum over states of 2**(free rows)."""
    h = table.height
    nonexempt = np.ones(h, dtype=bool)
    for j in variant.exempt_rows(h):
        nonexempt[j - 1] = False
    forced_counts = ((table.trits == UNDOMINATED) & nonexempt).sum(axis=1)
    return int(sum(1 << (h - int(c)) for c in forced_counts))


def build_transition_table(table: StateTable, variant: Variant,
                           max_transitions: int = DEFAULT_MAX_TRANSITIONS) -> TransitionTable:
    """Generate every legal transition with its cost, deterministically.

    Enumerates occupancy masks in ascending order against all compatible
    source states at once; the result is then ordered by (destination,
    source), which fixes the stored layout independently of the
    generation order because (source, destination) pairs are unique.
    """
    h = table.height
    total = count_transitions(table, variant)
    if total > max_transitions:
        raise CapacityError(
            f"{total} transitions for h={h} {variant.value} exceed the cap {max_transitions}")

    trits = table.trits
    nonexempt = np.ones(h, dtype=bool)
    for j in variant.exempt_rows(h):
        nonexempt[j - 1] = False
    bit_cols = (1 << np.arange(h, dtype=np.int64))
    forced_bits = (((trits == UNDOMINATED) & nonexempt) @ bit_cols).astype(np.int64)
    pow3 = 3 ** np.arange(h, dtype=np.int64)
    interior = variant is Variant.INTERIOR

    src_parts, dst_parts, cost_parts = [], [], []
    for mask in range(1 << h):
        rows = np.nonzero((forced_bits & ~mask) == 0)[0].astype(np.int32)
        if rows.size == 0:
            continue
        u = trits[rows]
        bits = ((mask >> np.arange(h)) & 1).astype(bool)
        nb = np.zeros(h, dtype=bool)
        nb[1:] |= bits[:-1]
        nb[:-1] |= bits[1:]
        t = np.where(bits[None, :], 0, np.where((u == 0) | nb[None, :], 1, 2))
        dst_codes = t.astype(np.int64) @ pow3
        dst = np.searchsorted(table.codes, dst_codes).astype(np.int32)
        if not np.array_equal(table.codes[dst], dst_codes):
            raise AssertionError("emitted an unenumerated (invalid) state")
        k = int(bits.sum())
        newly_behind = (bits[None, :] & (u == UNDOMINATED)).sum(axis=1)
        newly_here = ((t <= 1) & (u >= 1)).sum(axis=1)
        extra = int(bits[0]) + (int(bits[-1]) if interior else 0)
        cost = (4 * k - newly_behind - newly_here - extra).astype(np.int8)
        src_parts.append(rows)
        dst_parts.append(dst)
        cost_parts.append(cost)

    src_all = np.concatenate(src_parts)
    dst_all = np.concatenate(dst_parts)
    cost_all = np.concatenate(cost_parts)
    if src_all.shape[0] != total:
        raise AssertionError("transition generation disagrees with the exact count")
    order = np.lexsort((src_all, dst_all))
    src_all = np.ascontiguousarray(src_all[order])
    cost_all = np.ascontiguousarray(cost_all[order])
    counts = np.bincount(dst_all, minlength=len(table))
    indptr = np.zeros(len(table) + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return TransitionTable(height=h, variant=variant, n_states=len(table),
                           indptr=indptr, src=src_all, cost=cost_all)
