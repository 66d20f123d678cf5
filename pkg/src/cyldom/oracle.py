"""Independent ground truth for strip waste and cylinder domination.

Everything here is computed by literal set construction or exhaustive
search, sharing no accounting code with the transition engine: the two
are reconciled only through tests.  Coordinates are (column, row) with
columns 1..n cyclic and rows 1..h; phantom rows 0 and h+1 exist below
and/or above the strip depending on the variant and can be dominated
but never occupied or required.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapacityError
from .transitions import Variant

DEFAULT_BRUTE_CELL_CAP = 20
DEFAULT_EXACT_N_CAP = 14
DEFAULT_EXACT_M_CAP = 24


def _check_members(members, h: int, n: int) -> frozenset[tuple[int, int]]:
    cells = frozenset((int(i), int(j)) for i, j in members)
    for i, j in cells:
        if not (1 <= i <= n and 1 <= j <= h):
            raise ValueError(f"vertex {(i, j)} outside the {n}x{h} strip")
    return cells


def _phantom_rows(variant: Variant, h: int) -> tuple[int, ...]:
    rows = [0] if variant.phantom_below else []
    if variant.phantom_above:
        rows.append(h + 1)
    return tuple(rows)


def waste_of(members, variant: Variant, h: int, n: int) -> int:
    """Wasted domination 5|S| - |N[S]| in the phantom-extended strip."""
    cells = _check_members(members, h, n)
    phantoms = set(_phantom_rows(variant, h))
    dominated = set()
    for i, j in cells:
        dominated.add((i, j))
        dominated.add((i % n + 1, j))
        dominated.add(((i - 2) % n + 1, j))
        for jj in (j - 1, j + 1):
            if 1 <= jj <= h or jj in phantoms:
                dominated.add((i, jj))
    return 5 * len(cells) - len(dominated)


def almost_dominates(members, variant: Variant, h: int, n: int) -> bool:
    """True if every non-exempt strip vertex is in the closed neighbourhood."""
    cells = _check_members(members, h, n)
    dominated = set()
    for i, j in cells:
        dominated.add((i, j))
        dominated.add((i % n + 1, j))
        dominated.add(((i - 2) % n + 1, j))
        for jj in (j - 1, j + 1):
            if 1 <= jj <= h:
                dominated.add((i, jj))
    exempt = variant.exempt_rows(h)
    return all((i, j) in dominated
               for i in range(1, n + 1)
               for j in range(1, h + 1) if j not in exempt)


def brute_min_waste(h: int, n: int, variant: Variant,
                    max_cells: int = DEFAULT_BRUTE_CELL_CAP) -> int:
    """Minimum waste over all almost-dominating subsets, by exhaustive search.

    Branch-and-bound over the 2**(n*h) subsets: adding a vertex never
    decreases the waste (it adds 5 and dominates at most 5 new cells),
    so a partial subset whose waste already reaches the best known value
    can be pruned.
    """
    if n < 1 or h < 1:
        raise ValueError("n and h must be >= 1")
    if n * h > max_cells:
        raise CapacityError(f"{n}x{h} strip exceeds the {max_cells}-cell cap")
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, h + 1)]
    index = {c: k for k, c in enumerate(cells)}
    phantoms = _phantom_rows(variant, h)
    universe = cells + [(i, j) for i in range(1, n + 1) for j in phantoms]
    uindex = {c: k for k, c in enumerate(universe)}
    nb_masks = []
    for i, j in cells:
        mask = 1 << uindex[(i, j)]
        mask |= 1 << uindex[(i % n + 1, j)]
        mask |= 1 << uindex[((i - 2) % n + 1, j)]
        for jj in (j - 1, j + 1):
            if (i, jj) in uindex:
                mask |= 1 << uindex[(i, jj)]
        nb_masks.append(mask)
    exempt = variant.exempt_rows(h)
    required = 0
    for i, j in cells:
        if j not in exempt:
            required |= 1 << uindex[(i, j)]

    best = 5 * len(cells)  # occupying everything almost dominates

    def search(k: int, count: int, covered: int) -> None:
        nonlocal best
        waste = 5 * count - bin(covered).count("1")
        if waste >= best:
            return
        if k == len(cells):
            if required & ~covered == 0:
                best = waste
            return
        search(k + 1, count + 1, covered | nb_masks[k])
        search(k + 1, count, covered)

    search(0, 0, 0)
    return best


@dataclass(frozen=True)
class ExactResult:
    n: int
    m: int
    gamma: int
    witness: frozenset[tuple[int, int]] | None
    mode: str


def _cylinder_neighbour_masks(n: int, m: int) -> list[int]:
    V = n * m
    masks = []
    for v in range(V):
        i, j = v % n, v // n
        mask = 1 << v
        mask |= 1 << ((i + 1) % n + j * n)
        mask |= 1 << ((i - 1) % n + j * n)
        if j > 0:
            mask |= 1 << (v - n)
        if j < m - 1:
            mask |= 1 << (v + n)
        masks.append(mask)
    return masks


def _gamma_exhaustive(n: int, m: int, want_witness: bool):
    V = n * m
    masks = _cylinder_neighbour_masks(n, m)
    full = (1 << V) - 1
    for k in range((V + 4) // 5, V + 1):
        for combo in combinations(range(V), k):
            covered = 0
            for v in combo:
                covered |= masks[v]
            if covered == full:
                witness = None
                if want_witness:
                    witness = frozenset((v % n + 1, v // n + 1) for v in combo)
                return k, witness
    raise AssertionError("occupying every vertex always dominates")


def count_cyclic_states(n: int) -> int:
    """Cyclic ternary words of length n with no 0 adjacent to 2."""
    if n < 3:
        raise ValueError("cyclic words need n >= 3")
    A = [[1, 1, 0], [1, 1, 1], [0, 1, 1]]

    def mul(X, Y):
        return [[sum(X[i][k] * Y[k][j] for k in range(3)) for j in range(3)]
                for i in range(3)]

    R = [[int(i == j) for j in range(3)] for i in range(3)]
    B, e = A, n
    while e:
        if e & 1:
            R = mul(R, B)
        B = mul(B, B)
        e >>= 1
    return R[0][0] + R[1][1] + R[2][2]


def _enumerate_cyclic_states(n: int) -> np.ndarray:
    """All cyclic-valid ternary words, ascending by base-3 value (pos 1 first)."""
    trits = np.array([[0], [1], [2]], dtype=np.int8)
    for _ in range(n - 1):
        last = trits[:, -1]
        parts = []
        for new in (0, 1, 2):
            keep = ~(((last == 0) & (new == 2)) | ((last == 2) & (new == 0)))
            col = np.full((int(keep.sum()), 1), new, dtype=np.int8)
            parts.append(np.hstack([trits[keep], col]))
        trits = np.vstack(parts)
    first, last = trits[:, 0], trits[:, -1]
    wrap_ok = ~(((first == 0) & (last == 2)) | ((first == 2) & (last == 0)))
    trits = trits[wrap_ok]
    if trits.shape[0] != count_cyclic_states(n):
        raise AssertionError("cyclic enumeration disagrees with the trace formula")
    return trits


_PROFILE_INF = 1 << 30


def _profile_layers(n: int, m: int):
    """Layer-by-layer domination DP over cyclic column states.

    State after layer j: one trit per cyclic position (0 occupied,
    1 dominated, 2 not yet dominated).  A position holding 2 must be
    occupied in the next layer.  Returns (states, per-layer value
    arrays, codes); values count chosen vertices.
    """
    trits = _enumerate_cyclic_states(n)
    S = trits.shape[0]
    pow3 = 3 ** np.arange(n, dtype=np.int64)
    codes = trits.astype(np.int64) @ pow3
    bit_cols = 1 << np.arange(n, dtype=np.int64)
    forced = (((trits == 2) @ bit_cols)).astype(np.int64)
    all_one = int(np.searchsorted(codes, int((3 ** n - 1) // 2)))  # code of 111...1
    w = np.full(S, _PROFILE_INF, dtype=np.int64)
    w[all_one] = 0
    layers = [w]
    pos = np.arange(n)
    for _ in range(m):
        w_new = np.full(S, _PROFILE_INF, dtype=np.int64)
        live = np.nonzero(layers[-1] < _PROFILE_INF)[0]
        for mask in range(1 << n):
            sel = live[(forced[live] & ~mask) == 0]
            if sel.size == 0:
                continue
            u = trits[sel]
            bits = ((mask >> pos) & 1).astype(bool)
            nb = np.roll(bits, 1) | np.roll(bits, -1)
            t = np.where(bits[None, :], 0, np.where((u == 0) | nb[None, :], 1, 2))
            dst_codes = t.astype(np.int64) @ pow3
            dst = np.searchsorted(codes, dst_codes)
            if not np.array_equal(codes[dst], dst_codes):
                raise AssertionError("profile DP produced an unenumerated state")
            vals = layers[-1][sel] + int(bits.sum())
            np.minimum.at(w_new, dst, vals)
        layers.append(w_new)
    return trits, layers, codes


def _gamma_profile(n: int, m: int, want_witness: bool):
    trits, layers, codes = _profile_layers(n, m)
    closed = ~(trits == 2).any(axis=1)
    finals = np.where(closed, layers[-1], _PROFILE_INF)
    gamma = int(finals.min())
    if gamma >= _PROFILE_INF:
        raise AssertionError("occupying every vertex always dominates")
    if not want_witness:
        return gamma, None
    pow3 = 3 ** np.arange(n, dtype=np.int64)
    pos = np.arange(n)
    t_idx = int(np.flatnonzero(finals == gamma)[0])
    value = gamma
    witness = set()
    forced = (((trits == 2) @ (1 << np.arange(n, dtype=np.int64)))).astype(np.int64)
    for layer in range(m, 0, -1):
        prev = layers[layer - 1]
        live = np.nonzero(prev < _PROFILE_INF)[0]
        found = None
        for mask in range(1 << n):
            sel = live[(forced[live] & ~mask) == 0]
            if sel.size == 0:
                continue
            cand = sel[prev[sel] + bin(mask).count("1") == value]
            if cand.size == 0:
                continue
            u = trits[cand]
            bits = ((mask >> pos) & 1).astype(bool)
            nb = np.roll(bits, 1) | np.roll(bits, -1)
            t = np.where(bits[None, :], 0, np.where((u == 0) | nb[None, :], 1, 2))
            hits = np.flatnonzero(t.astype(np.int64) @ pow3 == codes[t_idx])
            if hits.size:
                found = (mask, int(cand[hits[0]]))
                break
        if found is None:
            raise AssertionError("witness backtrack lost the DP value")
        mask, t_idx = found
        for i in range(n):
            if mask >> i & 1:
                witness.add((i + 1, layer))
        value -= bin(mask).count("1")
    if value != 0:
        raise AssertionError("witness backtrack did not consume the DP value")
    return gamma, frozenset(witness)


def exact_domination_number(n: int, m: int, mode: str = "auto",
                            max_n: int = DEFAULT_EXACT_N_CAP,
                            max_m: int = DEFAULT_EXACT_M_CAP,
                            want_witness: bool = False) -> ExactResult:
    """Exact domination number of the n x m cylinder (cycle length n).

    Modes: ``exhaustive`` (subset search, n*m <= 20), ``profile``
    (layer DP along the path dimension; the cyclic column state absorbs
    the wrap, so no outer wrap-fixing loop is needed), or ``auto``.
    """
    if n < 3:
        raise ValueError("cycles need n >= 3")
    if m < 1:
        raise ValueError("m must be >= 1")
    if n > max_n or m > max_m:
        raise CapacityError(f"(n={n}, m={m}) beyond caps ({max_n}, {max_m})")
    if mode == "auto":
        mode = "exhaustive" if n * m <= 20 else "profile"
    if mode == "exhaustive":
        if n * m > 20:
            raise CapacityError(f"exhaustive search capped at 20 cells, got {n * m}")
        gamma, witness = _gamma_exhaustive(n, m, want_witness)
    elif mode == "profile":
        gamma, witness = _gamma_profile(n, m, want_witness)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if witness is not None:
        if not dominates_cylinder(witness, n, m):
            raise AssertionError("witness does not dominate")
        if len(witness) != gamma:
            raise AssertionError("witness size disagrees with gamma")
    return ExactResult(n=n, m=m, gamma=gamma, witness=witness, mode=mode)


def dominates_cylinder(members, n: int, m: int) -> bool:
    """True if the vertex set dominates every vertex of the n x m cylinder."""
    cells = frozenset((int(i), int(j)) for i, j in members)
    for i, j in cells:
        if not (1 <= i <= n and 1 <= j <= m):
            raise ValueError(f"vertex {(i, j)} outside the cylinder")
    dominated = set()
    for i, j in cells:
        dominated.add((i, j))
        dominated.add((i % n + 1, j))
        dominated.add(((i - 2) % n + 1, j))
        if j > 1:
            dominated.add((i, j - 1))
        if j < m:
            dominated.add((i, j + 1))
    return len(dominated) == n * m
