"""Per-seed waste recurrence, periodicity certificates, and waste tables.

For a fixed seed state ``s`` the engine iterates the min-plus column
update and records the diagonal ``d_s(n)`` (the minimum waste of a
length-``n`` closed walk from ``s`` back to ``s``).  The column update F
is translation invariant, ``F(w + q) = F(w) + q`` elementwise with the
infinite value absorbing, so a single elementwise match
``w_n = w_{n-p} + q`` propagates to every later column; a
:class:`SeedCertificate` therefore licenses exact extrapolation of
``d_s`` beyond the computed range.  The aggregated table keeps
``d(n) = min_s d_s(n)`` plus, when every seed is certified, a proven
global certificate for ``d`` itself.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from ._kernel_py import INF
from .errors import CapacityError, IncompleteTableError, NoWitnessError
from .states import StateTable, count_valid_states, enumerate_valid_states
from .transitions import (DEFAULT_MAX_TRANSITIONS, TransitionTable, Variant,
                          build_transition_table)

DEFAULT_P_MAX = 16
DEFAULT_WINDOW = 10
# Per-seed vector periodicity at h=10 sets in as late as n ~ 111 (boundary)
# and n ~ 27 (interior); the defaults leave room for the match window.
DEFAULT_N_MAX = {Variant.BOUNDARY: 140, Variant.INTERIOR: 48}
TABLE_FORMAT = 1
# Value-width guard: finite DP entries stay below the INF sentinel.
_VALUE_LIMIT = 1 << 29


@dataclass(frozen=True)
class SeedCertificate:
    """Proof that w_n(s, .) = w_{n-p}(s, .) + q elementwise for n >= N."""

    seed: int
    N: int
    p: int
    q: int
    verified_window: int


@dataclass(frozen=True)
class SeedRun:
    seed: int
    height: int
    variant: Variant
    n_max: int
    diag: np.ndarray  # (n_max+1,) int64, entry 0 is 0, INF where unreachable
    certificate: SeedCertificate | None


def resolve_threads(explicit: int | None = None) -> int:
    """Worker count: explicit flag, then CYLDOM_THREADS, then cpu count."""
    if explicit is not None:
        if explicit < 1:
            raise ValueError("thread count must be >= 1")
        return explicit
    env = os.environ.get("CYLDOM_THREADS")
    if env:
        value = int(env)
        if value < 1:
            raise ValueError("CYLDOM_THREADS must be >= 1")
        return value
    return os.cpu_count() or 1


def _check_capacity(height: int, n_max: int) -> None:
    if 5 * height * n_max >= _VALUE_LIMIT:
        raise CapacityError(
            f"n_max={n_max} at height {height} exceeds the 32-bit value budget")


def run_seed(seed: int, table: TransitionTable, n_max: int,
             period_search: tuple[int, int] = (DEFAULT_P_MAX, DEFAULT_WINDOW),
             *, early_stop: bool = True, backend: str | None = None):
    """Diagonal series d_s(0..n_max) and a periodicity certificate, if found.

    The certificate is returned once some period ``p <= p_max`` and
    increment ``q`` give an elementwise vector match sustained for
    ``window`` consecutive columns; with ``early_stop`` the remaining
    diagonal entries are filled by (exact) extrapolation.
    """
    p_max, window = period_search
    if n_max < 1 or p_max < 1 or window < 1:
        raise ValueError("n_max, p_max and window must all be >= 1")
    if not 0 <= seed < table.n_states:
        raise ValueError(f"seed index {seed} out of range")
    _check_capacity(table.height, n_max)
    kern = kernels.get_backend(backend) if backend else kernels
    cost32 = np.ascontiguousarray(table.cost, dtype=np.int32)
    diag, found, N, p, q, verified, anomaly = kern.run_seed(
        table.indptr, table.src, cost32, seed, n_max, p_max, window, early_stop)
    if anomaly:
        raise AssertionError("periodicity broke after certification; "
                             "the column update is not translation invariant")
    cert = SeedCertificate(seed, N, p, q, verified) if found else None
    return diag, cert


_WORKER_CTX: dict | None = None


def _init_worker(indptr, src, cost32, n_max, p_max, window, early_stop, backend):
    global _WORKER_CTX
    kern = kernels.get_backend(backend)
    _WORKER_CTX = dict(indptr=indptr, src=src, cost=cost32, n_max=n_max,
                       p_max=p_max, window=window, early_stop=early_stop,
                       run=kern.run_seed)


def _run_chunk(seeds):
    ctx = _WORKER_CTX
    out = []
    for s in seeds:
        out.append((s, ctx["run"](ctx["indptr"], ctx["src"], ctx["cost"], s,
                                  ctx["n_max"], ctx["p_max"], ctx["window"],
                                  ctx["early_stop"])))
    return out


@dataclass
class WasteTable:
    """Eventually-periodic representation of n -> min_s w_n(s, s)."""

    variant: Variant
    height: int
    n_max: int
    d: np.ndarray  # (n_max+1,) int64, d[0] = 0
    seeds_total: int
    seeds_certified: int
    global_cert: tuple[int, int, int] | None      # (N, p, q) for d itself
    residue_constants: list[int] | None           # d value by n mod p, when q == 0
    certificates: list[SeedCertificate | None] | None = None  # in-memory only
    seed_series: np.ndarray | None = None                     # (S, n_max+1), in-memory only

    @property
    def fully_certified(self) -> bool:
        return self.seeds_certified == self.seeds_total

    def query(self, n: int) -> int:
        """Exact d(n); beyond n_max extrapolates via certificates."""
        if n < 0:
            raise ValueError("n must be >= 0")
        if n <= self.n_max:
            return int(self.d[n])
        if self.seed_series is not None and self.certificates is not None:
            if not self.fully_certified:
                raise IncompleteTableError(
                    f"{self.seeds_total - self.seeds_certified} seeds uncertified; "
                    f"cannot extrapolate past n_max={self.n_max}")
            return self._query_per_seed(n)
        if self.global_cert is None:
            raise IncompleteTableError(
                f"table has no certificate; cannot extrapolate past n_max={self.n_max}")
        N, p, q = self.global_cert
        base = N + (n - N) % p
        return int(self.d[base] + (n - base) // p * q)

    def _query_per_seed(self, n: int) -> int:
        Ns = np.array([c.N for c in self.certificates], dtype=np.int64)
        ps = np.array([c.p for c in self.certificates], dtype=np.int64)
        qs = np.array([c.q for c in self.certificates], dtype=np.int64)
        base = Ns + (n - Ns) % ps
        vals = self.seed_series[np.arange(self.seeds_total), base]
        ext = np.where(vals >= INF, INF, vals + (n - base) // ps * qs)
        best = int(ext.min())
        if best >= INF:
            raise IncompleteTableError(f"d({n}) is infinite for every seed")
        return best

    def to_json_dict(self) -> dict:
        return {
            "format": TABLE_FORMAT,
            "variant": self.variant.value,
            "height": self.height,
            "n_max": self.n_max,
            "d": [int(x) for x in self.d[1:]],
            "global": None if self.global_cert is None else
                      dict(zip(("N", "p", "q"), self.global_cert)),
            "seeds_certified": self.seeds_certified,
            "residue_constants": self.residue_constants,
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict()) + "\n")

    @classmethod
    def from_json_dict(cls, data: dict) -> "WasteTable":
        if data.get("format") != TABLE_FORMAT:
            raise ValueError(f"unsupported table format {data.get('format')!r}")
        height = int(data["height"])
        n_max = int(data["n_max"])
        d = np.zeros(n_max + 1, dtype=np.int64)
        d[1:] = data["d"]
        g = data["global"]
        return cls(
            variant=Variant(data["variant"]),
            height=height,
            n_max=n_max,
            d=d,
            seeds_total=count_valid_states(height),
            seeds_certified=int(data["seeds_certified"]),
            global_cert=None if g is None else (int(g["N"]), int(g["p"]), int(g["q"])),
            residue_constants=None if data["residue_constants"] is None
                              else [int(x) for x in data["residue_constants"]],
        )

    @classmethod
    def load(cls, path) -> "WasteTable":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


def cache_filename(variant: Variant, height: int, n_max: int) -> str:
    return f"waste_{variant.value}_h{height}_n{n_max}_v{TABLE_FORMAT}.json"


def find_cached(cache_dir, variant: Variant, height: int) -> Path | None:
    """Best (largest n_max) cached table for (variant, height), if any."""
    pattern = f"waste_{variant.value}_h{height}_n*_v{TABLE_FORMAT}.json"
    best, best_n = None, -1
    for path in Path(cache_dir).glob(pattern):
        try:
            n = int(path.stem.split("_n")[-1].split("_")[0])
        except ValueError:
            continue
        if n > best_n:
            best, best_n = path, n
    return best


def _derive_global(d: np.ndarray, certs: Sequence[SeedCertificate],
                   series: np.ndarray, n_max: int, p_max: int,
                   window: int) -> tuple[int, int, int] | None:
    """Derive a proven (N, p, q) certificate for the aggregated diagonal.

    Every seed series is eventually periodic with per-seed drift rate
    q_s / p_s.  Over a common period P = lcm(p_s) each seed's excess
    over the minimum-rate seeds is nondecreasing, so if the overall
    minimum is attained by a minimum-rate seed at every column of the
    last full period, it stays attained forever and d itself satisfies
    d(n + P) = d(n) + P * min_rate from there on.  A scalar relation
    d(n) = d(n - p) + q observed over a span of at least P + p columns
    then persists for all larger n by induction.
    """
    P = 1
    for c in certs:
        P = math.lcm(P, c.p)
    max_N = max(c.N for c in certs)
    if n_max - P + 1 <= max_N:
        return None
    rates = [Fraction(c.q, c.p) for c in certs]
    rho_min = min(rates)
    min_rate = np.array([r == rho_min for r in rates])
    window_cols = range(n_max - P + 1, n_max + 1)
    for n in window_cols:
        col = series[:, n]
        if col[min_rate].min() != col.min():
            return None
    for p in range(1, min(p_max, n_max - 1) + 1):
        q = int(d[n_max] - d[n_max - p])
        n = n_max
        while n - 1 >= p and d[n - 1] - d[n - 1 - p] == q:
            n -= 1
        if n_max - n + 1 >= max(window, P + p):
            return n, p, q
    return None


def aggregate(runs: Sequence[SeedRun]) -> WasteTable:
    """Minimum-merge per-seed runs into a WasteTable.

    Requires one run per seed of the state space, all with identical
    height, variant and n_max (ValueError otherwise).
    """
    if not runs:
        raise ValueError("no seed runs to aggregate")
    height, variant, n_max = runs[0].height, runs[0].variant, runs[0].n_max
    for r in runs:
        if (r.height, r.variant, r.n_max) != (height, variant, n_max):
            raise ValueError("mixed heights/variants/n_max in seed runs")
    total = count_valid_states(height)
    seen = sorted(r.seed for r in runs)
    if seen != list(range(total)):
        raise ValueError(f"expected one run per seed (0..{total - 1})")

    series = np.full((total, n_max + 1), INF, dtype=np.int64)
    certs: list[SeedCertificate | None] = [None] * total
    for r in runs:
        series[r.seed] = r.diag
        certs[r.seed] = r.certificate
    d = series.min(axis=0)
    if d[0] != 0 or (d[1:] < 0).any() or (d[1:] >= INF).any():
        raise AssertionError("aggregated diagonal must be finite and nonnegative")

    certified = sum(1 for c in certs if c is not None)
    global_cert = None
    residues = None
    if certified == total:
        global_cert = _derive_global(d, certs, series, n_max,
                                     DEFAULT_P_MAX, DEFAULT_WINDOW)
        if global_cert is not None and global_cert[2] == 0:
            N, p, _ = global_cert
            residues = [int(d[N + (r - N) % p]) for r in range(p)]
    return WasteTable(variant=variant, height=height, n_max=n_max, d=d,
                      seeds_total=total, seeds_certified=certified,
                      global_cert=global_cert, residue_constants=residues,
                      certificates=certs, seed_series=series)


def compute_waste_table(height: int, variant: Variant, *,
                        n_max: int | None = None,
                        p_max: int = DEFAULT_P_MAX,
                        window: int = DEFAULT_WINDOW,
                        threads: int | None = None,
                        early_stop: bool = True,
                        use_reflection: bool | None = None,
                        max_transitions: int = DEFAULT_MAX_TRANSITIONS,
                        backend: str | None = None) -> WasteTable:
    """Run the full recurrence for one (height, variant) over all seeds.

    Seeds are independent; they are distributed over a process pool and
    min-merged, so results do not depend on the worker count.  For the
    interior variant, row reflection is an automorphism of the
    transition system, so only one seed per mirror pair is computed.
    """
    if n_max is None:
        n_max = DEFAULT_N_MAX[variant]
    _check_capacity(height, n_max)
    if window < 1 or p_max < 1:
        raise ValueError("p_max and window must be >= 1")
    state_table = enumerate_valid_states(height)
    ttable = build_transition_table(state_table, variant,
                                    max_transitions=max_transitions)
    if use_reflection is None:
        use_reflection = variant is Variant.INTERIOR
    reflect_map = state_table.reflect_map
    if use_reflection:
        if variant is not Variant.INTERIOR:
            raise ValueError("reflection reduction is only sound for the interior variant")
        seeds = [s for s in range(len(state_table)) if reflect_map[s] >= s]
    else:
        seeds = list(range(len(state_table)))

    threads = resolve_threads(threads)
    backend_name = backend or kernels.BACKEND
    cost32 = np.ascontiguousarray(ttable.cost, dtype=np.int32)
    results: dict[int, tuple] = {}
    if threads == 1 or len(seeds) == 1:
        _init_worker(ttable.indptr, ttable.src, cost32, n_max, p_max, window,
                     early_stop, backend_name)
        for s, res in _run_chunk(seeds):
            results[s] = res
    else:
        chunk = max(1, math.ceil(len(seeds) / (threads * 8)))
        batches = [seeds[i:i + chunk] for i in range(0, len(seeds), chunk)]
        with ProcessPoolExecutor(
                max_workers=threads, initializer=_init_worker,
                initargs=(ttable.indptr, ttable.src, cost32, n_max, p_max,
                          window, early_stop, backend_name)) as pool:
            for batch in pool.map(_run_chunk, batches):
                for s, res in batch:
                    results[s] = res

    runs = []
    for s in range(len(state_table)):
        source = s if s in results else int(reflect_map[s])
        diag, found, N, p, q, verified, anomaly = results[source]
        if anomaly:
            raise AssertionError(f"seed {source}: periodicity broke after certification")
        cert = SeedCertificate(s, N, p, q, verified) if found else None
        runs.append(SeedRun(seed=s, height=height, variant=variant, n_max=n_max,
                            diag=diag, certificate=cert))
    return aggregate(runs)


def load_or_compute_table(cache_dir, variant: Variant, height: int, *,
                          n_max: int | None = None,
                          p_max: int = DEFAULT_P_MAX,
                          window: int = DEFAULT_WINDOW,
                          threads: int | None = None,
                          compute: bool = True,
                          backend: str | None = None):
    """Cached table lookup with optional on-miss computation.

    Returns ``(table, path)``; the path is None for a fresh table that
    was not saved (no cache_dir) and the table is None when missing and
    ``compute`` is false.  A cached table is accepted when its n_max
    covers the requested one.
    """
    wanted = n_max if n_max is not None else DEFAULT_N_MAX[variant]
    cache = Path(cache_dir) if cache_dir is not None else None
    if cache is not None and cache.is_dir():
        path = find_cached(cache, variant, height)
        if path is not None:
            table = WasteTable.load(path)
            if table.n_max >= wanted:
                return table, path
    if not compute:
        return None, None
    table = compute_waste_table(height, variant, n_max=wanted, p_max=p_max,
                                window=window, threads=threads, backend=backend)
    path = None
    if cache is not None:
        cache.mkdir(parents=True, exist_ok=True)
        path = cache / cache_filename(variant, height, table.n_max)
        table.save(path)
    return table, path


def reconstruct_witness(seed: int, n: int, table: TransitionTable,
                        state_table: StateTable, *, max_cells: int = 512):
    """Vertex set realising d_s(n) in the n x h cylinder strip.

    Returns ``(cells, waste)`` where cells is a set of (column, row)
    pairs with columns 1..n and rows 1..h; ties are broken toward the
    lowest-index predecessor.  Raises NoWitnessError when d_s(n) is
    infinite and CapacityError when n*h exceeds ``max_cells``.
    """
    h = table.height
    if n < 1:
        raise ValueError("n must be >= 1")
    if n * h > max_cells:
        raise CapacityError(f"witness tracking capped at {max_cells} cells")
    if not 0 <= seed < table.n_states:
        raise ValueError(f"seed index {seed} out of range")
    cost32 = np.ascontiguousarray(table.cost, dtype=np.int32)
    from ._kernel_py import relax_column  # reference path; independence not required here
    vectors = [np.full(table.n_states, INF, dtype=np.int32)]
    vectors[0][seed] = 0
    for _ in range(n):
        vectors.append(relax_column(vectors[-1], table.indptr, table.src, cost32))
    value = int(vectors[n][seed])
    if value >= INF:
        raise NoWitnessError(f"no closed walk of length {n} for seed {seed}")
    cells = set()
    t = seed
    for i in range(n, 0, -1):
        for j in range(h):
            if state_table.trits[t, j] == 0:
                cells.add((i, j + 1))
        target = int(vectors[i][t])
        chosen = None
        for e in range(int(table.indptr[t]), int(table.indptr[t + 1])):
            u = int(table.src[e])
            if int(vectors[i - 1][u]) + int(table.cost[e]) == target:
                chosen = u
                break
        if chosen is None:
            raise AssertionError("no predecessor matches the DP value")
        t = chosen
    if t != seed:
        raise AssertionError("witness walk did not close at the seed")
    return cells, value
