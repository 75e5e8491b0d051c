"""Exact exhaustive k-leader selection for both dynamics.

Candidates are enumerated lexicographically and every size-k set is
evaluated (the objective never increases when a leader is added, so
searching exactly size k solves the "at most k" problem). Two-leader sets
use the rank-2 resistance fast paths after one table precomputation;
larger sets get per-candidate grounded factorizations, chunked over the
configured worker threads with a deterministic, order-preserving
reduction.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from ._parallel import ordered_map
from .coherence import (
    NOISE_CORRUPTED,
    NOISE_FREE,
    CoherenceReport,
    coherence_nc,
    coherence_nf,
)
from .electrical import (
    normalize_kappa,
    normalize_leaders,
    resistance_oracle,
    spd_trace_inverse,
)
from .errors import (
    BadParameterError,
    BudgetExceededError,
    CoherenceLabError,
    DisconnectedGraphError,
)
from .graphs import Graph, is_connected, laplacian

DEFAULT_BUDGET = 10_000_000
CO_OPTIMAL_CAP = 1000
_CHUNK = 512


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of an exhaustive search over leader sets of one size."""

    dynamics: str
    k: int
    value: float
    optimal_sets: tuple[tuple[int, ...], ...]
    co_optimal_count: int
    evaluated_count: int
    elapsed_seconds: float


@dataclass(frozen=True)
class CandidateError:
    """Per-candidate failure entry from a batch evaluation."""

    candidate: tuple
    message: str


def _tie_window(vmin: float, n: int) -> float:
    # flat 1e-12 plus a summation-error allowance so that symmetric optima
    # on a few hundred nodes are never split by accumulation order
    return 1e-12 + 8.0 * n * np.finfo(np.float64).eps * max(1.0, abs(vmin))


def _collect_optima(values: np.ndarray, candidates, n: int, cap: int):
    vmin = float(values.min())
    window = _tie_window(vmin, n)
    hits = np.flatnonzero(values <= vmin + window)
    sets = []
    for pos in hits[:cap]:
        sets.append(tuple(int(v) for v in candidates(int(pos))))
    return vmin, tuple(sets), int(hits.size)


def brute_force_select(g: Graph, k: int, dynamics: str = NOISE_FREE, kappa=None,
                       budget: int = DEFAULT_BUDGET,
                       cap: int = CO_OPTIMAL_CAP) -> SelectionResult:
    """Globally optimal leader sets of size exactly k.

    Raises BudgetExceededError when C(n, k) exceeds ``budget``. All
    co-optimal sets (up to ``cap``) are returned in lexicographic order;
    the count field reports how many there were in total.
    """
    n = g.node_count
    if not (1 <= k <= n):
        raise BadParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    if dynamics not in (NOISE_FREE, NOISE_CORRUPTED):
        raise BadParameterError(f"unknown dynamics {dynamics!r}")
    if not is_connected(g):
        raise DisconnectedGraphError("selection requires a connected graph")
    total = math.comb(n, k)
    if total > budget:
        raise BudgetExceededError(
            f"C({n},{k}) = {total} candidate sets exceed the budget of {budget}"
        )
    start = time.perf_counter()

    if dynamics == NOISE_FREE and k == 1:
        values = 0.5 * resistance_oracle(g).column_sums()
        vmin, sets, count = _collect_optima(values, lambda p: (p,), n, cap)
    elif dynamics == NOISE_FREE and k == 2:
        totals = resistance_oracle(g).pair_totals()
        iu = np.triu_indices(n, 1)
        values = 0.5 * totals[iu]
        vmin, sets, count = _collect_optima(
            values, lambda p: (int(iu[0][p]), int(iu[1][p])), n, cap
        )
    elif dynamics == NOISE_CORRUPTED and k == 2:
        oracle = resistance_oracle(g)
        iu = np.triu_indices(n, 1)
        values = np.empty(iu[0].size)
        for pos in range(iu[0].size):
            x, y = int(iu[0][pos]), int(iu[1][pos])
            kx, ky = normalize_kappa((x, y), kappa)
            values[pos] = 0.5 * oracle.noise_corrupted_pair_total(x, y, kx, ky)
        vmin, sets, count = _collect_optima(
            values, lambda p: (int(iu[0][p]), int(iu[1][p])), n, cap
        )
    else:
        values = _evaluate_all(g, k, dynamics, kappa)
        vmin = float(values.min())
        hits = np.flatnonzero(values <= vmin + _tie_window(vmin, n))
        count = int(hits.size)
        want = {int(h) for h in hits[:cap]}
        sets = []
        for pos, S in enumerate(itertools.combinations(range(n), k)):
            if pos in want:
                sets.append(tuple(int(v) for v in S))
                if len(sets) == len(want):
                    break
        sets = tuple(sets)
    elapsed = time.perf_counter() - start
    return SelectionResult(
        dynamics=dynamics,
        k=k,
        value=vmin,
        optimal_sets=sets,
        co_optimal_count=count,
        evaluated_count=int(total),
        elapsed_seconds=elapsed,
    )


def _evaluate_all(g: Graph, k: int, dynamics: str, kappa) -> np.ndarray:
    """Values for every size-k candidate, in lexicographic order."""
    n = g.node_count
    L = laplacian(g)

    def chunk_values(chunk):
        out = np.empty(len(chunk))
        for idx, S in enumerate(chunk):
            if dynamics == NOISE_FREE:
                keep = [v for v in range(n) if v not in S]
                out[idx] = 0.5 * spd_trace_inverse(L[np.ix_(keep, keep)])
            else:
                kvec = normalize_kappa(S, kappa)
                M = L.copy()
                for v, kv in zip(S, kvec):
                    M[v, v] += kv
                out[idx] = 0.5 * spd_trace_inverse(M)
        return out

    chunks = []
    batch = []
    for S in itertools.combinations(range(n), k):
        batch.append(S)
        if len(batch) == _CHUNK:
            chunks.append(batch)
            batch = []
    if batch:
        chunks.append(batch)
    parts = ordered_map(chunk_values, chunks)
    return np.concatenate(parts) if parts else np.empty(0)


def evaluate_candidates(g: Graph, candidates, dynamics: str = NOISE_FREE,
                        kappa=None, method: str = "trace"):
    """Evaluate explicit leader sets, sharing preprocessing where possible.

    Returns one entry per candidate, in input order: a CoherenceReport on
    success or a CandidateError carrying the validation message. A bad
    candidate never aborts the batch.
    """
    candidates = [tuple(c) for c in candidates]
    shared_oracle = None
    if method == "resistance" and dynamics == NOISE_FREE and candidates:
        shared_oracle = resistance_oracle(g)
    entries = []
    for cand in candidates:
        try:
            if dynamics == NOISE_FREE:
                if shared_oracle is not None:
                    S = normalize_leaders(g, cand)
                    value = 0.5 * float(shared_oracle.set_profile(S).sum())
                    entries.append(CoherenceReport(
                        value=value, dynamics=NOISE_FREE, method="resistance",
                        graph=f"n{g.node_count}:m{g.edge_count}", leaders=S,
                    ))
                else:
                    entries.append(coherence_nf(g, cand, method=method))
            elif dynamics == NOISE_CORRUPTED:
                entries.append(coherence_nc(g, cand, kappa=kappa, method=method))
            else:
                raise BadParameterError(f"unknown dynamics {dynamics!r}")
        except CoherenceLabError as exc:
            entries.append(CandidateError(candidate=cand, message=str(exc)))
    return entries
