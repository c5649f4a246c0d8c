"""Greedy solvers for monotone submodular maximization under a matroid.

The headline solver splits a base into two halves with a biased greedy
sweep, grows each half back to a full base on the contracted matroid, and
keeps the better of the two.  With the growing step done by the
matching-coupled parallel greedy the whole pipeline is deterministic and
guarantees strictly more than half of the optimum (0.5008 at x = 0.9).

All argmax ties break toward the smallest element id, so every
deterministic routine here has exactly one possible output per input.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import (
    ElementSet,
    InternalInvariantError,
    Matroid,
    OracleCounts,
    SetFunction,
    canonical,
    contract,
    is_base,
    marginal_function,
)
from .matching import (
    InfeasibleMatchingError,
    WeightedBipartiteGraph,
    max_weight_perfect_matching,
)

ALGORITHMS = ("greedy", "split", "rrgreedy", "rpgreedy", "msg", "msg-det")
DEFAULT_X = 0.9


def gain_curve(x: float) -> float:
    """x - x^2/2, the progress curve of the residual greedy sweep."""
    return x - x * x / 2.0


@dataclass(frozen=True)
class Parameters:
    """Derived run parameters: split bias and worst-case guarantee."""

    x: float
    g_x: float
    beta: float
    p: float
    w_beta: float
    bound: float

    def to_dict(self) -> dict[str, float]:
        return {
            "x": self.x,
            "g_x": self.g_x,
            "beta": self.beta,
            "p": self.p,
            "w_beta": self.w_beta,
            "bound": self.bound,
        }


def parameters(x: float) -> Parameters:
    """Compute the closed-form parameter chain for a mixing point x in [0, 1).

    x = 1 is rejected because the beta formula degenerates to 0/0 there.
    """
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    g_x = gain_curve(x)
    beta = (2.0 - x - 2.0 * g_x) / (4.0 - 3.0 * x - 2.0 * g_x)
    if not 0.2 <= beta <= 0.8:
        raise ValueError(f"derived beta {beta} falls outside the admissible range [1/5, 4/5]")
    root = math.sqrt((1.0 - beta) * beta)
    p = beta / (beta + root)
    w_beta = (2.0 / 3.0) * (1.0 - root)
    bound = (1.0 + g_x + (4.0 - 3.0 * x - 2.0 * g_x) * w_beta) / (5.0 - 2.0 * x)
    return Parameters(x=x, g_x=g_x, beta=beta, p=p, w_beta=w_beta, bound=bound)


@dataclass(frozen=True)
class SplitResult:
    """Two disjoint sets whose union is a base."""

    a: ElementSet
    b: ElementSet


@dataclass
class RunReport:
    algorithm: str
    solution: ElementSet
    value: float
    counts: OracleCounts
    parameters: Parameters | None = None
    seed: int | None = None
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "solution": list(self.solution),
            "value": self.value,
            "counts": self.counts.to_dict(),
            "parameters": None if self.parameters is None else self.parameters.to_dict(),
            "seed": self.seed,
            "elapsed": self.elapsed,
        }


def marginal_table(
    f: SetFunction, anchored: Iterable[int], candidates: Iterable[int]
) -> dict[int, float]:
    """Map each candidate u to f(u | anchored), one oracle query per entry."""
    shifted = marginal_function(f, anchored)
    return {u: shifted((u,)) for u in candidates}


def _argmax_by_id(candidates: Iterable[int], gains: Mapping[int, float]) -> int:
    return max(candidates, key=lambda u: (gains[u], -u))


def max_weight_base(matroid: Matroid, weights: Mapping[int, float] | Sequence[float]) -> ElementSet:
    """Greedy maximum-weight base: descending weight, ascending id scan."""
    order = sorted(matroid.ground, key=lambda u: (-weights[u], u))
    chosen: list[int] = []
    for u in order:
        if len(chosen) == matroid.rank:
            break
        if matroid.is_independent(chosen + [u]):
            chosen.append(u)
    if len(chosen) != matroid.rank:
        raise InternalInvariantError("independence oracle did not extend to a full base")
    return canonical(chosen)


def _feasible_pool(matroid: Matroid, used: set[int]) -> list[int]:
    """Elements that can extend ``used`` while staying independent."""
    base = sorted(used)
    return [
        u
        for u in matroid.ground
        if u not in used and matroid.is_independent(base + [u])
    ]


def classical_greedy(f: SetFunction, matroid: Matroid) -> ElementSet:
    """Plain greedy: repeatedly add the feasible element of largest marginal."""
    chosen: list[int] = []
    chosen_set: set[int] = set()
    for _ in range(matroid.rank):
        pool = _feasible_pool(matroid, chosen_set)
        if not pool:
            raise InternalInvariantError("greedy ran out of feasible elements before a base")
        gains = marginal_table(f, chosen, pool)
        best = _argmax_by_id(pool, gains)
        chosen.append(best)
        chosen_set.add(best)
    return canonical(chosen)


def split(f: SetFunction, matroid: Matroid, p: float) -> SplitResult:
    """Partition a base into two disjoint halves with a p-biased greedy sweep.

    Each iteration scans the elements that can still extend the union, takes
    the best marginal candidate relative to each half, and routes the winner
    of ``p * gain_a >= (1 - p) * gain_b`` to the first half (ties included).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    side_a: list[int] = []
    side_b: list[int] = []
    used: set[int] = set()
    for _ in range(matroid.rank):
        pool = _feasible_pool(matroid, used)
        if not pool:
            raise InternalInvariantError("split ran out of feasible elements before a base")
        gains_a = marginal_table(f, side_a, pool)
        gains_b = marginal_table(f, side_b, pool)
        u_a = _argmax_by_id(pool, gains_a)
        u_b = _argmax_by_id(pool, gains_b)
        if p * gains_a[u_a] >= (1.0 - p) * gains_b[u_b]:
            side_a.append(u_a)
            used.add(u_a)
        else:
            side_b.append(u_b)
            used.add(u_b)
    return SplitResult(a=canonical(side_a), b=canonical(side_b))


def rr_greedy(f: SetFunction, matroid: Matroid, rng_seed: int) -> ElementSet:
    """Residual random greedy: draw uniformly from the best residual base.

    Each iteration recomputes the maximum-marginal-weight base of the
    matroid contracted by the current solution and adds one of its elements
    uniformly at random.  Reproducible: the same seed yields the same set.
    """
    rng = random.Random(rng_seed)
    current: ElementSet = ()
    for _ in range(matroid.rank):
        residual = contract(matroid, current)
        gains = marginal_table(f, current, residual.ground)
        candidate_base = max_weight_base(residual, gains)
        pick = candidate_base[rng.randrange(len(candidate_base))]
        current = canonical(current + (pick,))
    return current


def rp_greedy(f: SetFunction, matroid: Matroid, residue: Iterable[int]) -> ElementSet:
    """Deterministic residual greedy coupling k parallel solutions.

    ``residue`` must be a base.  Every solution j keeps a shrinking copy of
    it; per iteration a bipartite graph pairs residue elements with
    solutions (an edge means the swap keeps solution + residue a base and
    does not decrease the marginal), and a maximum-weight perfect matching
    decides simultaneously which element each solution gains and which
    residue element it gives up.  Returns the best final solution.
    """
    base = canonical(residue, matroid.n)
    if not is_base(matroid, base):
        raise ValueError("residue argument must be a base of the matroid")
    k = matroid.rank
    if k == 0:
        return ()
    left_of = {v: idx for idx, v in enumerate(base)}
    solutions: list[ElementSet] = [() for _ in range(k)]
    residues: list[set[int]] = [set(base) for _ in range(k)]

    for _ in range(k):
        tables: list[dict[int, float]] = []
        candidates: list[ElementSet] = []
        for j in range(k):
            residual = contract(matroid, solutions[j])
            gains = marginal_table(f, solutions[j], residual.ground)
            tables.append(gains)
            candidates.append(max_weight_base(residual, gains))

        graph = WeightedBipartiteGraph(k, k)
        for j in range(k):
            gains = tables[j]
            grown = set(solutions[j])
            for u in candidates[j]:
                gain_u = gains[u]
                for v in sorted(residues[j]):
                    if gain_u >= gains[v] and is_base(matroid, (grown | {u}) | (residues[j] - {v})):
                        graph.add_edge(left_of[v], j, gain_u, payload=u)
        try:
            matching = max_weight_perfect_matching(graph)
        except InfeasibleMatchingError as exc:
            raise InternalInvariantError(
                "exchange graph lost its perfect matching; the oracles are inconsistent"
            ) from exc

        for right, left, gained, _weight in matching.pairs:
            solutions[right] = canonical(solutions[right] + (gained,))
            residues[right].remove(base[left])

    best = solutions[0]
    best_value = f(best)
    for j in range(1, k):
        value = f(solutions[j])
        if value > best_value:
            best, best_value = solutions[j], value
    return best


def _counts_delta(
    f: SetFunction, matroid: Matroid, v0: int, i0: int
) -> OracleCounts:
    return OracleCounts(
        f.counts.value_queries - v0,
        matroid.counts.independence_queries - i0,
    )


def split_and_grow(
    f: SetFunction,
    matroid: Matroid,
    x: float = DEFAULT_X,
    rng_seed: int = 0,
    p: float | None = None,
) -> RunReport:
    """Randomized split-and-grow: split, then grow each half randomly.

    The two growing runs use seeds ``rng_seed`` and ``rng_seed + 1``.
    Rank-1 problems should go through :func:`solve`, which answers them by
    exhaustive search.
    """
    started = time.perf_counter()
    v0, i0 = f.counts.value_queries, matroid.counts.independence_queries
    params = parameters(x)
    use_p = params.p if p is None else p
    if matroid.rank < 2:
        raise ValueError("split-and-grow needs rank >= 2; use solve() for rank-1 problems")
    half = split(f, matroid, use_p)
    grown_a = rr_greedy(marginal_function(f, half.a), contract(matroid, half.a), rng_seed)
    grown_b = rr_greedy(marginal_function(f, half.b), contract(matroid, half.b), rng_seed + 1)
    first = canonical(half.a + grown_a)
    second = canonical(half.b + grown_b)
    value_first = f(first)
    value_second = f(second)
    if value_first >= value_second:
        solution, value = first, value_first
    else:
        solution, value = second, value_second
    return RunReport(
        algorithm="msg",
        solution=solution,
        value=value,
        counts=_counts_delta(f, matroid, v0, i0),
        parameters=params,
        seed=rng_seed,
        elapsed=time.perf_counter() - started,
    )


def split_and_grow_deterministic(
    f: SetFunction,
    matroid: Matroid,
    x: float = DEFAULT_X,
    p: float | None = None,
) -> RunReport:
    """Deterministic split-and-grow: grow each half with the parallel greedy.

    Each half is completed on the contracted matroid using the other half
    as the residue base, so the whole run is deterministic and the output
    is a base.
    """
    started = time.perf_counter()
    v0, i0 = f.counts.value_queries, matroid.counts.independence_queries
    params = parameters(x)
    use_p = params.p if p is None else p
    if matroid.rank < 2:
        raise ValueError("split-and-grow needs rank >= 2; use solve() for rank-1 problems")
    half = split(f, matroid, use_p)
    grown_a = rp_greedy(marginal_function(f, half.a), contract(matroid, half.a), half.b)
    grown_b = rp_greedy(marginal_function(f, half.b), contract(matroid, half.b), half.a)
    first = canonical(half.a + grown_a)
    second = canonical(half.b + grown_b)
    value_first = f(first)
    value_second = f(second)
    if value_first >= value_second:
        solution, value = first, value_first
    else:
        solution, value = second, value_second
    return RunReport(
        algorithm="msg-det",
        solution=solution,
        value=value,
        counts=_counts_delta(f, matroid, v0, i0),
        parameters=params,
        elapsed=time.perf_counter() - started,
    )


def _best_singleton(f: SetFunction, matroid: Matroid) -> ElementSet:
    best: ElementSet | None = None
    best_value = -math.inf
    for u in matroid.ground:
        if matroid.is_independent((u,)):
            value = f((u,))
            if value > best_value:
                best, best_value = (u,), value
    if best is None:
        raise InternalInvariantError("rank-1 matroid without an independent singleton")
    return best


def solve(
    f: SetFunction,
    matroid: Matroid,
    algorithm: str,
    x: float = DEFAULT_X,
    p: float | None = None,
    seed: int = 0,
) -> RunReport:
    """Dispatch to a solver by name; rank-1 problems are solved exhaustively.

    Algorithm names: greedy, split, rrgreedy, rpgreedy, msg, msg-det.
    ``p=None`` means derive the split bias from x.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose one of {', '.join(ALGORITHMS)}")
    if p is not None and not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if matroid.rank < 1:
        raise ValueError("solve needs a matroid of rank >= 1")

    started = time.perf_counter()
    v0, i0 = f.counts.value_queries, matroid.counts.independence_queries

    if matroid.rank == 1:
        solution = _best_singleton(f, matroid)  # no randomness on the exhaustive path
        params = None
        used_seed = None
    elif algorithm == "msg":
        return split_and_grow(f, matroid, x=x, rng_seed=seed, p=p)
    elif algorithm == "msg-det":
        return split_and_grow_deterministic(f, matroid, x=x, p=p)
    elif algorithm == "greedy":
        solution = classical_greedy(f, matroid)
        params = None
        used_seed = None
    elif algorithm == "split":
        params = parameters(x)
        half = split(f, matroid, params.p if p is None else p)
        solution = canonical(half.a + half.b)  # the full base assembled by the sweep
        used_seed = None
    elif algorithm == "rrgreedy":
        solution = rr_greedy(f, matroid, seed)
        params = None
        used_seed = seed
    else:  # rpgreedy, seeded with the lexicographically first base as residue
        residue = max_weight_base(matroid, [0.0] * matroid.n)
        solution = rp_greedy(f, matroid, residue)
        params = None
        used_seed = None

    value = f(solution)
    return RunReport(
        algorithm=algorithm,
        solution=solution,
        value=value,
        counts=_counts_delta(f, matroid, v0, i0),
        parameters=params,
        seed=used_seed,
        elapsed=time.perf_counter() - started,
    )
