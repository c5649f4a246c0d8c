"""Independent brute-force oracles and exhaustive validators.

Everything here exists to cross-check the solvers on small instances:
exact optima by base enumeration, exact expectations of the randomized
greedy by branching over every coin flip, exchange-mapping and
completion-partition witnesses, and exhaustive axiom validators.
Budgets are explicit and exceeding one raises instead of silently
sampling, so these stay trustworthy as oracles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .core import (
    ElementSet,
    InternalInvariantError,
    Matroid,
    SetFunction,
    canonical,
    contract,
    is_base,
)
from .algorithms import marginal_table, max_weight_base
from .matching import InfeasibleMatchingError, Matching, WeightedBipartiteGraph

TOLERANCE = 1e-9


class BudgetExceededError(RuntimeError):
    """An enumeration outgrew its explicit budget."""


def iter_bases(matroid: Matroid) -> Iterator[ElementSet]:
    """Yield every base in lexicographic order via oracle backtracking."""
    ground = matroid.ground
    k = matroid.rank

    def extend(prefix: list[int], start: int) -> Iterator[ElementSet]:
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for idx in range(start, len(ground)):
            if len(ground) - idx < k - len(prefix):
                break
            u = ground[idx]
            if matroid.is_independent(prefix + [u]):
                prefix.append(u)
                yield from extend(prefix, idx + 1)
                prefix.pop()

    yield from extend([], 0)


def bases_within(matroid: Matroid, limit: int) -> list[ElementSet] | None:
    """All bases if there are at most ``limit`` of them, else None."""
    bases: list[ElementSet] = []
    for base in iter_bases(matroid):
        bases.append(base)
        if len(bases) > limit:
            return None
    return bases


def brute_force_opt(
    f: SetFunction, matroid: Matroid, max_bases: int = 50_000
) -> tuple[float, ElementSet]:
    """Exact maximum of f over all bases, with a maximizing base.

    Monotonicity puts the optimum on a base, so enumerating bases is
    enough.  Raises BudgetExceededError beyond ``max_bases`` bases.
    """
    best_value: float | None = None
    witness: ElementSet | None = None
    count = 0
    for base in iter_bases(matroid):
        count += 1
        if count > max_bases:
            raise BudgetExceededError(f"more than {max_bases} bases; refusing to approximate")
        value = f(base)
        if best_value is None or value > best_value:
            best_value, witness = value, base
    if witness is None:
        raise InternalInvariantError("matroid has no base")
    return best_value, witness


@dataclass(frozen=True)
class ExpectationNode:
    """One state of the randomized greedy: the set held after ``depth`` picks."""

    depth: int
    members: ElementSet
    value: float
    probability: float
    candidates: ElementSet
    children: tuple["ExpectationNode", ...]


@dataclass(frozen=True)
class ExpectationLeaf:
    """A possible final set with its value and total probability."""

    members: ElementSet
    value: float
    probability: float


@dataclass(frozen=True)
class ExpectationTree:
    """Full branching record of the randomized greedy on one instance.

    ``leaves`` aggregates the reachable final sets: distinct paths ending
    in the same set are merged and their path probabilities summed.
    """

    rank: int
    root: ExpectationNode
    leaves: tuple[ExpectationLeaf, ...]
    level_expectations: tuple[float, ...]

    @property
    def expected_value(self) -> float:
        return self.level_expectations[-1]


def rr_greedy_exact_expectation(
    f: SetFunction, matroid: Matroid, max_leaves: int = 100_000
) -> tuple[float, ExpectationTree]:
    """Exact E[f(final set)] of the randomized greedy, by full enumeration.

    Every uniform draw is branched on with its probability, which also
    yields the exact expectation of the intermediate values after each
    iteration (``level_expectations``).
    """
    k = matroid.rank
    if math.factorial(k) > max_leaves:
        raise BudgetExceededError(f"expectation tree would have {math.factorial(k)} leaves")
    outcomes: dict[ElementSet, tuple[float, float]] = {}  # members -> (value, probability)
    levels = [0.0] * (k + 1)

    def expand(members: ElementSet, depth: int, probability: float) -> ExpectationNode:
        value = f(members)
        levels[depth] += probability * value
        if depth == k:
            seen = outcomes.get(members)
            outcomes[members] = (value, probability if seen is None else seen[1] + probability)
            return ExpectationNode(depth, members, value, probability, (), ())
        residual = contract(matroid, members)
        gains = marginal_table(f, members, residual.ground)
        candidates = max_weight_base(residual, gains)
        share = probability / len(candidates)
        children = tuple(
            expand(canonical(members + (u,)), depth + 1, share) for u in candidates
        )
        return ExpectationNode(depth, members, value, probability, candidates, children)

    root = expand((), 0, 1.0)
    leaves = tuple(
        ExpectationLeaf(members, value, probability)
        for members, (value, probability) in sorted(outcomes.items())
    )
    tree = ExpectationTree(k, root, leaves, tuple(levels))
    return tree.expected_value, tree


@dataclass(frozen=True)
class BijectionWitness:
    """A bijection u -> h(u) between two bases, stored as sorted pairs."""

    pairs: tuple[tuple[int, int], ...]

    def mapping(self) -> dict[int, int]:
        return dict(self.pairs)


def exchange_bijection(
    a: Iterable[int],
    b: Iterable[int],
    weights: Mapping[int, float] | Sequence[float],
    matroid: Matroid,
) -> BijectionWitness:
    """Build a weight-dominating exchange bijection from base ``a`` onto ``b``.

    ``a`` must be a maximum-weight base.  The construction peels off a
    minimum-weight element u of ``a``, pairs it with itself when it also
    lies in ``b`` or else with the first element of ``b`` (ascending id)
    that supports a two-sided exchange, then recurses on the contraction.
    """
    first = canonical(a, matroid.n)
    second = canonical(b, matroid.n)
    if not is_base(matroid, first) or not is_base(matroid, second):
        raise ValueError("both arguments must be bases")
    reference = max_weight_base(matroid, weights)
    if sum(weights[u] for u in first) < sum(weights[u] for u in reference) - TOLERANCE:
        raise ValueError("first base is not of maximum weight")

    pairs: list[tuple[int, int]] = []
    current = matroid
    rest_a = list(first)
    rest_b = list(second)
    while rest_a:
        u_a = min(rest_a, key=lambda u: (weights[u], u))
        if u_a in rest_b:
            u_b = u_a
        else:
            u_b = None
            shrunk_a = [x for x in rest_a if x != u_a]
            for candidate in sorted(set(rest_b) - set(rest_a)):
                if is_base(current, shrunk_a + [candidate]) and is_base(
                    current, [x for x in rest_b if x != candidate] + [u_a]
                ):
                    u_b = candidate
                    break
            if u_b is None:
                raise InternalInvariantError(
                    "no exchange partner exists; the independence oracle is inconsistent"
                )
        pairs.append((u_a, u_b))
        current = contract(current, (u_b,))
        rest_a.remove(u_a)
        rest_b.remove(u_b)
    return BijectionWitness(pairs=tuple(sorted(pairs)))


def verify_exchange_bijection(
    witness: BijectionWitness,
    a: Iterable[int],
    b: Iterable[int],
    weights: Mapping[int, float] | Sequence[float],
    matroid: Matroid,
) -> bool:
    """Re-check both witness properties with raw oracle calls."""
    first = canonical(a, matroid.n)
    second = canonical(b, matroid.n)
    mapping = witness.mapping()
    if sorted(mapping) != list(first):
        return False
    if sorted(mapping.values()) != list(second):
        return False
    b_set = set(second)
    for u, v in witness.pairs:
        if weights[u] < weights[v]:
            return False
        if not is_base(matroid, (b_set - {v}) | {u}):
            return False
    return True


def split_partition_witness(
    a: Iterable[int],
    b: Iterable[int],
    t: Iterable[int],
    f: SetFunction,
    matroid: Matroid,
    tolerance: float = TOLERANCE,
) -> tuple[ElementSet, ElementSet]:
    """Partition base ``t`` into halves that complete ``a`` and ``b`` to bases.

    Searches subsets of ``t`` by ascending size then lexicographic order
    for a partition (t_a, t_b) such that a + t_a and b + t_b are bases and
    completing either half recovers at least the value of ``t``:
    f(a) + f(a + t_a) >= f(t) and f(b) + f(b + t_b) >= f(t).
    """
    side_a = canonical(a, matroid.n)
    side_b = canonical(b, matroid.n)
    target = canonical(t, matroid.n)
    union = set(side_a) | set(side_b)
    if len(union) != len(side_a) + len(side_b) or not is_base(matroid, union):
        raise ValueError("the first two arguments must be disjoint with a base as union")
    if not is_base(matroid, target):
        raise ValueError("the third argument must be a base")
    value_t = f(target)
    value_a = f(side_a)
    value_b = f(side_b)
    target_set = set(target)
    for size in range(len(target) + 1):
        for picked in itertools.combinations(target, size):
            t_a = set(picked)
            t_b = target_set - t_a
            grown_a = set(side_a) | t_a
            grown_b = set(side_b) | t_b
            if not is_base(matroid, grown_a) or not is_base(matroid, grown_b):
                continue
            if (
                value_a + f(grown_a) >= value_t - tolerance
                and value_b + f(grown_b) >= value_t - tolerance
            ):
                return canonical(picked), canonical(t_b)
    raise InternalInvariantError("no completion partition found; the oracles are inconsistent")


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    checked: int
    violations: tuple[str, ...]


def _mask_members(mask: int) -> tuple[int, ...]:
    members = []
    u = 0
    while mask:
        if mask & 1:
            members.append(u)
        mask >>= 1
        u += 1
    return tuple(members)


def validate_monotone_submodular(
    f: SetFunction,
    n: int | None = None,
    tolerance: float = TOLERANCE,
    max_violations: int = 20,
) -> ValidationReport:
    """Exhaustively check monotonicity and diminishing marginals.

    Checks f(S) <= f(T) and f(u|S) >= f(u|T) for every S subset of T and
    every u outside T.  Violations are reported, not raised.
    """
    size = f.n if n is None else n
    if size > 10:
        raise ValueError("exhaustive validation is limited to n <= 10")
    values = [f(_mask_members(mask)) for mask in range(1 << size)]
    violations: list[str] = []
    checked = 0
    for t_mask in range(1 << size):
        outside = [u for u in range(size) if not t_mask & (1 << u)]
        sub = t_mask
        while True:
            checked += 1
            if values[sub] > values[t_mask] + tolerance and len(violations) < max_violations:
                violations.append(
                    f"monotonicity: f({_mask_members(sub)}) > f({_mask_members(t_mask)})"
                )
            for u in outside:
                bit = 1 << u
                small_gain = values[sub | bit] - values[sub]
                large_gain = values[t_mask | bit] - values[t_mask]
                if small_gain < large_gain - tolerance and len(violations) < max_violations:
                    violations.append(
                        f"submodularity: marginal of {u} grows from {_mask_members(sub)} "
                        f"to {_mask_members(t_mask)}"
                    )
            if sub == 0:
                break
            sub = (sub - 1) & t_mask
    return ValidationReport(ok=not violations, checked=checked, violations=tuple(violations))


def validate_matroid_axioms(
    matroid: Matroid,
    n: int | None = None,
    max_violations: int = 20,
) -> ValidationReport:
    """Exhaustively check non-emptiness, downward closure and exchange."""
    ground = matroid.ground
    size = len(ground)
    if size > 10:
        raise ValueError("exhaustive validation is limited to n <= 10")
    independent = [
        matroid.is_independent([ground[i] for i in range(size) if mask & (1 << i)])
        for mask in range(1 << size)
    ]
    violations: list[str] = []
    checked = 1
    if not independent[0]:
        violations.append("non-emptiness: the empty set is dependent")

    extenders = [0] * (1 << size)
    independent_masks = []
    for mask in range(1 << size):
        if not independent[mask]:
            continue
        independent_masks.append(mask)
        ext = 0
        for i in range(size):
            bit = 1 << i
            if not mask & bit and independent[mask | bit]:
                ext |= bit
        extenders[mask] = ext

    for mask in independent_masks:
        for i in range(size):
            bit = 1 << i
            if mask & bit:
                checked += 1
                if not independent[mask ^ bit] and len(violations) < max_violations:
                    violations.append(
                        f"downward closure: {_mask_members(mask ^ bit)} dependent inside "
                        f"independent {_mask_members(mask)}"
                    )

    by_size: dict[int, list[int]] = {}
    for mask in independent_masks:
        by_size.setdefault(bin(mask).count("1"), []).append(mask)
    for small_size, small_masks in by_size.items():
        for large_size, large_masks in by_size.items():
            if large_size <= small_size:
                continue
            for s_mask in small_masks:
                ext = extenders[s_mask]
                for t_mask in large_masks:
                    checked += 1
                    if not (t_mask & ~s_mask) & ext and len(violations) < max_violations:
                        violations.append(
                            f"exchange: {_mask_members(s_mask)} cannot grow into "
                            f"{_mask_members(t_mask)}"
                        )
    return ValidationReport(ok=not violations, checked=checked, violations=tuple(violations))


def brute_force_perfect_matching(graph: WeightedBipartiteGraph) -> Matching:
    """Factorial-time reference for the matching solver (small graphs only)."""
    if graph.left_size != graph.right_size:
        raise ValueError("perfect matching requires a square graph")
    k = graph.left_size
    if math.factorial(k) > 100_000:
        raise BudgetExceededError("too many permutations for the brute-force matcher")
    lookup: dict[tuple[int, int], tuple[float, int]] = {}
    for left, right, weight, payload in graph.edges:
        lookup[(left, right)] = (weight, payload)
    best: tuple[float, tuple[int, ...]] | None = None
    for assignment in itertools.permutations(range(k)):
        total = 0.0
        for left, right in enumerate(assignment):
            entry = lookup.get((left, right))
            if entry is None:
                break
            total += entry[0]
        else:
            if best is None or total > best[0]:
                best = (total, assignment)
    if best is None:
        raise InfeasibleMatchingError("graph has no perfect matching")
    total, assignment = best
    pairs = []
    for left, right in enumerate(assignment):
        weight, payload = lookup[(left, right)]
        pairs.append((right, left, payload, weight))
    return Matching(pairs=tuple(sorted(pairs)), total_weight=total)
