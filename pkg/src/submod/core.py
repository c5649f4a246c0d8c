"""Oracle contracts for set functions and matroids.

Ground sets are indexed 0..n-1.  Element sets are canonical ascending
tuples, so set equality is representation equality, hashing works, and
iteration order is deterministic everywhere.  Every oracle call goes
through a shared counter so query complexity can be measured exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

ElementSet = tuple[int, ...]


class InternalInvariantError(RuntimeError):
    """A structural guarantee that should hold by construction was violated."""


def canonical(elements: Iterable[int], n: int | None = None) -> ElementSet:
    """Return the canonical ascending tuple of distinct element ids.

    When ``n`` is given, ids outside [0, n) raise ``ValueError``.
    """
    members = tuple(sorted(set(elements)))
    if n is not None and members and (members[0] < 0 or members[-1] >= n):
        bad = members[0] if members[0] < 0 else members[-1]
        raise ValueError(f"element {bad} out of range for ground set of size {n}")
    return members


@dataclass
class OracleCounts:
    """Running totals of value and independence oracle calls."""

    value_queries: int = 0
    independence_queries: int = 0

    def snapshot(self) -> "OracleCounts":
        return OracleCounts(self.value_queries, self.independence_queries)

    def since(self, earlier: "OracleCounts") -> "OracleCounts":
        return OracleCounts(
            self.value_queries - earlier.value_queries,
            self.independence_queries - earlier.independence_queries,
        )

    def to_dict(self) -> dict[str, int]:
        return {
            "value_queries": self.value_queries,
            "independence_queries": self.independence_queries,
        }


class SetFunction:
    """Value oracle for a set function on ground set {0..n-1}.

    Calling the oracle with any iterable of element ids canonicalizes the
    set, bumps the shared counter by exactly one, and evaluates.  The
    object is immutable apart from the counter, so a single function may
    be shared by concurrent runs that own separate counters.
    """

    def __init__(
        self,
        n: int,
        evaluate: Callable[[ElementSet], float],
        counts: OracleCounts | None = None,
    ):
        if n < 0:
            raise ValueError("ground set size must be non-negative")
        self.n = n
        self._evaluate = evaluate
        self.counts = counts if counts is not None else OracleCounts()

    @property
    def queries(self) -> int:
        return self.counts.value_queries

    def __call__(self, elements: Iterable[int]) -> float:
        members = canonical(elements, self.n)
        self.counts.value_queries += 1
        return self._evaluate(members)


class Matroid:
    """Independence oracle for a matroid whose active ground set is ``ground``.

    ``n`` is the size of the original index space; contractions shrink
    ``ground`` but keep ``n`` so element ids stay globally meaningful.
    Rank 0 is legal for contractions; concrete instance families reject it.
    """

    def __init__(
        self,
        n: int,
        is_independent: Callable[[ElementSet], bool],
        rank: int,
        counts: OracleCounts | None = None,
        ground: Iterable[int] | None = None,
    ):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        self.n = n
        self._is_independent = is_independent
        self.rank = rank
        self.counts = counts if counts is not None else OracleCounts()
        self.ground = canonical(range(n) if ground is None else ground, n)
        self._ground_set = frozenset(self.ground)

    @property
    def queries(self) -> int:
        return self.counts.independence_queries

    def is_independent(self, elements: Iterable[int]) -> bool:
        members = canonical(elements, self.n)
        for u in members:
            if u not in self._ground_set:
                raise ValueError(f"element {u} is not in the matroid ground set")
        self.counts.independence_queries += 1
        return bool(self._is_independent(members))


def marginal_function(f: SetFunction, base_set: Iterable[int]) -> SetFunction:
    """The function S -> f(S | base_set), counted on f's counter.

    f(base_set) is evaluated lazily on the first call and cached, so each
    later evaluation costs exactly one fresh oracle query.
    """
    anchored = canonical(base_set, f.n)
    anchored_set = set(anchored)
    cache: list[float] = []

    def shifted(members: ElementSet) -> float:
        if not cache:
            f.counts.value_queries += 1
            cache.append(f._evaluate(anchored))
        merged = canonical(anchored_set.union(members))
        return f._evaluate(merged) - cache[0]

    return SetFunction(f.n, shifted, counts=f.counts)


def contract(matroid: Matroid, independent_set: Iterable[int]) -> Matroid:
    """The matroid on ground \\ A where S is independent iff S + A was."""
    contracted = canonical(independent_set, matroid.n)
    if not matroid.is_independent(contracted):
        raise ValueError("cannot contract a dependent set")
    away = frozenset(contracted)

    def shifted(members: ElementSet) -> bool:
        return matroid._is_independent(canonical(away.union(members)))

    return Matroid(
        matroid.n,
        shifted,
        matroid.rank - len(contracted),
        counts=matroid.counts,
        ground=tuple(u for u in matroid.ground if u not in away),
    )


def is_base(matroid: Matroid, elements: Iterable[int]) -> bool:
    """True iff the set is independent and of full rank."""
    members = canonical(elements, matroid.n)
    return len(members) == matroid.rank and matroid.is_independent(members)
