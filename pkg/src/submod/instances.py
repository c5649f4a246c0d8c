"""Concrete matroid and function families plus instance (de)serialization.

Instance files are self-describing JSON documents with top-level keys
``{n, matroid, function, label}``.  Weights are kept as integers wherever
possible so different algorithms can be compared exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterator

from .core import Matroid, OracleCounts, SetFunction

MATROID_KINDS = ("uniform", "partition", "graphic")
FUNCTION_KINDS = ("modular", "coverage", "weighted_coverage", "concave_of_modular")


class InstanceFormatError(ValueError):
    """Raised when an instance document is malformed or inconsistent."""


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the two classes; False when a and b already share one."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class MatroidSpec:
    kind: str
    k: int | None = None
    parts: tuple[tuple[int, ...], ...] | None = None
    capacities: tuple[int, ...] | None = None
    num_vertices: int | None = None
    edges: tuple[tuple[int, int], ...] | None = None

    def validate(self, n: int) -> None:
        if self.kind == "uniform":
            if self.k is None or not 1 <= self.k <= n:
                raise InstanceFormatError(f"matroid.k must lie in [1, {n}], got {self.k}")
        elif self.kind == "partition":
            if self.parts is None or self.capacities is None:
                raise InstanceFormatError("partition matroid needs matroid.parts and matroid.capacities")
            if len(self.parts) != len(self.capacities):
                raise InstanceFormatError(
                    f"matroid.capacities has {len(self.capacities)} entries for {len(self.parts)} parts"
                )
            seen: set[int] = set()
            for i, part in enumerate(self.parts):
                if not part:
                    raise InstanceFormatError(f"matroid.parts[{i}] is empty")
                for u in part:
                    if not 0 <= u < n:
                        raise InstanceFormatError(f"matroid.parts[{i}] contains out-of-range element {u}")
                    if u in seen:
                        raise InstanceFormatError(f"element {u} appears in two parts")
                    seen.add(u)
            if len(seen) != n:
                raise InstanceFormatError("matroid.parts must cover every element exactly once")
            for i, (part, cap) in enumerate(zip(self.parts, self.capacities)):
                if not 0 <= cap <= len(part):
                    raise InstanceFormatError(f"matroid.capacities[{i}]={cap} outside [0, {len(part)}]")
            if sum(self.capacities) < 1:
                raise InstanceFormatError("partition matroid rank must be at least 1")
        elif self.kind == "graphic":
            if self.num_vertices is None or self.num_vertices < 1:
                raise InstanceFormatError("matroid.num_vertices must be a positive integer")
            if self.edges is None or len(self.edges) != n:
                got = None if self.edges is None else len(self.edges)
                raise InstanceFormatError(f"matroid.edges must list {n} edges, got {got}")
            for i, edge in enumerate(self.edges):
                if len(edge) != 2 or not all(0 <= v < self.num_vertices for v in edge):
                    raise InstanceFormatError(f"matroid.edges[{i}]={edge} is not a valid vertex pair")
            if self.rank(n) < 1:
                raise InstanceFormatError("graphic matroid rank must be at least 1")
        else:
            raise InstanceFormatError(f"unknown matroid kind {self.kind!r}")

    def rank(self, n: int) -> int:
        if self.kind == "uniform":
            return int(self.k)  # type: ignore[arg-type]
        if self.kind == "partition":
            return sum(self.capacities)  # type: ignore[arg-type]
        uf = _UnionFind(int(self.num_vertices))  # type: ignore[arg-type]
        components = int(self.num_vertices)  # type: ignore[arg-type]
        for a, b in self.edges:  # type: ignore[union-attr]
            if a != b and uf.union(a, b):
                components -= 1
        return int(self.num_vertices) - components  # type: ignore[arg-type]


@dataclass(frozen=True)
class FunctionSpec:
    kind: str
    weights: tuple[float, ...] | None = None
    universe_weights: tuple[float, ...] | None = None
    covers: tuple[tuple[int, ...], ...] | None = None
    exponent: float | None = None

    def validate(self, n: int) -> None:
        if self.kind in ("modular", "concave_of_modular"):
            if self.weights is None or len(self.weights) != n:
                got = None if self.weights is None else len(self.weights)
                raise InstanceFormatError(f"function.weights must list {n} values, got {got}")
            if any(w < 0 for w in self.weights):
                raise InstanceFormatError("function.weights must be non-negative")
            if self.kind == "concave_of_modular":
                if self.exponent is None or not 0 < self.exponent <= 1:
                    raise InstanceFormatError(f"function.exponent must lie in (0, 1], got {self.exponent}")
        elif self.kind in ("coverage", "weighted_coverage"):
            if self.universe_weights is None:
                raise InstanceFormatError("function.universe_weights is required for coverage functions")
            if any(w < 0 for w in self.universe_weights):
                raise InstanceFormatError("function.universe_weights must be non-negative")
            if self.covers is None or len(self.covers) != n:
                got = None if self.covers is None else len(self.covers)
                raise InstanceFormatError(f"function.covers must list {n} subsets, got {got}")
            m = len(self.universe_weights)
            for i, cover in enumerate(self.covers):
                for item in cover:
                    if not 0 <= item < m:
                        raise InstanceFormatError(f"function.covers[{i}] references unknown universe item {item}")
        else:
            raise InstanceFormatError(f"unknown function kind {self.kind!r}")


@dataclass(frozen=True)
class Instance:
    n: int
    matroid: MatroidSpec
    function: FunctionSpec
    label: str = ""

    def validate(self) -> None:
        if self.n < 1:
            raise InstanceFormatError("n must be a positive integer")
        self.matroid.validate(self.n)
        self.function.validate(self.n)

    @property
    def rank(self) -> int:
        return self.matroid.rank(self.n)


def build(instance: Instance) -> tuple[SetFunction, Matroid]:
    """Realize the instance as a (value oracle, independence oracle) pair.

    Both oracles share one counter so a run's total query footprint can be
    read off a single object.
    """
    instance.validate()
    counts = OracleCounts()
    n = instance.n

    fspec = instance.function
    if fspec.kind == "modular":
        weights = fspec.weights

        def evaluate(members):
            return float(sum(weights[u] for u in members))

    elif fspec.kind == "concave_of_modular":
        weights = fspec.weights
        gamma = float(fspec.exponent)

        def evaluate(members):
            return float(sum(weights[u] for u in members)) ** gamma

    else:
        universe = fspec.universe_weights
        masks = tuple(
            sum(1 << item for item in set(cover)) for cover in fspec.covers
        )

        def evaluate(members):
            covered = 0
            for u in members:
                covered |= masks[u]
            total = 0.0
            item = 0
            while covered:
                if covered & 1:
                    total += universe[item]
                covered >>= 1
                item += 1
            return total

    f = SetFunction(n, evaluate, counts=counts)

    mspec = instance.matroid
    rank = mspec.rank(n)
    if mspec.kind == "uniform":
        k = int(mspec.k)

        def independent(members):
            return len(members) <= k

    elif mspec.kind == "partition":
        part_of = [0] * n
        for i, part in enumerate(mspec.parts):
            for u in part:
                part_of[u] = i
        caps = mspec.capacities

        def independent(members):
            used = [0] * len(caps)
            for u in members:
                i = part_of[u]
                used[i] += 1
                if used[i] > caps[i]:
                    return False
            return True

    else:
        edges = mspec.edges
        num_vertices = int(mspec.num_vertices)

        def independent(members):
            uf = _UnionFind(num_vertices)
            for u in members:
                a, b = edges[u]
                if a == b or not uf.union(a, b):
                    return False
            return True

    matroid = Matroid(n, independent, rank, counts=counts)
    return f, matroid


def _spec_to_dict(instance: Instance) -> dict:
    m: dict = {"kind": instance.matroid.kind}
    if instance.matroid.kind == "uniform":
        m["k"] = instance.matroid.k
    elif instance.matroid.kind == "partition":
        m["parts"] = [list(p) for p in instance.matroid.parts]
        m["capacities"] = list(instance.matroid.capacities)
    else:
        m["num_vertices"] = instance.matroid.num_vertices
        m["edges"] = [list(e) for e in instance.matroid.edges]
    fdoc: dict = {"kind": instance.function.kind}
    if instance.function.kind in ("modular", "concave_of_modular"):
        fdoc["weights"] = list(instance.function.weights)
        if instance.function.kind == "concave_of_modular":
            fdoc["exponent"] = instance.function.exponent
    else:
        fdoc["universe_weights"] = list(instance.function.universe_weights)
        fdoc["covers"] = [list(c) for c in instance.function.covers]
    return {"n": instance.n, "label": instance.label, "matroid": m, "function": fdoc}


def _require(doc: dict, field: str, context: str):
    if field not in doc:
        raise InstanceFormatError(f"missing field {context}.{field}" if context else f"missing field {field}")
    return doc[field]


def _spec_from_dict(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    n = _require(doc, "n", "")
    if not isinstance(n, int) or isinstance(n, bool):
        raise InstanceFormatError(f"n must be an integer, got {n!r}")
    mdoc = _require(doc, "matroid", "")
    fdoc = _require(doc, "function", "")
    mkind = _require(mdoc, "kind", "matroid")
    if mkind == "uniform":
        mspec = MatroidSpec(kind="uniform", k=_require(mdoc, "k", "matroid"))
    elif mkind == "partition":
        mspec = MatroidSpec(
            kind="partition",
            parts=tuple(tuple(p) for p in _require(mdoc, "parts", "matroid")),
            capacities=tuple(_require(mdoc, "capacities", "matroid")),
        )
    elif mkind == "graphic":
        mspec = MatroidSpec(
            kind="graphic",
            num_vertices=_require(mdoc, "num_vertices", "matroid"),
            edges=tuple(tuple(e) for e in _require(mdoc, "edges", "matroid")),
        )
    else:
        raise InstanceFormatError(f"unknown matroid kind {mkind!r}")
    fkind = _require(fdoc, "kind", "function")
    if fkind in ("modular", "concave_of_modular"):
        fspec = FunctionSpec(
            kind=fkind,
            weights=tuple(_require(fdoc, "weights", "function")),
            exponent=_require(fdoc, "exponent", "function") if fkind == "concave_of_modular" else None,
        )
    elif fkind in ("coverage", "weighted_coverage"):
        fspec = FunctionSpec(
            kind=fkind,
            universe_weights=tuple(_require(fdoc, "universe_weights", "function")),
            covers=tuple(tuple(c) for c in _require(fdoc, "covers", "function")),
        )
    else:
        raise InstanceFormatError(f"unknown function kind {fkind!r}")
    instance = Instance(n=n, matroid=mspec, function=fspec, label=doc.get("label", ""))
    instance.validate()
    return instance


def save(instance: Instance, path) -> None:
    instance.validate()
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(_spec_to_dict(instance), handle, indent=2, sort_keys=True)
        handle.write("\n")


def load(path) -> Instance:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(
                f"invalid JSON in {path} at line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
    return _spec_from_dict(doc)


def _uniform_spec(k: int) -> MatroidSpec:
    return MatroidSpec(kind="uniform", k=k)


def _partition_spec(parts, capacities) -> MatroidSpec:
    return MatroidSpec(
        kind="partition",
        parts=tuple(tuple(p) for p in parts),
        capacities=tuple(capacities),
    )


def _graphic_spec(num_vertices, edges) -> MatroidSpec:
    return MatroidSpec(
        kind="graphic", num_vertices=num_vertices, edges=tuple(tuple(e) for e in edges)
    )


_RANK2_PAIRS = ((0, 1), (1, 2), (0, 2))
_RANK3_PAIRS = ((0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (0, 3))


def _matroid_catalog(n: int, max_k: int) -> list[tuple[str, MatroidSpec]]:
    specs: list[tuple[str, MatroidSpec]] = []
    for k in range(2, min(max_k, n) + 1):
        specs.append((f"unif{k}", _uniform_spec(k)))
    half = (n + 1) // 2
    if n >= 2:
        specs.append(("part11", _partition_spec([range(half), range(half, n)], [1, 1])))
    if n >= 3:
        third = max(1, n // 3)
        if max_k >= 3:
            specs.append(
                (
                    "part111",
                    _partition_spec(
                        [range(third), range(third, 2 * third), range(2 * third, n)],
                        [1, 1, 1],
                    ),
                )
            )
        if max_k >= 3 and half >= 2:
            specs.append(("part21", _partition_spec([range(half), range(half, n)], [2, 1])))
        # zero-capacity part: element 0 is a loop that no base may contain
        specs.append(("part02", _partition_spec([[0], range(1, n)], [0, 2])))
    specs.append(("gr2", _graphic_spec(3, [_RANK2_PAIRS[i % 3] for i in range(n)])))
    if n >= 3 and max_k >= 3:
        specs.append(("gr3", _graphic_spec(4, [_RANK3_PAIRS[i % 6] for i in range(n)])))
    if n >= 4:
        loopy = [(0, 0)] + [_RANK2_PAIRS[i % 3] for i in range(n - 1)]
        specs.append(("grloop", _graphic_spec(3, loopy)))
    return specs


def _function_catalog(n: int) -> list[tuple[str, FunctionSpec]]:
    cyclic = tuple((i % n, (i + 1) % n) for i in range(n))
    prefix = tuple(tuple(range(i + 1)) for i in range(n))
    return [
        ("modv", FunctionSpec(kind="modular", weights=tuple((3 * i) % 7 + 1 for i in range(n)))),
        ("mod1", FunctionSpec(kind="modular", weights=(1,) * n)),
        ("modd", FunctionSpec(kind="modular", weights=tuple(range(n, 0, -1)))),
        ("covc", FunctionSpec(kind="coverage", universe_weights=(1,) * n, covers=cyclic)),
        ("covp", FunctionSpec(kind="coverage", universe_weights=(1,) * n, covers=prefix)),
        (
            "wcov",
            FunctionSpec(
                kind="weighted_coverage",
                universe_weights=tuple(i + 1 for i in range(n)),
                covers=cyclic,
            ),
        ),
        (
            "conc",
            FunctionSpec(
                kind="concave_of_modular",
                weights=tuple(i + 1 for i in range(n)),
                exponent=0.5,
            ),
        ),
    ]


def enumerate_small_instances(max_n: int, max_k: int) -> Iterator[Instance]:
    """Deterministic, seed-free stream of small verification instances.

    Covers uniform, partition and graphic matroids of rank 2..max_k crossed
    with modular, coverage and concave-of-modular functions built from a
    fixed integer-weight catalog.  Every emitted instance has rank >= 2 and
    the stream is identical across calls.
    """
    if max_n > 10 or max_k > 4:
        raise ValueError("enumeration budget is capped at max_n <= 10, max_k <= 4")
    if max_n < 2 or max_k < 2:
        return
    for n in range(2, max_n + 1):
        for mlabel, mspec in _matroid_catalog(n, max_k):
            rank = mspec.rank(n)
            if not 2 <= rank <= max_k:
                continue
            for flabel, fspec in _function_catalog(n):
                instance = Instance(
                    n=n, matroid=mspec, function=fspec, label=f"n{n}-{mlabel}-{flabel}"
                )
                instance.validate()
                yield instance


def random_instance(
    seed: int,
    n: int,
    matroid_kind: str = "partition",
    function_kind: str = "coverage",
    rank: int | None = None,
) -> Instance:
    """Reproducible random instance.

    Distribution: elements are assigned to structures uniformly at random
    and all weights are integers drawn uniformly from [1, 10].  Partition
    matroids use ``rank`` non-empty groups of capacity 1; graphic matroids
    use ``rank`` + 1 vertices with a spanning path plus random extra edges;
    coverage functions give each element two random universe items.
    """
    if n < 2:
        raise ValueError("random instances need n >= 2")
    rng = random.Random(seed)
    k = rank if rank is not None else rng.randint(2, min(4, n))
    if not 1 <= k <= n:
        raise ValueError(f"rank {k} is infeasible for n={n}")

    if matroid_kind == "uniform":
        mspec = _uniform_spec(k)
    elif matroid_kind == "partition":
        assignment = list(range(k)) + [rng.randrange(k) for _ in range(n - k)]
        rng.shuffle(assignment)
        parts: list[list[int]] = [[] for _ in range(k)]
        for u, g in enumerate(assignment):
            parts[g].append(u)
        mspec = _partition_spec(parts, [1] * k)
    elif matroid_kind == "graphic":
        if n < k:
            raise ValueError(f"graphic matroid of rank {k} needs at least {k} edges")
        edges = [(v, v + 1) for v in range(k)]
        while len(edges) < n:
            a = rng.randrange(k + 1)
            b = rng.randrange(k + 1)
            if a != b:
                edges.append((min(a, b), max(a, b)))
        mspec = _graphic_spec(k + 1, edges)
    else:
        raise ValueError(f"unknown matroid kind {matroid_kind!r}")

    if function_kind == "modular":
        fspec = FunctionSpec(kind="modular", weights=tuple(rng.randint(1, 10) for _ in range(n)))
    elif function_kind == "concave_of_modular":
        fspec = FunctionSpec(
            kind="concave_of_modular",
            weights=tuple(rng.randint(1, 10) for _ in range(n)),
            exponent=0.5,
        )
    elif function_kind in ("coverage", "weighted_coverage"):
        universe = n
        covers = tuple(tuple(sorted(rng.sample(range(universe), min(2, universe)))) for _ in range(n))
        if function_kind == "coverage":
            weights = (1,) * universe
        else:
            weights = tuple(rng.randint(1, 10) for _ in range(universe))
        fspec = FunctionSpec(kind=function_kind, universe_weights=weights, covers=covers)
    else:
        raise ValueError(f"unknown function kind {function_kind!r}")

    instance = Instance(
        n=n,
        matroid=mspec,
        function=fspec,
        label=f"rand-s{seed}-n{n}-k{k}-{matroid_kind}-{function_kind}",
    )
    instance.validate()
    return instance
