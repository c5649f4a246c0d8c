"""Solver tests: parameter chain, greedy variants, split, grow, dispatch."""

import pytest

from submod import (
    FunctionSpec,
    Instance,
    MatroidSpec,
    SetFunction,
    brute_force_opt,
    build,
    classical_greedy,
    enumerate_small_instances,
    gain_curve,
    max_weight_base,
    parameters,
    rp_greedy,
    rr_greedy,
    rr_greedy_exact_expectation,
    solve,
    split,
    split_and_grow,
    split_and_grow_deterministic,
)


def make(n, matroid, function, **kwargs):
    return build(Instance(n=n, matroid=matroid, function=function, **kwargs))


def uniform(k):
    return MatroidSpec(kind="uniform", k=k)


def modular(*weights):
    return FunctionSpec(kind="modular", weights=tuple(weights))


def coverage(*covers):
    m = 1 + max((item for cover in covers for item in cover), default=0)
    return FunctionSpec(kind="coverage", universe_weights=(1,) * m, covers=tuple(tuple(c) for c in covers))


CHAIN = coverage((0, 1), (1, 2), (2,))  # e0 and e1 overlap on item 1, e2 is nested in e1


class TestParameters:
    def test_default_mixing_point(self):
        params = parameters(0.9)
        assert params.g_x == pytest.approx(0.495, abs=1e-12)
        assert params.beta == pytest.approx(0.354839, abs=1e-6)
        assert params.p == pytest.approx(0.425822, abs=1e-6)
        assert params.bound == pytest.approx(0.500870, abs=1e-6)
        assert params.bound > 0.5008

    def test_zero_mixing_point(self):
        params = parameters(0.0)
        assert params.beta == 0.5
        assert params.p == 0.5
        assert params.bound == pytest.approx((1 + 4 * (2 / 3) * 0.5) / 5, abs=1e-12)

    def test_one_rejected(self):
        with pytest.raises(ValueError):
            parameters(1.0)
        with pytest.raises(ValueError):
            parameters(-0.1)

    def test_beta_stays_admissible_across_the_range(self):
        for i in range(100):
            params = parameters(i / 100)
            assert 0.2 <= params.beta <= 0.8

    def test_gain_curve(self):
        assert gain_curve(1.0) == 0.5
        assert gain_curve(0.0) == 0.0
        assert gain_curve(0.9) == pytest.approx(0.495)


class TestMaxWeightBase:
    def test_uniform(self):
        _, m = make(3, uniform(2), modular(5, 1, 3))
        assert max_weight_base(m, [5, 1, 3]) == (0, 2)

    def test_equal_weights_lexicographic(self):
        _, m = make(4, uniform(2), modular(1, 1, 1, 1))
        assert max_weight_base(m, [1, 1, 1, 1]) == (0, 1)

    def test_partition(self):
        _, m = make(
            3,
            MatroidSpec(kind="partition", parts=((0, 1), (2,)), capacities=(1, 1)),
            modular(2, 3, 1),
        )
        assert max_weight_base(m, [2, 3, 1]) == (1, 2)


class TestClassicalGreedy:
    def test_modular_optimal(self):
        f, m = make(3, uniform(2), modular(5, 1, 3))
        got = classical_greedy(f, m)
        opt, _ = brute_force_opt(f, m)
        assert got == (0, 2)
        assert f(got) == opt

    def test_zero_function_gives_first_base(self):
        f, m = make(3, uniform(2), coverage((), (), ()))
        assert classical_greedy(f, m) == (0, 1)

    def test_coverage_trace(self):
        f, m = make(3, uniform(2), CHAIN)
        got = classical_greedy(f, m)
        assert got == (0, 1)
        assert f(got) == 3.0


class TestSplit:
    def test_ties_route_to_first_half(self):
        f, m = make(2, uniform(2), modular(2, 1))
        result = split(f, m, 0.5)
        assert result.a == (0, 1) and result.b == ()

    def test_zero_bias_routes_to_second_half(self):
        f, m = make(2, uniform(2), modular(2, 1))
        result = split(f, m, 0.0)
        assert result.a == () and result.b == (0, 1)

    def test_coverage_trace(self):
        f, m = make(3, uniform(2), CHAIN)
        result = split(f, m, 0.5)
        assert result.a == (0,) and result.b == (1,)

    def test_bias_out_of_range(self):
        f, m = make(2, uniform(2), modular(1, 1))
        with pytest.raises(ValueError):
            split(f, m, 1.5)

    @pytest.mark.parametrize("p", [0.0, 0.25, 0.425822, 0.5, 0.75, 1.0])
    def test_disjoint_union_is_base(self, p):
        from submod import is_base

        for inst in enumerate_small_instances(5, 3):
            f, m = build(inst)
            result = split(f, m, p)
            assert not set(result.a) & set(result.b)
            assert is_base(m, set(result.a) | set(result.b))

    def test_loop_elements_never_picked(self):
        f, m = make(
            3,
            MatroidSpec(kind="partition", parts=((0,), (1, 2)), capacities=(0, 2)),
            modular(9, 1, 1),
        )
        result = split(f, m, 1.0)
        assert 0 not in set(result.a) | set(result.b)


class TestRRGreedy:
    def test_forced_single_candidate(self):
        f, m = make(3, uniform(1), modular(1, 5, 2))
        for seed in range(5):
            assert rr_greedy(f, m, seed) == (1,)

    def test_unique_base(self):
        f, m = make(2, uniform(2), modular(3, 4))
        for seed in range(5):
            assert rr_greedy(f, m, seed) == (0, 1)

    def test_seed_reproducible(self):
        f, m = make(6, uniform(3), coverage((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)))
        assert rr_greedy(f, m, 123) == rr_greedy(f, m, 123)

    def test_two_branch_expectation(self):
        f, m = make(
            3,
            MatroidSpec(kind="partition", parts=((0, 1), (2,)), capacities=(1, 1)),
            coverage((0,), (0, 1), (1,)),
        )
        expected, tree = rr_greedy_exact_expectation(f, m)
        assert expected == 2.0
        assert len(tree.leaves) == 2


class TestRPGreedy:
    def test_single_column_upgrade(self):
        f, m = make(3, uniform(1), modular(1, 5, 2))
        assert rp_greedy(f, m, (2,)) == (1,)

    def test_unique_base(self):
        f, m = make(2, uniform(2), modular(3, 4))
        assert rp_greedy(f, m, (0, 1)) == (0, 1)

    def test_residue_must_be_base(self):
        f, m = make(3, uniform(2), modular(1, 1, 1))
        with pytest.raises(ValueError):
            rp_greedy(f, m, (0,))

    def test_half_of_optimum_on_every_base(self):
        from submod import bases_within

        for inst in enumerate_small_instances(5, 3):
            f, m = build(inst)
            opt, _ = brute_force_opt(f, m)
            bases = bases_within(m, 20)
            if bases is None:
                continue
            for residue in bases:
                assert f(rp_greedy(f, m, residue)) >= opt / 2, inst.label


class TestSplitAndGrow:
    def test_unique_base(self):
        f, m = make(2, uniform(2), modular(3, 4))
        report = split_and_grow(f, m, x=0.9, rng_seed=0)
        assert report.solution == (0, 1)

    def test_coverage_reaches_optimum(self):
        f, m = make(3, uniform(2), CHAIN)
        for seed in range(10):
            report = split_and_grow(f, m, x=0.9, rng_seed=seed)
            assert report.value == 3.0

    def test_mean_over_seeds_beats_half(self):
        checked = 0
        for inst in enumerate_small_instances(4, 3):
            f, m = build(inst)
            opt, _ = brute_force_opt(f, m)
            total = sum(split_and_grow(f, m, rng_seed=seed).value for seed in range(100))
            assert total / 100 >= 0.5 * opt - 1e-9, inst.label
            checked += 1
        assert checked > 0

    def test_rank_one_rejected(self):
        f, m = make(3, uniform(1), modular(1, 5, 2))
        with pytest.raises(ValueError):
            split_and_grow(f, m)

    def test_same_seed_reproduces(self):
        f, m = make(6, uniform(3), coverage((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)))
        first = split_and_grow(f, m, rng_seed=5)
        second = split_and_grow(f, m, rng_seed=5)
        assert first.solution == second.solution
        assert first.counts.value_queries == second.counts.value_queries


class TestSplitAndGrowDeterministic:
    def test_unique_base(self):
        f, m = make(2, uniform(2), modular(3, 4))
        assert split_and_grow_deterministic(f, m).solution == (0, 1)

    def test_guarantee_on_sample(self):
        for inst in enumerate_small_instances(5, 3):
            f, m = build(inst)
            opt, _ = brute_force_opt(f, m)
            report = split_and_grow_deterministic(f, m)
            assert report.value >= 0.5008 * opt, inst.label

    def test_repeat_runs_identical_apart_from_elapsed(self):
        f, m = make(6, uniform(3), coverage((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)))
        first = split_and_grow_deterministic(f, m).to_dict()
        second = split_and_grow_deterministic(f, m).to_dict()
        first.pop("elapsed")
        second.pop("elapsed")
        assert first == second

    def test_positive_scaling_leaves_output_unchanged(self):
        for inst in list(enumerate_small_instances(5, 3))[::7]:
            f, m = build(inst)
            reference = split_and_grow_deterministic(f, m).solution
            greedy_reference = classical_greedy(f, m)
            split_reference = split(f, m, 0.425822)
            for factor in (2.0, 3.0, 0.5):
                scaled = SetFunction(f.n, lambda s, c=factor: c * f._evaluate(s), counts=f.counts)
                assert split_and_grow_deterministic(scaled, m).solution == reference
                assert classical_greedy(scaled, m) == greedy_reference
                assert split(scaled, m, 0.425822) == split_reference


class TestSolve:
    def test_rank_one_exhaustive(self):
        f, m = make(3, uniform(1), modular(1, 5, 2))
        for algorithm in ("greedy", "split", "rrgreedy", "rpgreedy", "msg", "msg-det"):
            report = solve(f, m, algorithm)
            assert report.solution == (1,)
            assert report.value == 5.0

    def test_dispatch_matches_direct_call(self):
        f, m = make(3, uniform(2), CHAIN)
        via_solve = solve(f, m, "msg-det", x=0.9)
        direct = split_and_grow_deterministic(f, m, x=0.9)
        assert via_solve.solution == direct.solution
        assert via_solve.value == direct.value

    def test_unknown_algorithm(self):
        f, m = make(2, uniform(2), modular(1, 1))
        with pytest.raises(ValueError, match="foo"):
            solve(f, m, "foo")

    def test_split_solution_is_the_assembled_base(self):
        from submod import is_base

        f, m = make(3, uniform(2), CHAIN)
        report = solve(f, m, "split")
        assert is_base(m, report.solution)

    def test_solution_is_base_and_value_rechecked(self):
        from submod import is_base

        for inst in list(enumerate_small_instances(4, 3))[::5]:
            f, m = build(inst)
            for algorithm in ("greedy", "split", "rrgreedy", "rpgreedy", "msg", "msg-det"):
                report = solve(f, m, algorithm)
                assert is_base(m, report.solution), (inst.label, algorithm)
                assert report.value == f(report.solution)

    def test_counts_are_per_run_deltas(self):
        f, m = make(4, uniform(2), modular(4, 3, 2, 1))
        first = solve(f, m, "greedy")
        second = solve(f, m, "greedy")
        assert first.counts.value_queries == second.counts.value_queries
        assert first.counts.independence_queries == second.counts.independence_queries

    def test_explicit_bias_override(self):
        f, m = make(3, uniform(2), CHAIN)
        report = solve(f, m, "split", p=0.0)
        assert report.solution  # still a base; the override routed everything to one half
        with pytest.raises(ValueError):
            solve(f, m, "split", p=1.5)
