import numpy as np
import pytest

from optimization.src.methods import (
    PsoConfig,
    ParticleSwarm,
    SearchObjective,
    TerminationRule,
    balance_moves,
    clamp_flows,
    init_population,
    is_stagnant,
    penalized_fitness,
    population_fitness,
    repair_budget,
    run_trials,
)
from optimization.src.network import delay_msec, kkt_optimal_flow, load_topology
from utils import configs
from utils.errors import LoadOutOfRangeError, UndefinedDelayError


@pytest.fixture(scope='module')
def reference_topology():
    return load_topology(configs.reference_topology)


@pytest.fixture(scope='module')
def objective(reference_topology):
    return SearchObjective(reference_topology, 549.6)


def quick_swarm():
    return ParticleSwarm(PsoConfig(swarm_size=10, termination=TerminationRule(max_generations=30)))


class TestSearchObjective:

    @staticmethod
    @pytest.mark.parametrize('load', [0.0, -10.0, 916.0, 1000.0])
    def test_load_out_of_range_raises(reference_topology, load):
        with pytest.raises(LoadOutOfRangeError):
            SearchObjective(reference_topology, load)

    def test_default_weight_at_moderate_load(self, objective):
        assert objective.penalty_weight == configs.penalty_weight

    def test_default_weight_grows_near_capacity(self, reference_topology):
        # the exact-penalty threshold at 845 kbps is about 2075 msec
        assert SearchObjective(reference_topology, 845.0).penalty_weight > 4000.0

    def test_explicit_weight_is_kept(self, reference_topology):
        assert SearchObjective(reference_topology, 845.0, penalty_weight=10.0).penalty_weight == 10.0

    def test_epsilon_must_stay_below_capacities(self, reference_topology):
        with pytest.raises(ValueError):
            SearchObjective(reference_topology, 549.6, epsilon_capacity=56.0)


class TestTerminationRule:

    @staticmethod
    @pytest.mark.parametrize(
        'options', [
            dict(stagnation_window=0),
            dict(delta_threshold=0.0),
            dict(stagnation_window=20, max_generations=10),
        ]
    )
    def test_invalid_rules_raise(options):
        with pytest.raises(ValueError):
            TerminationRule(**options)


class TestPenalizedFitness:

    def test_feasible_candidate_has_no_penalty(self, reference_topology):
        candidate = [11, 11, 40, 11, 11, 114, 11, 11, 11, 11, 11, 11, 11]

        fitness = penalized_fitness(SearchObjective(reference_topology, 275.0), candidate)

        assert fitness == pytest.approx(delay_msec(reference_topology, candidate), abs=1e-12)
        assert fitness == pytest.approx(17.0, abs=0.2)

    def test_budget_violation_is_penalized(self, reference_topology):
        objective = SearchObjective(reference_topology, 275.0)
        candidate = clamp_flows(objective, 2.0 * kkt_optimal_flow(reference_topology, 275.0).as_array())

        assert penalized_fitness(objective, candidate) > delay_msec(reference_topology, candidate) + 1.0

    def test_flow_at_capacity_is_clamped(self, objective):
        candidate = np.full(13, 20.0)
        candidate[0] = 56.0

        assert np.isfinite(penalized_fitness(objective, candidate))

    def test_zero_candidate_has_finite_fitness(self, objective):
        assert np.isfinite(penalized_fitness(objective, np.zeros(13)))

    def test_fitness_never_beats_the_optimal_delay(self, reference_topology, objective):
        rng = np.random.default_rng(0)
        candidates = np.concatenate([
            rng.uniform(0.0, 60.0, size=(2000, 13)),
            kkt_optimal_flow(reference_topology, 549.6).as_array() * rng.uniform(0.9, 1.1, size=(2000, 1)),
        ])
        optimal_delay = delay_msec(reference_topology, kkt_optimal_flow(reference_topology, 549.6))

        assert population_fitness(objective, candidates).min() >= optimal_delay - 1e-9

    def test_population_fitness_matches_single_evaluations(self, objective):
        candidates = np.random.default_rng(1).uniform(0.0, 60.0, size=(20, 13))

        np.testing.assert_allclose(
            population_fitness(objective, candidates),
            [penalized_fitness(objective, candidate) for candidate in candidates],
            rtol=1e-12,
        )


class TestClampFlows:

    def test_clamping_is_idempotent(self, objective):
        candidates = np.random.default_rng(2).uniform(-100.0, 300.0, size=(500, 13))

        clamped = clamp_flows(objective, candidates)

        np.testing.assert_array_equal(clamp_flows(objective, clamped), clamped)
        assert np.all(clamped >= 0)
        assert np.all(clamped <= objective.capacities - configs.epsilon_capacity)


class TestBalanceMoves:

    def test_rows_sum_to_zero(self, objective):
        moves = np.random.default_rng(11).normal(0.0, 5.0, size=(50, 13))

        balanced = balance_moves(objective, moves)

        np.testing.assert_allclose(balanced.sum(axis=-1), 0.0, atol=1e-9)

    def test_balanced_moves_are_unchanged(self, objective):
        moves = np.zeros((2, 13))
        moves[:, 0] = [3.0, -1.0]
        moves[:, 1] = [-3.0, 1.0]

        np.testing.assert_allclose(balance_moves(objective, moves), moves, atol=1e-12)

    def test_uniform_capacity_shift_vanishes(self, objective):
        np.testing.assert_allclose(balance_moves(objective, 0.2 * objective.capacities), 0.0, atol=1e-12)


class TestRepairBudget:

    @staticmethod
    @pytest.mark.parametrize('low,high', [(-100.0, 300.0), (1.0, 50.0), (0.0, 5.0), (50.0, 60.0)])
    def test_rows_land_on_the_budget_inside_the_bounds(objective, low, high):
        candidates = np.random.default_rng(12).uniform(low, high, size=(200, 13))

        repaired = repair_budget(objective, candidates)

        np.testing.assert_allclose(repaired.sum(axis=-1), objective.load_kbps, atol=1e-6)
        assert np.all(repaired >= 0)
        assert np.all(repaired <= objective.upper_bounds)

    def test_on_budget_rows_are_left_untouched(self, objective):
        on_budget = np.append(np.full(12, 42.0), 45.6)
        candidates = np.stack([on_budget, np.full(13, 60.0)])

        repaired = repair_budget(objective, candidates)

        np.testing.assert_array_equal(repaired[0], on_budget)
        assert repaired[1].sum() == pytest.approx(objective.load_kbps, abs=1e-6)

    def test_repair_is_idempotent(self, objective):
        repaired = repair_budget(objective, np.random.default_rng(13).uniform(1.0, 50.0, size=(20, 13)))

        np.testing.assert_array_equal(repair_budget(objective, repaired), repaired)

    def test_shift_is_proportional_to_capacity(self, objective):
        candidate = np.full(13, 30.0)

        repaired = repair_budget(objective, candidate)

        shifts = (repaired - candidate) / objective.capacities
        np.testing.assert_allclose(shifts, shifts[0], atol=1e-9)
        assert repaired.shape == (13,)

    def test_penalty_vanishes_after_repair(self, objective):
        repaired = repair_budget(objective, np.random.default_rng(14).uniform(1.0, 50.0, size=(20, 13)))

        np.testing.assert_allclose(
            population_fitness(objective, repaired),
            [delay_msec(objective.topology, row) for row in repaired],
            rtol=1e-6,
        )


class TestIsStagnant:

    rule = TerminationRule(stagnation_window=20, delta_threshold=1e-8, max_generations=5000)

    def test_constant_history_of_window_plus_one_is_stagnant(self):
        assert is_stagnant([3.0] * 21, self.rule)

    def test_history_shorter_than_window_plus_one_is_not_stagnant(self):
        assert not is_stagnant([3.0] * 20, self.rule)

    def test_decreasing_history_is_not_stagnant(self):
        assert not is_stagnant(list(np.arange(100.0, 0.0, -1.0)), self.rule)

    def test_jump_restarts_the_window(self):
        history = [5.0] * 20 + [4.0] * 21

        stagnant_at = [length for length in range(1, len(history) + 1) if is_stagnant(history[:length], self.rule)]

        assert stagnant_at == [len(history)]

    def test_stagnation_is_monotone_in_threshold(self):
        rng = np.random.default_rng(3)
        history = list(np.cumsum(rng.uniform(0.0, 1e-6, size=30)))
        for threshold in [1e-9, 1e-7, 5e-7, 1e-6, 1e-5]:
            if is_stagnant(history, TerminationRule(delta_threshold=threshold)):
                assert is_stagnant(history, TerminationRule(delta_threshold=threshold * 10))


class TestInitPopulation:

    def test_same_seed_gives_same_population(self, objective):
        np.testing.assert_array_equal(init_population(objective, 150, 4), init_population(objective, 150, 4))

    def test_shape_and_range(self, objective):
        population = init_population(objective, 150, 5)

        assert population.shape == (150, 13)
        assert population.min() >= 1.0
        assert population.max() <= 50.0

    def test_size_below_two_raises(self, objective):
        with pytest.raises(ValueError):
            init_population(objective, 1, 0)


class TestRunTrials:

    def test_single_trial_mean_equals_trial(self, objective):
        summary = run_trials(quick_swarm(), objective, 1, 10)
        result = summary.results[0]

        assert summary.mean_delay == result.best_delay_msec
        assert summary.mean_generations == result.generations

    def test_same_base_seed_gives_same_summary(self, objective):
        first = run_trials(quick_swarm(), objective, 3, 10).to_frame()
        second = run_trials(quick_swarm(), objective, 3, 10).to_frame()

        assert first.equals(second)

    def test_trial_table_has_mean_row(self, objective):
        frame = run_trials(quick_swarm(), objective, 3, 10).to_frame()

        assert list(frame.columns) == ['trial', 'generations', 'time_sec', 'delay_msec', 'residual']
        assert list(frame['trial']) == [0, 1, 2, 'mean']
        assert frame['delay_msec'].iloc[3] == pytest.approx(frame['delay_msec'].iloc[:3].mean())
        assert frame['time_sec'].isnull().all()

    def test_failed_trials_are_recorded(self, objective):
        class FailingOnSecondSeed:
            def run(self, objective, random_seed):
                if random_seed == 11:
                    raise UndefinedDelayError('boom')
                return quick_swarm().run(objective, random_seed)

        summary = run_trials(FailingOnSecondSeed(), objective, 3, 10)

        assert summary.results[1] is None
        assert list(summary.failures) == [1]
        assert len(summary.successful_results) == 2

    def test_zero_trials_raises(self, objective):
        with pytest.raises(ValueError):
            run_trials(quick_swarm(), objective, 0, 10)
