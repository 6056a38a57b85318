import numpy as np
import pytest

from optimization.src.loaders import TEST, TRAINING
from optimization.src.methods import (
    COMPARED_METHODS,
    EpConfig,
    PsoConfig,
    SearchObjective,
    TerminationRule,
    get_optimizer,
    run_ep,
    run_pso,
    run_trials,
)
from optimization.src.network import delay_msec, kkt_optimal_flow, load_topology, mean_link_utilization
from optimization.src.steps import build_dataset, load_schedule
from prediction.src.methods import TrainConfig, predict_flows, train
from utils import configs

pytestmark = pytest.mark.slow

COMPARISON_LOAD = 549.6


@pytest.fixture(scope='module')
def reference_topology():
    return load_topology(configs.reference_topology)


@pytest.fixture(scope='module')
def comparison_objective(reference_topology):
    return SearchObjective(reference_topology, COMPARISON_LOAD)


@pytest.fixture(scope='module')
def trial_summaries(comparison_objective):
    return {
        method: run_trials(get_optimizer(method), comparison_objective, configs.n_trials, 0)
        for method in COMPARED_METHODS
    }


@pytest.fixture(scope='module')
def datasets(reference_topology):
    training_loads = load_schedule(reference_topology, 0.30, 0.89, 10)
    pso_config = PsoConfig()
    training_set = build_dataset(reference_topology, training_loads, pso_config, 0, TRAINING)
    test_set = build_dataset(reference_topology, training_loads + 30.0, pso_config, 10, TEST)
    return training_set, test_set


class TestMethodComparison:

    def test_constriction_swarm_headline(self, trial_summaries):
        constriction = trial_summaries['pso-chi']
        inertia = trial_summaries['pso']

        assert 32.4 <= constriction.mean_delay <= 33.1
        assert constriction.mean_generations < inertia.mean_generations
        assert max(result.generations for result in constriction.results) <= 300

    def test_method_ranking(self, trial_summaries):
        means = {method: summary.mean_delay for method, summary in trial_summaries.items()}
        slack = 0.5

        assert means['pso-chi'] <= means['pso'] + slack
        assert means['pso'] <= means['ep-hybrid'] + slack
        assert means['ep-hybrid'] <= min(means['ep-gauss'], means['ep-cauchy']) + slack

    def test_every_trial_succeeds(self, trial_summaries):
        for summary in trial_summaries.values():
            assert summary.failures == {}
            assert all(result.constraint_residual <= 1e-3 for result in summary.results)


class TestEvolutionaryProgramming:

    @staticmethod
    @pytest.mark.parametrize('variant', ['gaussian', 'cauchy', 'hybrid'])
    def test_variants_reach_the_optimum_within_1000_generations(reference_topology, comparison_objective, variant):
        optimal_delay = delay_msec(reference_topology, kkt_optimal_flow(reference_topology, COMPARISON_LOAD))
        config = EpConfig(variant=variant, termination=TerminationRule(max_generations=1000))

        delays = [run_ep(config, comparison_objective, seed).best_delay_msec for seed in range(10)]

        assert sum(abs(delay - optimal_delay) / optimal_delay <= 0.05 for delay in delays) >= 8

    @staticmethod
    @pytest.mark.parametrize('load', [275.0, 549.6, 815.0])
    def test_hybrid_matches_the_oracle(reference_topology, load):
        optimal_delay = delay_msec(reference_topology, kkt_optimal_flow(reference_topology, load))

        result = run_ep(EpConfig(variant='hybrid'), SearchObjective(reference_topology, load), 0)

        assert result.best_delay_msec == pytest.approx(optimal_delay, rel=0.015)


class TestParticleSwarm:

    @staticmethod
    @pytest.mark.parametrize('load', [275.0, 425.0, 549.6, 725.0])
    def test_constriction_swarm_matches_the_oracle(reference_topology, load):
        optimal_delay = delay_msec(reference_topology, kkt_optimal_flow(reference_topology, load))

        result = run_pso(PsoConfig(), SearchObjective(reference_topology, load), 0)

        assert result.best_delay_msec == pytest.approx(optimal_delay, rel=0.005)
        assert result.constraint_residual <= 1e-3


class TestDatasetGeneration:

    def test_published_rows_are_reproduced(self, datasets):
        training_set, test_set = datasets

        assert training_set.loads.tolist() == list(np.arange(275.0, 816.0, 60.0))
        assert test_set.loads.tolist() == list(np.arange(305.0, 846.0, 60.0))
        assert training_set.rows[0].delay_msec == pytest.approx(17.0, abs=0.2)
        assert training_set.rows[0].mlu == pytest.approx(0.2408, abs=0.002)
        assert test_set.rows[-1].delay_msec == pytest.approx(173.6, abs=2.0)

    def test_rows_are_close_to_the_oracle(self, reference_topology, datasets):
        for dataset in datasets:
            for row in dataset.rows:
                optimal_delay = delay_msec(reference_topology, kkt_optimal_flow(reference_topology, row.load_kbps))

                assert row.delay_msec == pytest.approx(optimal_delay, rel=0.02)
                assert abs(sum(row.flows) - row.load_kbps) <= 1e-3 * row.load_kbps
                assert row.delay_msec == delay_msec(reference_topology, row.flows)


class TestPredictor:

    def test_predictions_on_test_loads(self, reference_topology, datasets):
        training_set, test_set = datasets

        model, history = train(training_set, TrainConfig(seed=0), reference_topology)

        assert history[-1] < history[0] / 10
        predictions = predict_flows(model, test_set.loads)
        predicted_delays = np.array([delay_msec(reference_topology, flows) for flows in predictions])
        predicted_mlus = np.array([mean_link_utilization(reference_topology, flows) for flows in predictions])
        optimal_delays = np.array([row.delay_msec for row in test_set.rows])
        optimal_mlus = np.array([row.mlu for row in test_set.rows])

        assert np.sum(np.abs(predicted_delays - optimal_delays) / optimal_delays <= 0.1) >= 8
        assert np.mean(np.abs(predicted_mlus - optimal_mlus)) <= 0.03

    def test_learning_improves_for_most_seeds(self, reference_topology, datasets):
        training_set, _ = datasets

        improved = 0
        for seed in range(10):
            _, history = train(training_set, TrainConfig(max_epochs=1000, seed=seed), reference_topology)
            improved += history[-1] < history[0]

        assert improved >= 9
