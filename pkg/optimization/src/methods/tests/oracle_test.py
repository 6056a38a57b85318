import pytest

from optimization.src.methods import (
    METHODS,
    EvolutionaryProgramming,
    KktOracle,
    ParticleSwarm,
    SearchObjective,
    get_optimizer,
)
from optimization.src.network import delay_msec, kkt_optimal_flow, load_topology
from utils import configs


class TestKktOracle:

    def test_oracle_passthrough(self):
        topology = load_topology(configs.reference_topology)

        result = KktOracle().run(SearchObjective(topology, 549.6))

        assert result.generations == 0
        assert result.converged
        assert result.best_delay_msec == delay_msec(topology, kkt_optimal_flow(topology, 549.6))
        assert result.constraint_residual <= 1e-6
        assert len(result.trace_frame()) == 1


class TestGetOptimizer:

    @staticmethod
    @pytest.mark.parametrize(
        'method,expected_type,variant', [
            ('ep-gauss', EvolutionaryProgramming, 'gaussian'),
            ('ep-cauchy', EvolutionaryProgramming, 'cauchy'),
            ('ep-hybrid', EvolutionaryProgramming, 'hybrid'),
            ('pso', ParticleSwarm, 'inertia'),
            ('pso-chi', ParticleSwarm, 'constriction'),
        ]
    )
    def test_method_names_map_to_optimizers(method, expected_type, variant):
        optimizer = get_optimizer(method)

        assert isinstance(optimizer, expected_type)
        assert optimizer.config.variant == variant

    def test_every_method_is_known(self):
        for method in METHODS:
            assert hasattr(get_optimizer(method), 'run')

    def test_overrides_are_validated(self):
        assert get_optimizer('pso', population_size=50).config.swarm_size == 50
        assert get_optimizer('ep-gauss', max_generations=300).termination.max_generations == 300
        with pytest.raises(ValueError):
            get_optimizer('ep-hybrid', population_size=1)

    def test_unknown_method_raises(self):
        with pytest.raises(ValueError):
            get_optimizer('simulated-annealing')
