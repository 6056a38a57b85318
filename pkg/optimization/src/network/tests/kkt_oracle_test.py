import numpy as np
import pytest

from optimization.src.network import (
    NetworkTopology,
    delay_msec,
    kkt_multiplier,
    kkt_optimal_flow,
    load_topology,
    marginal_delays,
    mean_link_utilization,
    total_capacity,
)
from utils import configs
from utils.errors import LoadOutOfRangeError


@pytest.fixture(scope='module')
def reference_topology():
    return load_topology(configs.reference_topology)


def sample_feasible_flows(rng, capacities, load, n_samples):
    """
    Random feasible flows summing to load: moves from the capacity-proportional split along zero-sum directions,
    never further than the bounds allow
    """
    proportional = load * capacities / capacities.sum()
    samples = []
    for _ in range(n_samples):
        direction = rng.normal(size=len(capacities))
        direction -= direction.mean()
        with np.errstate(divide='ignore'):
            up = np.where(direction > 0, (capacities - proportional) / direction, np.inf)
            down = np.where(direction < 0, -proportional / direction, np.inf)
        max_step = min(up.min(), down.min())
        samples.append(proportional + rng.uniform(0.0, 0.999) * max_step * direction)
    return samples


class TestKktOptimalFlow:

    def test_flows_at_load_275(self, reference_topology):
        flows = kkt_optimal_flow(reference_topology, 275.0).as_array()

        np.testing.assert_allclose(flows[[0, 1, 3, 4, 6, 7, 8, 9, 10, 11, 12]], 10.94, atol=0.01)
        assert flows[2] == pytest.approx(39.79, abs=0.01)
        assert flows[5] == pytest.approx(114.85, abs=0.01)

    @staticmethod
    @pytest.mark.parametrize(
        'load,published', [
            (275.0, [11, 11, 40, 11, 11, 114, 11, 11, 11, 11, 11, 11, 11]),
            (515.0, [28, 27, 62, 28, 28, 146, 28, 28, 28, 28, 28, 28, 28]),
        ]
    )
    def test_published_optimal_flows_are_matched(reference_topology, load, published):
        np.testing.assert_allclose(kkt_optimal_flow(reference_topology, load).as_array(), published, atol=1.0)

    def test_identical_links_share_load_equally(self):
        flows = kkt_optimal_flow(NetworkTopology.from_capacities([56, 56, 56, 56]), 112.0).as_array()

        np.testing.assert_allclose(flows, 28.0, atol=1e-6)

    def test_delay_at_545_does_not_exceed_published_delay(self, reference_topology):
        assert delay_msec(reference_topology, kkt_optimal_flow(reference_topology, 545.0)) <= 32.2 + 0.2

    @staticmethod
    @pytest.mark.parametrize('fraction', [0.05, 0.3, 0.6, 0.95, 0.999])
    def test_budget_and_bounds_hold(reference_topology, fraction):
        load = fraction * total_capacity(reference_topology)

        flow = kkt_optimal_flow(reference_topology, load)

        assert abs(flow.total_kbps - load) <= 1e-6
        assert np.all(flow.as_array() >= 0)
        assert np.all(flow.as_array() < reference_topology.capacities)

    def test_small_links_are_priced_out_at_low_load(self):
        flows = kkt_optimal_flow(NetworkTopology.from_capacities([1.0, 100.0]), 1.0).as_array()

        assert flows[0] == 0.0
        assert flows[1] == pytest.approx(1.0, abs=1e-6)

    @staticmethod
    @pytest.mark.parametrize('load', [0.0, -1.0, 916.0, 1000.0])
    def test_load_out_of_range_raises(reference_topology, load):
        with pytest.raises(LoadOutOfRangeError):
            kkt_optimal_flow(reference_topology, load)

    def test_utilization_at_sixty_percent_load(self, reference_topology):
        flow = kkt_optimal_flow(reference_topology, 0.6 * total_capacity(reference_topology))

        assert 0.55 <= mean_link_utilization(reference_topology, flow) <= 0.58


class TestOptimality:

    @staticmethod
    @pytest.mark.parametrize('load', [100.0, 275.0, 549.6, 845.0])
    def test_marginal_delays_are_equal_on_active_links(reference_topology, load):
        flow = kkt_optimal_flow(reference_topology, load)
        active = flow.as_array() > 0

        marginals = marginal_delays(reference_topology, flow)[active]

        assert (marginals.max() - marginals.min()) / marginals.max() <= 1e-6
        assert marginals.mean() == pytest.approx(kkt_multiplier(reference_topology, load), rel=1e-6)

    def test_oracle_beats_random_feasible_flows(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            capacities = rng.uniform(10.0, 200.0, size=rng.integers(2, 15))
            topology = NetworkTopology.from_capacities(capacities)
            load = rng.uniform(0.1, 0.9) * capacities.sum()
            optimal_delay = delay_msec(topology, kkt_optimal_flow(topology, load))

            sampled_delays = [
                delay_msec(topology, flows) for flows in sample_feasible_flows(rng, capacities, load, 1000)
            ]

            assert optimal_delay <= min(sampled_delays) + 1e-9

    def test_permuting_links_permutes_flows(self, reference_topology):
        order = np.random.default_rng(7).permutation(reference_topology.n_links)

        flows = kkt_optimal_flow(reference_topology, 549.6).as_array()
        permuted_flows = kkt_optimal_flow(reference_topology.permuted(order), 549.6).as_array()

        np.testing.assert_allclose(permuted_flows, flows[order], atol=1e-6)
