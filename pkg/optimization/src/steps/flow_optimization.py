import os

import pandas as pd

from optimization.src.loaders.dataset import flow_columns
from optimization.src.methods import SearchObjective, get_optimizer
from optimization.src.network import load_topology, mean_link_utilization, total_capacity
from utils import configs
from utils.io_utils import path_to_step_output, set_and_print_random_seed, write_frame


def resolve_load(topology, load=None, load_fraction=None):
    """
    Args:
        topology (NetworkTopology): network
        load (float): total load in kbps
        load_fraction (float): total load as a fraction of the total capacity

    Returns:
        float: total load in kbps
    """
    if (load is None) == (load_fraction is None):
        raise ValueError('exactly one of load and load_fraction must be given')
    if load is not None:
        return float(load)
    return float(load_fraction) * total_capacity(topology)


class FlowOptimization():
    """
    This step finds the delay-minimizing flow distribution of one total load with one method
    """

    def __init__(
            self,
            topology_path=configs.reference_topology,
            method='pso-chi',
            load=None,
            load_fraction=None,
            population_size=None,
            random_seed=None,
            output_dir=configs.save_dir,
            timings=False,
    ):
        """
        Args:
            topology_path (str): path to the topology file
            method (str): ep-gauss / ep-cauchy / ep-hybrid / pso / pso-chi / oracle
            load (float): total load in kbps
            load_fraction (float): total load as a fraction of the total capacity, exclusive with load
            population_size (int): overrides the default population size of the method
            random_seed (int): seed for random instantiations ; if none is provided, a seed is randomly defined
            output_dir (str): path to experiments output directory
            timings (bool): write wall-clock times, which makes outputs differ between identical runs
        """
        self.topology_path = topology_path
        self.method = method
        self.load = load
        self.load_fraction = load_fraction
        self.population_size = population_size
        self.random_seed = random_seed
        self.timings = timings

        self.checkpoint_dir = path_to_step_output(output_dir)

    def apply(self):
        """
        Execute the FlowOptimization step
        Returns:
            SearchResult: best flow found, written to result.csv with its trace in trace.csv
        """
        self.random_seed = set_and_print_random_seed(self.random_seed, True, self.checkpoint_dir)

        topology = load_topology(self.topology_path)
        objective = SearchObjective(topology, resolve_load(topology, self.load, self.load_fraction))
        optimizer = get_optimizer(self.method, population_size=self.population_size)

        result = optimizer.run(objective, self.random_seed)

        write_frame(self._result_frame(topology, objective, result), os.path.join(self.checkpoint_dir, 'result.csv'))
        write_frame(result.trace_frame(), os.path.join(self.checkpoint_dir, 'trace.csv'))

        print('{method} | Load {load:.1f} kbps | Delay {delay:.4f} msec | Generations {generations}'.format(
            method=self.method,
            load=objective.load_kbps,
            delay=result.best_delay_msec,
            generations=result.generations,
        ))
        print('Flows (kbps): ' + ' '.join('{:.3f}'.format(flow) for flow in result.best_flow.flows_kbps))

        return result

    def _result_frame(self, topology, objective, result):
        """
        Returns:
            pandas.DataFrame: one row with the result and the flow of each link
        """
        return pd.DataFrame(
            [[
                self.method,
                objective.load_kbps,
                result.best_delay_msec,
                mean_link_utilization(topology, result.best_flow),
                result.generations,
                result.wall_time_sec if self.timings else None,
                result.converged,
                result.constraint_residual,
            ] + list(result.best_flow.flows_kbps)],
            columns=[
                'method', 'load', 'delay_msec', 'mlu', 'generations', 'time_sec', 'converged', 'residual',
            ] + flow_columns(topology.n_links),
        )
