import os

import pandas as pd

from optimization.src.methods import COMPARED_METHODS, SearchObjective, get_optimizer, run_trials
from optimization.src.network import load_topology
from optimization.src.steps.flow_optimization import resolve_load
from utils import configs
from utils.errors import FlowOptError
from utils.io_utils import path_to_step_output, set_and_print_random_seed, write_frame


class MethodComparison():
    """
    This step runs seeded trials of several methods on the same load and tabulates generations, times
    and delays of every trial, with the mean of each method
    """

    def __init__(
            self,
            topology_path=configs.reference_topology,
            load=None,
            load_fraction=None,
            methods=COMPARED_METHODS,
            n_trials=configs.n_trials,
            random_seed=None,
            output_dir=configs.save_dir,
            timings=False,
    ):
        """
        Args:
            topology_path (str): path to the topology file
            load (float): total load in kbps
            load_fraction (float): total load as a fraction of the total capacity, exclusive with load
            methods (list): methods to compare, among ep-gauss / ep-cauchy / ep-hybrid / pso / pso-chi / oracle
            n_trials (int): number of trials per method, with seeds random_seed ... random_seed + n_trials - 1
            random_seed (int): seed for random instantiations ; if none is provided, a seed is randomly defined
            output_dir (str): path to experiments output directory
            timings (bool): write wall-clock times, which makes outputs differ between identical runs
        """
        if n_trials < 1:
            raise ValueError('n_trials must be at least 1')
        self.topology_path = topology_path
        self.load = load
        self.load_fraction = load_fraction
        self.methods = list(methods)
        self.n_trials = n_trials
        self.random_seed = random_seed
        self.timings = timings

        self.checkpoint_dir = path_to_step_output(output_dir)

    def apply(self):
        """
        Execute the MethodComparison step
        Returns:
            dict: TrialSummary of each method, None for methods that failed entirely
        """
        self.random_seed = set_and_print_random_seed(self.random_seed, True, self.checkpoint_dir)

        topology = load_topology(self.topology_path)
        objective = SearchObjective(topology, resolve_load(topology, self.load, self.load_fraction))

        summaries = {}
        frames = []
        for method in self.methods:
            print('Method {method} | Load {load:.1f} kbps | {n_trials} trials'.format(
                method=method, load=objective.load_kbps, n_trials=self.n_trials,
            ))
            try:
                summary = run_trials(get_optimizer(method), objective, self.n_trials, self.random_seed, verbose=True)
            except FlowOptError as error:
                print('Method {method} failed: {error}'.format(method=method, error=error))
                summaries[method] = None
                frames.append(pd.DataFrame([[method, 'failed', None, None, None, None]], columns=self._columns()))
                continue

            summaries[method] = summary
            frame = summary.to_frame(include_time=self.timings)
            frame.insert(0, 'method', method)
            frames.append(frame)
            if len(summary.successful_results) > 0:
                print('Mean | Generations {generations:.1f} | Delay {delay:.4f} msec'.format(
                    generations=summary.mean_generations, delay=summary.mean_delay,
                ))

        write_frame(pd.concat(frames, ignore_index=True), os.path.join(self.checkpoint_dir, 'comparison.csv'))

        return summaries

    @staticmethod
    def _columns():
        return ['method', 'trial', 'generations', 'time_sec', 'delay_msec', 'residual']
