import os
import warnings

import numpy as np
from tqdm import tqdm

from optimization.src.loaders import (
    TEST,
    TRAINING,
    Dataset,
    DatasetRow,
    write_dataset,
    write_rounded,
)
from optimization.src.methods import PsoConfig, SearchObjective, run_pso
from optimization.src.network import delay_msec, load_topology, mean_link_utilization, total_capacity
from utils import configs
from utils.io_utils import path_to_step_output, set_and_print_random_seed


def load_schedule(topology, from_frac, to_frac, count, offset=0.0):
    """
    Evenly spaced total loads. The end points are the fractions of the total capacity rounded to whole kbps.
    Args:
        topology (NetworkTopology): network
        from_frac (float): first load as a fraction of the total capacity
        to_frac (float): last load as a fraction of the total capacity
        count (int): number of loads
        offset (float): shift applied to every load, in kbps

    Returns:
        numpy.ndarray: loads in kbps
    """
    if count < 1:
        raise ValueError('count must be at least 1')
    if not 0 < from_frac < to_frac < 1:
        raise ValueError('fractions must satisfy 0 < from_frac < to_frac < 1')
    capacity = total_capacity(topology)
    start = np.round(from_frac * capacity)
    stop = np.round(to_frac * capacity)

    return np.linspace(start, stop, count) + offset


def build_dataset(topology, loads, optimizer_config, random_seed, role=TRAINING, verbose=False):
    """
    Solves each load with the particle swarm and stores the recomputed delay and mean link utilization.
    Row i uses seed random_seed + i; a row whose run hits the generation cap is retried once with another seed,
    then flagged.
    Args:
        topology (NetworkTopology): network
        loads (sequence of float): strictly increasing total loads, below the total capacity
        optimizer_config (PsoConfig): configuration of the swarm
        random_seed (int): seed of the first row
        role (str): training or test
        verbose (bool): display a progress bar

    Returns:
        Dataset: one row per load
    """
    rows = []
    flagged_loads = []
    for index, load in enumerate(tqdm(loads, disable=not verbose)):
        objective = SearchObjective(topology, float(load))
        result = run_pso(optimizer_config, objective, random_seed + index)
        if not result.converged:
            print('Load {load} did not converge after {generations} generations, retrying'.format(
                load=load, generations=result.generations,
            ))
            result = run_pso(optimizer_config, objective, random_seed + configs.retry_seed_offset + index)
            if not result.converged:
                flagged_loads.append(float(load))

        rows.append(DatasetRow(
            load_kbps=float(load),
            delay_msec=delay_msec(topology, result.best_flow),
            mlu=mean_link_utilization(topology, result.best_flow),
            generations=result.generations,
            flows=result.best_flow.flows_kbps,
        ))

    if flagged_loads:
        warnings.warn('no convergence for loads {}'.format(flagged_loads))

    return Dataset(rows=rows, role=role, flagged_loads=flagged_loads, n_links=topology.n_links)


class DatasetGeneration():
    """
    This step sweeps total loads over the network capacity, solves each of them with the constriction particle
    swarm and writes interleaved training and test datasets
    """

    def __init__(
            self,
            topology_path=configs.reference_topology,
            from_frac=configs.schedule_from_frac,
            to_frac=configs.schedule_to_frac,
            count=configs.schedule_count,
            test_offset=configs.test_offset,
            swarm_size=configs.pso_swarm_size,
            random_seed=None,
            output_dir=configs.save_dir,
            rounded_tables=False,
    ):
        """
        Args:
            topology_path (str): path to the topology file
            from_frac (float): first training load as a fraction of the total capacity
            to_frac (float): last training load as a fraction of the total capacity
            count (int): number of loads in each dataset
            test_offset (float): shift of the test loads with respect to the training loads, in kbps
            swarm_size (int): number of particles of the swarm
            random_seed (int): seed for random instantiations ; if none is provided, a seed is randomly defined
            output_dir (str): path to experiments output directory
            rounded_tables (bool): also write rounded copies of the datasets
        """
        self.topology_path = topology_path
        self.from_frac = from_frac
        self.to_frac = to_frac
        self.count = count
        self.test_offset = test_offset
        self.swarm_size = swarm_size
        self.random_seed = random_seed
        self.rounded_tables = rounded_tables

        self.checkpoint_dir = path_to_step_output(output_dir)

    def apply(self):
        """
        Execute the DatasetGeneration step
        Returns:
            tuple: training Dataset and test Dataset
        """
        self.random_seed = set_and_print_random_seed(self.random_seed, True, self.checkpoint_dir)

        topology = load_topology(self.topology_path)
        training_loads = load_schedule(topology, self.from_frac, self.to_frac, self.count)
        test_loads = training_loads + self.test_offset
        optimizer_config = PsoConfig(variant='constriction', swarm_size=self.swarm_size)

        training_set = build_dataset(topology, training_loads, optimizer_config, self.random_seed, TRAINING, True)
        test_set = build_dataset(
            topology, test_loads, optimizer_config, self.random_seed + self.count, TEST, True,
        )

        for name, dataset in [('train', training_set), ('test', test_set)]:
            write_dataset(dataset, os.path.join(self.checkpoint_dir, name + '.csv'))
            if self.rounded_tables:
                write_rounded(dataset, os.path.join(self.checkpoint_dir, name + '_rounded.csv'))
            print('{name} set: {n_rows} rows, loads {first} to {last} kbps'.format(
                name=name, n_rows=len(dataset), first=dataset.loads[0], last=dataset.loads[-1],
            ))

        return training_set, test_set
