import time
from abc import abstractmethod
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from tqdm import tqdm

from optimization.src.network import FlowVector, delay_msec, kkt_multiplier, kkt_optimal_flow, total_capacity
from utils import configs
from utils.errors import FlowOptError, LoadOutOfRangeError
from utils.io_utils import get_rng


@dataclass
class TerminationRule:
    stagnation_window: int = configs.stagnation_window
    delta_threshold: float = configs.delta_threshold
    max_generations: int = configs.max_generations

    def __post_init__(self):
        if self.stagnation_window < 1:
            raise ValueError('stagnation_window must be at least 1')
        if not self.delta_threshold > 0:
            raise ValueError('delta_threshold must be positive')
        if self.max_generations < self.stagnation_window:
            raise ValueError('max_generations must be at least stagnation_window')


@dataclass
class SearchObjective:
    """
    Penalized delay minimization for one network and one total load.
    If penalty_weight is None, the default weight is used unless the exact-penalty threshold of the load
    (gamma * dT*/dgamma, known from the oracle) exceeds it, in which case a multiple of the threshold is used.
    """
    topology: object
    load_kbps: float
    penalty_weight: float = None
    epsilon_capacity: float = configs.epsilon_capacity

    def __post_init__(self):
        capacity = total_capacity(self.topology)
        if not 0 < self.load_kbps < capacity:
            raise LoadOutOfRangeError(
                'load {load} kbps must lie strictly between 0 and the total capacity {capacity} kbps'.format(
                    load=self.load_kbps, capacity=capacity,
                )
            )
        if not 0 < self.epsilon_capacity < self.topology.capacities.min():
            raise ValueError('epsilon_capacity must be positive and below the smallest capacity')
        if self.penalty_weight is None:
            self.penalty_weight = default_penalty_weight(self.topology, self.load_kbps)
        if not self.penalty_weight > 0:
            raise ValueError('penalty_weight must be positive')

        self.capacities = self.topology.capacities
        self.upper_bounds = self.capacities - self.epsilon_capacity

    @property
    def n_links(self):
        return self.topology.n_links


def default_penalty_weight(topology, load_kbps):
    """
    Args:
        topology (NetworkTopology): network
        load_kbps (float): total load

    Returns:
        float: penalty weight in msec per unit of relative budget violation
    """
    optimal_delay = delay_msec(topology, kkt_optimal_flow(topology, load_kbps))
    threshold = 1000.0 * kkt_multiplier(topology, load_kbps) - optimal_delay
    return max(configs.penalty_weight, configs.penalty_margin * threshold)


def clamp_flows(objective, candidates):
    """
    Args:
        objective (SearchObjective): defines the bounds [0, C_i - epsilon]
        candidates (numpy.ndarray): shape (..., n_links) raw flows

    Returns:
        numpy.ndarray: candidates clipped into the bounds
    """
    return np.clip(candidates, 0.0, objective.upper_bounds)


def balance_moves(objective, moves):
    """
    Removes the capacity-weighted common part of each move so that it no longer changes the total flow
    Args:
        objective (SearchObjective): gives the capacities
        moves (numpy.ndarray): shape (..., n_links) steps in kbps

    Returns:
        numpy.ndarray: moves - (sum(moves) / sum(C)) * C, every row sums to 0
    """
    moves = np.asarray(moves, dtype=float)
    shares = moves.sum(axis=-1, keepdims=True) / objective.capacities.sum()
    return moves - shares * objective.capacities


def repair_budget(objective, candidates):
    """
    Clamps the candidates into [0, C_i - epsilon], then shifts every off-budget row by t * C_i with t found by
    bisection, so that its clamped total equals the load. Rows already within repair_tolerance of the load are
    only clamped.
    Args:
        objective (SearchObjective): bounds and load
        candidates (numpy.ndarray): shape (n_links,) or (population_size, n_links) raw flows

    Returns:
        numpy.ndarray: candidates of the same shape, inside the bounds and on the budget
    """
    clamped = clamp_flows(objective, np.asarray(candidates, dtype=float))
    rows = np.atleast_2d(clamped)
    off_budget = np.abs(rows.sum(axis=-1) - objective.load_kbps) > configs.repair_tolerance
    if not np.any(off_budget):
        return clamped

    capacities = objective.capacities
    shifted = rows[off_budget]
    # t = low puts every flow at 0, t = high puts every flow at its bound
    low = -np.max(shifted / capacities, axis=-1)
    high = np.max((objective.upper_bounds - shifted) / capacities, axis=-1)
    for _ in range(configs.repair_iterations):
        middle = 0.5 * (low + high)
        totals = clamp_flows(objective, shifted + middle[:, np.newaxis] * capacities).sum(axis=-1)
        above = totals > objective.load_kbps
        high = np.where(above, middle, high)
        low = np.where(above, low, middle)

    repaired = rows.copy()
    repaired[off_budget] = clamp_flows(objective, shifted + (0.5 * (low + high))[:, np.newaxis] * capacities)
    return repaired.reshape(clamped.shape)


def budget_residuals(objective, candidates):
    """
    Args:
        objective (SearchObjective): defines the load
        candidates (numpy.ndarray): shape (..., n_links) raw flows

    Returns:
        numpy.ndarray: relative budget violation |sum(clamped) - load| / load of each candidate
    """
    clamped = clamp_flows(objective, candidates)
    return np.abs(clamped.sum(axis=-1) - objective.load_kbps) / objective.load_kbps


def population_fitness(objective, candidates):
    """
    Vectorized penalized fitness of a population
    Args:
        objective (SearchObjective): problem definition
        candidates (numpy.ndarray): shape (population_size, n_links) raw flows

    Returns:
        numpy.ndarray: shape (population_size,) fitness to minimize
    """
    clamped = clamp_flows(objective, np.asarray(candidates, dtype=float))
    totals = clamped.sum(axis=-1)
    terms = np.sum(clamped / (objective.capacities - clamped), axis=-1)
    # an empty network has the limit delay of a vanishing flow on the largest link
    empty_delay = 1000.0 / objective.capacities.max()
    with np.errstate(divide='ignore', invalid='ignore'):
        delays = np.where(totals > 0, 1000.0 * terms / np.where(totals > 0, totals, 1.0), empty_delay)
    penalties = objective.penalty_weight * np.abs(totals - objective.load_kbps) / objective.load_kbps

    return delays + penalties


def penalized_fitness(objective, candidate):
    """
    Args:
        objective (SearchObjective): problem definition
        candidate (array-like): shape (n_links,) raw flows

    Returns:
        float: delay of the clamped candidate plus the relative budget penalty
    """
    return float(population_fitness(objective, np.asarray(candidate, dtype=float)[np.newaxis, :])[0])


def is_stagnant(history, rule):
    """
    Args:
        history (sequence of float): best fitness of each generation
        rule (TerminationRule): stagnation window and threshold

    Returns:
        bool: True iff the last stagnation_window generation-to-generation changes are all below delta_threshold
    """
    if len(history) < rule.stagnation_window + 1:
        return False
    recent = np.asarray(history[-(rule.stagnation_window + 1):], dtype=float)
    return bool(np.all(np.abs(np.diff(recent)) < rule.delta_threshold))


def init_population(objective, size, rng_seed, init_range=configs.init_range):
    """
    Args:
        objective (SearchObjective): gives the number of links
        size (int): number of individuals
        rng_seed (int or numpy.random.Generator): seed, or generator of the run
        init_range (tuple): bounds of the uniform draw, in kbps

    Returns:
        numpy.ndarray: shape (size, n_links) flows drawn uniformly in init_range
    """
    if size < 2:
        raise ValueError('a population needs at least 2 individuals')
    rng = get_rng(rng_seed)
    return rng.uniform(init_range[0], init_range[1], size=(size, objective.n_links))


@dataclass
class SearchResult:
    best_flow: FlowVector
    best_delay_msec: float
    generations: int
    wall_time_sec: float
    converged: bool
    constraint_residual: float
    trace: list = field(default_factory=list, repr=False)

    def trace_frame(self):
        """
        Returns:
            pandas.DataFrame: per-generation trace, columns generation,best_fitness,mean_fitness,residual
        """
        return pd.DataFrame(self.trace, columns=['generation', 'best_fitness', 'mean_fitness', 'residual'])


@dataclass
class TrialSummary:
    results: list
    failures: dict = field(default_factory=dict)

    @property
    def successful_results(self):
        return [result for result in self.results if result is not None]

    @property
    def mean_generations(self):
        return float(np.mean([result.generations for result in self.successful_results]))

    @property
    def mean_time(self):
        return float(np.mean([result.wall_time_sec for result in self.successful_results]))

    @property
    def mean_delay(self):
        return float(np.mean([result.best_delay_msec for result in self.successful_results]))

    @property
    def mean_residual(self):
        return float(np.mean([result.constraint_residual for result in self.successful_results]))

    def to_frame(self, include_time=False):
        """
        Table with one row per trial and a trailing mean row. Failed trials keep their row with empty values.
        Args:
            include_time (bool): fill the time_sec column with wall-clock times, which are not reproducible

        Returns:
            pandas.DataFrame: columns trial,generations,time_sec,delay_msec,residual
        """
        rows = []
        for trial, result in enumerate(self.results):
            if result is None:
                rows.append([trial, None, None, None, None])
            else:
                rows.append([
                    trial,
                    result.generations,
                    result.wall_time_sec if include_time else None,
                    result.best_delay_msec,
                    result.constraint_residual,
                ])
        if len(self.successful_results) > 0:
            rows.append([
                'mean',
                self.mean_generations,
                self.mean_time if include_time else None,
                self.mean_delay,
                self.mean_residual,
            ])

        return pd.DataFrame(rows, columns=['trial', 'generations', 'time_sec', 'delay_msec', 'residual'])


class SearchTemplate:
    """
    Population-based search over flow vectors. Subclasses define the initial state and one generation step;
    states expose generation, best_history, best_position, best_fitness and mean_fitness.
    """

    def __init__(self, termination):
        """
        Args:
            termination (TerminationRule): stagnation rule and generation cap
        """
        self.termination = termination

    @abstractmethod
    def init_state(self, objective, rng):
        pass

    @abstractmethod
    def step(self, state, objective, rng):
        pass

    def run(self, objective, random_seed):
        """
        Iterates generations until stagnation or until max_generations is reached
        Args:
            objective (SearchObjective): problem to solve
            random_seed (int): seed of the generator owned by this run

        Returns:
            SearchResult: best clamped flow found, with the per-generation trace
        """
        rng = get_rng(random_seed)
        start_time = time.perf_counter()

        state = self.init_state(objective, rng)
        trace = [self._trace_row(state, objective)]
        converged = False
        while state.generation < self.termination.max_generations:
            state = self.step(state, objective, rng)
            trace.append(self._trace_row(state, objective))
            if is_stagnant(state.best_history, self.termination):
                converged = True
                break

        best_flow = FlowVector(clamp_flows(objective, state.best_position))

        return SearchResult(
            best_flow=best_flow,
            best_delay_msec=delay_msec(objective.topology, best_flow),
            generations=state.generation,
            wall_time_sec=time.perf_counter() - start_time,
            converged=converged,
            constraint_residual=best_flow.budget_residual(objective.load_kbps),
            trace=trace,
        )

    @staticmethod
    def _trace_row(state, objective):
        return (
            state.generation,
            float(state.best_fitness),
            float(state.mean_fitness),
            float(budget_residuals(objective, state.best_position)),
        )


def run_trials(optimizer, objective, n_trials, base_seed, verbose=False):
    """
    Runs independent trials with seeds base_seed, base_seed + 1, ...
    Args:
        optimizer (SearchTemplate): method to evaluate
        objective (SearchObjective): problem shared by all trials
        n_trials (int): number of trials
        base_seed (int): seed of the first trial
        verbose (bool): display a progress bar

    Returns:
        TrialSummary: per-trial results (None for failed trials) and their means
    """
    if n_trials < 1:
        raise ValueError('n_trials must be at least 1')

    results = []
    failures = {}
    for trial in tqdm(range(n_trials), disable=not verbose):
        try:
            results.append(optimizer.run(objective, base_seed + trial))
        except (FlowOptError, ArithmeticError) as error:
            print('Trial {trial} failed: {error}'.format(trial=trial, error=error))
            results.append(None)
            failures[trial] = str(error)

    return TrialSummary(results=results, failures=failures)
