from dataclasses import dataclass, field

import numpy as np

from optimization.src.methods.search_template import (
    SearchTemplate,
    TerminationRule,
    init_population,
    population_fitness,
    repair_budget,
)
from utils import configs

GAUSSIAN = 'gaussian'
CAUCHY = 'cauchy'
HYBRID = 'hybrid'
VARIANTS = [GAUSSIAN, CAUCHY, HYBRID]


@dataclass
class EpConfig:
    """
    Args:
        variant (str): gaussian, cauchy or hybrid mutation
        population_size (int): number of parents, defaults to 150 (100 for hybrid which evaluates two children)
        sigma (float): mutation scale
        relative_sigma (bool): if True the step scale of link i is sigma * C_i, otherwise sigma kbps
        termination (TerminationRule): stopping rule
    """
    variant: str = HYBRID
    population_size: int = None
    sigma: float = configs.ep_sigma
    relative_sigma: bool = True
    termination: TerminationRule = field(default_factory=TerminationRule)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError('Unknown EP variant {}'.format(self.variant))
        if self.population_size is None:
            self.population_size = configs.ep_population_size[self.variant]
        if self.population_size < 2:
            raise ValueError('population_size must be at least 2')
        if self.sigma < 0:
            raise ValueError('sigma must be non-negative')

    def mutation_scale(self, objective):
        """
        Returns:
            numpy.ndarray or float: per-link factor multiplying sigma
        """
        return objective.capacities if self.relative_sigma else 1.0


@dataclass
class EpState:
    population: np.ndarray
    fitness: np.ndarray
    generation: int
    best_history: list

    @property
    def best_position(self):
        return self.population[0]

    @property
    def best_fitness(self):
        return self.fitness[0]

    @property
    def mean_fitness(self):
        return float(np.mean(self.fitness))


def mutate_gaussian(parents, sigma, rng, scale=1.0):
    """
    Args:
        parents (numpy.ndarray): shape (..., n_links) flows
        sigma (float): mutation scale
        rng (numpy.random.Generator): generator of the run
        scale (numpy.ndarray or float): per-link factor, C_i for relative steps

    Returns:
        numpy.ndarray: parents + sigma * scale * z with z standard normal
    """
    parents = np.asarray(parents, dtype=float)
    return parents + sigma * scale * rng.standard_normal(parents.shape)


def standard_cauchy(rng, shape):
    """
    Standard Cauchy draws as tan(pi * (u - 1/2)), u uniform in [0, 1)
    """
    return np.tan(np.pi * (rng.uniform(size=shape) - 0.5))


def mutate_cauchy(parents, sigma, rng, scale=1.0):
    """
    Args:
        parents (numpy.ndarray): shape (..., n_links) flows
        sigma (float): mutation scale
        rng (numpy.random.Generator): generator of the run
        scale (numpy.ndarray or float): per-link factor, C_i for relative steps

    Returns:
        numpy.ndarray: parents + sigma * scale * c with c standard Cauchy
    """
    parents = np.asarray(parents, dtype=float)
    return parents + sigma * scale * standard_cauchy(rng, parents.shape)


def _hybrid_children(parents, sigma, rng, objective, scale):
    gaussian_children = repair_budget(objective, mutate_gaussian(parents, sigma, rng, scale))
    cauchy_children = repair_budget(objective, mutate_cauchy(parents, sigma, rng, scale))
    gaussian_fitness = population_fitness(objective, gaussian_children)
    cauchy_fitness = population_fitness(objective, cauchy_children)

    keep_gaussian = gaussian_fitness <= cauchy_fitness
    children = np.where(keep_gaussian[:, np.newaxis], gaussian_children, cauchy_children)
    fitness = np.where(keep_gaussian, gaussian_fitness, cauchy_fitness)
    return children, fitness


def hybrid_offspring(parents, sigma, rng, objective, scale=1.0):
    """
    Each parent breeds one Gaussian and one Cauchy child; the fitter one is kept, the Gaussian one on ties
    Args:
        parents (numpy.ndarray): shape (population_size, n_links) flows
        sigma (float): mutation scale
        rng (numpy.random.Generator): generator of the run
        objective (SearchObjective): fitness used for the choice
        scale (numpy.ndarray or float): per-link factor, C_i for relative steps

    Returns:
        numpy.ndarray: shape (population_size, n_links) surviving children, inside the bounds and on the budget
    """
    parents = np.atleast_2d(np.asarray(parents, dtype=float))
    children, _ = _hybrid_children(parents, sigma, rng, objective, scale)
    return children


def _sorted_by_fitness(population, fitness):
    # stable total order: fitness, then position in the pool
    order = np.lexsort((np.arange(len(fitness)), fitness))
    return population[order], fitness[order]


def ep_step(state, config, objective, rng):
    """
    One generation: every parent produces a child, brought back inside the bounds and onto the budget,
    then the best population_size individuals of parents and children survive
    Args:
        state (EpState): current generation, sorted by fitness
        config (EpConfig): variant and mutation scale
        objective (SearchObjective): problem to solve
        rng (numpy.random.Generator): generator of the run

    Returns:
        EpState: next generation
    """
    scale = config.mutation_scale(objective)
    parents = state.population

    if config.variant == GAUSSIAN:
        children = repair_budget(objective, mutate_gaussian(parents, config.sigma, rng, scale))
        children_fitness = population_fitness(objective, children)
    elif config.variant == CAUCHY:
        children = repair_budget(objective, mutate_cauchy(parents, config.sigma, rng, scale))
        children_fitness = population_fitness(objective, children)
    else:
        children, children_fitness = _hybrid_children(parents, config.sigma, rng, objective, scale)

    pool = np.concatenate([parents, children])
    pool_fitness = np.concatenate([state.fitness, children_fitness])
    pool, pool_fitness = _sorted_by_fitness(pool, pool_fitness)

    population = pool[:config.population_size]
    fitness = pool_fitness[:config.population_size]

    return EpState(
        population=population,
        fitness=fitness,
        generation=state.generation + 1,
        best_history=state.best_history + [float(fitness[0])],
    )


class EvolutionaryProgramming(SearchTemplate):
    def __init__(self, config):
        """
        Args:
            config (EpConfig): variant, population size, mutation scale and termination rule
        """
        super(EvolutionaryProgramming, self).__init__(config.termination)
        self.config = config

    def init_state(self, objective, rng):
        population = repair_budget(objective, init_population(objective, self.config.population_size, rng))
        population, fitness = _sorted_by_fitness(population, population_fitness(objective, population))
        return EpState(population=population, fitness=fitness, generation=0, best_history=[float(fitness[0])])

    def step(self, state, objective, rng):
        return ep_step(state, self.config, objective, rng)


def run_ep(config, objective, seed):
    """
    Args:
        config (EpConfig): EP configuration
        objective (SearchObjective): problem to solve
        seed (int): seed of the run

    Returns:
        SearchResult: best flow found
    """
    return EvolutionaryProgramming(config).run(objective, seed)
