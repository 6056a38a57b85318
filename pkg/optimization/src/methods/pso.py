from dataclasses import dataclass, field

import numpy as np

from optimization.src.methods.search_template import (
    SearchTemplate,
    TerminationRule,
    balance_moves,
    init_population,
    population_fitness,
    repair_budget,
)
from utils import configs

INERTIA = 'inertia'
CONSTRICTION = 'constriction'
VARIANTS = [INERTIA, CONSTRICTION]


@dataclass
class PsoConfig:
    """
    Global-best particle swarm. The constriction variant multiplies the whole velocity update by chi,
    the inertia variant uses chi = 1. Both follow the linear inertia schedule from w_start to w_end,
    reached at termination.max_generations.
    """
    variant: str = CONSTRICTION
    swarm_size: int = configs.pso_swarm_size
    chi: float = configs.pso_chi
    w_start: float = configs.pso_w_start
    w_end: float = configs.pso_w_end
    c1: float = configs.pso_c1
    c2: float = configs.pso_c2
    termination: TerminationRule = field(
        default_factory=lambda: TerminationRule(max_generations=configs.pso_max_generations)
    )

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError('Unknown PSO variant {}'.format(self.variant))
        if self.swarm_size < 2:
            raise ValueError('swarm_size must be at least 2')
        if self.variant == CONSTRICTION and not 0 < self.chi <= 1:
            raise ValueError('chi must lie in (0, 1]')
        if not self.w_start >= self.w_end >= 0:
            raise ValueError('the inertia schedule must satisfy w_start >= w_end >= 0')
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError('acceleration coefficients must be non-negative')

    @property
    def effective_chi(self):
        return self.chi if self.variant == CONSTRICTION else 1.0


@dataclass
class Swarm:
    """
    Positions X, velocities V and personal bests P of all particles, one row per particle.
    global_best is the index of the particle whose personal best is the best of the swarm.
    """
    positions: np.ndarray
    velocities: np.ndarray
    fitness: np.ndarray
    personal_best: np.ndarray
    personal_best_fitness: np.ndarray
    global_best: int
    generation: int
    best_history: list

    @property
    def best_position(self):
        return self.personal_best[self.global_best]

    @property
    def best_fitness(self):
        return self.personal_best_fitness[self.global_best]

    @property
    def mean_fitness(self):
        return float(np.mean(self.fitness))


def update_velocity(positions, velocities, personal_best, global_best, w, config, rng=None, r1=None, r2=None):
    """
    v' = chi * (w * v + c1 * r1 * (p - x) + c2 * r2 * (g - x)), r1 and r2 drawn per particle and per dimension
    Args:
        positions (numpy.ndarray): shape (swarm_size, n_links) X
        velocities (numpy.ndarray): shape (swarm_size, n_links) V
        personal_best (numpy.ndarray): shape (swarm_size, n_links) P
        global_best (numpy.ndarray): shape (n_links,) best position of the swarm
        w (float): inertia weight
        config (PsoConfig): chi, c1 and c2
        rng (numpy.random.Generator): generator of the run, used when r1 or r2 is not given
        r1 (numpy.ndarray): optional uniform draws of the cognitive term
        r2 (numpy.ndarray): optional uniform draws of the social term

    Returns:
        numpy.ndarray: updated velocities
    """
    positions = np.asarray(positions, dtype=float)
    if r1 is None:
        r1 = rng.uniform(size=positions.shape)
    if r2 is None:
        r2 = rng.uniform(size=positions.shape)

    return config.effective_chi * (
        w * velocities
        + config.c1 * r1 * (personal_best - positions)
        + config.c2 * r2 * (global_best - positions)
    )


def update_position(positions, velocities, upper_bounds):
    """
    x' = x + v', clamped into [0, upper_bounds]; velocity components that hit a wall are set to 0
    Args:
        positions (numpy.ndarray): shape (swarm_size, n_links) X
        velocities (numpy.ndarray): shape (swarm_size, n_links) updated V
        upper_bounds (numpy.ndarray): shape (n_links,) C_i - epsilon

    Returns:
        tuple: positions and velocities after the move
    """
    moved = positions + velocities
    clamped = np.clip(moved, 0.0, upper_bounds)
    velocities = np.where(clamped != moved, 0.0, velocities)
    return clamped, velocities


def inertia_at(generation, config):
    """
    Args:
        generation (int): current generation, starting at 0
        config (PsoConfig): inertia schedule and generation cap

    Returns:
        float: w_start at generation 0, linearly down to w_end at max_generations, then constant
    """
    progress = min(generation / float(config.termination.max_generations), 1.0)
    return config.w_start + (config.w_end - config.w_start) * progress


def _global_best_index(personal_best_fitness):
    # argmin returns the first minimum, so ties go to the lowest particle index
    return int(np.argmin(personal_best_fitness))


def pso_step(swarm, config, objective, rng):
    """
    Moves every particle along the budget, brings the ones stopped by a wall back onto it,
    then updates personal bests and the global best
    Args:
        swarm (Swarm): current swarm
        config (PsoConfig): PSO parameters
        objective (SearchObjective): problem to solve
        rng (numpy.random.Generator): generator of the run

    Returns:
        Swarm: swarm of the next generation
    """
    w = inertia_at(swarm.generation, config)
    velocities = update_velocity(
        swarm.positions,
        swarm.velocities,
        swarm.personal_best,
        swarm.best_position,
        w,
        config,
        rng,
    )
    velocities = balance_moves(objective, velocities)
    positions, velocities = update_position(swarm.positions, velocities, objective.upper_bounds)
    positions = repair_budget(objective, positions)
    fitness = population_fitness(objective, positions)

    improved = fitness < swarm.personal_best_fitness
    personal_best = np.where(improved[:, np.newaxis], positions, swarm.personal_best)
    personal_best_fitness = np.where(improved, fitness, swarm.personal_best_fitness)
    global_best = _global_best_index(personal_best_fitness)

    return Swarm(
        positions=positions,
        velocities=velocities,
        fitness=fitness,
        personal_best=personal_best,
        personal_best_fitness=personal_best_fitness,
        global_best=global_best,
        generation=swarm.generation + 1,
        best_history=swarm.best_history + [float(personal_best_fitness[global_best])],
    )


class ParticleSwarm(SearchTemplate):
    def __init__(self, config):
        """
        Args:
            config (PsoConfig): variant, swarm size, coefficients and termination rule
        """
        super(ParticleSwarm, self).__init__(config.termination)
        self.config = config

    def init_state(self, objective, rng):
        positions = repair_budget(objective, init_population(objective, self.config.swarm_size, rng))
        fitness = population_fitness(objective, positions)
        global_best = _global_best_index(fitness)
        return Swarm(
            positions=positions,
            velocities=np.zeros_like(positions),
            fitness=fitness,
            personal_best=positions.copy(),
            personal_best_fitness=fitness.copy(),
            global_best=global_best,
            generation=0,
            best_history=[float(fitness[global_best])],
        )

    def step(self, state, objective, rng):
        return pso_step(state, self.config, objective, rng)


def run_pso(config, objective, seed):
    """
    Args:
        config (PsoConfig): PSO configuration
        objective (SearchObjective): problem to solve
        seed (int): seed of the run

    Returns:
        SearchResult: best flow found
    """
    return ParticleSwarm(config).run(objective, seed)
