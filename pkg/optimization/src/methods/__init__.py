from .search_template import (
    SearchObjective,
    SearchResult,
    SearchTemplate,
    TerminationRule,
    TrialSummary,
    balance_moves,
    budget_residuals,
    clamp_flows,
    init_population,
    is_stagnant,
    penalized_fitness,
    population_fitness,
    repair_budget,
    run_trials,
)
from .ep import EpConfig, EvolutionaryProgramming, run_ep
from .pso import PsoConfig, ParticleSwarm, run_pso
from .oracle import KktOracle

METHODS = ['ep-gauss', 'ep-cauchy', 'ep-hybrid', 'pso', 'pso-chi', 'oracle']
COMPARED_METHODS = ['ep-gauss', 'ep-cauchy', 'ep-hybrid', 'pso', 'pso-chi']


def get_optimizer(method, population_size=None, max_generations=None):
    """
    Args:
        method (str): ep-gauss / ep-cauchy / ep-hybrid / pso / pso-chi / oracle
        population_size (int): overrides the default population (or swarm) size of the method
        max_generations (int): overrides the default generation cap of the method

    Returns:
        object: optimizer exposing run(objective, random_seed)
    """
    options = {}
    if max_generations is not None:
        options['termination'] = TerminationRule(max_generations=max_generations)

    if method in ['ep-gauss', 'ep-cauchy', 'ep-hybrid']:
        variant = {'ep-gauss': 'gaussian', 'ep-cauchy': 'cauchy', 'ep-hybrid': 'hybrid'}[method]
        return EvolutionaryProgramming(EpConfig(variant=variant, population_size=population_size, **options))
    elif method in ['pso', 'pso-chi']:
        if population_size is not None:
            options['swarm_size'] = population_size
        variant = 'constriction' if method == 'pso-chi' else 'inertia'
        return ParticleSwarm(PsoConfig(variant=variant, **options))
    elif method == 'oracle':
        return KktOracle()
    else:
        raise ValueError('Unknown method {}'.format(method))
