import os

save_dir = './output'

repository_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
reference_topology = os.path.join(repository_root, 'optimization', 'configs', 'paper_net.topo')

# Delay objective
budget_tolerance = 1e-3  # relative to the load
epsilon_capacity = 1e-3  # kbps
penalty_weight = 1000.0  # msec per unit of relative budget violation
penalty_margin = 2.0  # multiple of the exact-penalty threshold when it exceeds penalty_weight

# Oracle
oracle_max_iter = 200
oracle_tolerance = 1e-6  # kbps

# Search
init_range = (1.0, 50.0)
stagnation_window = 20
delta_threshold = 1e-8
max_generations = 5000
pso_max_generations = 200
repair_iterations = 60  # bisection steps of the budget repair
repair_tolerance = 1e-9  # kbps, rows this close to the load are left as they are

# Evolutionary programming
ep_sigma = 0.01
ep_population_size = {'gaussian': 150, 'cauchy': 150, 'hybrid': 100}

# Particle swarm
pso_swarm_size = 300
pso_chi = 0.75
pso_w_start = 1.2
pso_w_end = 0.1
pso_c1 = 0.5
pso_c2 = 0.5

# Trials
n_trials = 10
comparison_load_fraction = 0.6

# Dataset schedule
schedule_from_frac = 0.30
schedule_to_frac = 0.89
schedule_count = 10
test_offset = 30.0

# Predictor
hidden_size = 7
learning_rate = 0.9
momentum = 0.2
n_epochs = 5000
weight_init_range = (-0.5, 0.5)
retry_seed_offset = 1000000
