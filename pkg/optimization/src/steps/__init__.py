from .flow_optimization import FlowOptimization, resolve_load
from .method_comparison import MethodComparison
from .dataset_generation import DatasetGeneration, build_dataset, load_schedule
