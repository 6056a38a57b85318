from optimization.src.methods.search_template import SearchResult
from optimization.src.network import delay_msec, kkt_optimal_flow


class KktOracle:
    """
    Analytic optimum, exposed with the same run interface as the metaheuristics
    """

    def run(self, objective, random_seed=None):
        """
        Args:
            objective (SearchObjective): problem to solve
            random_seed (int): unused, the oracle is deterministic

        Returns:
            SearchResult: optimal flow, with zero generations
        """
        best_flow = kkt_optimal_flow(objective.topology, objective.load_kbps)
        best_delay = delay_msec(objective.topology, best_flow)
        return SearchResult(
            best_flow=best_flow,
            best_delay_msec=best_delay,
            generations=0,
            wall_time_sec=0.0,
            converged=True,
            constraint_residual=best_flow.budget_residual(objective.load_kbps),
            trace=[(0, best_delay, best_delay, best_flow.budget_residual(objective.load_kbps))],
        )
