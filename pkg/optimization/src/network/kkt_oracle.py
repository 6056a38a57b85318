import numpy as np

from optimization.src.network.topology import FlowVector
from utils import configs
from utils.errors import LoadOutOfRangeError


def _water_filling(capacities, load_kbps, max_iter=configs.oracle_max_iter, tolerance=configs.oracle_tolerance):
    """
    Solves the stationarity conditions C_i / (C_i - f_i)^2 = lambda under sum(f) = load by bisection on lambda.
    Links with C_i - sqrt(C_i / lambda) < 0 carry no flow.
    Args:
        capacities (numpy.ndarray): link capacities in kbps
        load_kbps (float): total load to distribute
        max_iter (int): maximum number of bisection iterations
        tolerance (float): stop when |sum(f) - load| is below this value, in kbps

    Returns:
        tuple: flows (numpy.ndarray) and the multiplier lambda (float)
    """
    total = capacities.sum()
    if not 0 < load_kbps < total:
        raise LoadOutOfRangeError(
            'load {load} kbps must lie strictly between 0 and the total capacity {total} kbps'.format(
                load=load_kbps, total=total,
            )
        )

    def flows_at(lam):
        return np.maximum(capacities - np.sqrt(capacities / lam), 0.0)

    # below 1 / max(C) no link is active, so the budget residual is -load there
    lam_low = 1.0 / capacities.max()
    lam_high = 2.0 * lam_low
    while flows_at(lam_high).sum() < load_kbps:
        lam_low = lam_high
        lam_high *= 2.0

    lam = 0.5 * (lam_low + lam_high)
    for _ in range(max_iter):
        lam = 0.5 * (lam_low + lam_high)
        residual = flows_at(lam).sum() - load_kbps
        if abs(residual) <= tolerance:
            break
        if residual < 0:
            lam_low = lam
        else:
            lam_high = lam

    return flows_at(lam), float(lam)


def kkt_optimal_flow(topology, load_kbps):
    """
    Analytic minimizer of the average delay for a given total load (water-filling on equalized marginal delays)
    Args:
        topology (NetworkTopology): network
        load_kbps (float): total load, strictly between 0 and the total capacity

    Returns:
        FlowVector: optimal flows, summing to the load within 1e-6 kbps
    """
    flows, _ = _water_filling(topology.capacities, load_kbps)
    return FlowVector(flows)


def kkt_multiplier(topology, load_kbps):
    """
    Args:
        topology (NetworkTopology): network
        load_kbps (float): total load, strictly between 0 and the total capacity

    Returns:
        float: common marginal delay C_i / (C_i - f_i)^2 of the active links at the optimum
    """
    _, lam = _water_filling(topology.capacities, load_kbps)
    return lam
