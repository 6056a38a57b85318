import numpy as np

from utils.errors import InfeasibleFlowError, UndefinedDelayError


def _flows_array(topology, flow):
    flows = np.asarray(getattr(flow, 'flows_kbps', flow), dtype=float)
    if flows.shape != (topology.n_links,):
        raise InfeasibleFlowError(
            'expected {} link flows, got shape {}'.format(topology.n_links, flows.shape)
        )
    return flows


def _check_feasible(capacities, flows):
    if np.any(flows < 0):
        raise InfeasibleFlowError('negative flow on link(s) {}'.format((np.flatnonzero(flows < 0) + 1).tolist()))
    saturated = flows >= capacities
    if np.any(saturated):
        raise InfeasibleFlowError(
            'flow reaches capacity on link(s) {}'.format((np.flatnonzero(saturated) + 1).tolist())
        )


def delay_msec(topology, flow):
    """
    Average packet delay of the network, T = (1/gamma) sum_i f_i / (C_i - f_i), in milliseconds
    Args:
        topology (NetworkTopology): network with capacities C_i in kbps
        flow (FlowVector or array-like): flows f_i in kbps

    Returns:
        float: average delay in msec
    """
    capacities = topology.capacities
    flows = _flows_array(topology, flow)
    _check_feasible(capacities, flows)
    total = flows.sum()
    if total <= 0:
        raise UndefinedDelayError('average delay is undefined for a zero total load')

    return float(1000.0 * np.sum(flows / (capacities - flows)) / total)


def mean_link_utilization(topology, flow):
    """
    Args:
        topology (NetworkTopology): network with capacities C_i in kbps
        flow (FlowVector or array-like): flows f_i in kbps

    Returns:
        float: (1/N) sum_i f_i / C_i
    """
    capacities = topology.capacities
    flows = _flows_array(topology, flow)
    _check_feasible(capacities, flows)

    return float(np.mean(flows / capacities))


def marginal_delays(topology, flow):
    """
    Args:
        topology (NetworkTopology): network with capacities C_i in kbps
        flow (FlowVector or array-like): flows f_i in kbps

    Returns:
        numpy.ndarray: derivative of f_i / (C_i - f_i) with respect to f_i, i.e. C_i / (C_i - f_i)^2
    """
    capacities = topology.capacities
    flows = _flows_array(topology, flow)
    _check_feasible(capacities, flows)

    return capacities / (capacities - flows) ** 2
