from .topology import LinkSpec, NetworkTopology, FlowVector, parse_topology, load_topology, total_capacity
from .delay import delay_msec, mean_link_utilization, marginal_delays
from .kkt_oracle import kkt_optimal_flow, kkt_multiplier
