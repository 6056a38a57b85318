from dataclasses import dataclass

import numpy as np

from utils import configs
from utils.errors import TopologyParseError


@dataclass(frozen=True)
class LinkSpec:
    id: int
    node_a: int
    node_b: int
    capacity_kbps: float

    def __post_init__(self):
        if self.node_a == self.node_b:
            raise ValueError('link {} is a self-loop on node {}'.format(self.id, self.node_a))
        if not self.capacity_kbps > 0:
            raise ValueError('link {} has non-positive capacity {}'.format(self.id, self.capacity_kbps))


@dataclass(frozen=True)
class NetworkTopology:
    """
    Immutable set of links of a packet network. Link ids are 1..N in the order of the links.
    """
    links: tuple
    node_count: int

    def __post_init__(self):
        if len(self.links) == 0:
            raise ValueError('a topology needs at least one link')
        ids = [link.id for link in self.links]
        if ids != list(range(1, len(self.links) + 1)):
            raise ValueError('link ids must be contiguous from 1, got {}'.format(ids))
        if self.node_count < 1:
            raise ValueError('node_count must be positive')

    @classmethod
    def from_links(cls, links):
        """
        Args:
            links (iterable of LinkSpec): links in id order

        Returns:
            NetworkTopology: topology whose node count is the number of distinct endpoints
        """
        links = tuple(links)
        nodes = {node for link in links for node in (link.node_a, link.node_b)}
        return cls(links=links, node_count=len(nodes))

    @classmethod
    def from_capacities(cls, capacities):
        """
        Builds a chain topology (node i to node i+1) carrying the given capacities, handy for toy networks
        Args:
            capacities (iterable of float): capacity of each link in kbps

        Returns:
            NetworkTopology
        """
        return cls.from_links(
            LinkSpec(id=index + 1, node_a=index + 1, node_b=index + 2, capacity_kbps=float(capacity))
            for index, capacity in enumerate(capacities)
        )

    @property
    def n_links(self):
        return len(self.links)

    @property
    def capacities(self):
        """
        Returns:
            numpy.ndarray: shape (n_links,) capacities in kbps
        """
        return np.array([link.capacity_kbps for link in self.links], dtype=float)

    @property
    def link_ids(self):
        return np.array([link.id for link in self.links], dtype=int)

    def permuted(self, order):
        """
        Reorders the links and renumbers them 1..N
        Args:
            order (sequence of int): zero-based indices of the current links, in their new order

        Returns:
            NetworkTopology: topology where new link k is old link order[k]
        """
        return NetworkTopology.from_links(
            LinkSpec(id=new_index + 1, node_a=self.links[old_index].node_a, node_b=self.links[old_index].node_b,
                     capacity_kbps=self.links[old_index].capacity_kbps)
            for new_index, old_index in enumerate(order)
        )


@dataclass(frozen=True)
class FlowVector:
    """
    Per-link flows in kbps. Their sum is the total load carried.
    """
    flows_kbps: tuple

    def __post_init__(self):
        object.__setattr__(self, 'flows_kbps', tuple(float(flow) for flow in self.flows_kbps))

    def __len__(self):
        return len(self.flows_kbps)

    def as_array(self):
        return np.array(self.flows_kbps, dtype=float)

    @property
    def total_kbps(self):
        return float(np.sum(self.as_array()))

    def budget_residual(self, load_kbps):
        """
        Args:
            load_kbps (float): target total load

        Returns:
            float: relative budget violation |sum(f) - load| / load
        """
        return abs(self.total_kbps - load_kbps) / load_kbps

    def is_feasible(self, topology, load_kbps, budget_tolerance=None):
        """
        Args:
            topology (NetworkTopology): network carrying the flows
            load_kbps (float): target total load
            budget_tolerance (float): allowed |sum(f) - load| in kbps, defaults to 1e-3 * load

        Returns:
            bool: True if 0 <= f_i < C_i on every link and the flows sum to the load within tolerance
        """
        if budget_tolerance is None:
            budget_tolerance = configs.budget_tolerance * load_kbps
        flows = self.as_array()
        if len(flows) != topology.n_links:
            return False
        return bool(
            np.all(flows >= 0)
            and np.all(flows < topology.capacities)
            and abs(flows.sum() - load_kbps) <= budget_tolerance
        )


def parse_topology(text):
    """
    Parses the content of a topology file. Data lines are `link <id> <node_a> <node_b> <capacity_kbps>`,
    lines starting with '#' are comments.
    Args:
        text (str): content of the topology file

    Returns:
        NetworkTopology: links in file order
    """
    links = []
    for line_number, line in enumerate(text.split('\n'), start=1):
        line = line.strip()
        if line == '' or line.startswith('#'):
            continue
        fields = line.split()
        if len(fields) != 5 or fields[0] != 'link':
            raise TopologyParseError(line_number, 'expected "link <id> <node_a> <node_b> <capacity_kbps>"')
        try:
            link_id, node_a, node_b = int(fields[1]), int(fields[2]), int(fields[3])
            capacity = float(fields[4])
        except ValueError:
            raise TopologyParseError(line_number, 'malformed number in "{}"'.format(line))

        if link_id in [link.id for link in links]:
            raise TopologyParseError(line_number, 'duplicate link id {}'.format(link_id))
        if link_id != len(links) + 1:
            raise TopologyParseError(line_number, 'link ids must be contiguous from 1, got {}'.format(link_id))
        if not capacity > 0:
            raise TopologyParseError(line_number, 'non-positive capacity {}'.format(fields[4]))
        if node_a == node_b:
            raise TopologyParseError(line_number, 'self-loop on node {}'.format(node_a))

        links.append(LinkSpec(id=link_id, node_a=node_a, node_b=node_b, capacity_kbps=capacity))

    if len(links) == 0:
        raise TopologyParseError(0, 'no link found')

    return NetworkTopology.from_links(links)


def load_topology(path):
    """
    Args:
        path (str): path to a topology file

    Returns:
        NetworkTopology: parsed topology
    """
    with open(path, 'r', encoding='utf-8') as f:
        return parse_topology(f.read())


def total_capacity(topology):
    """
    Args:
        topology (NetworkTopology): network

    Returns:
        float: sum of link capacities in kbps
    """
    return float(topology.capacities.sum())
