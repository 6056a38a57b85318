from dataclasses import dataclass

import numpy as np
import torch
import torch.nn as nn

from optimization.src.network import total_capacity
from utils import configs


class FlowPredictor(nn.Module):
    """
    Feed-forward network mapping a total load to the flow of every link: one input, a sigmoid hidden layer
    with bias, and a sigmoid output layer without bias (unless output_bias is set). The input is the load divided
    by the width of input_scale; output j is multiplied by output_scale[j], so predictions lie in [0, C_j].
    """

    def __init__(self, n_outputs, hidden_size=configs.hidden_size, input_scale=(0.0, 1.0), output_scale=None,
                 output_bias=False):
        """
        Args:
            n_outputs (int): number of links
            hidden_size (int): number of hidden nodes
            input_scale (tuple): (min, max) load normalization bounds in kbps
            output_scale (sequence of float): per-link denormalization constants, the link capacities
            output_bias (bool): add a bias to the output nodes
        """
        super(FlowPredictor, self).__init__()
        if not input_scale[0] < input_scale[1]:
            raise ValueError('input_scale must satisfy min < max')
        if output_scale is None:
            output_scale = np.ones(n_outputs)
        if len(output_scale) != n_outputs:
            raise ValueError('output_scale must have one value per output')

        self.hidden = nn.Linear(1, hidden_size)
        self.output = nn.Linear(hidden_size, n_outputs, bias=output_bias)
        self.register_buffer('input_scale', torch.tensor(input_scale, dtype=torch.float64))
        self.register_buffer('output_scale', torch.tensor(output_scale, dtype=torch.float64))
        self.double()

    @property
    def layer_sizes(self):
        return 1, self.hidden.out_features, self.output.out_features

    @property
    def output_bias(self):
        return self.output.bias is not None

    def forward(self, normalized_loads):
        """
        Args:
            normalized_loads (torch.Tensor): shape (batch, 1) loads in [0, 1]

        Returns:
            torch.Tensor: shape (batch, n_outputs) normalized flows in (0, 1)
        """
        return torch.sigmoid(self.output(torch.sigmoid(self.hidden(normalized_loads))))

    def normalize_loads(self, loads_kbps):
        loads = torch.as_tensor(np.atleast_1d(loads_kbps), dtype=torch.float64).reshape(-1, 1)
        return (loads - self.input_scale[0]) / (self.input_scale[1] - self.input_scale[0])

    def normalize_flows(self, flows_kbps):
        return torch.as_tensor(np.atleast_2d(flows_kbps), dtype=torch.float64) / self.output_scale


def build_predictor(topology, hidden_size=configs.hidden_size, output_bias=False):
    """
    Args:
        topology (NetworkTopology): network whose links are predicted
        hidden_size (int): number of hidden nodes
        output_bias (bool): add a bias to the output nodes

    Returns:
        FlowPredictor: loads normalized by the total capacity, outputs scaled by link capacities
    """
    return FlowPredictor(
        topology.n_links,
        hidden_size=hidden_size,
        input_scale=(0.0, total_capacity(topology)),
        output_scale=topology.capacities,
        output_bias=output_bias,
    )


def renormalize_flows(flows, loads_kbps, capacities, epsilon_capacity=configs.epsilon_capacity):
    """
    Rescales each row of flows so that it sums to its load. Links pushed to C_i - epsilon_capacity are held there
    and the rest of the load is spread over the other links in proportion to their predicted flows.
    Args:
        flows (numpy.ndarray): shape (n_loads, n_links) positive predicted flows
        loads_kbps (array-like): shape (n_loads,) total loads
        capacities (numpy.ndarray): shape (n_links,) link capacities
        epsilon_capacity (float): margin kept below every capacity

    Returns:
        numpy.ndarray: renormalized flows; a row whose load exceeds sum(C_i - epsilon_capacity) stays at the bounds
    """
    bounds = np.asarray(capacities, dtype=float) - epsilon_capacity
    renormalized = np.array(flows, dtype=float)
    for row, load in zip(renormalized, np.atleast_1d(loads_kbps)):
        predicted = row.copy()
        capped = np.zeros(len(row), dtype=bool)
        while not capped.all():
            free = ~capped
            row[free] = predicted[free] * (load - bounds[capped].sum()) / predicted[free].sum()
            newly_capped = free & (row > bounds)
            if not newly_capped.any():
                break
            capped |= newly_capped
            row[capped] = bounds[capped]
    return renormalized


def predict_flows(model, loads_kbps, renormalize=False):
    """
    Args:
        model (FlowPredictor): trained model
        loads_kbps (float or array-like): total loads, extrapolation beyond input_scale is allowed
        renormalize (bool): rescale each prediction so that it sums to its load, without reaching any capacity

    Returns:
        numpy.ndarray: shape (n_loads, n_links), or (n_links,) for a scalar load, flows in kbps
    """
    with torch.no_grad():
        flows = (model(model.normalize_loads(loads_kbps)) * model.output_scale).numpy()
    if renormalize:
        flows = renormalize_flows(flows, loads_kbps, model.output_scale.numpy())
    if np.ndim(loads_kbps) == 0:
        return flows[0]
    return flows


@dataclass
class TrainConfig:
    learning_rate: float = configs.learning_rate
    momentum: float = configs.momentum
    max_epochs: int = configs.n_epochs
    weight_init_range: tuple = configs.weight_init_range
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError('learning_rate must be positive')
        if not 0 <= self.momentum < 1:
            raise ValueError('momentum must lie in [0, 1)')
        if self.max_epochs < 1:
            raise ValueError('max_epochs must be at least 1')
        if not self.weight_init_range[0] < self.weight_init_range[1]:
            raise ValueError('weight_init_range must satisfy lo < hi')


def init_weights(model, weight_init_range, generator):
    """
    Draws every weight and bias uniformly in weight_init_range
    Args:
        model (FlowPredictor): model to initialize in place
        weight_init_range (tuple): (lo, hi)
        generator (torch.Generator): seeded generator
    """
    low, high = weight_init_range
    with torch.no_grad():
        for parameter in model.parameters():
            draws = torch.rand(parameter.shape, generator=generator, dtype=torch.float64)
            parameter.copy_(low + (high - low) * draws)


def squared_error(model, normalized_load, normalized_target):
    """
    Returns:
        torch.Tensor: 0.5 * sum of squared errors over the normalized outputs
    """
    return 0.5 * torch.sum((model(normalized_load) - normalized_target) ** 2)


def get_optimizer(model, config):
    """
    Momentum update: delta_t = -learning_rate * grad_t + momentum * delta_{t-1}. The optimizer holds the
    previous deltas.
    Args:
        model (FlowPredictor): model to train
        config (TrainConfig): learning rate and momentum

    Returns:
        torch.optim.SGD: optimizer holding the velocity state
    """
    return torch.optim.SGD(model.parameters(), lr=config.learning_rate, momentum=config.momentum)


def backprop_step(model, normalized_load, normalized_target, optimizer):
    """
    One online update on one sample
    Args:
        model (FlowPredictor): model updated in place
        normalized_load (torch.Tensor): shape (1, 1)
        normalized_target (torch.Tensor): shape (1, n_outputs) target flows divided by output_scale
        optimizer (torch.optim.SGD): momentum state

    Returns:
        float: squared error of the sample before the update
    """
    optimizer.zero_grad()
    loss = squared_error(model, normalized_load, normalized_target)
    loss.backward()
    optimizer.step()
    return loss.item()


def mean_squared_error(model, normalized_loads, normalized_targets):
    with torch.no_grad():
        return torch.mean((model(normalized_loads) - normalized_targets) ** 2).item()


def train(dataset, config, topology, hidden_size=configs.hidden_size, print_freq=None, writer=None):
    """
    Online backpropagation with momentum over shuffled epochs
    Args:
        dataset (Dataset): training rows (load and optimal flows)
        config (TrainConfig): hyperparameters and seed
        topology (NetworkTopology): network giving the normalization constants
        hidden_size (int): number of hidden nodes
        print_freq (int): print the error every print_freq epochs, never if None
        writer (torch.utils.tensorboard.SummaryWriter): optional writer receiving the error of each epoch

    Returns:
        tuple: trained FlowPredictor and the list of mean squared errors (normalized outputs) after each epoch
    """
    if len(dataset) == 0:
        raise ValueError('cannot train on an empty dataset')
    if dataset.flows.shape[1] != topology.n_links:
        raise ValueError('dataset has {} links, topology has {}'.format(dataset.flows.shape[1], topology.n_links))

    generator = torch.Generator().manual_seed(int(config.seed))
    model = build_predictor(topology, hidden_size)
    init_weights(model, config.weight_init_range, generator)
    optimizer = get_optimizer(model, config)

    loads = model.normalize_loads(dataset.loads)
    targets = model.normalize_flows(dataset.flows)

    history = []
    for epoch in range(config.max_epochs):
        for index in torch.randperm(len(dataset), generator=generator).tolist():
            backprop_step(model, loads[index:index + 1], targets[index:index + 1], optimizer)

        history.append(mean_squared_error(model, loads, targets))
        if writer is not None:
            writer.add_scalar('mse', history[-1], epoch)
        if print_freq is not None and epoch % print_freq == 0:
            print('Epoch {epoch}/{n_epochs} | Loss {loss}'.format(
                epoch=epoch, n_epochs=config.max_epochs, loss=history[-1],
            ))

    return model, history
