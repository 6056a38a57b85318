import os

import torch

from prediction.src.methods.mlp import FlowPredictor
from utils.errors import ModelDimensionError, ModelFileError, ModelVersionError

MODEL_HEADER = 'flowopt-mlp v1'


def _format_row(values):
    return ' '.join(repr(float(value)) for value in values)


def save_model(model, path):
    """
    Writes the model as text: header, layer sizes, scales (input min, input max, one output scale per link),
    one row per hidden node (input weight then bias) and one row per output node (hidden weights then the bias
    if the output layer has one). Floats are written with repr so that loading is exact.
    Args:
        model (FlowPredictor): model to save
        path (str): output file
    """
    dirname = os.path.dirname(path)
    if dirname and not os.path.isdir(dirname):
        os.makedirs(dirname)

    hidden_weights = model.hidden.weight.detach()
    hidden_bias = model.hidden.bias.detach()
    output_weights = model.output.weight.detach()

    lines = [
        MODEL_HEADER,
        ' '.join(str(size) for size in model.layer_sizes),
        _format_row(model.input_scale.tolist() + model.output_scale.tolist()),
    ]
    for node in range(hidden_weights.shape[0]):
        lines.append(_format_row(hidden_weights[node].tolist() + [hidden_bias[node].item()]))
    for node in range(output_weights.shape[0]):
        row = output_weights[node].tolist()
        if model.output_bias:
            row.append(model.output.bias[node].item())
        lines.append(_format_row(row))

    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write('\n'.join(lines) + '\n')


def _parse_floats(line, line_number):
    try:
        return [float(value) for value in line.split()]
    except ValueError:
        raise ModelFileError('line {}: malformed number'.format(line_number))


def parse_model(text):
    """
    Args:
        text (str): content of a model file

    Returns:
        FlowPredictor: model with the stored weights and scales
    """
    lines = [line.strip() for line in text.split('\n') if line.strip() != '']
    if len(lines) == 0:
        raise ModelFileError('empty model file')
    if lines[0] != MODEL_HEADER:
        if lines[0].startswith('flowopt-mlp'):
            raise ModelVersionError('unsupported model version "{}", expected "{}"'.format(lines[0], MODEL_HEADER))
        raise ModelFileError('missing "{}" header'.format(MODEL_HEADER))
    if len(lines) < 3:
        raise ModelFileError('model file is truncated')

    try:
        sizes = [int(size) for size in lines[1].split()]
    except ValueError:
        raise ModelFileError('line 2: malformed layer sizes')
    if len(sizes) != 3 or sizes[0] != 1 or min(sizes) < 1:
        raise ModelDimensionError('layer sizes must be "1 <hidden> <outputs>", got "{}"'.format(lines[1]))
    _, hidden_size, n_outputs = sizes

    scales = _parse_floats(lines[2], 3)
    if len(scales) != 2 + n_outputs:
        raise ModelDimensionError('expected {} scales, got {}'.format(2 + n_outputs, len(scales)))

    rows = [_parse_floats(line, line_number) for line_number, line in enumerate(lines[3:], start=4)]
    if len(rows) != hidden_size + n_outputs:
        raise ModelDimensionError('expected {} weight rows, got {}'.format(hidden_size + n_outputs, len(rows)))
    hidden_rows, output_rows = rows[:hidden_size], rows[hidden_size:]
    if any(len(row) != 2 for row in hidden_rows):
        raise ModelDimensionError('hidden rows must hold one weight and one bias')
    output_width = len(output_rows[0])
    if output_width not in [hidden_size, hidden_size + 1] or any(len(row) != output_width for row in output_rows):
        raise ModelDimensionError('output rows must hold {} or {} values'.format(hidden_size, hidden_size + 1))

    try:
        model = FlowPredictor(
            n_outputs,
            hidden_size=hidden_size,
            input_scale=tuple(scales[:2]),
            output_scale=scales[2:],
            output_bias=output_width == hidden_size + 1,
        )
    except ValueError as error:
        raise ModelFileError(str(error))

    hidden = torch.tensor(hidden_rows, dtype=torch.float64)
    output = torch.tensor(output_rows, dtype=torch.float64)
    with torch.no_grad():
        model.hidden.weight.copy_(hidden[:, :1])
        model.hidden.bias.copy_(hidden[:, 1])
        model.output.weight.copy_(output[:, :hidden_size])
        if model.output_bias:
            model.output.bias.copy_(output[:, hidden_size])

    return model


def load_model(path, topology=None):
    """
    Args:
        path (str): model file written by save_model
        topology (NetworkTopology): if given, the model must predict one flow per link of this topology

    Returns:
        FlowPredictor: loaded model
    """
    with open(path, 'r', encoding='utf-8') as f:
        model = parse_model(f.read())
    if topology is not None and model.layer_sizes[2] != topology.n_links:
        raise ModelDimensionError('model predicts {} links, topology has {}'.format(
            model.layer_sizes[2], topology.n_links,
        ))
    return model
