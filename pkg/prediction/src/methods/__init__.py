from .mlp import (
    FlowPredictor,
    TrainConfig,
    backprop_step,
    build_predictor,
    get_optimizer,
    init_weights,
    mean_squared_error,
    predict_flows,
    renormalize_flows,
    squared_error,
    train,
)
