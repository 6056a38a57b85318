import os

import pandas as pd
from torch.utils.tensorboard.writer import SummaryWriter

from optimization.src.loaders import TRAINING, read_dataset
from optimization.src.network import load_topology
from prediction.src.loaders import save_model
from prediction.src.methods import TrainConfig, train
from utils import configs
from utils.io_utils import path_to_step_output, set_and_print_random_seed, write_frame


class PredictorTraining():
    """
    This step trains the load-to-flow predictor on a training dataset
    """

    def __init__(
            self,
            dataset_path,
            topology_path=configs.reference_topology,
            hidden_size=configs.hidden_size,
            learning_rate=configs.learning_rate,
            momentum=configs.momentum,
            n_epochs=configs.n_epochs,
            random_seed=None,
            output_dir=configs.save_dir,
            tensorboard_dir=None,
            print_freq=500,
    ):
        """
        Args:
            dataset_path (str): training CSV written by the DatasetGeneration step
            topology_path (str): path to the topology file the dataset was built on
            hidden_size (int): number of hidden nodes
            learning_rate (float): learning rate of the momentum backpropagation
            momentum (float): momentum constant in [0, 1)
            n_epochs (int): number of epochs of online updates
            random_seed (int): seed for random instantiations ; if none is provided, a seed is randomly defined
            output_dir (str): path to experiments output directory
            tensorboard_dir (str): if given, the learning curve is also written there for TensorBoard
            print_freq (int): print the training error every print_freq epochs
        """
        self.dataset_path = dataset_path
        self.topology_path = topology_path
        self.hidden_size = hidden_size
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.n_epochs = n_epochs
        self.random_seed = random_seed
        self.tensorboard_dir = tensorboard_dir
        self.print_freq = print_freq

        self.checkpoint_dir = path_to_step_output(output_dir)

    def apply(self):
        """
        Execute the PredictorTraining step
        Returns:
            tuple: trained FlowPredictor and its per-epoch error history, written to model.txt and
            learning_curve.csv
        """
        self.random_seed = set_and_print_random_seed(self.random_seed, True, self.checkpoint_dir)

        topology = load_topology(self.topology_path)
        dataset = read_dataset(self.dataset_path, TRAINING)
        config = TrainConfig(
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            max_epochs=self.n_epochs,
            seed=self.random_seed,
        )

        writer = SummaryWriter(log_dir=self.tensorboard_dir) if self.tensorboard_dir is not None else None
        model, history = train(dataset, config, topology, self.hidden_size, self.print_freq, writer)
        if writer is not None:
            writer.close()

        save_model(model, os.path.join(self.checkpoint_dir, 'model.txt'))
        write_frame(
            pd.DataFrame({'epoch': range(1, len(history) + 1), 'mse': history}),
            os.path.join(self.checkpoint_dir, 'learning_curve.csv'),
        )
        print('Final training MSE {}'.format(history[-1]))

        return model, history
