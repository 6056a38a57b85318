import os

import numpy as np
import pandas as pd

from optimization.src.loaders import TEST, TRAINING, read_dataset
from optimization.src.network import delay_msec, load_topology, mean_link_utilization
from prediction.src.loaders import load_model
from prediction.src.methods import predict_flows
from utils import configs
from utils.io_utils import path_to_step_output, write_frame


def compare_predictions(model, dataset, topology, renormalize=False):
    """
    Delay and M.L.U are recomputed from the optimal and the predicted flows, stored columns are not used
    Args:
        model (FlowPredictor): trained model
        dataset (Dataset): rows holding optimal flows
        topology (NetworkTopology): network
        renormalize (bool): rescale the predicted flows so that they sum to the load

    Returns:
        pandas.DataFrame: one row per load with optimal and predicted delay and M.L.U, their errors and the
        predicted flows p1..pN
    """
    predictions = predict_flows(model, dataset.loads, renormalize)
    records = []
    for row, predicted in zip(dataset.rows, predictions):
        optimal_delay = delay_msec(topology, np.array(row.flows))
        predicted_delay = delay_msec(topology, predicted)
        optimal_mlu = mean_link_utilization(topology, np.array(row.flows))
        predicted_mlu = mean_link_utilization(topology, predicted)
        records.append([
            row.load_kbps,
            optimal_delay,
            predicted_delay,
            abs(predicted_delay - optimal_delay) / optimal_delay,
            optimal_mlu,
            predicted_mlu,
            abs(predicted_mlu - optimal_mlu),
        ] + list(predicted))

    return pd.DataFrame(records, columns=[
        'load', 'optimal_delay_msec', 'predicted_delay_msec', 'delay_rel_error',
        'optimal_mlu', 'predicted_mlu', 'mlu_abs_error',
    ] + ['p{}'.format(link) for link in range(1, topology.n_links + 1)])


def plot_frames(comparison):
    """
    Returns:
        tuple: delay and M.L.U plot data, each with columns load, optimal, predicted
    """
    delay_plot = comparison[['load', 'optimal_delay_msec', 'predicted_delay_msec']].rename(
        columns={'optimal_delay_msec': 'optimal', 'predicted_delay_msec': 'predicted'},
    )
    mlu_plot = comparison[['load', 'optimal_mlu', 'predicted_mlu']].rename(
        columns={'optimal_mlu': 'optimal', 'predicted_mlu': 'predicted'},
    )
    return delay_plot, mlu_plot


class PredictorEvaluation():
    """
    This step compares the predictions of a trained model with the optimal flows of a test dataset (and
    optionally of the training dataset)
    """

    def __init__(
            self,
            model_path,
            dataset_path,
            topology_path=configs.reference_topology,
            training_dataset_path=None,
            output_dir=configs.save_dir,
            renormalize=False,
    ):
        """
        Args:
            model_path (str): model file written by the PredictorTraining step
            dataset_path (str): test CSV written by the DatasetGeneration step
            topology_path (str): path to the topology file
            training_dataset_path (str): if given, the training set is evaluated as well
            output_dir (str): path to experiments output directory
            renormalize (bool): rescale the predicted flows so that they sum to the load
        """
        self.model_path = model_path
        self.dataset_path = dataset_path
        self.topology_path = topology_path
        self.training_dataset_path = training_dataset_path
        self.renormalize = renormalize

        self.checkpoint_dir = path_to_step_output(output_dir)

    def apply(self):
        """
        Execute the PredictorEvaluation step
        Returns:
            dict: comparison DataFrame of each evaluated set ('test', and 'train' if a training set is given),
            written to <set>_evaluation.csv with <set>_delay_plot.csv and <set>_mlu_plot.csv
        """
        topology = load_topology(self.topology_path)
        model = load_model(self.model_path, topology)

        datasets = [('test', read_dataset(self.dataset_path, TEST))]
        if self.training_dataset_path is not None:
            datasets.append(('train', read_dataset(self.training_dataset_path, TRAINING)))

        comparisons = {}
        for name, dataset in datasets:
            comparison = compare_predictions(model, dataset, topology, self.renormalize)
            delay_plot, mlu_plot = plot_frames(comparison)
            write_frame(comparison, os.path.join(self.checkpoint_dir, name + '_evaluation.csv'))
            write_frame(delay_plot, os.path.join(self.checkpoint_dir, name + '_delay_plot.csv'))
            write_frame(mlu_plot, os.path.join(self.checkpoint_dir, name + '_mlu_plot.csv'))

            print('{name} set | Mean delay error {delay:.2%} | Rows within 10% {within}/{n_rows} '
                  '| Mean M.L.U error {mlu:.4f}'.format(
                      name=name,
                      delay=comparison['delay_rel_error'].mean(),
                      within=int((comparison['delay_rel_error'] <= 0.1).sum()),
                      n_rows=len(comparison),
                      mlu=comparison['mlu_abs_error'].mean(),
                  ))
            comparisons[name] = comparison

        return comparisons
