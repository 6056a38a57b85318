import os

import pandas as pd

from optimization.src.loaders import flow_columns
from optimization.src.network import delay_msec, load_topology, mean_link_utilization, total_capacity
from prediction.src.loaders import load_model
from prediction.src.methods import predict_flows
from utils import configs
from utils.errors import LoadOutOfRangeError
from utils.io_utils import path_to_step_output, write_frame


class FlowPrediction():
    """
    This step predicts the flow distribution of one total load with a trained model, and recomputes the delay
    and mean link utilization of the prediction
    """

    def __init__(
            self,
            model_path,
            load,
            topology_path=configs.reference_topology,
            output_dir=configs.save_dir,
            renormalize=False,
    ):
        """
        Args:
            model_path (str): model file written by the PredictorTraining step
            load (float): total load in kbps
            topology_path (str): path to the topology file
            output_dir (str): path to experiments output directory
            renormalize (bool): rescale the predicted flows so that they sum to the load
        """
        self.model_path = model_path
        self.load = float(load)
        self.topology_path = topology_path
        self.renormalize = renormalize

        self.checkpoint_dir = path_to_step_output(output_dir)

    def apply(self):
        """
        Execute the FlowPrediction step
        Returns:
            pandas.DataFrame: one row with the load, delay, M.L.U and predicted flows, written to prediction.csv
        """
        topology = load_topology(self.topology_path)
        if not 0 < self.load < total_capacity(topology):
            raise LoadOutOfRangeError('load {load} kbps outside (0, {capacity}) kbps'.format(
                load=self.load, capacity=total_capacity(topology),
            ))
        model = load_model(self.model_path, topology)

        flows = predict_flows(model, self.load, self.renormalize)
        delay = delay_msec(topology, flows)
        mlu = mean_link_utilization(topology, flows)

        frame = pd.DataFrame(
            [[self.load, delay, mlu] + list(flows)],
            columns=['load', 'delay_msec', 'mlu'] + flow_columns(topology.n_links),
        )
        write_frame(frame, os.path.join(self.checkpoint_dir, 'prediction.csv'))

        print('Load {load:.1f} kbps | Delay {delay:.4f} msec | M.L.U {mlu:.4f}'.format(
            load=self.load, delay=delay, mlu=mlu,
        ))
        print('Flows (kbps): ' + ' '.join('{:.3f}'.format(flow) for flow in flows))

        return frame
