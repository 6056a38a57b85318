from .predictor_training import PredictorTraining
from .flow_prediction import FlowPrediction
from .predictor_evaluation import PredictorEvaluation, compare_predictions, plot_frames
