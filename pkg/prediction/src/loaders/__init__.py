from .model_io import MODEL_HEADER, load_model, parse_model, save_model
