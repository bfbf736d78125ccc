from .dataset_io import load_features, write_embedding_csv, write_f32bin, write_features
from .model_store import dumps_model, load_model, loads_model, save_model
from .report_service import export_report, load_report_csv, load_report_json

__all__ = [
    "load_features", "write_embedding_csv", "write_f32bin", "write_features",
    "dumps_model", "load_model", "loads_model", "save_model",
    "export_report", "load_report_csv", "load_report_json",
]
