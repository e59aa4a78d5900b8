from .core import run_evaluate, run_predict, run_train

__version__ = "0.1.0"

__all__ = ["run_evaluate", "run_predict", "run_train"]
