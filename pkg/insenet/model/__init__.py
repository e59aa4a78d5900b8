from .spec import InceptionBlockSpec, ModelSpec, SEBlockSpec, default_model_spec, miniature_model_spec
from .layers import InceptionBlock, SEBlock
from .network import InseNet, build_model, count_parameters, forward, forward_batch
from .checkpoint import CHECKPOINT_FORMAT, Checkpoint, load_checkpoint, save_checkpoint
from .inference import predict_pairs

__all__ = [
    "InceptionBlockSpec",
    "ModelSpec",
    "SEBlockSpec",
    "default_model_spec",
    "miniature_model_spec",
    "InceptionBlock",
    "SEBlock",
    "InseNet",
    "build_model",
    "count_parameters",
    "forward",
    "forward_batch",
    "CHECKPOINT_FORMAT",
    "Checkpoint",
    "load_checkpoint",
    "save_checkpoint",
    "predict_pairs",
]
