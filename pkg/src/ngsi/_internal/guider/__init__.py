"""Neural rule selector: GRU encoder with a masked classifier, its training and its file format."""

from .adam import AdamState, adam_step
from .loss import batch_loss, gradient_check, loss_and_gradients
from .model import (
    DEFAULT_D_EMB,
    DEFAULT_D_H,
    PARAM_NAMES,
    GuiderModel,
    encode,
    encode_batch,
    init_model,
    masked_softmax,
    predict_batch,
    predict_rule_distribution,
    recurrent_cell,
    rule_masks,
    zero_model,
)
from .persistence import ModelHeader, ModelSummary, build_model_summary, load_model, save_model
from .training import (
    TrainConfig,
    TrainingLogRow,
    TrainingResult,
    read_training_log,
    step_accuracy,
    train,
    write_training_log,
)

__all__ = [
    "AdamState",
    "DEFAULT_D_EMB",
    "DEFAULT_D_H",
    "GuiderModel",
    "ModelHeader",
    "ModelSummary",
    "PARAM_NAMES",
    "TrainConfig",
    "TrainingLogRow",
    "TrainingResult",
    "adam_step",
    "batch_loss",
    "build_model_summary",
    "encode",
    "encode_batch",
    "gradient_check",
    "init_model",
    "load_model",
    "loss_and_gradients",
    "masked_softmax",
    "predict_batch",
    "predict_rule_distribution",
    "read_training_log",
    "recurrent_cell",
    "rule_masks",
    "save_model",
    "step_accuracy",
    "train",
    "write_training_log",
]
