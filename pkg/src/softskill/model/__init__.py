"""Trainable classifiers: mean-embedding logistic regression, CNN and LSTM."""

from .adam import Adam
from .checkpoint import load_model, save_model
from .gradcheck import gradient_check, relative_errors
from .network import (ClassifierModel, ModelKind, Prediction, forward, init_model,
                      predict_logits, predict_proba)
from .training import TrainConfig, TrainingLog, build_vocab, train

__all__ = [
    "Adam", "ClassifierModel", "ModelKind", "Prediction", "TrainConfig", "TrainingLog",
    "build_vocab", "forward", "gradient_check", "init_model", "load_model", "predict_logits",
    "predict_proba", "relative_errors", "save_model", "train",
]
