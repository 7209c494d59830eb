from raganet.models.base import Layer
from raganet.models.layers import (
    LSTM,
    BatchNorm1D,
    Conv1D,
    Dense,
    Dropout,
    Flatten,
    MaxPool1D,
    ReLU,
    Softmax,
)
from raganet.models.losses import cross_entropy, one_hot
from raganet.models.network import Network, build_model_config, count_parameters
from raganet.models.optim import Adam, AdamState, adam_step

__all__ = [
    "Layer",
    "LSTM",
    "BatchNorm1D",
    "Conv1D",
    "Dense",
    "Dropout",
    "Flatten",
    "MaxPool1D",
    "ReLU",
    "Softmax",
    "cross_entropy",
    "one_hot",
    "Network",
    "build_model_config",
    "count_parameters",
    "Adam",
    "AdamState",
    "adam_step",
]
