"""Minimal tensor ops, reverse-mode gradients, layers, and optimizers."""

from railcause.nn.ops import (
    GruParams,
    conv1d,
    conv1d_backward,
    cross_entropy,
    dense,
    dense_backward,
    dropout,
    dropout_backward,
    dropout_mask,
    grad_check,
    gru_cell,
    gru_cell_backward,
    gru_cell_forward,
    gru_layer,
    gru_layer_backward,
    gru_layer_forward,
    maxpool1d,
    maxpool1d_backward,
    maxpool1d_with_argmax,
    relu,
    relu_backward,
    sigmoid,
    softmax,
    softmax_cross_entropy,
)
from railcause.nn.optim import Adam, Sgd, make_optimizer
from railcause.nn.serialize import load_tensors, save_tensors

__all__ = [
    "GruParams",
    "conv1d",
    "conv1d_backward",
    "cross_entropy",
    "dense",
    "dense_backward",
    "dropout",
    "dropout_backward",
    "dropout_mask",
    "grad_check",
    "gru_cell",
    "gru_cell_backward",
    "gru_cell_forward",
    "gru_layer",
    "gru_layer_backward",
    "gru_layer_forward",
    "maxpool1d",
    "maxpool1d_backward",
    "maxpool1d_with_argmax",
    "relu",
    "relu_backward",
    "sigmoid",
    "softmax",
    "softmax_cross_entropy",
    "Adam",
    "Sgd",
    "make_optimizer",
    "load_tensors",
    "save_tensors",
]
