"""Minimal reverse-mode autodiff: tensors, layers, Adam, checkpoints."""

from .tensor import Tensor, concat
from .layers import (
    GaussianHead,
    attention_block,
    dense,
    gaussian_head,
    lstm_cell,
    normal_logprob,
    relu,
    squashed_gaussian_logprob,
    tanh_correction,
    SIGMA_FLOOR,
)
from .optim import ParamSet, adam_step
from .gradcheck import grad_check
from .checkpoint import load_params, save_params

__all__ = [
    "Tensor",
    "concat",
    "GaussianHead",
    "attention_block",
    "dense",
    "gaussian_head",
    "lstm_cell",
    "normal_logprob",
    "relu",
    "squashed_gaussian_logprob",
    "tanh_correction",
    "SIGMA_FLOOR",
    "ParamSet",
    "adam_step",
    "grad_check",
    "load_params",
    "save_params",
]
