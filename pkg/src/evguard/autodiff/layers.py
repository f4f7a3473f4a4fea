"""Neural layers used by both agents: dense, LSTM cell, attention block,
and Gaussian log-density heads (with optional tanh squashing)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tensor import Tensor

LOG_2PI = math.log(2.0 * math.pi)
SIGMA_FLOOR = 1e-3


def dense(x: Tensor, w: Tensor, b: Tensor) -> Tensor:
    """Affine map x @ w + b; b broadcasts over rows."""
    return x @ w + b


def relu(x: Tensor) -> Tensor:
    return x.relu()


def lstm_cell(
    x: Tensor, h: Tensor, c: Tensor, params: dict[str, Tensor]
) -> tuple[Tensor, Tensor]:
    """One LSTM step. params holds w_x (in, 4H), w_h (H, 4H), b (1, 4H);
    gate order along the last axis is input, forget, candidate, output."""
    hidden = h.shape[-1]
    z = x @ params["w_x"] + h @ params["w_h"] + params["b"]
    i = z[:, 0 * hidden : 1 * hidden].sigmoid()
    f = z[:, 1 * hidden : 2 * hidden].sigmoid()
    g = z[:, 2 * hidden : 3 * hidden].tanh()
    o = z[:, 3 * hidden : 4 * hidden].sigmoid()
    c_next = f * c + i * g
    h_next = o * c_next.tanh()
    return h_next, c_next


def attention_block(
    X: Tensor, params: dict[str, Tensor], return_weights: bool = False
):
    """Single-head scaled dot-product self-attention over a token matrix.

    X is (tokens, d); params holds square projections w_q, w_k, w_v, w_o.
    Returns softmax(Q K^T / sqrt(d)) V W_o, optionally with the attention
    weight matrix (rows sum to 1).
    """
    d = X.shape[-1]
    q = X @ params["w_q"]
    k = X @ params["w_k"]
    v = X @ params["w_v"]
    k_t = _transpose(k)
    attn = ((q @ k_t) * (1.0 / math.sqrt(d))).softmax(axis=-1)
    out = (attn @ v) @ params["w_o"]
    if return_weights:
        return out, attn
    return out


def _transpose(x: Tensor) -> Tensor:
    out = Tensor(x.data.T, parents=(x,))
    out._backward_fn = lambda g: x._accumulate(g.T)
    return out


@dataclass
class GaussianHead:
    """Mean and positive standard deviation of a scalar action distribution."""

    mu: Tensor
    sigma: Tensor

    def __post_init__(self):
        if np.any(self.sigma.data <= 0.0):
            raise ValueError("sigma must be positive")


def gaussian_head(raw: Tensor) -> GaussianHead:
    """Build a head from a (n, 2) raw output; sigma positivity comes from a
    softplus transform floored at SIGMA_FLOOR to keep exploration alive."""
    if raw.shape[-1] != 2:
        raise ValueError(f"head expects last dim 2, got {raw.shape}")
    mu = raw[:, 0:1]
    sigma = raw[:, 1:2].softplus() + SIGMA_FLOOR
    return GaussianHead(mu=mu, sigma=sigma)


def normal_logprob(head: GaussianHead, a) -> Tensor:
    """log N(a; mu, sigma), differentiable in mu and sigma (and a if a Tensor)."""
    a = a if isinstance(a, Tensor) else Tensor(a)
    z = (a - head.mu) / head.sigma
    return (-0.5 * LOG_2PI) + (-head.sigma.log()) + (-0.5) * z * z


def tanh_correction(z) -> Tensor:
    """log(1 - tanh(z)^2) computed stably: 2(log 2 - z - softplus(-2z))."""
    z = z if isinstance(z, Tensor) else Tensor(z)
    return 2.0 * ((math.log(2.0) - z) - ((-2.0) * z).softplus())


def squashed_gaussian_logprob(head: GaussianHead, z) -> Tensor:
    """Log-density of the action tanh(z) where z ~ N(mu, sigma): the normal
    log-density minus the tanh change-of-variables term."""
    return normal_logprob(head, z) - tanh_correction(z)
