"""Finite-difference verification of reverse-mode gradients."""

from __future__ import annotations

import numpy as np

from .tensor import Tensor

REL_FLOOR = 1e-3


def grad_check(f, x: np.ndarray | Tensor, h: float = 1e-5) -> float:
    """Max relative error between reverse-mode and central-difference grads.

    f maps a Tensor to a scalar Tensor. Each coordinate is perturbed by +/- h
    and the relative error uses max(|analytic| + |numeric|, REL_FLOOR) as the
    denominator so near-zero gradients are compared at a sane scale.
    """
    x0 = np.array(x.data if isinstance(x, Tensor) else x, dtype=np.float64)

    tracked = Tensor(x0.copy(), requires_grad=True)
    out = f(tracked)
    if out.size != 1:
        raise ValueError("grad_check needs a scalar-valued function")
    out.backward()
    analytic = tracked.grad.copy()

    numeric = np.zeros_like(x0)
    flat = x0.reshape(-1)
    num_flat = numeric.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        f_plus = float(f(Tensor(x0.copy())).data)
        flat[i] = orig - h
        f_minus = float(f(Tensor(x0.copy())).data)
        flat[i] = orig
        num_flat[i] = (f_plus - f_minus) / (2.0 * h)

    denom = np.maximum(np.abs(analytic) + np.abs(numeric), REL_FLOOR)
    return float(np.max(np.abs(analytic - numeric) / denom))
