"""Named parameter collections and an Adam optimizer over them."""

from __future__ import annotations

import numpy as np

from .tensor import Tensor


class ParamSet:
    """Named collection of trainable Tensors plus Adam moment buffers.

    Single-owner during a training step; the moment buffers mirror the
    parameter shapes exactly.
    """

    def __init__(self):
        self._params: dict[str, Tensor] = {}
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.t: int = 0

    def add(self, name: str, values: np.ndarray) -> Tensor:
        if name in self._params:
            raise ValueError(f"duplicate parameter name {name!r}")
        p = Tensor(np.asarray(values, dtype=np.float64), requires_grad=True)
        self._params[name] = p
        self.m[name] = np.zeros_like(p.data)
        self.v[name] = np.zeros_like(p.data)
        return p

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> list[str]:
        return list(self._params)

    def items(self):
        return self._params.items()

    def zero_grad(self) -> None:
        for p in self._params.values():
            p.zero_grad()

    def to_arrays(self) -> dict[str, np.ndarray]:
        return {k: p.data.copy() for k, p in self._params.items()}

    def load_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        for k, p in self._params.items():
            if k not in arrays:
                raise KeyError(f"missing parameter {k!r}")
            if arrays[k].shape != p.data.shape:
                raise ValueError(
                    f"shape mismatch for {k!r}: {arrays[k].shape} vs {p.data.shape}"
                )
            p.data[...] = arrays[k]

    def copy(self) -> "ParamSet":
        out = ParamSet()
        for k, p in self._params.items():
            out.add(k, p.data.copy())
        out.m = {k: v.copy() for k, v in self.m.items()}
        out.v = {k: v.copy() for k, v in self.v.items()}
        out.t = self.t
        return out


def adam_step(
    params: ParamSet,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    """One Adam update from the accumulated gradients.

    Aborts (raising FloatingPointError) before touching any parameter if a
    non-finite value appears in parameters or gradients.
    """
    for name, p in params.items():
        g = p.grad if p.grad is not None else np.zeros_like(p.data)
        if not np.all(np.isfinite(g)) or not np.all(np.isfinite(p.data)):
            raise FloatingPointError(f"non-finite value in parameter or grad {name!r}")
    params.t += 1
    t = params.t
    for name, p in params.items():
        g = p.grad if p.grad is not None else np.zeros_like(p.data)
        m = params.m[name]
        v = params.v[name]
        m[...] = beta1 * m + (1.0 - beta1) * g
        v[...] = beta2 * v + (1.0 - beta2) * g * g
        m_hat = m / (1.0 - beta1**t)
        v_hat = v / (1.0 - beta2**t)
        p.data -= lr * m_hat / (np.sqrt(v_hat) + eps)
