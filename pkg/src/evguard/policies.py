"""Stochastic perturbation policies for the attack agent.

Three interchangeable architectures map a slot observation to a Gaussian over
the SoC perturbation: an LSTM over per-slot summary features (temporal
memory), a single-head attention network over the slot's request set, and a
plain MLP baseline. Each samples z ~ N(mu, sigma) and emits an action in
[-1, 1] either via tanh squashing (with the change-of-variables term in the
log-probability) or via plain clamping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .autodiff import (
    GaussianHead,
    ParamSet,
    Tensor,
    attention_block,
    dense,
    gaussian_head,
    lstm_cell,
    normal_logprob,
    squashed_gaussian_logprob,
)

FEATURE_DIM = 7
TOKEN_DIM = 4
MAX_EVS_NORM = 30.0  # scale for the co-arrival count feature

# softplus(raw) ~ 0.35: a sane initial exploration width
_RAW_SIGMA_INIT = math.log(math.expm1(0.35))


@dataclass
class StepAction:
    """One sampled action with everything the trainer needs."""

    o: float
    z: float
    logp: Tensor
    mu: float
    sigma: float


def slot_features(state) -> np.ndarray:
    """Fixed-size per-slot summary: the adversary's own report context plus
    order statistics of the co-arriving benign SoCs (zeros when alone)."""
    soc = np.asarray(state.soc_vector, dtype=float)
    others = np.delete(soc, state.adv_index)
    n = others.size
    if n:
        mean_o, min_o, max_o = float(others.mean()), float(others.min()), float(others.max())
    else:
        mean_o = min_o = max_o = 0.0
    return np.array(
        [
            [
                float(soc[state.adv_index]),
                float(state.tcc_vector[state.adv_index]),
                state.slot / 48.0,
                min(n / MAX_EVS_NORM, 1.0),
                mean_o,
                min_o,
                max_o,
            ]
        ]
    )


def request_tokens(state) -> np.ndarray:
    """One token per request: [soc, tcc, is_adversary, slot_phase]."""
    soc = np.asarray(state.soc_vector, dtype=float)
    tcc = np.asarray(state.tcc_vector, dtype=float)
    m = soc.size
    tokens = np.zeros((m, TOKEN_DIM))
    tokens[:, 0] = soc
    tokens[:, 1] = tcc
    tokens[state.adv_index, 2] = 1.0
    tokens[:, 3] = state.slot / 48.0
    return tokens


class GaussianPolicyBase:
    """Common sampling and bookkeeping for all policy architectures."""

    kind = "base"

    def __init__(self, squash: str = "tanh"):
        if squash not in ("tanh", "clamp"):
            raise ValueError(f"squash must be 'tanh' or 'clamp', got {squash!r}")
        self.squash = squash
        self.params = ParamSet()

    def reset(self) -> None:
        """Clear per-episode state (recurrent policies override)."""

    def head(self, state) -> GaussianHead:
        raise NotImplementedError

    def act(self, state, rng: np.random.Generator) -> StepAction:
        head = self.head(state)
        mu = float(head.mu.data)
        sigma = float(head.sigma.data)
        z = float(rng.normal(mu, sigma))
        if self.squash == "tanh":
            o = math.tanh(z)
            logp = squashed_gaussian_logprob(head, z)
        else:
            o = min(max(z, -1.0), 1.0)
            logp = normal_logprob(head, z)
        return StepAction(o=o, z=z, logp=logp.sum(), mu=mu, sigma=sigma)

    def config_meta(self) -> dict:
        raise NotImplementedError

    def _init_dense(self, rng, name: str, n_in: int, n_out: int, scale: float | None = None):
        scale = scale if scale is not None else 1.0 / math.sqrt(n_in)
        self.params.add(f"{name}_w", rng.normal(0.0, scale, size=(n_in, n_out)))
        self.params.add(f"{name}_b", np.zeros((1, n_out)))

    def _dense(self, name: str, x: Tensor) -> Tensor:
        return dense(x, self.params[f"{name}_w"], self.params[f"{name}_b"])

    def _init_head(self, rng, n_in: int) -> None:
        self._init_dense(rng, "head", n_in, 2, scale=0.01)
        self.params["head_b"].data[0, 1] = _RAW_SIGMA_INIT

    def _head_from(self, h: Tensor) -> GaussianHead:
        return gaussian_head(self._dense("head", h))


class LstmGaussianPolicy(GaussianPolicyBase):
    """Stacked LSTM over per-slot summary features; carries (h, c) across
    the 48 slots of an episode."""

    kind = "lstm"

    def __init__(
        self,
        rng: np.random.Generator,
        hidden_sizes: tuple[int, ...] = (64, 64),
        squash: str = "tanh",
    ):
        super().__init__(squash=squash)
        self.hidden_sizes = tuple(int(h) for h in hidden_sizes)
        n_in = FEATURE_DIM
        for i, n_h in enumerate(self.hidden_sizes):
            scale = 1.0 / math.sqrt(n_in + n_h)
            self.params.add(f"lstm{i}_w_x", rng.normal(0.0, scale, size=(n_in, 4 * n_h)))
            self.params.add(f"lstm{i}_w_h", rng.normal(0.0, scale, size=(n_h, 4 * n_h)))
            self.params.add(f"lstm{i}_b", np.zeros((1, 4 * n_h)))
            n_in = n_h
        self._init_head(rng, n_in)
        self.reset()

    def reset(self) -> None:
        self._h = [Tensor(np.zeros((1, n))) for n in self.hidden_sizes]
        self._c = [Tensor(np.zeros((1, n))) for n in self.hidden_sizes]

    def head(self, state) -> GaussianHead:
        x = Tensor(slot_features(state))
        for i in range(len(self.hidden_sizes)):
            cell = {
                "w_x": self.params[f"lstm{i}_w_x"],
                "w_h": self.params[f"lstm{i}_w_h"],
                "b": self.params[f"lstm{i}_b"],
            }
            self._h[i], self._c[i] = lstm_cell(x, self._h[i], self._c[i], cell)
            x = self._h[i]
        return self._head_from(x)

    def config_meta(self) -> dict:
        return {
            "policy_kind": self.kind,
            "hidden_sizes": list(self.hidden_sizes),
            "squash": self.squash,
        }


class AttentionGaussianPolicy(GaussianPolicyBase):
    """Single-head self-attention over the slot's request tokens; the
    adversary token's row feeds the action head."""

    kind = "attention"

    def __init__(
        self,
        rng: np.random.Generator,
        model_dim: int = 32,
        n_blocks: int = 1,
        squash: str = "tanh",
    ):
        super().__init__(squash=squash)
        self.model_dim = int(model_dim)
        self.n_blocks = int(n_blocks)
        self._init_dense(rng, "embed", TOKEN_DIM, self.model_dim)
        for b in range(self.n_blocks):
            for proj in ("w_q", "w_k", "w_v", "w_o"):
                self.params.add(
                    f"attn{b}_{proj}",
                    rng.normal(0.0, 1.0 / math.sqrt(self.model_dim),
                               size=(self.model_dim, self.model_dim)),
                )
        self._init_dense(rng, "ff", self.model_dim, self.model_dim)
        self._init_head(rng, self.model_dim)

    def head(self, state) -> GaussianHead:
        x = self._dense("embed", Tensor(request_tokens(state))).relu()
        for b in range(self.n_blocks):
            block = {p: self.params[f"attn{b}_{p}"] for p in ("w_q", "w_k", "w_v", "w_o")}
            x = x + attention_block(x, block)
        row = x[state.adv_index : state.adv_index + 1, :]
        h = self._dense("ff", row).relu()
        return self._head_from(h)

    def config_meta(self) -> dict:
        return {
            "policy_kind": self.kind,
            "model_dim": self.model_dim,
            "n_blocks": self.n_blocks,
            "squash": self.squash,
        }


class MlpGaussianPolicy(GaussianPolicyBase):
    """Feedforward baseline over the same summary features as the LSTM."""

    kind = "mlp"

    def __init__(
        self,
        rng: np.random.Generator,
        hidden_sizes: tuple[int, ...] = (64, 64),
        squash: str = "tanh",
    ):
        super().__init__(squash=squash)
        self.hidden_sizes = tuple(int(h) for h in hidden_sizes)
        n_in = FEATURE_DIM
        for i, n_h in enumerate(self.hidden_sizes):
            self._init_dense(rng, f"fc{i}", n_in, n_h)
            n_in = n_h
        self._init_head(rng, n_in)

    def head(self, state) -> GaussianHead:
        x = Tensor(slot_features(state))
        for i in range(len(self.hidden_sizes)):
            x = self._dense(f"fc{i}", x).relu()
        return self._head_from(x)

    def config_meta(self) -> dict:
        return {
            "policy_kind": self.kind,
            "hidden_sizes": list(self.hidden_sizes),
            "squash": self.squash,
        }


POLICY_KINDS = ("lstm", "attention", "mlp")


def make_policy(kind: str, rng: np.random.Generator, **kwargs) -> GaussianPolicyBase:
    if kind == "lstm":
        return LstmGaussianPolicy(rng, **kwargs)
    if kind == "attention":
        return AttentionGaussianPolicy(rng, **kwargs)
    if kind == "mlp":
        return MlpGaussianPolicy(rng, **kwargs)
    raise ValueError(f"unknown policy kind {kind!r}; expected one of {POLICY_KINDS}")


def policy_meta_kwargs(meta: dict) -> tuple[str, dict]:
    """Split a checkpoint meta dict into (kind, constructor kwargs)."""
    meta = dict(meta)
    kind = meta.pop("policy_kind")
    if "hidden_sizes" in meta:
        meta["hidden_sizes"] = tuple(meta["hidden_sizes"])
    return kind, meta
