from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ...exceptions import NonFiniteError
from .model import Params

DEFAULT_LEARNING_RATE = 1e-4
DEFAULT_BETA1 = 0.9
# Trained models use 0.9 here; 0.999 is available through TrainConfig.
DEFAULT_BETA2 = 0.9
DEFAULT_EPSILON = 1e-8


@dataclass
class AdamState:
    step: int = 0
    m: Params = field(default_factory=dict)
    v: Params = field(default_factory=dict)
    alpha: float = DEFAULT_LEARNING_RATE
    beta1: float = DEFAULT_BETA1
    beta2: float = DEFAULT_BETA2
    eps: float = DEFAULT_EPSILON

    @classmethod
    def for_params(cls, params: Params, **hyper: float) -> "AdamState":
        return cls(
            m={k: np.zeros_like(v) for k, v in params.items()},
            v={k: np.zeros_like(v) for k, v in params.items()},
            **hyper,
        )


def adam_step(params: Params, grads: Params, state: AdamState) -> tuple[Params, AdamState]:
    """One bias-corrected Adam update. Inputs are left untouched."""
    for name, g in grads.items():
        if not np.all(np.isfinite(g)):
            raise NonFiniteError(f"non-finite gradient for {name}")

    step = state.step + 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1**step
    c2 = 1.0 - b2**step

    new_params: Params = {}
    new_m: Params = {}
    new_v: Params = {}
    for name, p in params.items():
        g = grads[name]
        m = b1 * state.m.get(name, np.zeros_like(p)) + (1.0 - b1) * g
        v = b2 * state.v.get(name, np.zeros_like(p)) + (1.0 - b2) * (g * g)
        m_hat = m / c1
        v_hat = v / c2
        new_params[name] = (p - state.alpha * m_hat / (np.sqrt(v_hat) + state.eps)).astype(p.dtype)
        new_m[name] = m.astype(p.dtype)
        new_v[name] = v.astype(p.dtype)

    return new_params, AdamState(
        step=step,
        m=new_m,
        v=new_v,
        alpha=state.alpha,
        beta1=b1,
        beta2=b2,
        eps=state.eps,
    )
