"""Parameter initialization and the linear layer primitive."""

from __future__ import annotations

import numpy as np

from .autodiff import Tensor, add, matmul


def init_linear(params: dict, rng: np.random.Generator, name: str, fan_in: int, fan_out: int, zero: bool = False) -> None:
    if zero:
        w = np.zeros((fan_in, fan_out))
    else:
        w = rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_in, fan_out))
    params[f"{name}.w"] = Tensor(w, requires_grad=True)
    params[f"{name}.b"] = Tensor(np.zeros((1, fan_out)), requires_grad=True)


def linear(params: dict, name: str, x) -> Tensor:
    return add(matmul(x, params[f"{name}.w"]), params[f"{name}.b"])
