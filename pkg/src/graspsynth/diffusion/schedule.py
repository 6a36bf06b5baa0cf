"""Noise schedules and the closed-form forward noising step."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PRESET_STEPS = (100, 500, 1000)


@dataclass(frozen=True)
class NoiseSchedule:
    betas: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.betas, dtype=np.float64).reshape(-1)
        if b.size < 1:
            raise ValueError("schedule needs at least one step")
        if not (np.all(b > 0.0) and np.all(b < 1.0)):
            raise ValueError("betas must lie in (0, 1)")
        if np.any(np.diff(b) < 0.0):
            raise ValueError("betas must be non-decreasing")
        b.setflags(write=False)
        object.__setattr__(self, "betas", b)
        alphas = 1.0 - b
        bars = np.cumprod(alphas)
        if np.any(np.diff(bars) >= 0.0):
            raise ValueError("cumulative alpha products must strictly decrease")
        alphas.setflags(write=False)
        bars.setflags(write=False)
        object.__setattr__(self, "_alphas", alphas)
        object.__setattr__(self, "_alpha_bars", bars)

    @property
    def steps(self) -> int:
        return int(self.betas.size)

    @property
    def alphas(self) -> np.ndarray:
        return self._alphas

    @property
    def alpha_bars(self) -> np.ndarray:
        return self._alpha_bars

    def beta(self, t: int) -> float:
        self._check_step(t)
        return float(self.betas[t - 1])

    def alpha(self, t: int) -> float:
        self._check_step(t)
        return float(self._alphas[t - 1])

    def alpha_bar(self, t: int) -> float:
        self._check_step(t)
        return float(self._alpha_bars[t - 1])

    def _check_step(self, t: int) -> None:
        if not 1 <= t <= self.steps:
            raise ValueError(f"step index {t} outside 1..{self.steps}")


def linear_schedule(steps: int, beta_start: float = 1e-4, beta_end: float = 2e-2) -> NoiseSchedule:
    if steps < 1:
        raise ValueError("steps must be positive")
    if steps == 1:
        return NoiseSchedule(np.array([beta_end]))
    return NoiseSchedule(np.linspace(beta_start, beta_end, steps))


def forward_noise(schedule: NoiseSchedule, h0: np.ndarray, t: int, noise: np.ndarray) -> np.ndarray:
    """Jump straight to step t: sqrt(abar_t) h0 + sqrt(1 - abar_t) noise."""
    bar = schedule.alpha_bar(t)
    h0 = np.asarray(h0, dtype=np.float64)
    noise = np.asarray(noise, dtype=np.float64)
    if h0.shape != noise.shape:
        raise ValueError("h0 and noise must have matching shapes")
    return np.sqrt(bar) * h0 + np.sqrt(1.0 - bar) * noise
