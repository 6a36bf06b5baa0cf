"""Quasi-static wrench feasibility through linearized friction cones.

The displacement test this replaces pushes the object along each of six
signed axes. Here a grasp survives a push when nonnegative contact forces
inside the (linearized) Coulomb cones produce a wrench balancing the
inertial load, subject to a per-contact force cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contacts import ContactPoint
from .lp import min_equality_residual

AXES_6 = (
    (1.0, 0.0, 0.0),
    (-1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, -1.0, 0.0),
    (0.0, 0.0, 1.0),
    (0.0, 0.0, -1.0),
)


@dataclass(frozen=True)
class WrenchTestConfig:
    """Knobs of the six-axis quasi-static displacement substitute.

    acceleration, duration_steps and displacement_limit describe the original
    dynamic protocol; only acceleration enters the static balance (F = m*a).
    The rest are kept so runs record the full intended test.
    """

    acceleration: float = 0.5  # m/s^2
    duration_steps: int = 60
    displacement_limit: float = 0.02  # m, recorded but unused by the LP
    axes: tuple = AXES_6
    friction_mu: float = 0.5
    object_mass: float = 0.1  # kg
    cone_facets: int = 8
    centroid: tuple = (0.0, 0.0, 0.0)  # torque reference, object frame
    contact_threshold: float = 0.005  # m
    contact_samples: int = 512
    force_cap: float = 50.0  # N per contact
    balance_tol: float = 2.5e-3  # L1 wrench residual accepted as balanced

    def __post_init__(self):
        if self.acceleration <= 0 or self.duration_steps <= 0 or self.displacement_limit <= 0:
            raise ValueError("protocol parameters must be positive")
        if self.friction_mu < 0:
            raise ValueError("friction_mu must be nonnegative")
        if self.object_mass <= 0 or self.force_cap <= 0 or self.balance_tol <= 0:
            raise ValueError("mass, force cap and balance tolerance must be positive")
        if self.cone_facets < 3:
            raise ValueError("cone_facets must be >= 3")
        if self.contact_threshold <= 0 or self.contact_samples < 1:
            raise ValueError("contact sampling parameters must be positive")
        axes = np.array(self.axes, dtype=np.float64)
        if axes.shape != (6, 3) or sorted(map(tuple, axes)) != sorted(map(tuple, AXES_6)):
            raise ValueError("axes must be exactly the six signed unit axes")


def _tangent_basis(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ref = np.array([0.0, 0.0, 1.0]) if abs(normal[2]) <= 0.9 else np.array([1.0, 0.0, 0.0])
    t1 = ref - np.dot(ref, normal) * normal
    t1 /= np.linalg.norm(t1)
    return t1, np.cross(normal, t1)


def cone_edges(normal: np.ndarray, mu: float, facets: int) -> np.ndarray:
    """Unit force directions spanning the linearized friction cone.

    The object's outward normal is `normal`; pressing forces point along
    -normal, fanned out by friction. mu = 0 collapses every edge to -normal.
    """
    t1, t2 = _tangent_basis(np.asarray(normal, dtype=np.float64))
    angles = 2.0 * np.pi * np.arange(facets) / facets
    tangents = np.outer(np.cos(angles), t1) + np.outer(np.sin(angles), t2)
    edges = (-normal[None, :] + mu * tangents) / np.sqrt(1.0 + mu * mu)
    return edges


def contact_wrench_columns(contacts: list[ContactPoint], cfg: WrenchTestConfig) -> np.ndarray:
    """6 x (n_contacts * facets) matrix of unit wrenches about cfg.centroid."""
    centroid = np.asarray(cfg.centroid, dtype=np.float64)
    cols = []
    for c in contacts:
        arm = c.position - centroid
        for e in cone_edges(c.normal, cfg.friction_mu, cfg.cone_facets):
            cols.append(np.concatenate([e, np.cross(arm, e)]))
    return np.array(cols).T if cols else np.zeros((6, 0))


def required_wrench(cfg: WrenchTestConfig, axis: np.ndarray) -> np.ndarray:
    """Wrench the contacts must supply: cancel the inertial force m*a along
    -axis; no net torque."""
    f = cfg.object_mass * cfg.acceleration * np.asarray(axis, dtype=np.float64)
    return np.concatenate([f, np.zeros(3)])


def wrench_feasibility(
    contacts: list[ContactPoint], cfg: WrenchTestConfig, axis
) -> bool:
    """Can friction-cone contact forces balance the push along `axis`?"""
    if not contacts:
        return False
    axis = np.asarray(axis, dtype=np.float64)
    columns = contact_wrench_columns(contacts, cfg)
    n_vars = columns.shape[1]
    k = cfg.cone_facets
    # per-contact cap: edge magnitudes are unit, so sum of lambdas bounds
    # the total force magnitude
    a_ub = np.zeros((len(contacts), n_vars))
    for i in range(len(contacts)):
        a_ub[i, i * k : (i + 1) * k] = 1.0
    b_ub = np.full(len(contacts), cfg.force_cap)
    result = min_equality_residual(columns, required_wrench(cfg, axis), a_ub, b_ub)
    return result.residual <= cfg.balance_tol


def brute_force_wrench_check(
    contacts: list[ContactPoint], cfg: WrenchTestConfig, axis, samples: int = 10**5, seed: int = 0
) -> bool:
    """Randomized independent check used by tests.

    Half the budget draws random 6-column subsets and least-squares solves
    them, accepting nonnegative solutions within the cap; the other half runs
    randomized nonnegative coordinate descent from random starting
    combinations, projecting per-contact force sums back under the cap.
    True means an explicit balancing combination was exhibited (L2 residual
    <= 1e-3 against a freshly recomputed wrench), so a sound solver must
    also report feasible.
    """
    if samples < 10**4:
        raise ValueError("samples must be >= 1e4")
    if not contacts:
        return False
    axis = np.asarray(axis, dtype=np.float64)
    columns = contact_wrench_columns(contacts, cfg)
    n_vars = columns.shape[1]
    target = required_wrench(cfg, axis)
    tol = 1e-3
    rng = np.random.default_rng(seed)
    k = cfg.cone_facets
    n_c = len(contacts)
    col_sq = np.einsum("ij,ij->j", columns, columns)

    def respects_caps(lam: np.ndarray) -> bool:
        per_contact = lam.reshape(n_c, k).sum(axis=1)
        return bool(np.all(per_contact <= cfg.force_cap + 1e-12))

    def certified(lam: np.ndarray) -> bool:
        return respects_caps(lam) and np.linalg.norm(columns @ lam - target) <= tol

    half = samples // 2
    if n_vars >= 6:
        for _ in range(half):
            pick = rng.choice(n_vars, size=6, replace=False)
            lam_sub = np.linalg.lstsq(columns[:, pick], target, rcond=None)[0]
            if np.any(lam_sub < -1e-12):
                continue
            lam = np.zeros(n_vars)
            lam[pick] = np.clip(lam_sub, 0.0, None)
            if certified(lam):
                return True

    # randomized coordinate descent on ||columns @ lam - target||^2 over
    # lam >= 0 with the per-contact cap enforced by block rescaling
    budget = samples - half
    restart_len = min(budget, 2000 * max(1, n_vars // 8))
    spent = 0
    while spent < budget:
        lam = rng.exponential(1.0, size=n_vars)
        w = columns @ lam
        scale = float(w @ target) / float(w @ w) if float(w @ w) > 0 else 0.0
        lam *= max(scale, 1e-6)
        w = columns @ lam
        steps = min(restart_len, budget - spent)
        for it in range(steps):
            i = int(rng.integers(n_vars))
            if col_sq[i] <= 0.0:
                continue
            new_i = max(0.0, lam[i] - float(columns[:, i] @ (w - target)) / col_sq[i])
            w = w + (new_i - lam[i]) * columns[:, i]
            lam[i] = new_i
            block = slice((i // k) * k, (i // k) * k + k)
            block_sum = float(lam[block].sum())
            if block_sum > cfg.force_cap:
                lam[block] *= cfg.force_cap / block_sum
                w = columns @ lam
            elif it % 512 == 511:
                w = columns @ lam
            if float((w - target) @ (w - target)) <= (0.5 * tol) ** 2 and certified(lam):
                return True
        spent += steps
        if certified(lam):
            return True
    return False
