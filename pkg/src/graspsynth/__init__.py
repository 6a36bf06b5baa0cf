"""Grasp synthesis for multi-dexterous hands.

Subpackages:
    geometry    -- point clouds, meshes, signed distances, rotations
    hands       -- hand kinematic models, pose padding, hand-cloud sampling
    diffusion   -- pose denoising model: schedules, training, sampling
    physics     -- contact detection, grasp refinement, wrench feasibility
    affordance  -- open-vocabulary affordance scoring and grasp selection
    pipeline    -- dataset generation, metrics, end-to-end CLI
"""

__version__ = "0.1.0"
