from .cloud import PointCloud, chamfer_distance, extract_contact_region, farthest_point_sample
from .mesh import (
    TriangleMesh,
    load_mesh,
    load_off,
    load_stl,
    make_box,
    make_capsule,
    make_cylinder,
    make_icosphere,
    mesh_volume_centroid,
    sample_surface_points,
    save_stl,
    transform_mesh,
)
from .ply import load_ply, save_ply
from .rotation import Rotation3, random_rotation
from .sdf import closest_surface_points, is_watertight, signed_distance, signed_distances, winding_numbers

__all__ = [
    "PointCloud",
    "Rotation3",
    "TriangleMesh",
    "chamfer_distance",
    "closest_surface_points",
    "extract_contact_region",
    "farthest_point_sample",
    "is_watertight",
    "load_mesh",
    "load_off",
    "load_ply",
    "load_stl",
    "make_box",
    "make_capsule",
    "make_cylinder",
    "make_icosphere",
    "mesh_volume_centroid",
    "random_rotation",
    "sample_surface_points",
    "save_ply",
    "save_stl",
    "signed_distance",
    "signed_distances",
    "transform_mesh",
    "winding_numbers",
]
