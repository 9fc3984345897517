"""Numeric substrate: cameras, panorama projection, ray casting, hulls, voxels."""

from .bvh import BVH, RayHit, build_bvh, raycast, raycast_batch, raycast_subset
from .camera import Pose, RectCamera, identity_pose, quat_to_matrix, view_rotation
from .hull import convex_hull_volume, footprint_area
from .mesh import TriMesh, box_mesh, concat_meshes, triangle_areas
from .panorama import (
    dir_to_pano_pixel,
    pano_pixel_dir_grid,
    pano_pixel_to_dir,
    pano_to_view_projection,
    rect_pixel_to_pano_pixel,
    render_rect_view,
    sample_pano,
)
from .voxel import VoxelGrid, voxelize

__all__ = [
    "BVH", "RayHit", "build_bvh", "raycast", "raycast_batch", "raycast_subset",
    "Pose", "RectCamera", "identity_pose", "quat_to_matrix", "view_rotation",
    "convex_hull_volume", "footprint_area",
    "TriMesh", "box_mesh", "concat_meshes", "triangle_areas",
    "dir_to_pano_pixel", "pano_pixel_dir_grid", "pano_pixel_to_dir",
    "pano_to_view_projection", "rect_pixel_to_pano_pixel", "render_rect_view",
    "sample_pano",
    "VoxelGrid", "voxelize",
]
