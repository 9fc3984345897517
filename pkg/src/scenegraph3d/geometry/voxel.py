"""Conservative occupancy voxelization of mesh face subsets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..errors import ConfigError
from .mesh import TriMesh


@dataclass(frozen=True)
class VoxelGrid:
    origin: np.ndarray      # world position of the (0,0,0) voxel corner, meters
    cell_size: float
    dims: tuple[int, int, int]
    occupancy: np.ndarray   # bool, shape dims

    def __post_init__(self):
        if self.cell_size <= 0:
            raise ConfigError("voxel cell_size must be positive")
        if any(d < 1 for d in self.dims):
            raise ConfigError("voxel grid dims must all be >= 1")

    @property
    def n_occupied(self) -> int:
        return int(np.count_nonzero(self.occupancy))

    def to_json(self) -> dict:
        flat = np.flatnonzero(self.occupancy.reshape(-1))
        return {
            "origin": self.origin.tolist(),
            "cell_size": self.cell_size,
            "dims": list(self.dims),
            "occupied": flat.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "VoxelGrid":
        dims = tuple(data["dims"])
        occ = np.zeros(int(np.prod(dims)), dtype=bool)
        occ[np.asarray(data["occupied"], dtype=np.int64)] = True
        return cls(np.asarray(data["origin"], dtype=np.float64), float(data["cell_size"]),
                   dims, occ.reshape(dims))


@njit(cache=True, error_model="numpy")
def _axis_overlap(lo, hi, half):
    return lo <= half and hi >= -half


@njit(cache=True, error_model="numpy")
def tri_box_overlap(center, half, p0, p1, p2) -> bool:
    """Separating-axis triangle/box test, inclusive at touching boundaries."""
    v0 = p0 - center
    v1 = p1 - center
    v2 = p2 - center
    # box face normals
    for k in range(3):
        lo = min(v0[k], min(v1[k], v2[k]))
        hi = max(v0[k], max(v1[k], v2[k]))
        if lo > half[k] or hi < -half[k]:
            return False
    # triangle plane
    e0 = v1 - v0
    e1 = v2 - v1
    n = np.cross(e0, e1)
    d = -(n[0] * v0[0] + n[1] * v0[1] + n[2] * v0[2])
    r = half[0] * abs(n[0]) + half[1] * abs(n[1]) + half[2] * abs(n[2])
    if abs(d) > r:
        return False
    # nine edge cross products
    e2 = v0 - v2
    verts = (v0, v1, v2)
    edges = (e0, e1, e2)
    for ei in range(3):
        e = edges[ei]
        for k in range(3):
            a = (k + 1) % 3
            b = (k + 2) % 3
            # axis = unit(k) x e
            axis0 = 0.0 if k == 0 else (e[2] if k == 1 else -e[1])
            axis1 = -e[2] if k == 0 else (0.0 if k == 1 else e[0])
            axis2 = e[1] if k == 0 else (-e[0] if k == 1 else 0.0)
            r = half[0] * abs(axis0) + half[1] * abs(axis1) + half[2] * abs(axis2)
            lo = np.inf
            hi = -np.inf
            for vi in range(3):
                p = verts[vi][0] * axis0 + verts[vi][1] * axis1 + verts[vi][2] * axis2
                if p < lo:
                    lo = p
                if p > hi:
                    hi = p
            if lo > r or hi < -r:
                return False
    return True


@njit(cache=True, error_model="numpy")
def _voxelize_kernel(tris, origin, cell, dims, occ):
    for f in range(tris.shape[0]):
        p0 = tris[f, 0]
        p1 = tris[f, 1]
        p2 = tris[f, 2]
        lo = np.empty(3, dtype=np.int64)
        hi = np.empty(3, dtype=np.int64)
        for k in range(3):
            fmin = min(p0[k], min(p1[k], p2[k]))
            fmax = max(p0[k], max(p1[k], p2[k]))
            lo[k] = max(0, np.int64(np.floor((fmin - origin[k]) / cell)))
            hi[k] = min(dims[k] - 1, np.int64(np.floor((fmax - origin[k]) / cell)))
        half = np.full(3, cell / 2.0)
        center = np.empty(3)
        for i in range(lo[0], hi[0] + 1):
            center[0] = origin[0] + (i + 0.5) * cell
            for j in range(lo[1], hi[1] + 1):
                center[1] = origin[1] + (j + 0.5) * cell
                for k in range(lo[2], hi[2] + 1):
                    if occ[i, j, k]:
                        continue
                    center[2] = origin[2] + (k + 0.5) * cell
                    if tri_box_overlap(center, half, p0, p1, p2):
                        occ[i, j, k] = True


def voxelize(mesh: TriMesh, face_ids, cell_size: float) -> VoxelGrid:
    """Occupancy grid over the given faces: a voxel is occupied iff it
    intersects (including boundary contact) at least one face."""
    if cell_size <= 0:
        raise ConfigError("voxel cell_size must be positive")
    face_ids = np.asarray(face_ids, dtype=np.int64)
    if face_ids.size == 0:
        return VoxelGrid(np.zeros(3), cell_size, (1, 1, 1), np.zeros((1, 1, 1), dtype=bool))
    tris = np.ascontiguousarray(mesh.vertices[mesh.faces[face_ids]])
    lo = tris.reshape(-1, 3).min(axis=0)
    hi = tris.reshape(-1, 3).max(axis=0)
    dims = np.maximum(np.ceil((hi - lo) / cell_size - 1e-9).astype(np.int64), 1)
    occ = np.zeros(tuple(dims), dtype=bool)
    _voxelize_kernel(tris, lo, cell_size, dims, occ)
    return VoxelGrid(lo, float(cell_size), tuple(int(d) for d in dims), occ)
