"""Bounding volume hierarchy for first-hit ray casting against triangle meshes.

The tree is built once (median split on the largest centroid axis) and is
immutable afterwards; traversal kernels are numba-compiled and touch only
flat arrays, so a BVH can be shared freely across threads.

Hit selection: nearest positive t; exact ties are broken toward the lower
face id so results are reproducible and match an exhaustive scan.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from ..errors import DegenerateDirectionError, EmptyGeometryError
from .mesh import TriMesh

LEAF_SIZE = 4


@dataclass(frozen=True)
class RayHit:
    face_id: int
    t: float
    barycentric: np.ndarray  # weights for the face's three vertices, sums to 1


@dataclass(frozen=True)
class BVH:
    bounds_min: np.ndarray  # (n_nodes, 3)
    bounds_max: np.ndarray
    left: np.ndarray        # child index, -1 for leaves
    right: np.ndarray
    start: np.ndarray       # leaf triangle range start into tri_order
    count: np.ndarray       # leaf triangle count (0 for inner nodes)
    tri_order: np.ndarray   # original face ids, leaf-contiguous
    tri_v0: np.ndarray      # (n_faces, 3) first vertex, tri_order layout
    tri_e1: np.ndarray      # v1 - v0
    tri_e2: np.ndarray      # v2 - v0
    n_faces: int


def build_bvh(mesh: TriMesh, leaf_size: int = LEAF_SIZE) -> BVH:
    """Build the hierarchy; queries return identical hits to an exhaustive scan."""
    if mesh.n_faces == 0:
        raise EmptyGeometryError("cannot build a BVH over an empty mesh")
    tris = mesh.vertices[mesh.faces]  # (n, 3, 3)
    tri_min = tris.min(axis=1)
    tri_max = tris.max(axis=1)
    centroids = tris.mean(axis=1)

    n = mesh.n_faces
    order = np.arange(n, dtype=np.int64)
    max_nodes = 2 * ((n + leaf_size - 1) // leaf_size) * 2 + 2
    bounds_min = np.empty((max_nodes, 3))
    bounds_max = np.empty((max_nodes, 3))
    left = np.full(max_nodes, -1, dtype=np.int64)
    right = np.full(max_nodes, -1, dtype=np.int64)
    start = np.zeros(max_nodes, dtype=np.int64)
    count = np.zeros(max_nodes, dtype=np.int64)

    n_nodes = 1
    stack = [(0, 0, n)]  # (node index, range start, range end)
    while stack:
        node, lo, hi = stack.pop()
        idx = order[lo:hi]
        bounds_min[node] = tri_min[idx].min(axis=0)
        bounds_max[node] = tri_max[idx].max(axis=0)
        if hi - lo <= leaf_size:
            start[node] = lo
            count[node] = hi - lo
            continue
        cent = centroids[idx]
        axis = int(np.argmax(cent.max(axis=0) - cent.min(axis=0)))
        mid = (hi - lo) // 2
        part = np.argpartition(cent[:, axis], mid)
        order[lo:hi] = idx[part]
        lchild, rchild = n_nodes, n_nodes + 1
        n_nodes += 2
        left[node] = lchild
        right[node] = rchild
        stack.append((lchild, lo, lo + mid))
        stack.append((rchild, lo + mid, hi))

    v0 = np.ascontiguousarray(tris[order, 0])
    e1 = np.ascontiguousarray(tris[order, 1] - tris[order, 0])
    e2 = np.ascontiguousarray(tris[order, 2] - tris[order, 0])
    bvh = BVH(
        bounds_min=np.ascontiguousarray(bounds_min[:n_nodes]),
        bounds_max=np.ascontiguousarray(bounds_max[:n_nodes]),
        left=left[:n_nodes], right=right[:n_nodes],
        start=start[:n_nodes], count=count[:n_nodes],
        tri_order=np.ascontiguousarray(order),
        tri_v0=v0, tri_e1=e1, tri_e2=e2,
        n_faces=n,
    )
    for arr in (bvh.bounds_min, bvh.bounds_max, bvh.left, bvh.right, bvh.start,
                bvh.count, bvh.tri_order, bvh.tri_v0, bvh.tri_e1, bvh.tri_e2):
        arr.setflags(write=False)
    return bvh


@njit(cache=True, error_model="numpy", inline="always")
def _tri_hit(v0, e1, e2, ox, oy, oz, dx, dy, dz):
    """Moller-Trumbore with inclusive edges; returns (t, u, v) or t = -1 on miss."""
    px = dy * e2[2] - dz * e2[1]
    py = dz * e2[0] - dx * e2[2]
    pz = dx * e2[1] - dy * e2[0]
    det = e1[0] * px + e1[1] * py + e1[2] * pz
    if abs(det) < 1e-14:
        return -1.0, 0.0, 0.0
    inv = 1.0 / det
    tx = ox - v0[0]
    ty = oy - v0[1]
    tz = oz - v0[2]
    u = (tx * px + ty * py + tz * pz) * inv
    if u < 0.0 or u > 1.0:
        return -1.0, 0.0, 0.0
    qx = ty * e1[2] - tz * e1[1]
    qy = tz * e1[0] - tx * e1[2]
    qz = tx * e1[1] - ty * e1[0]
    v = (dx * qx + dy * qy + dz * qz) * inv
    if v < 0.0 or u + v > 1.0:
        return -1.0, 0.0, 0.0
    t = (e2[0] * qx + e2[1] * qy + e2[2] * qz) * inv
    if t <= 0.0:
        return -1.0, 0.0, 0.0
    return t, u, v


@njit(cache=True, error_model="numpy", inline="always")
def _aabb_entry(bmin, bmax, ox, oy, oz, dx, dy, dz):
    """Entry t of the ray into the box, or -1 if the box is missed."""
    tmin = 0.0
    tmax = np.inf
    for k in range(3):
        if k == 0:
            o, d = ox, dx
        elif k == 1:
            o, d = oy, dy
        else:
            o, d = oz, dz
        if abs(d) < 1e-300:
            if o < bmin[k] or o > bmax[k]:
                return -1.0
        else:
            inv = 1.0 / d
            t1 = (bmin[k] - o) * inv
            t2 = (bmax[k] - o) * inv
            if t1 > t2:
                t1, t2 = t2, t1
            if t1 > tmin:
                tmin = t1
            if t2 < tmax:
                tmax = t2
            if tmax < tmin:
                return -1.0
    return tmin


@njit(cache=True, error_model="numpy")
def _traverse_nearest(bounds_min, bounds_max, left, right, start, count, tri_order,
                      v0, e1, e2, ox, oy, oz, dx, dy, dz):
    """Nearest hit with tie-break toward the lower face id.

    Returns (face_id, t, bu, bv); face_id is -1 on miss. Nodes are pruned
    only when their entry t strictly exceeds the best t so equal-t
    candidates are always examined.
    """
    best_t = np.inf
    best_f = -1
    best_u = 0.0
    best_v = 0.0
    stack = np.empty(128, dtype=np.int64)
    sp = 0
    stack[sp] = 0
    sp += 1
    while sp > 0:
        sp -= 1
        node = stack[sp]
        entry = _aabb_entry(bounds_min[node], bounds_max[node], ox, oy, oz, dx, dy, dz)
        if entry < 0.0 or entry > best_t:
            continue
        l = left[node]
        if l < 0:
            s = start[node]
            for i in range(s, s + count[node]):
                t, u, v = _tri_hit(v0[i], e1[i], e2[i], ox, oy, oz, dx, dy, dz)
                if t > 0.0:
                    fid = tri_order[i]
                    if t < best_t or (t == best_t and fid < best_f):
                        best_t = t
                        best_f = fid
                        best_u = u
                        best_v = v
        else:
            stack[sp] = l
            sp += 1
            stack[sp] = right[node]
            sp += 1
    return best_f, best_t, best_u, best_v


@njit(cache=True, parallel=True, error_model="numpy")
def _raycast_batch_kernel(bounds_min, bounds_max, left, right, start, count, tri_order,
                          v0, e1, e2, origins, dirs, out_face, out_t, out_u, out_v):
    for i in prange(origins.shape[0]):
        f, t, u, v = _traverse_nearest(
            bounds_min, bounds_max, left, right, start, count, tri_order,
            v0, e1, e2,
            origins[i, 0], origins[i, 1], origins[i, 2],
            dirs[i, 0], dirs[i, 1], dirs[i, 2],
        )
        out_face[i] = f
        out_t[i] = t if f >= 0 else -1.0
        out_u[i] = u
        out_v[i] = v


@njit(cache=True, parallel=True, error_model="numpy")
def _raycast_subset_kernel(v0, e1, e2, face_ids, origins, dirs, out_face, out_t):
    """Exhaustive nearest hit over an explicit triangle subset."""
    for i in prange(origins.shape[0]):
        best_t = np.inf
        best_f = -1
        for j in range(v0.shape[0]):
            t, u, v = _tri_hit(v0[j], e1[j], e2[j],
                               origins[i, 0], origins[i, 1], origins[i, 2],
                               dirs[i, 0], dirs[i, 1], dirs[i, 2])
            if t > 0.0:
                fid = face_ids[j]
                if t < best_t or (t == best_t and fid < best_f):
                    best_t = t
                    best_f = fid
        out_face[i] = best_f
        out_t[i] = best_t if best_f >= 0 else -1.0


def _normalize_dir(direction: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(direction))
    if not 0.9 <= norm <= 1.1:
        raise DegenerateDirectionError(f"ray direction norm {norm:.4g} outside [0.9, 1.1]")
    return direction / norm


def raycast(bvh: BVH, origin, direction) -> RayHit | None:
    """Nearest positive-t intersection of a single ray, or None."""
    origin = np.asarray(origin, dtype=np.float64)
    direction = _normalize_dir(np.asarray(direction, dtype=np.float64))
    f, t, u, v = _traverse_nearest(
        bvh.bounds_min, bvh.bounds_max, bvh.left, bvh.right, bvh.start, bvh.count,
        bvh.tri_order, bvh.tri_v0, bvh.tri_e1, bvh.tri_e2,
        origin[0], origin[1], origin[2], direction[0], direction[1], direction[2],
    )
    if f < 0:
        return None
    return RayHit(int(f), float(t), np.array([1.0 - u - v, u, v]))


def raycast_batch(bvh: BVH, origins: np.ndarray, dirs: np.ndarray):
    """Vectorized first-hit query: returns (face_ids, ts); face -1 marks a miss.

    `origins` may be a single point broadcast against (n, 3) unit directions.
    """
    dirs = np.ascontiguousarray(dirs, dtype=np.float64).reshape(-1, 3)
    origins = np.asarray(origins, dtype=np.float64)
    if origins.ndim == 1:
        origins = np.broadcast_to(origins, dirs.shape)
    origins = np.ascontiguousarray(origins).reshape(-1, 3)
    n = len(dirs)
    out_face = np.empty(n, dtype=np.int64)
    out_t = np.empty(n)
    out_u = np.empty(n)
    out_v = np.empty(n)
    _raycast_batch_kernel(
        bvh.bounds_min, bvh.bounds_max, bvh.left, bvh.right, bvh.start, bvh.count,
        bvh.tri_order, bvh.tri_v0, bvh.tri_e1, bvh.tri_e2,
        origins, dirs, out_face, out_t, out_u, out_v,
    )
    return out_face, out_t


def raycast_subset(mesh: TriMesh, face_ids: np.ndarray, origins: np.ndarray, dirs: np.ndarray):
    """Exhaustive nearest hit restricted to `face_ids` (small subsets only)."""
    face_ids = np.asarray(face_ids, dtype=np.int64)
    tris = mesh.vertices[mesh.faces[face_ids]]
    v0 = np.ascontiguousarray(tris[:, 0])
    e1 = np.ascontiguousarray(tris[:, 1] - tris[:, 0])
    e2 = np.ascontiguousarray(tris[:, 2] - tris[:, 0])
    dirs = np.ascontiguousarray(dirs, dtype=np.float64).reshape(-1, 3)
    origins = np.asarray(origins, dtype=np.float64)
    if origins.ndim == 1:
        origins = np.broadcast_to(origins, dirs.shape)
    origins = np.ascontiguousarray(origins).reshape(-1, 3)
    out_face = np.empty(len(dirs), dtype=np.int64)
    out_t = np.empty(len(dirs))
    _raycast_subset_kernel(v0, e1, e2, face_ids, origins, dirs, out_face, out_t)
    return out_face, out_t
