"""Triangle mesh container and basic derived quantities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyGeometryError

DEGENERATE_AREA = 1e-12  # faces below this area (m^2) are dropped at load


def triangle_areas(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    a = vertices[faces[:, 0]]
    b = vertices[faces[:, 1]]
    c = vertices[faces[:, 2]]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


@dataclass
class TriMesh:
    """Immutable triangle mesh: vertices in meters, faces as vertex index triples.

    Face areas are cached at construction; `dropped_faces` counts degenerate
    (near zero area) faces removed from the input.
    """

    vertices: np.ndarray
    faces: np.ndarray
    face_areas: np.ndarray = None
    dropped_faces: int = 0

    def __post_init__(self):
        self.vertices = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        self.faces = np.ascontiguousarray(np.asarray(self.faces, dtype=np.int64))
        if self.faces.ndim != 2 or self.faces.shape[1] != 3:
            raise EmptyGeometryError("faces must be an (n, 3) index array")
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise EmptyGeometryError("face index out of vertex range")
        if self.face_areas is None:
            self.face_areas = triangle_areas(self.vertices, self.faces)
        self.face_areas = np.asarray(self.face_areas, dtype=np.float64)
        self.vertices.setflags(write=False)
        self.faces.setflags(write=False)
        self.face_areas.setflags(write=False)

    @classmethod
    def from_arrays(cls, vertices, faces) -> "TriMesh":
        """Build a mesh, silently dropping degenerate faces (counted)."""
        vertices = np.asarray(vertices, dtype=np.float64)
        faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
        if len(faces) == 0:
            raise EmptyGeometryError("mesh has no faces")
        areas = triangle_areas(vertices, faces)
        keep = areas > DEGENERATE_AREA
        dropped = int(np.count_nonzero(~keep))
        if not keep.any():
            raise EmptyGeometryError("mesh has no non-degenerate faces")
        return cls(vertices, faces[keep], areas[keep], dropped_faces=dropped)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def face_centroids(self) -> np.ndarray:
        return self.vertices[self.faces].mean(axis=1)

    def face_adjacency(self) -> list[np.ndarray]:
        """For each face, the indices of faces sharing an edge with it."""
        edges = {}
        for fi, (a, b, c) in enumerate(self.faces):
            for e in ((a, b), (b, c), (c, a)):
                key = (min(e), max(e))
                edges.setdefault(key, []).append(fi)
        neighbors = [set() for _ in range(self.n_faces)]
        for flist in edges.values():
            for i in flist:
                for j in flist:
                    if i != j:
                        neighbors[i].add(j)
        return [np.array(sorted(s), dtype=np.int64) for s in neighbors]

    def bounds(self):
        """(min, max) corners of the axis-aligned bounding box."""
        used = self.vertices[np.unique(self.faces)]
        return used.min(axis=0), used.max(axis=0)


def concat_meshes(meshes: list[TriMesh]) -> tuple[TriMesh, list[np.ndarray]]:
    """Concatenate meshes; returns the merged mesh and per-input face id arrays."""
    verts = []
    faces = []
    face_ranges = []
    v_off = 0
    f_off = 0
    for m in meshes:
        verts.append(m.vertices)
        faces.append(m.faces + v_off)
        face_ranges.append(np.arange(f_off, f_off + m.n_faces, dtype=np.int64))
        v_off += m.n_vertices
        f_off += m.n_faces
    merged = TriMesh(np.concatenate(verts), np.concatenate(faces))
    return merged, face_ranges


def box_mesh(center, size) -> TriMesh:
    """Axis-aligned box as 12 triangles (outward wound)."""
    center = np.asarray(center, dtype=np.float64)
    half = np.asarray(size, dtype=np.float64) / 2.0
    signs = np.array(
        [[-1, -1, -1], [1, -1, -1], [1, 1, -1], [-1, 1, -1],
         [-1, -1, 1], [1, -1, 1], [1, 1, 1], [-1, 1, 1]],
        dtype=np.float64,
    )
    verts = center + signs * half
    quads = [
        (0, 3, 2, 1),  # bottom (-z)
        (4, 5, 6, 7),  # top (+z)
        (0, 1, 5, 4),  # -y
        (2, 3, 7, 6),  # +y
        (1, 2, 6, 5),  # +x
        (3, 0, 4, 7),  # -x
    ]
    faces = []
    for a, b, c, d in quads:
        faces.append((a, b, c))
        faces.append((a, c, d))
    return TriMesh(verts, np.array(faces))
