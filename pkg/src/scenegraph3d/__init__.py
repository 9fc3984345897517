"""scenegraph3d: layered 3D scene graphs from meshes, panoramas and 2D detections."""

__version__ = "0.1.0"
