"""Camera poses and rectilinear (pinhole) view cameras.

Coordinate conventions used throughout the package:

World / panorama frame (right-handed):
  - +z is up.
  - Longitude (azimuth) lambda is measured from +x, clockwise when seen
    from above (+z looking down), so an observer facing +x with +z up
    has increasing lambda to their right.
  - Latitude phi is 0 at the horizon, +90 deg at the zenith (+z).
  - A unit direction is therefore
        dir(lambda, phi) = (cos phi * cos lambda,
                            -cos phi * sin lambda,
                            sin phi).

Rectilinear camera local frame (OpenCV-style):
  - x right, y down, z forward (optical axis).
  - yaw/pitch are applied in the panorama frame: yaw rotates the optical
    axis to longitude `yaw`, pitch to latitude `pitch` (degrees, up positive).
  - The camera's world pose rotation (if any) is applied on top of yaw/pitch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError

QUAT_NORM_TOL = 1e-6


def quat_to_matrix(q) -> np.ndarray:
    """Rotation matrix (world-from-camera) for a unit quaternion (w, x, y, z)."""
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ],
        dtype=np.float64,
    )


@dataclass(frozen=True)
class Pose:
    """Rigid world pose: position in meters, rotation as unit quaternion (w,x,y,z).

    The quaternion maps camera-frame vectors to world-frame vectors. Inputs
    within 1e-6 of unit norm are renormalized; anything else is rejected.
    """

    position: np.ndarray
    quaternion: np.ndarray

    def __init__(self, position, quaternion=(1.0, 0.0, 0.0, 0.0)):
        position = np.asarray(position, dtype=np.float64)
        quaternion = np.asarray(quaternion, dtype=np.float64)
        if position.shape != (3,):
            raise ConfigError(f"pose position must be a 3-vector, got shape {position.shape}")
        if quaternion.shape != (4,):
            raise ConfigError(f"pose quaternion must be (w,x,y,z), got shape {quaternion.shape}")
        norm = float(np.linalg.norm(quaternion))
        if abs(norm - 1.0) > QUAT_NORM_TOL:
            raise ConfigError(f"pose quaternion norm {norm:.6g} is not within {QUAT_NORM_TOL} of 1")
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "quaternion", quaternion / norm)
        self.position.setflags(write=False)
        self.quaternion.setflags(write=False)

    @property
    def rotation(self) -> np.ndarray:
        """3x3 world-from-camera rotation matrix."""
        return quat_to_matrix(self.quaternion)

    def to_json(self) -> dict:
        return {"position": self.position.tolist(), "quaternion": self.quaternion.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "Pose":
        return cls(data["position"], data["quaternion"])


def identity_pose(position=(0.0, 0.0, 0.0)) -> Pose:
    return Pose(position, (1.0, 0.0, 0.0, 0.0))


# Base orientation: camera local axes (right, down, forward) expressed in the
# panorama frame at yaw=0, pitch=0 -> right=-y, down=-z, forward=+x.
_R0 = np.array(
    [
        [0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0],
        [0.0, -1.0, 0.0],
    ]
)


def _rot_z(angle_rad: float) -> np.ndarray:
    c, s = np.cos(angle_rad), np.sin(angle_rad)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_y(angle_rad: float) -> np.ndarray:
    c, s = np.cos(angle_rad), np.sin(angle_rad)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def view_rotation(yaw_deg: float, pitch_deg: float) -> np.ndarray:
    """Panorama-frame-from-camera-local rotation for a yaw/pitch heading.

    Columns map (right, down, forward) to panorama-frame axes; the forward
    axis lands at longitude `yaw_deg`, latitude `pitch_deg`.
    """
    yaw = np.deg2rad(yaw_deg)
    pitch = np.deg2rad(pitch_deg)
    return _rot_z(-yaw) @ _rot_y(-pitch) @ _R0


@dataclass(frozen=True)
class RectCamera:
    """Square pinhole camera sampled from (or posed like) a panorama.

    `fov` is both the horizontal and vertical field of view in degrees
    (frames are square). `yaw`/`pitch` are the heading inside the panorama
    frame; `pose` is the panorama's world pose and only matters when rays
    are cast into world space.
    """

    pose: Pose = field(default_factory=identity_pose)
    yaw: float = 0.0
    pitch: float = 0.0
    fov: float = 90.0
    width: int = 800
    height: int = 800

    def __post_init__(self):
        if not 0.0 < self.fov < 180.0:
            raise ConfigError(f"fov must be in (0, 180) degrees, got {self.fov}")
        if self.width != self.height:
            raise ConfigError(f"rectilinear frames must be square, got {self.width}x{self.height}")
        if self.width < 1:
            raise ConfigError("frame size must be at least 1 pixel")

    @property
    def tan_half_fov(self) -> float:
        return float(np.tan(np.deg2rad(self.fov) / 2.0))

    @property
    def rotation_in_pano(self) -> np.ndarray:
        """Rotation from camera-local to the panorama frame (yaw/pitch only)."""
        return view_rotation(self.yaw, self.pitch)

    @property
    def rotation_world(self) -> np.ndarray:
        """Rotation from camera-local to world (pose on top of yaw/pitch)."""
        return self.pose.rotation @ self.rotation_in_pano

    def pixel_dirs_local(self) -> np.ndarray:
        """Unit ray directions through every pixel center, camera-local, (H, W, 3)."""
        t = self.tan_half_fov
        xs = (2.0 * (np.arange(self.width) + 0.5) - self.width) / self.width * t
        ys = (2.0 * (np.arange(self.height) + 0.5) - self.height) / self.height * t
        xx, yy = np.meshgrid(xs, ys)
        dirs = np.stack([xx, yy, np.ones_like(xx)], axis=-1)
        return dirs / np.linalg.norm(dirs, axis=-1, keepdims=True)

    def project_local(self, dirs_local: np.ndarray):
        """Continuous pixel coordinates for camera-local directions.

        Returns (u, v, in_front) where in_front is False for directions at or
        behind the image plane; their (u, v) are NaN.
        """
        dirs_local = np.asarray(dirs_local, dtype=np.float64)
        z = dirs_local[..., 2]
        in_front = z > 1e-12
        t = self.tan_half_fov
        with np.errstate(divide="ignore", invalid="ignore"):
            x_ndc = dirs_local[..., 0] / (z * t)
            y_ndc = dirs_local[..., 1] / (z * t)
        u = (x_ndc + 1.0) * self.width / 2.0 - 0.5
        v = (y_ndc + 1.0) * self.height / 2.0 - 0.5
        u = np.where(in_front, u, np.nan)
        v = np.where(in_front, v, np.nan)
        return u, v, in_front
