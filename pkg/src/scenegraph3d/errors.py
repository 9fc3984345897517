"""Exception hierarchy shared by all pipeline stages."""


class SceneGraphError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPanoramaError(SceneGraphError):
    """Panorama image dimensions or pose are unusable (e.g. width != 2*height)."""


class DegenerateDirectionError(SceneGraphError):
    """A direction vector is zero or too far from unit length to normalize."""


class EmptyGeometryError(SceneGraphError):
    """A mesh (or face subset) contains no usable faces."""


class FormatError(SceneGraphError):
    """A file could not be parsed; message carries file/line context."""


class ConfigError(SceneGraphError):
    """A configuration value violates a module precondition."""


class RoomOverlapError(SceneGraphError):
    """Two room annotations claim the same mesh face."""

    def __init__(self, face_id: int, room_a: str, room_b: str):
        self.face_id = face_id
        self.room_a = room_a
        self.room_b = room_b
        super().__init__(f"face {face_id} claimed by both room {room_a!r} and room {room_b!r}")


class UndefinedRatioError(SceneGraphError):
    """Denominator volume is zero; the ratio is undefined."""
