"""Equirectangular panorama pixel <-> direction mapping and rectilinear sampling.

Pixel convention: pixel centers, column u -> longitude in [-180, 180) deg,
row v -> latitude in [90, -90] deg:

    lambda = (u + 0.5) / width  * 360 - 180
    phi    = 90 - (v + 0.5) / height * 180

Panoramas are twice as wide as tall. Directions returned here live in the
panorama camera frame (see geometry.camera for the frame definition); apply
the panorama pose rotation to get world rays.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateDirectionError, InvalidPanoramaError
from .camera import RectCamera


def _check_pano_dims(width: int, height: int):
    if width != 2 * height or height < 1:
        raise InvalidPanoramaError(f"panorama must be width == 2*height, got {width}x{height}")


def pano_pixel_to_dir(u, v, width: int, height: int) -> np.ndarray:
    """Unit direction(s) through panorama pixel center(s) (u, v).

    Accepts scalars or arrays; returns shape (..., 3). Continuous (possibly
    fractional) pixel coordinates are allowed.
    """
    _check_pano_dims(width, height)
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    lam = (u + 0.5) / width * (2.0 * np.pi) - np.pi
    phi = np.pi / 2.0 - (v + 0.5) / height * np.pi
    cos_phi = np.cos(phi)
    out = np.stack([cos_phi * np.cos(lam), -cos_phi * np.sin(lam), np.sin(phi)], axis=-1)
    return out


def dir_to_pano_pixel(direction, width: int, height: int):
    """Continuous panorama pixel coordinates (u, v) for direction(s).

    Inverse of pano_pixel_to_dir up to pixel quantization; u wraps modulo
    width, v is clamped to [0, height-1] so poles land on the boundary rows
    (longitude, hence u, is preserved for near-pole directions).
    """
    _check_pano_dims(width, height)
    d = np.asarray(direction, dtype=np.float64)
    norm = np.linalg.norm(d, axis=-1)
    if np.any(norm < 1e-12):
        raise DegenerateDirectionError("zero direction vector cannot map to a panorama pixel")
    d = d / norm[..., None]
    lam = np.arctan2(-d[..., 1], d[..., 0])
    phi = np.arcsin(np.clip(d[..., 2], -1.0, 1.0))
    u = (lam + np.pi) / (2.0 * np.pi) * width - 0.5
    u = np.mod(u, width)
    v = (np.pi / 2.0 - phi) / np.pi * height - 0.5
    v = np.clip(v, 0.0, height - 1.0)
    return u, v


def pano_pixel_dir_grid(width: int, height: int) -> np.ndarray:
    """Directions through every pixel center as an (height, width, 3) array."""
    _check_pano_dims(width, height)
    uu, vv = np.meshgrid(np.arange(width), np.arange(height))
    return pano_pixel_to_dir(uu, vv, width, height)


def sample_pano(image: np.ndarray, u, v, interpolation: str = "bilinear") -> np.ndarray:
    """Sample a panorama image at continuous pixel coordinates.

    u wraps around the yaw seam; v is clamped at the poles. `interpolation`
    is "bilinear" or "nearest".
    """
    h, w = image.shape[:2]
    u = np.asarray(u, dtype=np.float64)
    v = np.clip(np.asarray(v, dtype=np.float64), 0.0, h - 1.0)
    if interpolation == "nearest":
        ui = np.mod(np.round(u).astype(np.int64), w)
        vi = np.round(v).astype(np.int64)
        return image[vi, ui]
    if interpolation != "bilinear":
        raise ValueError(f"unknown interpolation {interpolation!r}")
    u0 = np.floor(u).astype(np.int64)
    v0 = np.floor(v).astype(np.int64)
    fu = u - u0
    fv = v - v0
    u0 = np.mod(u0, w)
    u1 = np.mod(u0 + 1, w)
    v0 = np.clip(v0, 0, h - 1)
    v1 = np.clip(v0 + 1, 0, h - 1)
    if image.ndim == 3:
        fu = fu[..., None]
        fv = fv[..., None]
    p00 = image[v0, u0].astype(np.float64)
    p01 = image[v0, u1].astype(np.float64)
    p10 = image[v1, u0].astype(np.float64)
    p11 = image[v1, u1].astype(np.float64)
    top = p00 * (1.0 - fu) + p01 * fu
    bot = p10 * (1.0 - fu) + p11 * fu
    out = top * (1.0 - fv) + bot * fv
    if np.issubdtype(image.dtype, np.integer):
        return np.clip(np.rint(out), 0, np.iinfo(image.dtype).max).astype(image.dtype)
    return out.astype(image.dtype)


def render_rect_view(pano, cam: RectCamera, interpolation: str = "bilinear") -> np.ndarray:
    """Render the rectilinear view `cam` by resampling the panorama.

    `pano` is a Panorama (anything with an `image` attribute) or a raw
    equirectangular image array. Deterministic: pure per-pixel resampling.
    """
    image = getattr(pano, "image", pano)
    h, w = image.shape[:2]
    _check_pano_dims(w, h)
    dirs = cam.pixel_dirs_local() @ cam.rotation_in_pano.T
    u, v = dir_to_pano_pixel(dirs, w, h)
    return sample_pano(image, u, v, interpolation)


def rect_pixel_to_pano_pixel(cam: RectCamera, u, v, pano_width: int, pano_height: int):
    """Panorama pixel position sampled by view pixel(s) (u, v) of `cam`.

    The view heading (yaw/pitch) is interpreted in the panorama frame; the
    shared world pose cancels between the view and its source panorama.
    """
    _check_pano_dims(pano_width, pano_height)
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    t = cam.tan_half_fov
    x = (2.0 * (u + 0.5) - cam.width) / cam.width * t
    y = (2.0 * (v + 0.5) - cam.height) / cam.height * t
    dirs = np.stack([x, y, np.ones_like(x)], axis=-1)
    dirs = dirs / np.linalg.norm(dirs, axis=-1, keepdims=True)
    dirs = dirs @ cam.rotation_in_pano.T
    return dir_to_pano_pixel(dirs, pano_width, pano_height)


def pano_to_view_projection(cam: RectCamera, pano_width: int, pano_height: int,
                            pano_dirs: np.ndarray | None = None):
    """Project every panorama pixel into the view `cam`.

    Returns (u, v, valid): continuous view pixel coordinates per panorama
    pixel, with valid False where the pixel is behind the camera or outside
    the frame. `pano_dirs` may pass a precomputed pano_pixel_dir_grid.
    """
    if pano_dirs is None:
        pano_dirs = pano_pixel_dir_grid(pano_width, pano_height)
    dirs_local = pano_dirs @ cam.rotation_in_pano
    u, v, in_front = cam.project_local(dirs_local)
    valid = in_front & (u >= -0.5) & (u <= cam.width - 0.5) & (v >= -0.5) & (v <= cam.height - 0.5)
    return u, v, valid
