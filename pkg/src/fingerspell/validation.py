"""Input validation helpers shared across the pipeline modules.

Images are plain numpy arrays: a grayscale frame is a 2-D uint8 array
(rows are y, columns are x), a binary mask is a 2-D bool array of the
same shape, and a contour is an (N, 2) integer array of (x, y) points.
"""

from __future__ import annotations

import numpy as np


def check_gray_image(img) -> np.ndarray:
    """Coerce ``img`` into a validated 2-D uint8 grayscale array.

    Accepts nested sequences or arrays of any integer/float dtype as long
    as every value is an integral intensity in [0, 255] and both
    dimensions are at least 1.
    """
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"grayscale image must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"image dimensions must be >= 1, got {arr.shape}")
    if arr.dtype == np.uint8:
        return arr
    if not np.issubdtype(arr.dtype, np.number):
        raise ValueError(f"image dtype {arr.dtype} is not numeric")
    vals = arr.astype(np.float64)
    if np.any(vals < 0) or np.any(vals > 255):
        raise ValueError("intensities must lie in [0, 255]")
    if not np.all(vals == np.round(vals)):
        raise ValueError("intensities must be integral")
    return arr.astype(np.uint8)


def check_binary_mask(mask) -> np.ndarray:
    """Coerce ``mask`` into a validated 2-D bool array."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"binary mask must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"mask dimensions must be >= 1, got {arr.shape}")
    if arr.dtype == np.bool_:
        return arr
    if np.issubdtype(arr.dtype, np.number):
        uniq = np.unique(arr)
        if not np.all(np.isin(uniq, (0, 1))):
            raise ValueError("numeric masks must contain only 0 and 1")
        return arr.astype(bool)
    raise ValueError(f"mask dtype {arr.dtype} is not boolean or 0/1 numeric")


def check_contour(points) -> np.ndarray:
    """Coerce ``points`` into an (N, 2) array of (x, y) coordinates.

    N must be at least 1. Float inputs are accepted when exactly
    representable as integers are not required; coordinates stay in the
    input's numeric type widened to float64 unless already integral.
    """
    arr = np.asarray(points)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"contour must have shape (N, 2), got {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("contour must contain at least one point")
    if np.issubdtype(arr.dtype, np.integer):
        return arr.astype(np.int64)
    if np.issubdtype(arr.dtype, np.floating):
        return arr.astype(np.float64)
    raise ValueError(f"contour dtype {arr.dtype} is not numeric")


def check_point_batch(X) -> list[np.ndarray]:
    """Validate a batch of grayscale frames for the estimator API.

    ``X`` may be a 3-D array (frames stacked on axis 0) or an iterable of
    2-D frames with possibly differing shapes. Returns a list of
    validated 2-D uint8 arrays.
    """
    if isinstance(X, np.ndarray) and X.ndim == 3:
        return [check_gray_image(X[i]) for i in range(X.shape[0])]
    try:
        frames = list(X)
    except TypeError:
        raise ValueError("X must be a 3-D array or an iterable of 2-D frames")
    if not frames:
        raise ValueError("X contains no frames")
    return [check_gray_image(f) for f in frames]
