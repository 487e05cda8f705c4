"""Grayscale-to-binary conversion: thresholding and mask cleanup.

Foreground (True) means hand pixels. The default polarity assumes the
hand is brighter than the background; callers flip the mask when the
scene is inverted.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import UniformImageError
from .validation import check_binary_mask, check_gray_image

_MAJORITY_KERNEL = np.ones((3, 3), dtype=np.uint8)


def binarize_fixed(img, threshold: int) -> np.ndarray:
    """Threshold a grayscale image: foreground where intensity >= threshold."""
    arr = check_gray_image(img)
    if not 0 <= int(threshold) <= 255:
        raise ValueError(f"threshold must be in [0, 255], got {threshold}")
    return arr >= np.uint16(threshold)


def binarize_otsu(img) -> tuple[np.ndarray, int]:
    """Threshold by maximizing between-class variance over the histogram.

    Scans every candidate threshold t in [0, 255], splitting pixels into
    the classes {intensity < t} and {intensity >= t}, and picks the t
    whose between-class variance is largest (ties break toward the lower
    t). Returns ``(mask, t)`` with ``mask = binarize_fixed(img, t)``.

    Raises UniformImageError when all pixels share one intensity, since
    no split separates anything; callers fall back to a fixed threshold.
    """
    arr = check_gray_image(img)
    if arr.min() == arr.max():
        raise UniformImageError(f"all pixels have intensity {int(arr.min())}")

    hist = np.bincount(arr.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    weighted = hist * np.arange(256)

    # Cumulative count and intensity mass of the below-threshold class,
    # for every candidate t: class 0 is [0, t), class 1 is [t, 255].
    n0 = np.concatenate(([0.0], np.cumsum(hist)[:-1]))
    s0 = np.concatenate(([0.0], np.cumsum(weighted)[:-1]))
    n1 = total - n0
    s1 = weighted.sum() - s0

    variance = np.zeros(256)
    valid = (n0 > 0) & (n1 > 0)
    mean_diff = s0[valid] / n0[valid] - s1[valid] / n1[valid]
    variance[valid] = n0[valid] * n1[valid] * mean_diff**2

    threshold = int(np.argmax(variance))
    return binarize_fixed(arr, threshold), threshold


def denoise(mask) -> np.ndarray:
    """One 3x3 majority-filter pass over a binary mask.

    Each output pixel takes the majority value of its 3x3 neighborhood
    (at least 5 of 9 set). The border is handled by edge replication, so
    a block flush against the frame edge keeps its edge rows. Corners of
    free-standing solid blocks are rounded by one pixel; after that the
    shape is a fixed point of the filter as long as the block is at
    least four pixels thick, so repeated passes only clear speckle and
    thin streaks, never whole fingers.
    """
    arr = check_binary_mask(mask)
    counts = ndimage.convolve(arr.astype(np.uint8), _MAJORITY_KERNEL, mode="nearest")
    return counts >= 5
