"""Synthetic hand-pose fixtures with known ground truth.

Each builder draws a silhouette whose geometry makes exactly one rule
fire: finger rigs with controlled valley width/depth for the defect
letters, slabs and crosses with controlled second moments for the
orientation letters. The shapes are deliberately rectilinear where a
tie or an angle must be exact. Canvas is 320x240, foreground 230 on
background 25, so both threshold modes see strong contrast.
"""

from __future__ import annotations

import numpy as np

FRAME_SHAPE = (240, 320)
FOREGROUND = 230
BACKGROUND = 25


def rasterize_polygon(vertices, shape=FRAME_SHAPE, fg=FOREGROUND, bg=BACKGROUND) -> np.ndarray:
    """Fill pixels whose centers fall inside the polygon (even-odd rule)."""
    h, w = shape
    ys, xs = np.mgrid[0:h, 0:w]
    px = xs + 0.5
    py = ys + 0.5
    inside = np.zeros(shape, dtype=bool)
    v = np.asarray(vertices, dtype=np.float64)
    n = len(v)
    for i in range(n):
        x1, y1 = v[i]
        x2, y2 = v[(i + 1) % n]
        if y1 == y2:
            continue
        crosses = ((y1 <= py) & (py < y2)) | ((y2 <= py) & (py < y1))
        x_at = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (px < x_at)
    img = np.full(shape, bg, dtype=np.uint8)
    img[inside] = fg
    return img


def disc_image(center, radius, shape=FRAME_SHAPE, fg=FOREGROUND, bg=BACKGROUND) -> np.ndarray:
    h, w = shape
    ys, xs = np.mgrid[0:h, 0:w]
    cx, cy = center
    inside = (xs + 0.5 - cx) ** 2 + (ys + 0.5 - cy) ** 2 <= radius * radius
    img = np.full(shape, bg, dtype=np.uint8)
    img[inside] = fg
    return img


def _two_finger_rig(gap: float, floor_y: float) -> np.ndarray:
    """Two 14-px fingers around a valley of the given width and floor.

    Inner tips sit higher than the outer corners so both flank the
    valley as hull vertices; the valley angle is then controlled by
    gap width and floor depth alone.
    """
    half = gap / 2.0
    left_outer = 160 - half - 14
    left_inner = 160 - half
    right_inner = 160 + half
    right_outer = 160 + half + 14
    return rasterize_polygon(
        [
            (left_outer, 90),
            (left_inner, 86),
            (left_inner, floor_y),
            (right_inner, floor_y),
            (right_inner, 86),
            (right_outer, 90),
            (right_outer, 215),
            (left_outer, 215),
        ]
    )


def letter_a() -> np.ndarray:
    """Fist: a disc nearly fills its enclosing circle."""
    return disc_image((160, 120), 70)


def letter_b() -> np.ndarray:
    """Open palm: the largest-area pose, no valleys."""
    return rasterize_polygon([(20, 20), (300, 20), (300, 220), (20, 220)])


def letter_v() -> np.ndarray:
    """Narrow deep valley: angle about 8 degrees."""
    return _two_finger_rig(gap=12, floor_y=193)


def letter_l() -> np.ndarray:
    """Mid-width valley: angle about 27 degrees."""
    return _two_finger_rig(gap=54, floor_y=193)


def letter_c() -> np.ndarray:
    """Wide valley: angle about 53 degrees."""
    return _two_finger_rig(gap=142, floor_y=193)


def letter_y() -> np.ndarray:
    """Very wide, shallower valley: angle about 70 degrees, still acute."""
    return _two_finger_rig(gap=110, floor_y=126)


def letter_w() -> np.ndarray:
    """Three fingers, two narrow valleys; middle tips raised so all six
    tip corners stay strict hull vertices."""
    return rasterize_polygon(
        [
            (138, 90),
            (152, 86),
            (152, 193),
            (168, 193),
            (168, 83),
            (182, 83),
            (182, 193),
            (198, 193),
            (198, 86),
            (212, 90),
            (212, 215),
            (138, 215),
        ]
    )


def letter_f() -> np.ndarray:
    """The three-finger rig plus a wide shallow thumb dent on the right.

    The dent is deep enough to register but so wide its angle is far
    obtuse, so the count stays two while the decision angle exceeds
    the F bound. Tip heights rise toward the thumb so every vertex
    flanking a valley stays on the hull.
    """
    return rasterize_polygon(
        [
            (138, 90),
            (152, 86),
            (152, 193),
            (168, 193),
            (168, 83),
            (182, 83),
            (182, 193),
            (198, 193),
            (198, 86),
            (212, 90),
            (250, 115),
            (296, 107),
            (296, 215),
            (138, 215),
        ]
    )


def letter_i() -> np.ndarray:
    """Thin bar a few degrees off horizontal: orientation about 174."""
    return _slab((40, 140), (280, 115), 12)


def letter_j() -> np.ndarray:
    """Bar climbing at 30 degrees: orientation 150, high solidity."""
    return _slab((60, 190), (268, 70), 18)


def letter_u() -> np.ndarray:
    """Steep slab with a wide obtuse bite: solidity lands mid-band."""
    return rasterize_polygon(
        [
            (88, 205),
            (198, 15),
            (232, 35),
            (202, 87),
            (163, 122),
            (152, 173),
            (122, 225),
        ]
    )


def letter_d() -> np.ndarray:
    """Tall thin spine with a heavy wide arm: the bounding box is tall
    but the mass spreads in x, so the major axis is horizontal.

    Inner corners are chamfered so the four arm valleys are obtuse and
    never enter the defect count. The whole shape is tilted a few
    degrees: a perfectly symmetric cross has an orientation sign that
    flips on rasterization noise between 0 and just under 180.
    """
    return rasterize_polygon(
        _rotate(
            [
                (153, 15),
                (167, 15),
                (167, 67),
                (185, 85),
                (235, 85),
                (235, 155),
                (185, 155),
                (167, 173),
                (167, 225),
                (153, 225),
                (153, 173),
                (135, 155),
                (85, 155),
                (85, 85),
                (135, 85),
                (153, 67),
            ],
            center=(160, 120),
            deg=6.0,
        )
    )


def letter_h() -> np.ndarray:
    """The tall-cross construction rotated: wide box, vertical major axis."""
    return rasterize_polygon(
        [
            (55, 113),
            (107, 113),
            (125, 95),
            (125, 45),
            (195, 45),
            (195, 95),
            (213, 113),
            (265, 113),
            (265, 127),
            (213, 127),
            (195, 145),
            (195, 195),
            (125, 195),
            (125, 145),
            (107, 127),
            (55, 127),
        ]
    )


def _rotate(vertices, center, deg: float):
    theta = np.deg2rad(deg)
    c, s = np.cos(theta), np.sin(theta)
    cx, cy = center
    return [
        (cx + (x - cx) * c - (y - cy) * s, cy + (x - cx) * s + (y - cy) * c)
        for x, y in vertices
    ]


def _slab(p1, p2, width: float) -> np.ndarray:
    """Rectangle of the given width along the segment p1-p2."""
    x1, y1 = p1
    x2, y2 = p2
    dx, dy = x2 - x1, y2 - y1
    length = float(np.hypot(dx, dy))
    nx, ny = -dy / length * width / 2.0, dx / length * width / 2.0
    return rasterize_polygon(
        [
            (x1 + nx, y1 + ny),
            (x2 + nx, y2 + ny),
            (x2 - nx, y2 - ny),
            (x1 - nx, y1 - ny),
        ]
    )


def background() -> np.ndarray:
    """No hand at all."""
    return np.full(FRAME_SHAPE, BACKGROUND, dtype=np.uint8)


def speckle() -> np.ndarray:
    """Sensor-noise dots, each far below the area gate."""
    rng = np.random.RandomState(11)
    img = np.full(FRAME_SHAPE, BACKGROUND, dtype=np.uint8)
    for _ in range(30):
        y = int(rng.randint(2, FRAME_SHAPE[0] - 4))
        x = int(rng.randint(2, FRAME_SHAPE[1] - 4))
        img[y : y + 2, x : x + 2] = FOREGROUND
    return img


FIXTURE_BUILDERS = {
    "A": letter_a,
    "B": letter_b,
    "C": letter_c,
    "D": letter_d,
    "F": letter_f,
    "H": letter_h,
    "I": letter_i,
    "J": letter_j,
    "L": letter_l,
    "U": letter_u,
    "V": letter_v,
    "W": letter_w,
    "Y": letter_y,
}


def fixtures() -> dict[str, np.ndarray]:
    """One silhouette per supported letter."""
    return {letter: build() for letter, build in FIXTURE_BUILDERS.items()}
