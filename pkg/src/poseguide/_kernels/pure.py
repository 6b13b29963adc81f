"""Pure-Python scoring kernel, used when the compiled extension is absent."""

import math

# (first endpoint index, second endpoint index) per segment, fixed order.
# Must stay in sync with skeleton.SEGMENT_INDEX_PAIRS and the compiled kernel.
_PAIRS = (
    (5, 6),    # shoulder_line
    (11, 12),  # hip_line
    (5, 7),    # upper_arm_l
    (6, 8),    # upper_arm_r
    (7, 9),    # lower_arm_l
    (8, 10),   # lower_arm_r
    (11, 13),  # upper_leg_l
    (12, 14),  # upper_leg_r
    (13, 15),  # lower_leg_l
    (14, 16),  # lower_leg_r
)

_TWO_PI = 2.0 * math.pi
_NAN = float("nan")

IMPLEMENTATION = "pure"


def score_pair(a, b, threshold, out):
    """Per-segment angular error between two packed (17, 3) pose arrays.

    a, b: rows of (x, y, score) in canonical keypoint order, coordinates
    already in the space angles should be measured in. out: length-10 buffer
    receiving the error per segment (NaN where the segment is invalid).
    Returns the number of valid segments.
    """
    valid = 0
    for s, (i, j) in enumerate(_PAIRS):
        if a[i][2] < threshold or a[j][2] < threshold \
                or b[i][2] < threshold or b[j][2] < threshold:
            out[s] = _NAN
            continue
        adx = a[j][0] - a[i][0]
        ady = a[j][1] - a[i][1]
        bdx = b[j][0] - b[i][0]
        bdy = b[j][1] - b[i][1]
        if (adx == 0.0 and ady == 0.0) or (bdx == 0.0 and bdy == 0.0):
            out[s] = _NAN
            continue
        d = math.fabs(math.atan2(ady, adx) - math.atan2(bdy, bdx)) % _TWO_PI
        if d > math.pi:
            d = _TWO_PI - d
        out[s] = d
        valid += 1
    return valid
