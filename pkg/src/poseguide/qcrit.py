"""Embedded critical values of the studentized range statistic, alpha = .05.

Rows are error degrees of freedom, columns the number of groups k = 2..10.
Values were computed from the studentized range distribution (two-dimensional
numerical integration of its CDF, inverted at 0.95) and rounded to 4 decimals;
they agree with the classical published tables. Lookups for a df between rows
use the next lower row, which over-states q and is therefore conservative.
"""

from __future__ import annotations

K_MIN = 2
K_MAX = 10

# df -> [q_crit for k = 2..10]; None key is the infinite-df row.
Q_CRIT_05: dict[int | None, list[float]] = {
    5: [3.6354, 4.6017, 5.2183, 5.6731, 6.0329, 6.3299, 6.5823, 6.8014, 6.9947],
    6: [3.4605, 4.3392, 4.8956, 5.3049, 5.6284, 5.8953, 6.1222, 6.3192, 6.4931],
    7: [3.3441, 4.1649, 4.6813, 5.0601, 5.3591, 5.6057, 5.8153, 5.9973, 6.1579],
    8: [3.2612, 4.041, 4.5288, 4.8858, 5.1672, 5.3991, 5.5962, 5.7673, 5.9183],
    9: [3.1992, 3.9485, 4.4149, 4.7554, 5.0235, 5.2444, 5.4319, 5.5947, 5.7384],
    10: [3.1511, 3.8768, 4.3266, 4.6543, 4.912, 5.1242, 5.3042, 5.4605, 5.5984],
    11: [3.1127, 3.8196, 4.2561, 4.5736, 4.823, 5.0281, 5.2021, 5.3531, 5.4863],
    12: [3.0813, 3.7729, 4.1987, 4.5077, 4.7502, 4.9496, 5.1187, 5.2653, 5.3946],
    13: [3.0552, 3.7341, 4.1509, 4.4529, 4.6897, 4.8842, 5.0491, 5.1921, 5.3181],
    14: [3.0332, 3.7014, 4.1105, 4.4066, 4.6385, 4.829, 4.9903, 5.1301, 5.2534],
    15: [3.0143, 3.6734, 4.076, 4.367, 4.5947, 4.7816, 4.9399, 5.077, 5.1979],
    16: [2.998, 3.6491, 4.0461, 4.3327, 4.5568, 4.7406, 4.8962, 5.031, 5.1498],
    17: [2.9837, 3.628, 4.02, 4.3027, 4.5237, 4.7048, 4.858, 4.9907, 5.1077],
    18: [2.9712, 3.6093, 3.997, 4.2763, 4.4944, 4.6731, 4.8243, 4.9552, 5.0705],
    19: [2.96, 3.5927, 3.9766, 4.2528, 4.4685, 4.645, 4.7944, 4.9236, 5.0375],
    20: [2.95, 3.5779, 3.9583, 4.2319, 4.4452, 4.6199, 4.7676, 4.8954, 5.0079],
    21: [2.941, 3.5646, 3.9419, 4.213, 4.4244, 4.5973, 4.7435, 4.8699, 4.9813],
    22: [2.9329, 3.5526, 3.927, 4.1959, 4.4055, 4.5769, 4.7217, 4.8469, 4.9572],
    23: [2.9255, 3.5417, 3.9136, 4.1805, 4.3883, 4.5583, 4.7018, 4.826, 4.9353],
    24: [2.9188, 3.5317, 3.9013, 4.1663, 4.3727, 4.5413, 4.6838, 4.8069, 4.9152],
    25: [2.9126, 3.5226, 3.89, 4.1534, 4.3583, 4.5258, 4.6672, 4.7894, 4.8969],
    26: [2.907, 3.5142, 3.8796, 4.1415, 4.3451, 4.5115, 4.6519, 4.7733, 4.88],
    27: [2.9017, 3.5064, 3.8701, 4.1305, 4.3329, 4.4983, 4.6378, 4.7584, 4.8644],
    28: [2.8969, 3.4993, 3.8612, 4.1203, 4.3217, 4.4861, 4.6248, 4.7446, 4.85],
    29: [2.8924, 3.4926, 3.853, 4.1109, 4.3112, 4.4747, 4.6127, 4.7318, 4.8366],
    30: [2.8882, 3.4864, 3.8454, 4.1021, 4.3015, 4.4642, 4.6014, 4.7199, 4.8241],
    40: [2.8582, 3.4421, 3.7907, 4.0391, 4.2316, 4.3885, 4.5205, 4.6345, 4.7345],
    60: [2.8288, 3.3987, 3.7371, 3.9774, 4.1632, 4.3141, 4.4411, 4.5504, 4.6463],
    120: [2.8, 3.3561, 3.6846, 3.9169, 4.096, 4.2412, 4.363, 4.4678, 4.5595],
    None: [2.7718, 3.3145, 3.6332, 3.8577, 4.0301, 4.1696, 4.2863, 4.3865, 4.4741],
}

_FINITE_DFS = sorted(df for df in Q_CRIT_05 if df is not None)


def resolve_df_row(df: float) -> int | None:
    """The table row used for a given error df (next lower row; None = infinite)."""
    if df < _FINITE_DFS[0]:
        raise ValueError(f"df_error {df} below the smallest tabulated row ({_FINITE_DFS[0]})")
    if df > _FINITE_DFS[-1]:
        return None
    usable = [row for row in _FINITE_DFS if row <= df]
    return usable[-1]


def q_critical(k: int, df: float, alpha: float = 0.05) -> float:
    """Critical studentized range value q(alpha; k, df) from the embedded table."""
    if alpha != 0.05:
        raise ValueError("unsupported alpha: only the 0.05 table is embedded")
    if not (K_MIN <= k <= K_MAX):
        raise ValueError(f"k must be in [{K_MIN}, {K_MAX}]")
    return Q_CRIT_05[resolve_df_row(df)][k - K_MIN]
