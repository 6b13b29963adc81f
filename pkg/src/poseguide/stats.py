"""Study analysis: counterbalancing, within-subject ANOVA, Tukey HSD, TLX, ranks."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .qcrit import q_critical
from .special import f_sf

_DEGENERATE_EPS = 1e-12


@dataclass(frozen=True)
class StudyTable:
    """Complete participants x conditions matrix of one dependent measure."""

    conditions: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]  # one row per participant
    participants: tuple[str, ...] | None = None

    def __post_init__(self):
        n, k = len(self.values), len(self.conditions)
        if n < 2 or k < 2:
            raise ValueError("need at least 2 participants and 2 conditions")
        for row in self.values:
            if len(row) != k:
                raise ValueError("ragged table: every row needs one value per condition")
            for v in row:
                if not math.isfinite(v):
                    raise ValueError("table values must be finite")
        if self.participants is not None and len(self.participants) != n:
            raise ValueError("participants length mismatch")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def k(self) -> int:
        return len(self.conditions)


@dataclass(frozen=True)
class AnovaResult:
    F: float
    df_between: int
    df_error: int
    p: float
    condition_means: tuple[float, ...]
    grand_mean: float
    ms_error: float


@dataclass(frozen=True)
class TukeyPair:
    i: int
    j: int
    mean_diff: float
    q_statistic: float
    significant_at_05: bool


@dataclass(frozen=True)
class TukeyResult:
    pairs: tuple[TukeyPair, ...]
    q_critical: float


@dataclass(frozen=True)
class TlxResponse:
    """Six NASA-TLX subscales, each on [0, scale_max]."""

    mental: float
    physical: float
    temporal: float
    performance: float
    effort: float
    frustration: float
    scale_max: float = 20.0

    def __post_init__(self):
        if not (self.scale_max > 0):
            raise ValueError("scale_max must be positive")
        for name in ("mental", "physical", "temporal", "performance", "effort", "frustration"):
            v = getattr(self, name)
            if not (0.0 <= v <= self.scale_max):
                raise ValueError(f"{name} subscale {v} outside [0, {self.scale_max}]")

    @property
    def subscales(self) -> tuple[float, ...]:
        return (self.mental, self.physical, self.temporal,
                self.performance, self.effort, self.frustration)


def latin_square(k: int, replicates: int = 1) -> list[list[int]]:
    """Condition-order matrix of (k * replicates) rows over conditions 0..k-1.

    The k base rows form a balanced Latin square for even k (row i starts at i
    and alternates forward/backward: i, i+1, i-1, i+2, ...), a cyclic square
    for odd k. Replicates repeat the base square verbatim, so each condition
    lands in each column position exactly `replicates` times overall.
    """
    if k < 2:
        raise ValueError("need at least 2 conditions")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    base = []
    for i in range(k):
        if k % 2 == 0:
            row = [i]
            for d in range(1, k):
                step = (d + 1) // 2 if d % 2 == 1 else -(d // 2)
                row.append((i + step) % k)
        else:
            row = [(i + d) % k for d in range(k)]
        base.append(row)
    return [list(row) for _ in range(replicates) for row in base]


def rm_anova(table: StudyTable) -> AnovaResult:
    """One-way within-subject ANOVA: condition effect with subject baselines removed."""
    n, k = table.n, table.k
    values = table.values
    grand = sum(sum(row) for row in values) / (n * k)
    subject_means = [sum(row) / k for row in values]
    cond_means = [sum(values[i][j] for i in range(n)) / n for j in range(k)]

    ss_total = sum((v - grand) ** 2 for row in values for v in row)
    ss_subj = k * sum((m - grand) ** 2 for m in subject_means)
    ss_cond = n * sum((m - grand) ** 2 for m in cond_means)
    ss_err = ss_total - ss_subj - ss_cond

    df_between = k - 1
    df_error = (k - 1) * (n - 1)
    scale = max(ss_total, 1.0)
    if ss_cond <= _DEGENERATE_EPS * scale:
        # No condition effect at all; report F = 0 regardless of error variance.
        return AnovaResult(0.0, df_between, df_error, 1.0,
                           tuple(cond_means), grand, ss_err / df_error)
    if ss_err <= _DEGENERATE_EPS * scale:
        raise ValueError("degenerate table: zero error variance")

    ms_cond = ss_cond / df_between
    ms_error = ss_err / df_error
    f = ms_cond / ms_error
    p = f_sf(f, df_between, df_error)
    return AnovaResult(f, df_between, df_error, p, tuple(cond_means), grand, ms_error)


def tukey_hsd(table: StudyTable, anova: AnovaResult, alpha: float = 0.05) -> TukeyResult:
    """All-pairs Tukey HSD using the ANOVA's error term and the embedded q table."""
    if alpha != 0.05:
        raise ValueError("unsupported alpha: only 0.05 is table-backed")
    n, k = table.n, table.k
    q_crit = q_critical(k, anova.df_error, alpha)
    se = math.sqrt(anova.ms_error / n)
    pairs = []
    for i in range(k):
        for j in range(i + 1, k):
            diff = anova.condition_means[i] - anova.condition_means[j]
            if diff == 0.0:
                q = 0.0
            elif se > 0.0:
                q = abs(diff) / se
            else:
                q = math.inf
            pairs.append(TukeyPair(i, j, diff, q, q >= q_crit))
    return TukeyResult(tuple(pairs), q_crit)


def tlx_overall(resp: TlxResponse) -> float:
    """Raw-TLX workload: unweighted mean of the six subscales, rescaled to [0, 100]."""
    return sum(resp.subscales) / 6.0 * (100.0 / resp.scale_max)


def rank_sum(rankings: list[list[int]]) -> tuple[list[int], list[int]]:
    """Sum of per-participant ranks per condition (lower = preferred).

    Each row must be a permutation of 1..k. Returns (totals, ordering) where
    ordering lists condition indices from best (lowest total) to worst.
    """
    if not rankings:
        raise ValueError("need at least one ranking row")
    k = len(rankings[0])
    expected = set(range(1, k + 1))
    totals = [0] * k
    for row in rankings:
        if set(row) != expected or len(row) != k:
            raise ValueError(f"row {row} is not a permutation of 1..{k}")
        for j, r in enumerate(row):
            totals[j] += r
    ordering = sorted(range(k), key=lambda j: (totals[j], j))
    return totals, ordering


# ---------------------------------------------------------------------------
# Report-table helpers used by the CLI


def pivot_rows(rows, value_of, conditions=("C1", "C2", "C3", "C4")) -> StudyTable:
    """Build a complete StudyTable from report rows via a value accessor."""
    cells: dict[str, dict[str, float]] = {}
    for row in rows:
        v = value_of(row)
        if v is None:
            raise ValueError(f"missing measure for participant {row.participant!r} / {row.condition}")
        cells.setdefault(row.participant, {})[row.condition] = float(v)
    participants = sorted(cells)
    values = []
    for p in participants:
        have = cells[p]
        missing = [c for c in conditions if c not in have]
        if missing:
            raise ValueError(f"participant {p!r} missing conditions {missing}")
        values.append(tuple(have[c] for c in conditions))
    return StudyTable(tuple(conditions), tuple(values), tuple(participants))


def anova_summary_text(table: StudyTable, anova: AnovaResult, tukey: TukeyResult) -> str:
    lines = [
        "within-subject one-way ANOVA",
        f"  n = {table.n} participants, k = {table.k} conditions",
        f"  df = ({anova.df_between}, {anova.df_error})",
        f"  F = {anova.F:.4f}, p = {anova.p:.4g}",
        f"  grand mean = {anova.grand_mean:.6g}",
        "  condition means: "
        + ", ".join(f"{c}={m:.6g}" for c, m in zip(table.conditions, anova.condition_means)),
        f"Tukey HSD (alpha = .05, q_crit = {tukey.q_critical:.4f})",
    ]
    return "\n".join(lines)


def tukey_csv(table: StudyTable, tukey: TukeyResult) -> str:
    lines = ["cond_a,cond_b,mean_diff,q,significant_at_05"]
    for pair in tukey.pairs:
        lines.append(
            f"{table.conditions[pair.i]},{table.conditions[pair.j]},"
            f"{pair.mean_diff!r},{pair.q_statistic!r},{str(pair.significant_at_05).lower()}"
        )
    return "\n".join(lines)
