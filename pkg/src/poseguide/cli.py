"""Command line entry points for offline scoring, the live service, and analysis.

Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime error. Error
diagnostics go to stderr prefixed with a greppable code (error[usage],
error[data], error[runtime]).
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import stats, trackio
from .protocol import replay_track
from .session import (
    EmptyTrialError,
    MetricConfig,
    TrialSummary,
    best_offset,
    score_tracks,
    summarize_scores,
)
from .skeleton import SEGMENT_IDS

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3

AUTO_SEARCH_MAX = 2.0
AUTO_SEARCH_STEP = 1.0 / 30.0


class DataError(Exception):
    pass


class UsageError(Exception):
    pass


def _print_summary(summary: TrialSummary, offset: float | None = None) -> None:
    if offset is not None:
        print(f"offset_used_s: {offset!r}")
    print(f"mean_error_rad: {summary.mean_error!r}")
    print(f"frames_scored: {summary.frame_count}")
    print(f"frames_unscored: {summary.unscored_count}")
    print(f"duration_s: {summary.duration!r}")
    for seg in SEGMENT_IDS:
        v = summary.per_segment_means[seg]
        print(f"segment_mean_rad[{seg}]: {'' if v is None else repr(v)}")


def _summary_row(summary: TrialSummary, participant: str, condition: str) -> trackio.ScoreReportRow:
    return trackio.ScoreReportRow(
        participant=participant,
        condition=condition,
        mean_error=summary.mean_error,
        frames_scored=summary.frame_count,
        frames_unscored=summary.unscored_count,
        per_segment_means=summary.per_segment_means,
    )


def _participant_name(path: str) -> str:
    name = Path(path).name
    for suffix in (".poses.jsonl", ".jsonl"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return Path(path).stem


def cmd_score(args) -> int:
    trainer = trackio.read_track(args.trainer)
    user = trackio.read_track(args.user)
    cfg = MetricConfig(confidence_threshold=args.threshold, mirror_user=not args.no_mirror)
    if args.offset == "auto":
        offset, _ = best_offset(trainer, user, 0.0, AUTO_SEARCH_MAX, AUTO_SEARCH_STEP, cfg)
    else:
        try:
            offset = float(args.offset)
        except ValueError:
            raise UsageError(f"--offset must be 'auto' or a number, got {args.offset!r}")
    scores, unscored = score_tracks(trainer, user, offset, cfg)
    try:
        summary = summarize_scores(scores, unscored)
    except EmptyTrialError as exc:
        raise DataError(str(exc))
    _print_summary(summary, offset)
    if args.out:
        condition = user.meta.condition or "C1"
        trackio.export_report([_summary_row(summary, _participant_name(args.user), condition)],
                              args.out)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import serve

    serve(args.listen, trainer_path=args.trainer, record_dir=args.record_dir)
    return EXIT_OK


def cmd_replay(args) -> int:
    recorded = trackio.read_track(args.session)
    if recorded.meta.kind != "user_session":
        raise DataError(f"{args.session}: not a user_session recording")
    extras = recorded.meta.session or {}
    trainer_uri = extras.get("trainer_uri") or recorded.meta.source_uri
    if not trainer_uri:
        raise DataError(f"{args.session}: recording does not reference a trainer track")
    trainer_path = Path(trainer_uri)
    if not trainer_path.is_absolute():
        trainer_path = Path(args.session).parent / trainer_path
        if not trainer_path.exists():
            trainer_path = Path(trainer_uri)
    trainer = trackio.read_track(trainer_path)
    try:
        _, summary = replay_track(recorded, trainer)
    except EmptyTrialError as exc:
        raise DataError(str(exc))
    _print_summary(summary)
    if args.out:
        condition = recorded.meta.condition or "C1"
        trackio.export_report([_summary_row(summary, _participant_name(args.session), condition)],
                              args.out)
    return EXIT_OK


def cmd_latin_square(args) -> int:
    matrix = stats.latin_square(args.k, args.replicates)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    for row in matrix:
        writer.writerow([f"C{c + 1}" for c in row])
    return EXIT_OK


def _load_table(path: str, value_of) -> stats.StudyTable:
    rows = trackio.read_report(path)
    conditions = []
    for row in rows:
        if row.condition not in conditions:
            conditions.append(row.condition)
    conditions.sort()
    return stats.pivot_rows(rows, value_of, conditions=tuple(conditions))


def cmd_analyze_anova(args) -> int:
    measure = args.measure

    def value_of(row):
        if measure == "mean_error_rad":
            return row.mean_error
        if measure in SEGMENT_IDS:
            return row.per_segment_means[measure]
        if measure.startswith("tlx_"):
            sub = measure[len("tlx_"):]
            if row.tlx is None or sub not in row.tlx:
                return None
            return row.tlx[sub]
        raise DataError(f"unknown measure column {measure!r}")

    table = _load_table(args.input, value_of)
    anova = stats.rm_anova(table)
    tukey = stats.tukey_hsd(table, anova)
    print(stats.anova_summary_text(table, anova, tukey))
    print(stats.tukey_csv(table, tukey))
    return EXIT_OK


def cmd_analyze_tlx(args) -> int:
    rows = trackio.read_report(args.input)
    by_condition: dict[str, list[float]] = {}
    for row in rows:
        if row.tlx is None:
            raise DataError(f"participant {row.participant!r} / {row.condition} has no TLX data")
        resp = stats.TlxResponse(**row.tlx, scale_max=args.scale_max)
        by_condition.setdefault(row.condition, []).append(stats.tlx_overall(resp))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["condition", "mean_overall_tlx", "n"])
    for condition in sorted(by_condition):
        vals = by_condition[condition]
        writer.writerow([condition, repr(sum(vals) / len(vals)), len(vals)])
    return EXIT_OK


def cmd_analyze_ranks(args) -> int:
    with open(args.input, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("empty ranking file")
        if not header or header[0] != "participant":
            raise DataError("ranking file must start with a 'participant' column")
        conditions = header[1:]
        rankings = []
        for i, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(header):
                raise DataError(f"line {i}: expected {len(header)} fields")
            try:
                rankings.append([int(v) for v in record[1:]])
            except ValueError as exc:
                raise DataError(f"line {i}: {exc}")
    try:
        totals, ordering = stats.rank_sum(rankings)
    except ValueError as exc:
        raise DataError(str(exc))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["condition", "rank_sum"])
    for j, total in enumerate(totals):
        writer.writerow([conditions[j], total])
    print("ordering_best_first: " + ",".join(conditions[j] for j in ordering))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poseguide", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="offline trial scoring of a user track against a trainer track")
    p.add_argument("--trainer", required=True)
    p.add_argument("--user", required=True)
    p.add_argument("--offset", default="0", help="'auto' searches [0, 2] s at 1/30 s steps")
    p.add_argument("--threshold", type=float, default=0.3)
    p.add_argument("--no-mirror", action="store_true")
    p.add_argument("--out", help="write a one-row score report CSV")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("serve", help="run the live scoring service")
    p.add_argument("--listen", required=True, metavar="ADDR:PORT")
    p.add_argument("--trainer", help="preload this trainer track for all connections")
    p.add_argument("--record-dir", help="write each finished trial as a session track here")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("replay", help="re-score a recorded session deterministically")
    p.add_argument("--session", required=True)
    p.add_argument("--out", help="write a one-row score report CSV")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("latin-square", help="print a counterbalanced ordering matrix as CSV")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--replicates", type=int, default=1)
    p.set_defaults(func=cmd_latin_square)

    analyze = sub.add_parser("analyze", help="study analysis over a score report CSV")
    asub = analyze.add_subparsers(dest="analysis", required=True)

    p = asub.add_parser("anova", help="within-subject ANOVA plus Tukey HSD")
    p.add_argument("--input", required=True)
    p.add_argument("--measure", default="mean_error_rad")
    p.set_defaults(func=cmd_analyze_anova)

    p = asub.add_parser("tlx", help="per-condition overall TLX scores")
    p.add_argument("--input", required=True)
    p.add_argument("--scale-max", type=float, default=20.0)
    p.set_defaults(func=cmd_analyze_tlx)

    p = asub.add_parser("ranks", help="rank sums from a ranking CSV")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_analyze_ranks)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error[usage] {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error[usage] {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, trackio.TrackFormatError, trackio.ReportFormatError,
            FileNotFoundError, ValueError) as exc:
        print(f"error[data] {exc}", file=sys.stderr)
        return EXIT_DATA
    except KeyboardInterrupt:
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - final CLI guard
        print(f"error[runtime] {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
