"""Readers and writers for the corpus file formats.

Formats (all timestamps are UTC epoch milliseconds unless stated):

    sensor log    JSONL   {"user": str, "ts": int, "sensor": str, "v": [...]}
    query log     CSV     user,ts_ms,query
    mood reports  CSV     user,ts_ms,likert
    profiles      CSV     user,prefecture,tz_offset_min
    case counts   CSV     date,scope,new_cases      (ISO dates)
    holidays      CSV     date,label

Event logs (sensor, query, mood) tolerate malformed lines up to a
configurable ratio; reference tables (profiles, cases, holidays) are strict
because a single bad row silently skews every downstream join.
"""

import csv
import json
from dataclasses import dataclass, field

from ..errors import ParseError, ValidationError
from .types import (
    CaseCountRecord,
    MoodReport,
    QueryEvent,
    SensorSample,
    UserProfile,
)

DEFAULT_BAD_LINE_RATIO = 0.01
_MAX_REPORTED_LINES = 50


@dataclass
class ParseStats:
    """Counts accumulated while streaming one file."""

    path: str = ""
    total_lines: int = 0
    bad_lines: int = 0
    bad_line_numbers: list = field(default_factory=list)
    first_errors: list = field(default_factory=list)

    def record_bad(self, lineno: int, message: str) -> None:
        self.bad_lines += 1
        if len(self.bad_line_numbers) < _MAX_REPORTED_LINES:
            self.bad_line_numbers.append(lineno)
            self.first_errors.append(f"line {lineno}: {message}")

    def check_ratio(self, max_bad_ratio: float) -> None:
        if self.total_lines == 0:
            return
        ratio = self.bad_lines / self.total_lines
        if ratio > max_bad_ratio:
            detail = "; ".join(self.first_errors[:5])
            raise ParseError(
                f"{self.path}: {self.bad_lines}/{self.total_lines} lines invalid "
                f"(ratio {ratio:.4f} > {max_bad_ratio}); first errors: {detail}",
                bad_lines=self.bad_line_numbers,
            )


def parse_sensor_log(path, max_bad_ratio=DEFAULT_BAD_LINE_RATIO, stats=None):
    """Stream validated SensorSamples from a JSONL file in file order.

    Malformed lines are counted and skipped; once the stream is exhausted a
    ParseError is raised if more than ``max_bad_ratio`` of the lines were bad.
    An unreadable file raises OSError immediately.
    """
    stats = stats if stats is not None else ParseStats()
    stats.path = str(path)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            stats.total_lines += 1
            try:
                obj = json.loads(line)
                sample = SensorSample(
                    user_id=str(obj["user"]),
                    ts_ms=int(obj["ts"]),
                    sensor=obj["sensor"],
                    values=obj["v"],
                ).validate()
            except (ValidationError, ValueError, KeyError, TypeError) as exc:
                stats.record_bad(lineno, str(exc))
                continue
            yield sample
    stats.check_ratio(max_bad_ratio)


def _csv_rows(path, expected_header):
    """Yield (lineno, row) for a CSV file, skipping a matching header row."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row:
                continue
            if lineno == 1 and [c.strip().lower() for c in row] == expected_header:
                continue
            yield lineno, row


def parse_query_log(path, max_bad_ratio=DEFAULT_BAD_LINE_RATIO, stats=None):
    """Stream validated QueryEvents from a ``user,ts_ms,query`` CSV."""
    stats = stats if stats is not None else ParseStats()
    stats.path = str(path)
    for lineno, row in _csv_rows(path, ["user", "ts_ms", "query"]):
        stats.total_lines += 1
        try:
            if len(row) != 3:
                raise ValidationError(f"expected 3 fields, got {len(row)}")
            event = QueryEvent(row[0], int(row[1]), row[2]).validate()
        except (ValidationError, ValueError) as exc:
            stats.record_bad(lineno, str(exc))
            continue
        yield event
    stats.check_ratio(max_bad_ratio)


def parse_mood_reports(path, max_bad_ratio=DEFAULT_BAD_LINE_RATIO, stats=None):
    """Stream validated MoodReports from a ``user,ts_ms,likert`` CSV."""
    stats = stats if stats is not None else ParseStats()
    stats.path = str(path)
    for lineno, row in _csv_rows(path, ["user", "ts_ms", "likert"]):
        stats.total_lines += 1
        try:
            if len(row) != 3:
                raise ValidationError(f"expected 3 fields, got {len(row)}")
            report = MoodReport(row[0], int(row[1]), int(row[2])).validate()
        except (ValidationError, ValueError) as exc:
            stats.record_bad(lineno, str(exc))
            continue
        yield report
    stats.check_ratio(max_bad_ratio)


def parse_profiles(path):
    """Read all user profiles; any malformed row is fatal."""
    profiles = {}
    for lineno, row in _csv_rows(path, ["user", "prefecture", "tz_offset_min"]):
        try:
            if len(row) != 3:
                raise ValidationError(f"expected 3 fields, got {len(row)}")
            profile = UserProfile(row[0], row[1], int(row[2])).validate()
        except (ValidationError, ValueError) as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}", [lineno]) from exc
        if profile.user_id in profiles:
            raise ParseError(f"{path}: line {lineno}: duplicate user {profile.user_id!r}", [lineno])
        profiles[profile.user_id] = profile
    return profiles


def parse_case_counts(path):
    """Read daily case counts, sorted by date; duplicates and negatives are fatal."""
    records = []
    seen = set()
    for lineno, row in _csv_rows(path, ["date", "scope", "new_cases"]):
        try:
            if len(row) != 3:
                raise ValidationError(f"expected 3 fields, got {len(row)}")
            rec = CaseCountRecord(row[0], row[1], int(row[2])).validate()
        except (ValidationError, ValueError) as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}", [lineno]) from exc
        key = (rec.date, rec.scope)
        if key in seen:
            raise ParseError(f"{path}: line {lineno}: duplicate record for {key}", [lineno])
        seen.add(key)
        records.append(rec)
    records.sort(key=lambda r: (r.date, r.scope))
    return records


def parse_holidays(path):
    """Read the holiday calendar as {iso_date: label}."""
    holidays = {}
    for lineno, row in _csv_rows(path, ["date", "label"]):
        if len(row) != 2:
            raise ParseError(f"{path}: line {lineno}: expected 2 fields", [lineno])
        try:
            from datetime import date as _date

            _date.fromisoformat(row[0])
        except ValueError as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}", [lineno]) from exc
        holidays[row[0]] = row[1]
    return holidays


# ---------------------------------------------------------------------------
# writers (used by the simulator and for round-trip checks)


def write_sensor_log(path, samples) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            fh.write(
                json.dumps(
                    {"user": s.user_id, "ts": s.ts_ms, "sensor": s.sensor, "v": s.values},
                    separators=(",", ":"),
                )
            )
            fh.write("\n")
            n += 1
    return n


def _write_csv(path, header, rows) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            n += 1
    return n


def write_query_log(path, events) -> int:
    return _write_csv(path, ["user", "ts_ms", "query"], ((e.user_id, e.ts_ms, e.raw_query) for e in events))


def write_mood_reports(path, reports) -> int:
    return _write_csv(path, ["user", "ts_ms", "likert"], ((r.user_id, r.ts_ms, r.likert) for r in reports))


def write_profiles(path, profiles) -> int:
    return _write_csv(
        path,
        ["user", "prefecture", "tz_offset_min"],
        ((p.user_id, p.prefecture, p.tz_offset_min) for p in profiles),
    )


def write_case_counts(path, records) -> int:
    return _write_csv(path, ["date", "scope", "new_cases"], ((r.date, r.scope, r.new_cases) for r in records))


def write_holidays(path, holidays: dict) -> int:
    return _write_csv(path, ["date", "label"], sorted(holidays.items()))
