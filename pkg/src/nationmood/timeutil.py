"""Session-window arithmetic and timestamp formatting.

All events carry UTC epoch milliseconds; each user has a fixed UTC offset in
minutes (default +540, JST). Session windows are 3 hours long and aligned to
the user's local midnight, so a window index is simply
floor(local_ms / 3h). Window starts are rendered as ISO-8601 with the user's
offset, e.g. ``2020-04-12T06:00:00+09:00``.
"""

from datetime import date, datetime, timedelta, timezone

WINDOW_HOURS = 3
WINDOW_MS = WINDOW_HOURS * 3600 * 1000
DAY_MS = 24 * 3600 * 1000
WINDOWS_PER_DAY = DAY_MS // WINDOW_MS
DEFAULT_TZ_OFFSET_MIN = 540


def local_ms(ts_ms: int, tz_offset_min: int) -> int:
    return ts_ms + tz_offset_min * 60_000


def window_index(ts_ms: int, tz_offset_min: int) -> int:
    """Index of the 3-hour local window containing a UTC instant."""
    return local_ms(ts_ms, tz_offset_min) // WINDOW_MS


def window_start_local_ms(widx: int) -> int:
    return widx * WINDOW_MS


def window_start_utc_ms(widx: int, tz_offset_min: int) -> int:
    return widx * WINDOW_MS - tz_offset_min * 60_000


def format_instant(utc_ms: int, tz_offset_min: int) -> str:
    """ISO-8601 string of a UTC instant rendered in the given fixed offset."""
    tz = timezone(timedelta(minutes=tz_offset_min))
    dt = datetime.fromtimestamp(utc_ms / 1000.0, tz=tz)
    return dt.isoformat(timespec="seconds")


def format_window_start(widx: int, tz_offset_min: int) -> str:
    return format_instant(window_start_utc_ms(widx, tz_offset_min), tz_offset_min)


def parse_instant(iso: str) -> datetime:
    dt = datetime.fromisoformat(iso)
    if dt.tzinfo is None:
        raise ValueError(f"timestamp lacks a UTC offset: {iso!r}")
    return dt


def instant_utc_ms(iso: str) -> int:
    return int(parse_instant(iso).timestamp() * 1000)


def local_date_of(iso: str) -> str:
    """Date part of an ISO timestamp in its own offset (first 10 chars)."""
    return iso[:10]


def parse_date(text: str) -> date:
    return date.fromisoformat(text)


def date_range(first: date, last: date):
    """Yield dates from first to last inclusive."""
    d = first
    one = timedelta(days=1)
    while d <= last:
        yield d
        d += one
