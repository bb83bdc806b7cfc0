"""Partitioning of event streams into 3-hour per-user sessions."""

from dataclasses import dataclass, field

from ..timeutil import DEFAULT_TZ_OFFSET_MIN, window_index
from .types import Session, UserProfile, UNKNOWN_PREFECTURE


@dataclass
class SessionizeReport:
    """Warnings collected while sessionizing (never fatal)."""

    unknown_users: set = field(default_factory=set)
    events_from_unknown_users: int = 0

    def summary(self) -> str:
        return (
            f"{len(self.unknown_users)} unknown user(s), "
            f"{self.events_from_unknown_users} event(s) assigned default profile"
        )


def sessionize(samples=(), reports=(), queries=(), profiles=None, report=None):
    """Bundle sensor samples, queries and mood reports into sessions.

    Windows are 3 hours wide and aligned to each user's local midnight; an
    event at exactly a boundary belongs to the window it starts. Sessions
    with no events are never materialized. Events of users missing from
    ``profiles`` get prefecture "unknown" and the default timezone, counted
    in the report. When a window holds several mood reports the latest one
    wins.

    Returns the sessions sorted by (user_id, window_start).
    """
    profiles = profiles or {}
    report = report if report is not None else SessionizeReport()
    sessions: dict[tuple, Session] = {}

    def profile_of(user_id: str) -> UserProfile:
        prof = profiles.get(user_id)
        if prof is None:
            report.unknown_users.add(user_id)
            report.events_from_unknown_users += 1
            return UserProfile(user_id, UNKNOWN_PREFECTURE, DEFAULT_TZ_OFFSET_MIN)
        return prof

    def session_for(user_id: str, ts_ms: int) -> Session:
        prof = profile_of(user_id)
        widx = window_index(ts_ms, prof.tz_offset_min)
        key = (user_id, widx)
        sess = sessions.get(key)
        if sess is None:
            sess = Session(
                user_id=user_id,
                window_idx=widx,
                tz_offset_min=prof.tz_offset_min,
                prefecture=prof.prefecture,
            )
            sessions[key] = sess
        return sess

    for s in samples:
        sess = session_for(s.user_id, s.ts_ms)
        sess.samples.setdefault(s.sensor, []).append((s.ts_ms, s.values))

    for q in queries:
        sess = session_for(q.user_id, q.ts_ms)
        sess.queries.append((q.ts_ms, q.raw_query))

    for r in reports:
        sess = session_for(r.user_id, r.ts_ms)
        # latest report in the window wins; on equal timestamps the one
        # seen later in the file wins
        if sess.self_report is None or r.ts_ms >= sess.self_report[0]:
            sess.self_report = (r.ts_ms, r.likert)

    out = sorted(sessions.values(), key=lambda s: (s.user_id, s.window_idx))
    for sess in out:
        for events in sess.samples.values():
            events.sort(key=lambda e: e[0])
        sess.queries.sort(key=lambda e: e[0])
    return out, report
