from .types import (
    CaseCountRecord,
    MOOD_CLASSES,
    MoodReport,
    NETWORK_TYPES,
    PREFECTURES,
    QueryEvent,
    SCREEN_EVENTS,
    SENSORS,
    SensorSample,
    Session,
    UNKNOWN_PREFECTURE,
    UserProfile,
    WEATHER_TYPES,
    map_likert,
)
from .parsers import (
    ParseStats,
    parse_case_counts,
    parse_holidays,
    parse_mood_reports,
    parse_profiles,
    parse_query_log,
    parse_sensor_log,
    write_case_counts,
    write_holidays,
    write_mood_reports,
    write_profiles,
    write_query_log,
    write_sensor_log,
)
from .sessions import SessionizeReport, sessionize

__all__ = [
    "CaseCountRecord",
    "MOOD_CLASSES",
    "MoodReport",
    "NETWORK_TYPES",
    "ParseStats",
    "PREFECTURES",
    "QueryEvent",
    "SCREEN_EVENTS",
    "SENSORS",
    "SensorSample",
    "Session",
    "SessionizeReport",
    "UNKNOWN_PREFECTURE",
    "UserProfile",
    "WEATHER_TYPES",
    "map_likert",
    "parse_case_counts",
    "parse_holidays",
    "parse_mood_reports",
    "parse_profiles",
    "parse_query_log",
    "parse_sensor_log",
    "sessionize",
    "write_case_counts",
    "write_holidays",
    "write_mood_reports",
    "write_profiles",
    "write_query_log",
    "write_sensor_log",
]
