"""Domain records for the ingestion layer.

Sensor payload layouts (the ``v`` array in the JSONL log):

    accelerometer  [x, y, z]                      m/s^2
    gyroscope      [x, y, z]                      rad/s
    barometer      [pressure_hpa]
    battery        [level, charging]              level 0..100, charging 0/1
    location       [lat, lon]                     degrees
    network        [type]                         one of NETWORK_TYPES
    weather        [type, temp_c, humidity, pressure_hpa,
                    wind_speed, wind_deg, cloud_pct, rain_1h, snow_1h]
    screen         [event]                        one of SCREEN_EVENTS
"""

from dataclasses import dataclass, field
from math import isfinite

from ..errors import ValidationError
from ..timeutil import format_window_start, window_start_utc_ms

SENSORS = (
    "accelerometer",
    "gyroscope",
    "barometer",
    "battery",
    "location",
    "network",
    "weather",
    "screen",
)

NETWORK_TYPES = ("wifi", "mobile", "none", "other")
SCREEN_EVENTS = ("on", "off", "unlock", "interaction")
WEATHER_TYPES = (
    "clear",
    "clouds",
    "rain",
    "drizzle",
    "thunderstorm",
    "snow",
    "mist",
    "fog",
    "haze",
    "other",
)

MOOD_CLASSES = (-1, 0, 1)

PREFECTURES = (
    "hokkaido", "aomori", "iwate", "miyagi", "akita", "yamagata", "fukushima",
    "ibaraki", "tochigi", "gunma", "saitama", "chiba", "tokyo", "kanagawa",
    "niigata", "toyama", "ishikawa", "fukui", "yamanashi", "nagano", "gifu",
    "shizuoka", "aichi", "mie", "shiga", "kyoto", "osaka", "hyogo", "nara",
    "wakayama", "tottori", "shimane", "okayama", "hiroshima", "yamaguchi",
    "tokushima", "kagawa", "ehime", "kochi", "fukuoka", "saga", "nagasaki",
    "kumamoto", "oita", "miyazaki", "kagoshima", "okinawa",
)
UNKNOWN_PREFECTURE = "unknown"


def _require_finite_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and isfinite(x)


def validate_payload(sensor: str, values: list) -> None:
    """Raise ValidationError unless ``values`` matches the sensor's layout."""
    if sensor == "accelerometer" or sensor == "gyroscope":
        if len(values) != 3 or not all(_require_finite_number(v) for v in values):
            raise ValidationError(f"{sensor} payload must be 3 finite numbers")
    elif sensor == "barometer":
        if len(values) != 1 or not _require_finite_number(values[0]):
            raise ValidationError("barometer payload must be 1 finite number")
    elif sensor == "battery":
        if len(values) != 2 or not all(_require_finite_number(v) for v in values):
            raise ValidationError("battery payload must be [level, charging]")
        level, charging = values
        if not 0 <= level <= 100:
            raise ValidationError(f"battery level out of range: {level}")
        if charging not in (0, 1):
            raise ValidationError(f"battery charging flag must be 0/1: {charging}")
    elif sensor == "location":
        if len(values) != 2 or not all(_require_finite_number(v) for v in values):
            raise ValidationError("location payload must be [lat, lon]")
        lat, lon = values
        if not -90.0 <= lat <= 90.0:
            raise ValidationError(f"latitude out of range: {lat}")
        if not -180.0 <= lon <= 180.0:
            raise ValidationError(f"longitude out of range: {lon}")
    elif sensor == "network":
        if len(values) != 1 or values[0] not in NETWORK_TYPES:
            raise ValidationError(f"network payload must be one of {NETWORK_TYPES}")
    elif sensor == "weather":
        if len(values) != 9 or values[0] not in WEATHER_TYPES:
            raise ValidationError("weather payload must be [type + 8 numbers]")
        if not all(_require_finite_number(v) for v in values[1:]):
            raise ValidationError("weather channels must be finite numbers")
    elif sensor == "screen":
        if len(values) != 1 or values[0] not in SCREEN_EVENTS:
            raise ValidationError(f"screen payload must be one of {SCREEN_EVENTS}")
    else:
        raise ValidationError(f"unknown sensor: {sensor!r}")


@dataclass(slots=True)
class SensorSample:
    user_id: str
    ts_ms: int
    sensor: str
    values: list

    def validate(self) -> "SensorSample":
        if not self.user_id:
            raise ValidationError("empty user id")
        if not isinstance(self.ts_ms, int):
            raise ValidationError(f"timestamp must be integer ms: {self.ts_ms!r}")
        validate_payload(self.sensor, self.values)
        return self


@dataclass(slots=True)
class MoodReport:
    user_id: str
    ts_ms: int
    likert: int

    def validate(self) -> "MoodReport":
        if self.likert not in (1, 2, 3, 4, 5, 6, 7):
            raise ValidationError(f"likert out of range 1..7: {self.likert}")
        return self


@dataclass(slots=True)
class QueryEvent:
    user_id: str
    ts_ms: int
    raw_query: str

    def validate(self) -> "QueryEvent":
        if not self.raw_query.strip():
            raise ValidationError("empty query text")
        return self


@dataclass(slots=True)
class UserProfile:
    user_id: str
    prefecture: str = UNKNOWN_PREFECTURE
    tz_offset_min: int = 540

    def validate(self) -> "UserProfile":
        if self.prefecture != UNKNOWN_PREFECTURE and self.prefecture not in PREFECTURES:
            raise ValidationError(f"unknown prefecture: {self.prefecture!r}")
        return self


@dataclass(slots=True)
class CaseCountRecord:
    date: str  # ISO date
    scope: str  # "nation" or a prefecture
    new_cases: int

    def validate(self) -> "CaseCountRecord":
        if self.new_cases < 0:
            raise ValidationError(f"negative case count: {self.new_cases}")
        if self.scope != "nation" and self.scope not in PREFECTURES:
            raise ValidationError(f"unknown scope: {self.scope!r}")
        # raises ValueError on malformed dates
        from datetime import date as _date

        _date.fromisoformat(self.date)
        return self


@dataclass(slots=True)
class Session:
    """All events of one user inside one 3-hour local window.

    Sensor samples and queries are stored as light (ts_ms, payload) tuples;
    ``self_report`` keeps the latest mood report of the window, if any.
    """

    user_id: str
    window_idx: int
    tz_offset_min: int
    prefecture: str = UNKNOWN_PREFECTURE
    samples: dict = field(default_factory=dict)  # sensor -> [(ts_ms, values)]
    queries: list = field(default_factory=list)  # [(ts_ms, raw_query)]
    self_report: tuple | None = None  # (ts_ms, likert)

    @property
    def window_start_utc_ms(self) -> int:
        return window_start_utc_ms(self.window_idx, self.tz_offset_min)

    @property
    def window_end_utc_ms(self) -> int:
        return self.window_start_utc_ms + 3 * 3600 * 1000

    @property
    def window_start_iso(self) -> str:
        return format_window_start(self.window_idx, self.tz_offset_min)

    def key(self) -> tuple:
        return (self.user_id, self.window_start_iso)

    def has_sensor_data(self) -> bool:
        return any(self.samples.values())


def map_likert(likert: int) -> int:
    """Collapse the 7-point scale onto {-1, 0, +1}: 1-3 -> -1, 4 -> 0, 5-7 -> +1."""
    if likert not in (1, 2, 3, 4, 5, 6, 7):
        raise ValidationError(f"likert out of range 1..7: {likert}")
    if likert <= 3:
        return -1
    if likert == 4:
        return 0
    return 1
