"""Canonical catalog of the 136 per-session features.

Per-group counts are a frozen contract: accelerometer 23, gyroscope 23,
barometer 5, battery 7, location 12, network 5, weather 50, screen 11.
The registry order defines the layout of every feature vector, the columns
of the feature CSV, and the fingerprint embedded in trained models.
"""

import hashlib
import json
from dataclasses import dataclass

from ..errors import FingerprintError, ValidationError

STAT_NAMES = ("mean", "std", "median", "min", "max")

GROUP_COUNTS = {
    "accelerometer": 23,
    "gyroscope": 23,
    "barometer": 5,
    "battery": 7,
    "location": 12,
    "network": 5,
    "weather": 50,
    "screen": 11,
}

WEATHER_CHANNELS = (
    "temp",
    "humidity",
    "pressure",
    "wind_speed",
    "wind_deg",
    "cloud",
    "rain_1h",
    "snow_1h",
)

LOCATION_FEATURES = (
    "entropy",
    "entropy_norm",
    "transitions",
    "moving_pct",
    "total_distance_m",
    "radius_gyration_m",
    "unique_clusters",
    "top_cluster_pct",
    "speed_mean",
    "speed_max",
    "speed_std",
    "max_dist_from_first_m",
)

NETWORK_FEATURES = (
    "wifi_established",
    "mobile_established",
    "most_frequent_type",
    "wifi_time_rate",
    "mobile_time_rate",
)

SCREEN_FEATURES = (
    "unlocks_per_min",
    "interactions_per_min",
    "on_count",
    "off_count",
    "on_minutes",
    "off_minutes",
    "on_episode_mean_min",
    "on_episode_max_min",
    "on_episode_std_min",
    "on_episode_count",
    "longest_off_episode_min",
)


def _imu_names(prefix: str) -> list:
    names = [f"{prefix}_mag_{s}" for s in STAT_NAMES]
    names += [f"{prefix}_mean_{a}" for a in "xyz"]
    names += [f"{prefix}_var_{a}" for a in "xyz"]
    names += [f"{prefix}_skew_{a}" for a in "xyz"]
    names += [f"{prefix}_kurt_{a}" for a in "xyz"]
    names += [f"{prefix}_corr_{p}" for p in ("xy", "yz", "zx")]
    names += [f"{prefix}_cov_{p}" for p in ("xy", "yz", "zx")]
    return names


def _group_names(group: str) -> list:
    if group == "accelerometer":
        return _imu_names("acc")
    if group == "gyroscope":
        return _imu_names("gyro")
    if group == "barometer":
        return [f"baro_pressure_{s}" for s in STAT_NAMES]
    if group == "battery":
        return [f"batt_level_{s}" for s in STAT_NAMES] + [
            "batt_charge_count",
            "batt_charge_minutes",
        ]
    if group == "location":
        return [f"loc_{n}" for n in LOCATION_FEATURES]
    if group == "network":
        return [f"net_{n}" for n in NETWORK_FEATURES]
    if group == "weather":
        from ..corpus.types import WEATHER_TYPES

        names = [f"weather_type_{t}" for t in WEATHER_TYPES]
        for ch in WEATHER_CHANNELS:
            names += [f"weather_{ch}_{s}" for s in STAT_NAMES]
        return names
    if group == "screen":
        return [f"screen_{n}" for n in SCREEN_FEATURES]
    raise ValidationError(f"unknown feature group: {group!r}")


@dataclass(frozen=True)
class FeatureRegistry:
    """Immutable ordered list of (name, group, index)."""

    names: tuple
    groups: tuple

    def __post_init__(self):
        if len(self.names) != len(set(self.names)):
            raise ValidationError("duplicate feature names in registry")
        counts = {}
        for g in self.groups:
            counts[g] = counts.get(g, 0) + 1
        if counts != GROUP_COUNTS:
            raise ValidationError(f"registry group counts {counts} != contract {GROUP_COUNTS}")

    def __len__(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def group_slice(self, group: str) -> slice:
        idx = [i for i, g in enumerate(self.groups) if g == group]
        return slice(idx[0], idx[-1] + 1)

    def group_of(self, index: int) -> str:
        return self.groups[index]

    def fingerprint(self) -> str:
        payload = "\n".join(f"{i},{n},{g}" for i, (n, g) in enumerate(zip(self.names, self.groups)))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def entries(self):
        return [
            {"name": n, "group": g, "index": i}
            for i, (n, g) in enumerate(zip(self.names, self.groups))
        ]

    def to_json(self, path) -> None:
        doc = {
            "version": 1,
            "count": len(self),
            "fingerprint": self.fingerprint(),
            "features": self.entries(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")

    @staticmethod
    def from_json(path) -> "FeatureRegistry":
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        feats = sorted(doc["features"], key=lambda e: e["index"])
        reg = FeatureRegistry(
            names=tuple(e["name"] for e in feats),
            groups=tuple(e["group"] for e in feats),
        )
        if doc.get("fingerprint") and doc["fingerprint"] != reg.fingerprint():
            raise FingerprintError(f"{path}: registry fingerprint mismatch")
        return reg


def build_registry() -> FeatureRegistry:
    names: list = []
    groups: list = []
    for group, count in GROUP_COUNTS.items():
        block = _group_names(group)
        assert len(block) == count, (group, len(block))
        names.extend(block)
        groups.extend([group] * count)
    return FeatureRegistry(names=tuple(names), groups=tuple(groups))
