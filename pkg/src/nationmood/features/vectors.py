"""Assembly of per-session feature vectors and the feature-file formats."""

import csv
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .extract import (
    extract_barometer,
    extract_battery,
    extract_imu,
    extract_location,
    extract_network,
    extract_screen,
    extract_weather,
)
from .registry import FeatureRegistry, GROUP_COUNTS

N_GROUPS = len(GROUP_COUNTS)


@dataclass(slots=True)
class FeatureVector:
    user_id: str
    window_start: str  # ISO-8601 with offset
    values: np.ndarray  # length 136, NaN allowed pre-imputation
    coverage: float  # fraction of sensor channels with any data


def assemble(session, registry: FeatureRegistry) -> FeatureVector:
    """Concatenate the group blocks in registry order for one session."""
    ws, we = session.window_start_utc_ms, session.window_end_utc_ms
    s = session.samples
    blocks = [
        extract_imu(s.get("accelerometer", ())),
        extract_imu(s.get("gyroscope", ())),
        extract_barometer(s.get("barometer", ())),
        extract_battery(s.get("battery", ()), ws, we),
        extract_location(s.get("location", ()), ws, we),
        extract_network(s.get("network", ()), ws, we),
        extract_weather(s.get("weather", ())),
        extract_screen(s.get("screen", ()), ws, we),
    ]
    values = np.asarray([v for block in blocks for v in block], dtype=np.float64)
    if values.shape[0] != len(registry):
        raise ValidationError(f"assembled {values.shape[0]} features, registry wants {len(registry)}")
    covered = sum(1 for g in GROUP_COUNTS if s.get(g))
    return FeatureVector(
        user_id=session.user_id,
        window_start=session.window_start_iso,
        values=values,
        coverage=covered / N_GROUPS,
    )


def feature_matrix(vectors) -> np.ndarray:
    return np.vstack([fv.values for fv in vectors])


def compute_medians(matrix: np.ndarray) -> np.ndarray:
    """Per-feature training medians; features that are all-NaN impute to 0."""
    with np.errstate(all="ignore"):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", category=RuntimeWarning)
            med = np.nanmedian(matrix, axis=0)
    return np.where(np.isnan(med), 0.0, med)


def impute(matrix: np.ndarray, medians: np.ndarray) -> np.ndarray:
    """Replace NaNs with the training medians; finite values pass through."""
    out = np.array(matrix, dtype=np.float64, copy=True)
    mask = np.isnan(out)
    out[mask] = np.broadcast_to(medians, out.shape)[mask]
    return out


# ---------------------------------------------------------------------------
# feature CSV: user,window_start,coverage,<registry names...>


def _fmt(x: float) -> str:
    return "%.17g" % x


def write_features_csv(path, vectors, registry: FeatureRegistry) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "window_start", "coverage"] + list(registry.names))
        for fv in vectors:
            writer.writerow(
                [fv.user_id, fv.window_start, _fmt(fv.coverage)] + [_fmt(v) for v in fv.values]
            )
            n += 1
    return n


def read_features_csv(path, registry: FeatureRegistry):
    """Load a feature file back into FeatureVectors, validating the header."""
    vectors = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = ["user", "window_start", "coverage"] + list(registry.names)
        if header != expected:
            raise ValidationError(f"{path}: feature columns do not match the registry")
        for row in reader:
            if not row:
                continue
            values = np.asarray([float(x) for x in row[3:]], dtype=np.float64)
            vectors.append(
                FeatureVector(
                    user_id=row[0],
                    window_start=row[1],
                    values=values,
                    coverage=float(row[2]),
                )
            )
    return vectors
