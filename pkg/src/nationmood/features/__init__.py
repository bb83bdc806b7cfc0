from .registry import FeatureRegistry, GROUP_COUNTS, build_registry
from .extract import (
    extract_barometer,
    extract_battery,
    extract_imu,
    extract_location,
    extract_network,
    extract_screen,
    extract_weather,
)
from .vectors import (
    FeatureVector,
    assemble,
    compute_medians,
    feature_matrix,
    impute,
    read_features_csv,
    write_features_csv,
)

__all__ = [
    "FeatureRegistry",
    "FeatureVector",
    "GROUP_COUNTS",
    "assemble",
    "build_registry",
    "compute_medians",
    "extract_barometer",
    "extract_battery",
    "extract_imu",
    "extract_location",
    "extract_network",
    "extract_screen",
    "extract_weather",
    "feature_matrix",
    "impute",
    "read_features_csv",
    "write_features_csv",
]
