"""Per-sensor feature extraction over one 3-hour session.

Conventions shared by every extractor:

* moments use the population (n) denominator;
* skewness and excess kurtosis of a constant signal are 0;
* correlation against a zero-variance axis is 0;
* an extractor receives the session's (ts_ms, payload) tuples for its sensor
  and returns a fixed-length float block; with no samples the block is NaN.

Durations are attributed sample-and-hold: a sampled state lasts until the
next sample of the same sensor, the last one until the window end.
"""

import math

import numpy as np

from ..corpus.types import NETWORK_TYPES, WEATHER_TYPES

MS_PER_MIN = 60_000.0
EARTH_RADIUS_M = 6_371_000.0
MOVING_SPEED_MS = 1.0
GRID_DECIMALS = 3


def _stats5(values: np.ndarray) -> list:
    """mean, population std, median, min, max."""
    if values.size == 0:
        return [math.nan] * 5
    return [
        float(np.mean(values)),
        float(np.std(values)),
        float(np.median(values)),
        float(np.min(values)),
        float(np.max(values)),
    ]


def extract_imu(samples) -> list:
    """23 features of a 3-axis inertial stream (accelerometer or gyroscope)."""
    if not samples:
        return [math.nan] * 23
    xyz = np.asarray([v for _, v in samples], dtype=np.float64)
    mag = np.sqrt(np.sum(xyz * xyz, axis=1))
    out = _stats5(mag)

    means = xyz.mean(axis=0)
    centered = xyz - means
    variances = np.mean(centered**2, axis=0)
    out.extend(float(m) for m in means)
    out.extend(float(v) for v in variances)

    for a in range(3):
        if variances[a] == 0.0:
            out.append(0.0)
        else:
            m3 = float(np.mean(centered[:, a] ** 3))
            out.append(m3 / variances[a] ** 1.5)
    for a in range(3):
        if variances[a] == 0.0:
            out.append(0.0)
        else:
            m4 = float(np.mean(centered[:, a] ** 4))
            out.append(m4 / variances[a] ** 2 - 3.0)

    covs = {}
    for i, j in ((0, 1), (1, 2), (2, 0)):
        covs[(i, j)] = float(np.mean(centered[:, i] * centered[:, j]))
    for i, j in ((0, 1), (1, 2), (2, 0)):
        if variances[i] == 0.0 or variances[j] == 0.0:
            out.append(0.0)
        else:
            out.append(covs[(i, j)] / math.sqrt(variances[i] * variances[j]))
    for i, j in ((0, 1), (1, 2), (2, 0)):
        out.append(covs[(i, j)])
    return out


def extract_barometer(samples) -> list:
    if not samples:
        return [math.nan] * 5
    pressure = np.asarray([v[0] for _, v in samples], dtype=np.float64)
    return _stats5(pressure)


def extract_battery(samples, window_start_ms: int, window_end_ms: int) -> list:
    """Level stats, number of charge starts, and minutes spent charging."""
    if not samples:
        return [math.nan] * 7
    levels = np.asarray([v[0] for _, v in samples], dtype=np.float64)
    out = _stats5(levels)

    episodes = 0
    prev_flag = None
    for _, v in samples:
        flag = int(v[1])
        if flag == 1 and prev_flag == 0:
            episodes += 1
        prev_flag = flag

    charging_ms = 0.0
    for k, (ts, v) in enumerate(samples):
        if int(v[1]) != 1:
            continue
        until = samples[k + 1][0] if k + 1 < len(samples) else window_end_ms
        charging_ms += max(0, min(until, window_end_ms) - ts)
    out.append(float(episodes))
    out.append(charging_ms / MS_PER_MIN)
    return out


def _haversine_m(lat1, lon1, lat2, lon2) -> float:
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = p2 - p1
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


def _grid_cell(lat: float, lon: float) -> tuple:
    return (round(lat, GRID_DECIMALS), round(lon, GRID_DECIMALS))


def extract_location(samples, window_start_ms: int, window_end_ms: int) -> list:
    """Mobility features over grid-snapped stay clusters (~110 m cells).

    Dwell time of a fix runs until the next fix; the last fix dwells until
    the window end. Entropy is natural-log Shannon entropy of the cluster
    dwell shares.
    """
    if not samples:
        return [math.nan] * 12
    fixes = [(ts, v[0], v[1]) for ts, v in samples]
    cells = [_grid_cell(lat, lon) for _, lat, lon in fixes]

    dwell: dict = {}
    for k, (ts, _, _) in enumerate(fixes):
        until = fixes[k + 1][0] if k + 1 < len(fixes) else window_end_ms
        dwell[cells[k]] = dwell.get(cells[k], 0.0) + max(0, until - ts)
    total_dwell = sum(dwell.values())

    if total_dwell > 0:
        shares = [d / total_dwell for d in dwell.values() if d > 0]
        entropy = -sum(s * math.log(s) for s in shares)
        top_share = max(d for d in dwell.values()) / total_dwell
        active_clusters = len(shares)
    else:
        entropy = 0.0
        top_share = 1.0
        active_clusters = 1
    entropy_norm = entropy / math.log(active_clusters) if active_clusters > 1 else 0.0

    transitions = sum(1 for a, b in zip(cells, cells[1:]) if a != b)
    unique_clusters = len(set(cells))

    total_distance = 0.0
    moving_ms = 0.0
    segment_ms = 0.0
    speeds = []
    for (t0, la0, lo0), (t1, la1, lo1) in zip(fixes, fixes[1:]):
        d = _haversine_m(la0, lo0, la1, lo1)
        total_distance += d
        dt = t1 - t0
        if dt > 0:
            speed = d / (dt / 1000.0)
            speeds.append(speed)
            segment_ms += dt
            if speed > MOVING_SPEED_MS:
                moving_ms += dt
    moving_pct = moving_ms / segment_ms if segment_ms > 0 else 0.0

    lat_c = sum(f[1] for f in fixes) / len(fixes)
    lon_c = sum(f[2] for f in fixes) / len(fixes)
    sq = [_haversine_m(la, lo, lat_c, lon_c) ** 2 for _, la, lo in fixes]
    radius = math.sqrt(sum(sq) / len(sq))

    max_from_first = max(_haversine_m(fixes[0][1], fixes[0][2], la, lo) for _, la, lo in fixes)

    if speeds:
        sp = np.asarray(speeds)
        speed_mean = float(sp.mean())
        speed_max = float(sp.max())
        speed_std = float(sp.std())
    else:
        speed_mean = speed_max = speed_std = math.nan

    return [
        entropy,
        entropy_norm,
        float(transitions),
        moving_pct,
        total_distance,
        radius,
        float(unique_clusters),
        top_share,
        speed_mean,
        speed_max,
        speed_std,
        max_from_first,
    ]


def extract_network(samples, window_start_ms: int, window_end_ms: int) -> list:
    """Connection counts, dominant type, and per-type time shares.

    Time shares cover the span from the first event to the window end.
    """
    if not samples:
        return [math.nan] * 5
    types = [v[0] for _, v in samples]
    wifi_est = float(sum(1 for t in types if t == "wifi"))
    mobile_est = float(sum(1 for t in types if t == "mobile"))

    counts = [0] * len(NETWORK_TYPES)
    for t in types:
        counts[NETWORK_TYPES.index(t)] += 1
    most_frequent = counts.index(max(counts))  # tie -> lowest enum index

    dwell = [0.0] * len(NETWORK_TYPES)
    for k, (ts, v) in enumerate(samples):
        until = samples[k + 1][0] if k + 1 < len(samples) else window_end_ms
        dwell[NETWORK_TYPES.index(v[0])] += max(0, until - ts)
    covered = sum(dwell)
    wifi_rate = dwell[0] / covered if covered > 0 else 0.0
    mobile_rate = dwell[1] / covered if covered > 0 else 0.0
    return [wifi_est, mobile_est, float(most_frequent), wifi_rate, mobile_rate]


def extract_weather(samples) -> list:
    """Modal-type one-hot (10) plus 5 stats for each of 8 numeric channels."""
    if not samples:
        return [math.nan] * 50
    counts = [0] * len(WEATHER_TYPES)
    for _, v in samples:
        counts[WEATHER_TYPES.index(v[0])] += 1
    modal = counts.index(max(counts))  # tie -> lowest enum index
    out = [1.0 if i == modal else 0.0 for i in range(len(WEATHER_TYPES))]

    channels = np.asarray([v[1:] for _, v in samples], dtype=np.float64)
    for c in range(8):
        out.extend(_stats5(channels[:, c]))
    return out


def extract_screen(events, window_start_ms: int, window_end_ms: int) -> list:
    """Interaction rates plus on/off episode statistics, clipped to the window."""
    if not events:
        return [math.nan] * 11
    window_min = (window_end_ms - window_start_ms) / MS_PER_MIN
    kinds = [v[0] for _, v in events]
    unlocks = sum(1 for k in kinds if k == "unlock")
    interactions = sum(1 for k in kinds if k == "interaction")
    on_count = sum(1 for k in kinds if k == "on")
    off_count = sum(1 for k in kinds if k == "off")

    # state timeline from on/off events only; an episode is a maximal run of
    # one state, holding until the next state change or the window end
    state_events = [(ts, v[0]) for ts, v in events if v[0] in ("on", "off")]
    on_episodes = []  # minutes
    off_episodes = []
    k = 0
    while k < len(state_events):
        kind = state_events[k][1]
        start = state_events[k][0]
        j = k
        while j + 1 < len(state_events) and state_events[j + 1][1] == kind:
            j += 1
        until = state_events[j + 1][0] if j + 1 < len(state_events) else window_end_ms
        minutes = max(0, min(until, window_end_ms) - start) / MS_PER_MIN
        (on_episodes if kind == "on" else off_episodes).append(minutes)
        k = j + 1

    on_minutes = sum(on_episodes)
    off_minutes = sum(off_episodes)
    if on_episodes:
        ep = np.asarray(on_episodes)
        ep_mean, ep_max, ep_std = float(ep.mean()), float(ep.max()), float(ep.std())
    else:
        ep_mean = ep_max = ep_std = 0.0
    longest_off = max(off_episodes) if off_episodes else 0.0

    return [
        unlocks / window_min,
        interactions / window_min,
        float(on_count),
        float(off_count),
        on_minutes,
        off_minutes,
        ep_mean,
        ep_max,
        ep_std,
        float(len(on_episodes)),
        longest_off,
    ]
