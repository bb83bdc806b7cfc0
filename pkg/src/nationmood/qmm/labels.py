"""Binary polarity labels for query-model training.

A session's polarity comes from its self-report when one exists (mapped via
the Likert collapse), otherwise from the sensor model's prediction when
supplementation is on. Neutral outcomes from either source leave the
session unlabeled; training sets are then balanced by down-sampling the
majority polarity.
"""

from dataclasses import dataclass

import numpy as np

from ..corpus.types import map_likert
from ..errors import ValidationError

SELF_REPORT = "self_report"
SMM_PREDICTED = "smm_predicted"


@dataclass(frozen=True)
class SessionLabel:
    session_key: tuple  # (user_id, window_start_iso)
    polarity: int  # -1 or +1; neutral sessions carry no label
    source: str  # self_report | smm_predicted


def label_sessions(sessions, smm_model=None, use_smm: bool = False,
                   feature_lookup=None) -> list:
    """Polarity labels for the given sessions.

    ``feature_lookup`` maps a session key to its imputed feature vector and
    is required only when ``use_smm`` is set; sessions with neither a
    self-report nor sensor features are skipped.
    """
    if use_smm and (smm_model is None or feature_lookup is None):
        raise ValidationError("use_smm needs both the model and a feature lookup")

    labels = []
    pending = []  # (position, key) of sessions awaiting an SMM prediction
    rows = []
    for sess in sessions:
        key = sess.key()
        if sess.self_report is not None:
            polarity = map_likert(sess.self_report[1])
            if polarity != 0:
                labels.append(SessionLabel(key, polarity, SELF_REPORT))
            continue
        if not use_smm:
            continue
        vec = feature_lookup.get(key)
        if vec is None or not sess.has_sensor_data():
            continue
        pending.append((len(labels) + len(pending), key))
        rows.append(vec)

    if rows:
        preds = smm_model.predict(np.vstack(rows))
        for (_, key), pred in zip(pending, preds):
            if pred != 0:
                labels.append(SessionLabel(key, int(pred), SMM_PREDICTED))
    return labels


def balance(labels, seed: int) -> list:
    """Down-sample the majority polarity to the minority count (seeded)."""
    pos = [l for l in labels if l.polarity == 1]
    neg = [l for l in labels if l.polarity == -1]
    if not pos or not neg:
        raise ValidationError("balancing needs both polarities present")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    if len(pos) > len(neg):
        keep = rng.choice(len(pos), size=len(neg), replace=False)
        pos = [pos[i] for i in sorted(keep)]
    elif len(neg) > len(pos):
        keep = rng.choice(len(neg), size=len(pos), replace=False)
        neg = [neg[i] for i in sorted(keep)]
    return pos + neg
