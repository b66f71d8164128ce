import numpy as np
import pytest

from augbias.records import AnnotationSet, PredictionLog, PredictionRecord
from augbias.simulate import canonical_scenario, sweep


def to_log(records):
    """Convert (strength, seed, sample, pred) tuples to a PredictionLog."""
    return PredictionLog(
        PredictionRecord(run=f"r-s{s:g}-{seed}", strength=s, seed=seed,
                         sample=sample, pred=pred)
        for s, seed, sample, pred in records
    )


def to_annotations(original, multilabel=None, classes=None, train_counts=None):
    return AnnotationSet(
        original=dict(original),
        multilabel=None if multilabel is None else dict(multilabel),
        train_counts=train_counts,
        classes=frozenset(classes or ()),
    )


@pytest.fixture(scope="session")
def canonical_sweep():
    """The reference simulator sweep, shared across test modules (it is the
    expensive fixture; everything downstream is cheap)."""
    config = canonical_scenario()
    log, ann = sweep(config)
    return config, log, ann


@pytest.fixture()
def rng():
    return np.random.default_rng(20260823)
