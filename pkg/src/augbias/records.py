"""Core data containers: prediction logs and annotation sets.

A prediction log stores per-sample model predictions indexed by
(augmentation strength, training seed).  Strength is expressed in percent,
matching the crop-scale lower bound of random resized crop: *smaller* values
mean *stronger* augmentation, so the strongest setting of a sweep is the
minimum strength present in the grid.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputConsistencyError


@dataclass(frozen=True)
class PredictionRecord:
    run: str
    strength: float
    seed: int
    sample: str
    pred: str


class PredictionLog:
    """Validated collection of prediction records.

    Every (strength, seed, sample) triple may appear at most once.
    """

    def __init__(self, records):
        records = tuple(records)
        seen = set()
        for rec in records:
            key = (rec.strength, rec.seed, rec.sample)
            if key in seen:
                raise InputConsistencyError(
                    f"duplicate prediction for strength={rec.strength} "
                    f"seed={rec.seed} sample={rec.sample!r}"
                )
            seen.add(key)
            if not 0 < rec.strength <= 100:
                raise InputConsistencyError(
                    f"strength {rec.strength} outside (0, 100]"
                )
        self.records = records
        self.strengths = tuple(sorted({r.strength for r in records}))
        self._by_point: dict[tuple[float, int], dict[str, str]] = {}
        for rec in records:
            self._by_point.setdefault((rec.strength, rec.seed), {})[rec.sample] = rec.pred

    def __len__(self):
        return len(self.records)

    @property
    def strongest(self) -> float:
        """Smallest strength in the grid (strongest augmentation)."""
        if not self.strengths:
            raise InputConsistencyError("empty prediction log has no strengths")
        return self.strengths[0]

    def seeds(self, strength: float) -> tuple[int, ...]:
        return tuple(sorted(s for (st, s) in self._by_point if st == strength))

    def predictions(self, strength: float, seed: int) -> dict[str, str]:
        """Map sample -> predicted class for one (strength, seed) point."""
        try:
            return self._by_point[(strength, seed)]
        except KeyError:
            raise InputConsistencyError(
                f"no predictions at strength={strength} seed={seed}"
            ) from None


@dataclass
class AnnotationSet:
    """Original single labels plus optional multi-label sets per sample.

    ``multilabel`` maps sample ids to (possibly empty) sets of plausible
    labels; an empty set means annotators found no valid label.
    ``train_counts`` optionally records training-set size per class.
    """

    original: dict[str, str]
    multilabel: dict[str, frozenset[str]] | None = None
    train_counts: dict[str, int] | None = None
    classes: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        derived = set(self.original.values())
        if self.multilabel is not None:
            for sample, labels in self.multilabel.items():
                if sample not in self.original:
                    raise InputConsistencyError(
                        f"multilabel sample {sample!r} missing from original labels"
                    )
                derived.update(labels)
        if self.train_counts is not None:
            derived.update(self.train_counts)
        if self.classes:
            extra = derived - self.classes
            if extra:
                raise InputConsistencyError(
                    f"labels outside declared class universe: {sorted(extra)}"
                )
        else:
            self.classes = frozenset(derived)

    def label_set(self, sample: str) -> frozenset[str]:
        if self.multilabel is None:
            raise InputConsistencyError("annotation set has no multi-label map")
        try:
            return self.multilabel[sample]
        except KeyError:
            raise InputConsistencyError(
                f"sample {sample!r} missing from multi-label map"
            ) from None

    def check_log(self, log: PredictionLog) -> None:
        """Verify a prediction log only references known samples and classes."""
        for rec in log.records:
            if rec.sample not in self.original:
                raise InputConsistencyError(
                    f"prediction references unknown sample {rec.sample!r}"
                )
            if rec.pred not in self.classes:
                raise InputConsistencyError(
                    f"prediction references unknown class {rec.pred!r}"
                )
