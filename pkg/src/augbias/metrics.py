"""Per-class and aggregate evaluation statistics over prediction logs.

All metrics are computed per (strength, seed) first and then aggregated
across seeds (mean and standard error).  Delta statistics compare the
seed-mean curve at the strongest strength (minimum of the grid) against
its best value over the grid; ties resolve toward the strongest strength
so fully flat curves yield a delta of zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InputConsistencyError
from .records import AnnotationSet, PredictionLog

ORIGINAL = "original"
MULTILABEL = "multilabel"
_MODES = (ORIGINAL, MULTILABEL)


@dataclass(frozen=True)
class CurvePoint:
    """Seed aggregate of one metric at one (class, strength)."""

    mean: float
    sem: float
    per_seed: tuple[float, ...]


def _aggregate(values) -> CurvePoint:
    values = tuple(float(v) for v in values)
    n = len(values)
    mean = sum(values) / n
    if n > 1:
        var = sum((v - mean) ** 2 for v in values) / (n - 1)
        sem = math.sqrt(var / n)
    else:
        sem = 0.0
    return CurvePoint(mean=mean, sem=sem, per_seed=values)


def _check_mode(mode: str) -> None:
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")


def _scorable(ann: AnnotationSet, sample: str, mode: str) -> bool:
    # Samples with empty multi-label sets cannot be scored in multilabel
    # mode and are excluded from denominators.
    if mode == MULTILABEL and not ann.label_set(sample):
        return False
    return True


def _is_correct(ann: AnnotationSet, sample: str, pred: str, mode: str) -> bool:
    if mode == ORIGINAL:
        return pred == ann.original[sample]
    return pred in ann.label_set(sample)


# Curve maps: class -> strength -> CurvePoint.
Curves = dict[str, dict[float, CurvePoint]]


@dataclass
class MetricCurves:
    """Accuracy and FP/FN curves per class and strength.

    Fields are filled lazily by the producing operation; classes without
    validation samples are absent rather than reported as zero.
    """

    strengths: tuple[float, ...]
    acc: dict[str, Curves] = field(default_factory=dict)  # mode -> curves
    fp: dict[str, Curves] = field(default_factory=dict)
    fn: dict[str, Curves] = field(default_factory=dict)

    @property
    def strongest(self) -> float:
        return self.strengths[0]

    def merge(self, other: "MetricCurves") -> "MetricCurves":
        if other.strengths != self.strengths:
            raise InputConsistencyError("cannot merge curves over different grids")
        for attr in ("acc", "fp", "fn"):
            getattr(self, attr).update(getattr(other, attr))
        return self

    def accuracy(self, mode: str) -> Curves:
        _check_mode(mode)
        try:
            return self.acc[mode]
        except KeyError:
            raise InputConsistencyError(f"{mode} accuracy not computed") from None

    def fp_counts(self, mode: str) -> Curves:
        _check_mode(mode)
        try:
            return self.fp[mode]
        except KeyError:
            raise InputConsistencyError(f"{mode} FP counts not computed") from None

    def fn_counts(self, mode: str) -> Curves:
        _check_mode(mode)
        try:
            return self.fn[mode]
        except KeyError:
            raise InputConsistencyError(f"{mode} FN counts not computed") from None


def per_class_accuracy(log: PredictionLog, ann: AnnotationSet, mode: str) -> MetricCurves:
    """Fraction of each class's samples predicted correctly, per strength.

    ``mode=original`` scores against the single original label,
    ``mode=multilabel`` against the multi-label set (correct if the
    prediction is any plausible label).
    """
    _check_mode(mode)
    ann.check_log(log)
    out: Curves = {}
    for strength in log.strengths:
        seeds = log.seeds(strength)
        per_class_seed: dict[str, list[float]] = {}
        for seed in seeds:
            preds = log.predictions(strength, seed)
            hits: dict[str, int] = {}
            totals: dict[str, int] = {}
            for sample, pred in preds.items():
                if not _scorable(ann, sample, mode):
                    continue
                k = ann.original[sample]
                totals[k] = totals.get(k, 0) + 1
                if _is_correct(ann, sample, pred, mode):
                    hits[k] = hits.get(k, 0) + 1
            for k, total in totals.items():
                per_class_seed.setdefault(k, []).append(hits.get(k, 0) / total)
        for k, values in per_class_seed.items():
            if len(values) != len(seeds):
                raise InputConsistencyError(
                    f"class {k!r} not covered by every seed at strength {strength}"
                )
            out.setdefault(k, {})[strength] = _aggregate(values)
    curves = MetricCurves(strengths=log.strengths)
    curves.acc[mode] = out
    return curves


@dataclass(frozen=True)
class AccuracyDrop:
    original: float | None
    multilabel: float | None


def _delta_drop(points: dict[float, CurvePoint], strongest: float) -> float:
    # max over the grid minus the value at the strongest strength;
    # iterating in ascending strength order makes ties resolve toward it.
    best = max(points[s].mean for s in sorted(points))
    return best - points[strongest].mean


def accuracy_drop(curves: MetricCurves) -> dict[str, AccuracyDrop]:
    """Per-class accuracy loss at the strongest strength vs the grid maximum."""
    if len(curves.strengths) < 2:
        raise InputConsistencyError("accuracy drop needs at least two strengths")
    if not curves.acc:
        raise InputConsistencyError("no accuracy curves computed")
    drops: dict[str, dict[str, float]] = {}
    for mode, per_class in curves.acc.items():
        for k, points in per_class.items():
            if set(points) != set(curves.strengths):
                raise InputConsistencyError(
                    f"class {k!r} lacks accuracy at some strengths"
                )
            drops.setdefault(k, {})[mode] = _delta_drop(points, curves.strongest)
    return {
        k: AccuracyDrop(original=d.get(ORIGINAL), multilabel=d.get(MULTILABEL))
        for k, d in drops.items()
    }


def affected_classes(
    curves: MetricCurves,
    mode: str,
    top_n: int | None = None,
    min_drop: float | None = None,
) -> list[str]:
    """Classes ordered by accuracy drop (descending), filtered by selector."""
    _check_mode(mode)
    if (top_n is None) == (min_drop is None):
        raise ValueError("exactly one of top_n / min_drop must be given")
    drops = accuracy_drop(curves)
    scored = []
    for k, drop in drops.items():
        value = drop.original if mode == ORIGINAL else drop.multilabel
        if value is None:
            raise InputConsistencyError(f"{mode} accuracy drop missing for {k!r}")
        scored.append((k, value))
    scored.sort(key=lambda kv: (-kv[1], kv[0]))
    if top_n is not None:
        if top_n > len(scored):
            raise InputConsistencyError(
                f"top_n={top_n} exceeds number of classes ({len(scored)})"
            )
        return [k for k, _ in scored[:top_n]]
    return [k for k, v in scored if v >= min_drop]


class ConfusionCurves:
    """Confusion rate CR(k->l) per ordered class pair and strength."""

    def __init__(self, strengths, classes, rates):
        self.strengths = tuple(strengths)
        self.classes = tuple(classes)
        self.rates: dict[tuple[str, str], dict[float, CurvePoint]] = rates

    @property
    def strongest(self) -> float:
        return self.strengths[0]

    def pairs(self):
        return sorted(self.rates)

    def curve(self, k: str, l: str) -> dict[float, CurvePoint]:
        """CR(k->l) over the grid; pairs never confused give zero curves."""
        if (k, l) in self.rates:
            return self.rates[(k, l)]
        zero = CurvePoint(0.0, 0.0, ())
        return {s: zero for s in self.strengths}

    def delta_cr(self, k: str, l: str) -> float:
        """Growth at the strongest strength over the grid minimum."""
        points = self.curve(k, l)
        low = min(points[s].mean for s in sorted(points))
        return points[self.strongest].mean - low

    def delta_cr_star(self, l: str, k: str) -> float:
        """Reverse-confusion growth at weaker strengths: max CR(l->k) minus
        CR(l->k) at the strongest strength."""
        points = self.curve(l, k)
        best = max(points[s].mean for s in sorted(points))
        return best - points[self.strongest].mean


def confusion_rates(log: PredictionLog, ann: AnnotationSet) -> ConfusionCurves:
    """CR(k->l): fraction of class-k samples predicted as l, seed-aggregated.

    Confusions are defined against original labels only; diagonal entries
    (k == l) are omitted.
    """
    ann.check_log(log)
    # First pass: totals and raw counts per (strength, seed) point.
    points = []
    seen_pairs: set[tuple[str, str]] = set()
    for strength in log.strengths:
        for seed in log.seeds(strength):
            preds = log.predictions(strength, seed)
            totals: dict[str, int] = {}
            counts: dict[tuple[str, str], int] = {}
            for sample, pred in preds.items():
                k = ann.original[sample]
                totals[k] = totals.get(k, 0) + 1
                if pred != k:
                    counts[(k, pred)] = counts.get((k, pred), 0) + 1
            seen_pairs.update(counts)
            points.append((strength, totals, counts))
    # Second pass: full curves (zero-filled) for every pair seen anywhere.
    rates: dict[tuple[str, str], dict[float, CurvePoint]] = {}
    for pair in seen_pairs:
        k = pair[0]
        by_strength: dict[float, list[float]] = {s: [] for s in log.strengths}
        for strength, totals, counts in points:
            n_k = totals.get(k, 0)
            by_strength[strength].append(counts.get(pair, 0) / n_k if n_k else 0.0)
        rates[pair] = {s: _aggregate(v) for s, v in by_strength.items()}
    return ConfusionCurves(log.strengths, sorted(ann.classes), rates)


def fp_fn_counts(log: PredictionLog, ann: AnnotationSet, mode: str) -> MetricCurves:
    """Per-class false-positive and false-negative counts per strength.

    Original mode: FP(l) counts samples with true label != l predicted as l;
    FN(k) counts class-k samples not predicted as k.  Multilabel mode: FP(l)
    counts predictions of l on samples whose label set lacks l; FN(k) counts
    samples carrying label k whose prediction is outside their label set.
    """
    _check_mode(mode)
    ann.check_log(log)
    fp_out: Curves = {}
    fn_out: Curves = {}
    classes = sorted(ann.classes)
    for strength in log.strengths:
        seeds = log.seeds(strength)
        fp_seed: dict[str, list[int]] = {k: [] for k in classes}
        fn_seed: dict[str, list[int]] = {k: [] for k in classes}
        for seed in seeds:
            preds = log.predictions(strength, seed)
            fp: dict[str, int] = {}
            fn: dict[str, int] = {}
            for sample, pred in preds.items():
                if mode == ORIGINAL:
                    true = ann.original[sample]
                    if pred != true:
                        fp[pred] = fp.get(pred, 0) + 1
                        fn[true] = fn.get(true, 0) + 1
                else:
                    labels = ann.label_set(sample)
                    if pred not in labels:
                        fp[pred] = fp.get(pred, 0) + 1
                        for k in labels:
                            fn[k] = fn.get(k, 0) + 1
            for k in classes:
                fp_seed[k].append(fp.get(k, 0))
                fn_seed[k].append(fn.get(k, 0))
        for k in classes:
            fp_out.setdefault(k, {})[strength] = _aggregate(fp_seed[k])
            fn_out.setdefault(k, {})[strength] = _aggregate(fn_seed[k])
    curves = MetricCurves(strengths=log.strengths)
    curves.fp[mode] = fp_out
    curves.fn[mode] = fn_out
    return curves


def delta_fp(curves: MetricCurves, mode: str) -> dict[str, float]:
    """FP growth at the strongest strength over the grid minimum, per class."""
    out = {}
    for k, points in curves.fp_counts(mode).items():
        low = min(points[s].mean for s in sorted(points))
        out[k] = points[curves.strongest].mean - low
    return out


def group_average(curves: MetricCurves, class_set, mode: str) -> dict[float, float]:
    """Unweighted mean of per-class seed-mean accuracy over a class set."""
    class_set = sorted(class_set)
    if not class_set:
        raise InputConsistencyError("group average over an empty class set")
    acc = curves.accuracy(mode)
    missing = [k for k in class_set if k not in acc]
    if missing:
        raise InputConsistencyError(f"no accuracy curves for classes {missing}")
    return {
        s: sum(acc[k][s].mean for k in class_set) / len(class_set)
        for s in curves.strengths
    }


def underrepresented_classes(ann: AnnotationSet, threshold: int) -> list[str]:
    """Classes whose training-set size is below the threshold."""
    if ann.train_counts is None:
        raise InputConsistencyError("annotation set has no train counts")
    return sorted(k for k, n in ann.train_counts.items() if n < threshold)


def compute_all(log: PredictionLog, ann: AnnotationSet) -> MetricCurves:
    """Every accuracy and FP/FN curve available for the given annotations."""
    curves = per_class_accuracy(log, ann, ORIGINAL)
    curves.merge(fp_fn_counts(log, ann, ORIGINAL))
    if ann.multilabel is not None:
        curves.merge(per_class_accuracy(log, ann, MULTILABEL))
        curves.merge(fp_fn_counts(log, ann, MULTILABEL))
    return curves
