"""Deterministic desk-scale simulator of augmentation-induced class bias.

Samples are 1-D canvases of L slots, each slot a d-dimensional feature
block.  A class renders fixed prototype blocks at fixed slots on top of
Gaussian background noise.  Training augmentation zero-masks everything
outside a random window (the 1-D analog of random resized crop): a window
of a composite sample that shows only a shared block is indistinguishable
from a sample of the class owning that block, which is exactly the overlap
mechanism under study.

Everything is a pure function of the config and a root seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import AugbiasError, InputConsistencyError
from .metrics import ORIGINAL, affected_classes, compute_all, group_average
from .policy import AugPolicy, baseline_remove_augmentation, build_policy
from .records import AnnotationSet, PredictionLog, PredictionRecord

Placement = tuple[int, int]  # (block index, slot)


@dataclass(frozen=True)
class CoOccurrence:
    """With the given probability, a sample additionally renders a partial
    view of another class and its label set gains that class (the synthetic
    analog of multi-label annotations on co-occurring objects)."""

    label: str
    placements: tuple[Placement, ...]
    prob: float


@dataclass(frozen=True)
class ClassSpec:
    name: str
    composition: tuple[Placement, ...]
    train_count: int = 200
    val_count: int = 100
    co_occur: tuple[CoOccurrence, ...] = ()


@dataclass(frozen=True)
class TrainerParams:
    epochs: int = 40
    batch_size: int = 64
    learning_rate: float = 0.5
    label_smoothing: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.label_smoothing < 1.0:
            raise ValueError("label smoothing must be in [0, 1)")
        if self.epochs < 0 or self.batch_size < 1 or self.learning_rate <= 0:
            raise ValueError("invalid trainer hyperparameters")


@dataclass(frozen=True)
class SimConfig:
    canvas_slots: int = 16
    block_dim: int = 8
    n_blocks: int = 4
    noise_sigma: float = 0.3
    classes: tuple[ClassSpec, ...] = ()
    grid: tuple[float, ...] = (8.0, 40.0, 70.0, 100.0)
    seeds: int = 5
    trainer: TrainerParams = field(default_factory=TrainerParams)
    seed: int = 0

    def __post_init__(self):
        if not self.classes:
            raise ValueError("config declares no classes")
        for spec in self.classes:
            for block, slot in spec.composition:
                if not (0 <= block < self.n_blocks and 0 <= slot < self.canvas_slots):
                    raise ValueError(
                        f"class {spec.name!r} places block {block} at slot {slot} "
                        f"outside the canvas/block universe"
                    )
            if spec.train_count < 1 or spec.val_count < 1:
                raise ValueError(f"class {spec.name!r} needs positive sample counts")
        if len({c.name for c in self.classes}) != len(self.classes):
            raise ValueError("duplicate class names")
        if min(self.grid) != self.grid[0] or tuple(sorted(self.grid)) != tuple(self.grid):
            raise ValueError("strength grid must be sorted ascending")

    @property
    def feature_dim(self) -> int:
        return self.canvas_slots * self.block_dim

    def class_names(self):
        return tuple(c.name for c in self.classes)


@dataclass
class SimDataset:
    features: np.ndarray  # (n, canvas_slots * block_dim)
    labels: tuple[str, ...]
    label_sets: tuple[frozenset[str], ...]
    sample_ids: tuple[str, ...]


def _prototypes(config: SimConfig) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0]))
    return rng.normal(0.0, 1.0, size=(config.n_blocks, config.block_dim))


def _containment_labels(config: SimConfig, placements: frozenset[Placement]) -> set[str]:
    return {
        spec.name
        for spec in config.classes
        if set(spec.composition) <= placements
    }


def generate_dataset(config: SimConfig, seed: int) -> tuple[SimDataset, SimDataset]:
    """Render the train and validation splits; deterministic given the seed."""
    protos = _prototypes(config)
    d = config.block_dim
    splits = {}
    for split_idx, (split, count_of) in enumerate(
        [("train", lambda c: c.train_count), ("val", lambda c: c.val_count)]
    ):
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, seed, split_idx + 1]))
        feats, labels, label_sets, ids = [], [], [], []
        for spec in config.classes:
            for i in range(count_of(spec)):
                placements = set(spec.composition)
                extra_labels = set()
                for co in spec.co_occur:
                    if rng.uniform() < co.prob:
                        placements.update(co.placements)
                        extra_labels.add(co.label)
                x = config.noise_sigma * rng.normal(size=config.feature_dim)
                for block, slot in placements:
                    x[slot * d : (slot + 1) * d] += protos[block]
                feats.append(x)
                labels.append(spec.name)
                label_sets.append(
                    frozenset(
                        {spec.name}
                        | extra_labels
                        | _containment_labels(config, frozenset(placements))
                    )
                )
                ids.append(f"{split}-{spec.name}-{i:04d}")
        splits[split] = SimDataset(
            features=np.array(feats),
            labels=tuple(labels),
            label_sets=tuple(label_sets),
            sample_ids=tuple(ids),
        )
    return splits["train"], splits["val"]


def crop_mask(features: np.ndarray, strength: float, canvas_slots: int,
              block_dim: int, rng: np.random.Generator) -> np.ndarray:
    """Zero all features outside a random window of fractional length drawn
    from U[strength, 1]; the 1-D random-crop analog."""
    if not 0.0 < strength <= 1.0:
        raise ValueError(f"strength {strength} outside (0, 1]")
    u = rng.uniform(strength, 1.0)
    width = max(1, round(canvas_slots * u))
    start = int(rng.integers(0, canvas_slots - width + 1))
    out = np.zeros_like(features)
    lo, hi = start * block_dim, (start + width) * block_dim
    out[lo:hi] = features[lo:hi]
    return out


def _batch_crop_masks(n: int, strengths: np.ndarray, canvas_slots: int,
                      block_dim: int, rng: np.random.Generator) -> np.ndarray:
    """Window masks for a batch; strengths of NaN mean no augmentation."""
    u = rng.uniform(size=n)
    width = np.empty(n, dtype=int)
    start = np.zeros(n, dtype=int)
    aug = ~np.isnan(strengths)
    frac = strengths[aug] + (1.0 - strengths[aug]) * u[aug]
    width_aug = np.maximum(1, np.rint(canvas_slots * frac).astype(int))
    width[aug] = width_aug
    width[~aug] = canvas_slots
    max_start = canvas_slots - width + 1
    start = (rng.uniform(size=n) * max_start).astype(int)
    slots = np.arange(canvas_slots)
    mask = (slots >= start[:, None]) & (slots < (start + width)[:, None])
    return np.repeat(mask, block_dim, axis=1).astype(float)


@dataclass
class LinearSoftmaxModel:
    weights: np.ndarray  # (n_classes, feature_dim)
    bias: np.ndarray  # (n_classes,)
    classes: tuple[str, ...]

    def logits(self, features: np.ndarray) -> np.ndarray:
        return features @ self.weights.T + self.bias

    def predict(self, features: np.ndarray) -> list[str]:
        idx = np.argmax(self.logits(features), axis=1)
        return [self.classes[i] for i in idx]


def train_classifier(
    train: SimDataset,
    augmentation: float | AugPolicy,
    config: SimConfig,
    seed: int,
) -> LinearSoftmaxModel:
    """Minibatch SGD on label-smoothed cross-entropy with per-sample crop
    masking.  A scalar strength (percent) augments every class uniformly;
    an AugPolicy dispatches per class, with None meaning no masking.
    """
    classes = config.class_names()
    class_idx = {c: i for i, c in enumerate(classes)}
    y = np.array([class_idx[label] for label in train.labels])
    x = train.features
    n, dim = x.shape
    n_classes = len(classes)

    if isinstance(augmentation, AugPolicy):
        per_class = {
            c: (None if augmentation.strength_for(c) is None
                else augmentation.strength_for(c) / 100.0)
            for c in classes
        }
    else:
        per_class = {c: augmentation / 100.0 for c in classes}
    sample_strength = np.array(
        [np.nan if per_class[label] is None else per_class[label] for label in train.labels]
    )

    hyper = config.trainer
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 10, seed]))
    w = 0.01 * rng.normal(size=(n_classes, dim))
    b = np.zeros(n_classes)
    alpha = hyper.label_smoothing
    targets = np.full((n, n_classes), alpha / n_classes)
    targets[np.arange(n), y] += 1.0 - alpha

    for _ in range(hyper.epochs):
        order = rng.permutation(n)
        for lo in range(0, n, hyper.batch_size):
            idx = order[lo : lo + hyper.batch_size]
            masks = _batch_crop_masks(
                len(idx), sample_strength[idx], config.canvas_slots,
                config.block_dim, rng,
            )
            xb = x[idx] * masks
            logits = xb @ w.T + b
            logits -= logits.max(axis=1, keepdims=True)
            p = np.exp(logits)
            p /= p.sum(axis=1, keepdims=True)
            if not np.all(np.isfinite(p)):
                raise AugbiasError("training diverged: non-finite probabilities")
            grad = (p - targets[idx]) / len(idx)
            w -= hyper.learning_rate * (grad.T @ xb)
            b -= hyper.learning_rate * grad.sum(axis=0)
    return LinearSoftmaxModel(weights=w, bias=b, classes=classes)


def sweep(config: SimConfig) -> tuple[PredictionLog, AnnotationSet]:
    """Train one model per (strength, seed) and log validation predictions."""
    train, val = generate_dataset(config, seed=0)
    records = []
    for strength in config.grid:
        for seed in range(config.seeds):
            model = train_classifier(train, strength, config, seed=_point_seed(strength, seed))
            preds = model.predict(val.features)
            run = f"sim-s{strength:g}-seed{seed}"
            for sample_id, pred in zip(val.sample_ids, preds):
                records.append(
                    PredictionRecord(
                        run=run, strength=strength, seed=seed,
                        sample=sample_id, pred=pred,
                    )
                )
    log = PredictionLog(records)
    counts: dict[str, int] = {}
    for label in train.labels:
        counts[label] = counts.get(label, 0) + 1
    ann = AnnotationSet(
        original=dict(zip(val.sample_ids, val.labels)),
        multilabel=dict(zip(val.sample_ids, val.label_sets)),
        train_counts=counts,
        classes=frozenset(config.class_names()),
    )
    return log, ann


def _point_seed(strength: float, seed: int) -> int:
    return int(round(strength * 1000)) * 1000 + seed


@dataclass(frozen=True)
class ComparisonRow:
    policy_name: str
    overall: float
    overall_sem: float
    affected: float
    affected_sem: float
    remaining: float
    remaining_sem: float


@dataclass
class InterventionResult:
    affected_classes: tuple[str, ...]
    rows: tuple[ComparisonRow, ...]

    def row(self, name: str) -> ComparisonRow:
        for r in self.rows:
            if r.policy_name == name:
                return r
        raise KeyError(name)


def _sem(values) -> float:
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        return 0.0
    return float(values.std(ddof=1) / np.sqrt(len(values)))


def _evaluate_policy(
    name: str, policy, config: SimConfig, train: SimDataset, val: SimDataset,
    affected: set[str],
) -> ComparisonRow:
    remaining = [c for c in config.class_names() if c not in affected]
    overall, aff, rem = [], [], []
    val_labels = np.array(val.labels)
    for seed in range(config.seeds):
        model = train_classifier(train, policy, config, seed=900000 + seed)
        preds = np.array(model.predict(val.features))
        per_class = {
            c: float((preds[val_labels == c] == c).mean())
            for c in config.class_names()
        }
        overall.append(float((preds == val_labels).mean()))
        aff.append(np.mean([per_class[c] for c in sorted(affected)]))
        rem.append(np.mean([per_class[c] for c in remaining]))
    return ComparisonRow(
        policy_name=name,
        overall=float(np.mean(overall)), overall_sem=_sem(overall),
        affected=float(np.mean(aff)), affected_sem=_sem(aff),
        remaining=float(np.mean(rem)), remaining_sem=_sem(rem),
    )


def intervention_experiment(
    config: SimConfig, m: int = 1, affected_top_n: int = 1
) -> InterventionResult:
    """Compare uniform-strongest training against the remove-augmentation
    baseline and the FP/FN-informed class-conditional policy."""
    log, ann = sweep(config)
    curves = compute_all(log, ann)
    affected = affected_classes(curves, ORIGINAL, top_n=affected_top_n)
    strongest = min(config.grid)
    train, val = generate_dataset(config, seed=0)
    uniform = AugPolicy(default_strength=strongest, provenance={"method": "uniform"})
    baseline = baseline_remove_augmentation(affected, strongest=strongest)
    tuned = build_policy(curves, m)
    rows = tuple(
        _evaluate_policy(name, policy, config, train, val, set(affected))
        for name, policy in [
            ("uniform_strongest", uniform),
            ("remove_augmentation", baseline),
            ("fp_fn_policy", tuned),
        ]
    )
    return InterventionResult(affected_classes=tuple(affected), rows=rows)


def canonical_scenario(seed: int = 0) -> SimConfig:
    """The reference co-occurrence scenario: a composite class (marker +
    shared + detail blocks), a part class owning just the shared block and
    sometimes co-occurring with a partial view of the composite, and an
    unrelated distractor."""
    whole = ClassSpec(
        name="whole",
        composition=((0, 0), (1, 8), (3, 12)),
    )
    part = ClassSpec(
        name="part",
        composition=((1, 8),),
        co_occur=(CoOccurrence(label="whole", placements=((0, 0),), prob=0.3),),
    )
    distractor = ClassSpec(name="distractor", composition=((2, 4),))
    return SimConfig(classes=(whole, part, distractor), seed=seed)


def config_to_dict(config: SimConfig) -> dict:
    return asdict(config)


def config_from_dict(data: dict) -> SimConfig:
    classes = tuple(
        ClassSpec(
            name=c["name"],
            composition=tuple((int(b), int(s)) for b, s in c["composition"]),
            train_count=int(c.get("train_count", 200)),
            val_count=int(c.get("val_count", 100)),
            co_occur=tuple(
                CoOccurrence(
                    label=o["label"],
                    placements=tuple((int(b), int(s)) for b, s in o["placements"]),
                    prob=float(o["prob"]),
                )
                for o in c.get("co_occur", ())
            ),
        )
        for c in data["classes"]
    )
    trainer = TrainerParams(**data.get("trainer", {}))
    return SimConfig(
        canvas_slots=int(data.get("canvas_slots", 16)),
        block_dim=int(data.get("block_dim", 8)),
        n_blocks=int(data.get("n_blocks", 4)),
        noise_sigma=float(data.get("noise_sigma", 0.3)),
        classes=classes,
        grid=tuple(float(s) for s in data.get("grid", (8.0, 40.0, 70.0, 100.0))),
        seeds=int(data.get("seeds", 5)),
        trainer=trainer,
        seed=int(data.get("seed", 0)),
    )
