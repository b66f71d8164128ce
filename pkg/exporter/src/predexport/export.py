"""Checkpoint discovery, batch inference, and file emission.

Checkpoints follow the filename convention ``<run>_s<strength>_seed<seed>.pt``
(strength in percent).  A checkpoint file holds either a pickled
``torch.nn.Module`` or a dict with keys ``arch`` (a torchvision model
builder name) and ``state_dict``.

Output files match the analysis toolkit's documented formats exactly:
JSON Lines with an optional ``{"format_version": 1}`` header and
sorted-key records, so identical inputs produce byte-identical files.
"""
from __future__ import annotations

import glob
import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path

import torch
from torch.utils.data import DataLoader
from torchvision import datasets, models, transforms

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
EVAL_RESOLUTION = 224
_NAME_RE = re.compile(r"_s(?P<strength>\d+(?:\.\d+)?)_seed(?P<seed>\d+)\.pt$")


class ExportError(Exception):
    """Raised for unusable inputs (bad checkpoints, empty dataset, ...)."""


@dataclass(frozen=True)
class CheckpointPoint:
    path: Path
    strength: float
    seed: int

    @property
    def run(self) -> str:
        return self.path.stem


def discover_checkpoints(pattern: str) -> list[CheckpointPoint]:
    """Resolve the glob and parse (strength, seed) from each filename.

    Files not matching the naming convention are skipped with a warning;
    order is deterministic (sorted by path).
    """
    points = []
    for name in sorted(glob.glob(pattern)):
        path = Path(name)
        m = _NAME_RE.search(path.name)
        if m is None:
            log.warning("skipping %s: name does not encode strength/seed", path)
            continue
        points.append(
            CheckpointPoint(
                path=path,
                strength=float(m.group("strength")),
                seed=int(m.group("seed")),
            )
        )
    return points


def load_model(path: Path) -> torch.nn.Module:
    """Load one checkpoint: a pickled module, or {"arch", "state_dict"}."""
    try:
        obj = torch.load(path, map_location="cpu", weights_only=False)
    except OSError as exc:
        raise ExportError(f"cannot read checkpoint {path}: {exc}") from exc
    if isinstance(obj, torch.nn.Module):
        model = obj
    elif isinstance(obj, dict) and "arch" in obj and "state_dict" in obj:
        builder = getattr(models, obj["arch"], None)
        if builder is None:
            raise ExportError(f"unknown architecture {obj['arch']!r} in {path}")
        model = builder()
        model.load_state_dict(obj["state_dict"])
    else:
        raise ExportError(
            f"checkpoint {path} is neither a module nor an arch/state_dict dict"
        )
    model.eval()
    return model


def eval_transform(resolution: int = EVAL_RESOLUTION):
    """Deterministic evaluation preprocessing: shorter side to 8/7 of the
    target, center crop, standard channel normalization."""
    return transforms.Compose(
        [
            transforms.Resize(resolution * 8 // 7),
            transforms.CenterCrop(resolution),
            transforms.ToTensor(),
            transforms.Normalize(
                mean=[0.485, 0.456, 0.406], std=[0.229, 0.224, 0.225]
            ),
        ]
    )


class _NamedImageFolder(datasets.ImageFolder):
    """ImageFolder that also reports a stable sample id per image: the
    file path relative to the dataset root, in POSIX form."""

    def sample_ids(self) -> list[str]:
        root = Path(self.root)
        return [
            Path(path).relative_to(root).as_posix() for path, _ in self.samples
        ]


def load_dataset(data_dir: str, resolution: int = EVAL_RESOLUTION):
    dataset = _NamedImageFolder(data_dir, transform=eval_transform(resolution))
    if len(dataset) == 0:
        raise ExportError(f"no images found under {data_dir}")
    return dataset


@torch.no_grad()
def _predict(model: torch.nn.Module, dataset, batch_size: int, workers: int):
    loader = DataLoader(
        dataset, batch_size=batch_size, shuffle=False, num_workers=workers
    )
    preds = []
    for images, _ in loader:
        preds.append(model(images).argmax(dim=1))
    return torch.cat(preds)


@torch.no_grad()
def framework_top1(model: torch.nn.Module, dataset, batch_size: int = 64) -> float:
    """The inference framework's own accuracy meter: fraction of argmax
    predictions equal to the target index."""
    loader = DataLoader(dataset, batch_size=batch_size, shuffle=False)
    correct = 0
    total = 0
    for images, targets in loader:
        correct += int((model(images).argmax(dim=1) == targets).sum())
        total += len(targets)
    return correct / total


def _write_jsonl(path: Path, records) -> None:
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format_version": FORMAT_VERSION}) + "\n")
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def _load_real_labels(path: str) -> dict[str, list[str]]:
    """ReaL-style multi-label source: JSON object sample id -> label list."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ExportError(f"cannot read multi-label source {path}: {exc}") from exc
    if not isinstance(data, dict) or not all(
        isinstance(v, list) for v in data.values()
    ):
        raise ExportError(f"{path} must map sample ids to label lists")
    return data


def export_predictions(
    checkpoints_glob: str,
    data_dir: str,
    out_dir: str,
    real_labels: str | None = None,
    batch_size: int = 64,
    workers: int = 0,
) -> list[CheckpointPoint]:
    """Run every checkpoint over the dataset and write the log/annotations.

    Returns the checkpoint points actually exported.  Unreadable
    checkpoints are skipped with a warning; an empty sweep is an error.
    """
    points = discover_checkpoints(checkpoints_glob)
    dataset = load_dataset(data_dir)
    ids = dataset.sample_ids()
    classes = dataset.classes

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    exported = []
    log_records = []
    for point in points:
        try:
            model = load_model(point.path)
        except ExportError as exc:
            log.warning("skipping %s: %s", point.path, exc)
            continue
        preds = _predict(model, dataset, batch_size, workers)
        for sample, idx in zip(ids, preds.tolist()):
            if not 0 <= idx < len(classes):
                raise ExportError(
                    f"{point.path} predicts class index {idx} outside the "
                    f"dataset's {len(classes)} classes"
                )
            log_records.append(
                {
                    "run": point.run,
                    "s": point.strength,
                    "seed": point.seed,
                    "sample": sample,
                    "pred": classes[idx],
                }
            )
        exported.append(point)
    if not exported:
        raise ExportError("no usable checkpoints matched the glob")

    _write_jsonl(out / "predictions.jsonl", log_records)
    _write_jsonl(
        out / "original.jsonl",
        (
            {"sample": sample, "label": classes[target]}
            for sample, (_, target) in sorted(
                zip(ids, dataset.samples), key=lambda pair: pair[0]
            )
        ),
    )
    if real_labels is not None:
        by_sample = _load_real_labels(real_labels)
        known = set(ids)
        unknown = sorted(set(by_sample) - known)
        if unknown:
            raise ExportError(
                f"multi-label source references unknown samples: {unknown[:5]}"
            )
        _write_jsonl(
            out / "multilabel.jsonl",
            (
                {"labels": sorted(by_sample.get(sample, [])), "sample": sample}
                for sample in sorted(ids)
            ),
        )
    return exported
