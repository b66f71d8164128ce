"""Prediction-log exporter: batch inference over model checkpoints.

A pure producer for the `augbias` analysis toolkit: it runs each
checkpoint of a (strength, seed) sweep over a labeled validation folder
and writes the toolkit's prediction-log and annotation file formats
bit-exactly.  It computes no metrics itself.
"""

__version__ = "0.1.0"

from .export import (
    CheckpointPoint,
    discover_checkpoints,
    export_predictions,
    framework_top1,
    load_dataset,
    load_model,
)
