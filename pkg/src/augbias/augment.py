"""Image augmentation transforms: random resized crop geometry, horizontal
flip, mixup, colorjitter, and class-conditional dispatch.

Images are numpy arrays of shape (H, W, 3) with float values in [0, 1].
Every transform takes an explicit numpy Generator and is bit-reproducible
given its state.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .policy import AugPolicy

log = logging.getLogger(__name__)

_RRC_ATTEMPTS = 10


@dataclass(frozen=True)
class RrcParams:
    """Random resized crop parameters.

    s_low/s_up bound the crop area as a fraction of the image; r_low/r_up
    bound the aspect ratio.  s_low is the augmentation strength knob:
    smaller values allow smaller (stronger) crops.
    """

    s_low: float
    s_up: float = 1.0
    r_low: float = 3.0 / 4.0
    r_up: float = 4.0 / 3.0
    out_resolution: int = 176

    def __post_init__(self):
        if not 0 < self.s_low <= self.s_up <= 1:
            raise ValueError(f"invalid scale range [{self.s_low}, {self.s_up}]")
        if not 0 < self.r_low <= self.r_up:
            raise ValueError(f"invalid ratio range [{self.r_low}, {self.r_up}]")
        if self.out_resolution < 1:
            raise ValueError("out_resolution must be positive")


def rrc_sample(params: RrcParams, h: int, w: int, rng: np.random.Generator):
    """Sample a crop rectangle (top, left, crop_h, crop_w).

    Scale and aspect are drawn uniformly; crops that do not fit are
    resampled up to 10 times, after which the largest centered crop with
    aspect clamped into [r_low, r_up] is used.
    """
    if h < 1 or w < 1:
        raise ValueError("image dimensions must be positive")
    area = h * w
    for _ in range(_RRC_ATTEMPTS):
        s = rng.uniform(params.s_low, params.s_up)
        r = rng.uniform(params.r_low, params.r_up)
        crop_w = round(math.sqrt(area * s * r))
        crop_h = round(math.sqrt(area * s / r))
        if 0 < crop_w <= w and 0 < crop_h <= h:
            top = int(rng.integers(0, h - crop_h + 1))
            left = int(rng.integers(0, w - crop_w + 1))
            return top, left, crop_h, crop_w
    # Fallback: center crop at the nearest in-range aspect ratio.
    in_ratio = w / h
    if in_ratio < params.r_low:
        crop_w = w
        crop_h = round(w / params.r_low)
    elif in_ratio > params.r_up:
        crop_h = h
        crop_w = round(h * params.r_up)
    else:
        crop_w = w
        crop_h = h
    top = (h - crop_h) // 2
    left = (w - crop_w) // 2
    return top, left, crop_h, crop_w


def _resize_axis(img: np.ndarray, out_len: int, axis: int) -> np.ndarray:
    in_len = img.shape[axis]
    if in_len == out_len:
        return img
    # Half-pixel-center convention; equal sizes are exact identities.
    scale = in_len / out_len
    centers = (np.arange(out_len) + 0.5) * scale - 0.5
    lo = np.floor(centers).astype(int)
    frac = centers - lo
    # Clamp to the edges: centers before the first (or past the last) input
    # sample replicate it instead of extrapolating.
    frac = np.where(lo < 0, 0.0, frac)
    lo = np.clip(lo, 0, in_len - 1)
    hi = np.clip(lo + 1, 0, in_len - 1)
    take_lo = np.take(img, lo, axis=axis)
    take_hi = np.take(img, hi, axis=axis)
    shape = [1] * img.ndim
    shape[axis] = out_len
    frac = frac.reshape(shape)
    return take_lo * (1.0 - frac) + take_hi * frac


def resize_bilinear(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Separable bilinear resize with half-pixel sample centers."""
    out = _resize_axis(img.astype(float), out_h, axis=0)
    return _resize_axis(out, out_w, axis=1)


def rrc_apply(img: np.ndarray, rect, out_resolution: int) -> np.ndarray:
    """Crop the rectangle and bilinearly resize to out_resolution square."""
    top, left, crop_h, crop_w = rect
    h, w = img.shape[:2]
    if top < 0 or left < 0 or top + crop_h > h or left + crop_w > w:
        raise ValueError(f"crop rectangle {rect} outside image {h}x{w}")
    crop = img[top : top + crop_h, left : left + crop_w]
    return resize_bilinear(crop, out_resolution, out_resolution)


def hflip(img: np.ndarray) -> np.ndarray:
    return img[:, ::-1].copy()


def mixup(x_i, x_j, y_i, y_j, lam: float):
    """Convex combination of two inputs and their targets."""
    x_i = np.asarray(x_i, dtype=float)
    x_j = np.asarray(x_j, dtype=float)
    y_i = np.asarray(y_i, dtype=float)
    y_j = np.asarray(y_j, dtype=float)
    if x_i.shape != x_j.shape or y_i.shape != y_j.shape:
        raise ValueError("mixup inputs must have matching shapes")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda {lam} outside [0, 1]")
    return lam * x_i + (1.0 - lam) * x_j, lam * y_i + (1.0 - lam) * y_j


def sample_mixup_lambda(alpha: float, rng: np.random.Generator) -> float:
    """Mixing coefficient drawn from Beta(alpha, alpha)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return float(rng.beta(alpha, alpha))


_LUMA = np.array([0.299, 0.587, 0.114])
# RGB <-> YIQ, used for hue rotation in the chroma plane.
_RGB_TO_YIQ = np.array(
    [[0.299, 0.587, 0.114], [0.595716, -0.274453, -0.321263], [0.211456, -0.522591, 0.311135]]
)
_YIQ_TO_RGB = np.linalg.inv(_RGB_TO_YIQ)


def _adjust_brightness(img, factor):
    return img * factor


def _adjust_contrast(img, factor):
    mean = float((img @ _LUMA).mean())
    return (img - mean) * factor + mean


def _adjust_saturation(img, factor):
    luma = (img @ _LUMA)[..., None]
    return (img - luma) * factor + luma


def _adjust_hue(img, turns):
    angle = 2.0 * math.pi * turns
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    yiq = img @ _RGB_TO_YIQ.T
    return (yiq @ rot.T) @ _YIQ_TO_RGB.T


def colorjitter(img: np.ndarray, c: float, p: float, rng: np.random.Generator) -> np.ndarray:
    """With probability p apply brightness/contrast/saturation scaling drawn
    from U[1-c, 1+c] and hue rotation from U[-c, +c] turns, in random order,
    clamping to [0, 1]."""
    if not 0.0 <= c < 1.0:
        raise ValueError(f"intensity {c} outside [0, 1)")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    img = np.asarray(img, dtype=float)
    if rng.uniform() >= p:
        return img.copy()
    ops = [_adjust_brightness, _adjust_contrast, _adjust_saturation, _adjust_hue]
    order = rng.permutation(len(ops))
    out = img
    for idx in order:
        op = ops[idx]
        if op is _adjust_hue:
            factor = rng.uniform(-c, c)
        else:
            factor = rng.uniform(1.0 - c, 1.0 + c)
        out = op(out, factor)
    return np.clip(out, 0.0, 1.0)


@dataclass(frozen=True)
class TransformConfig:
    """Transform chain configuration shared by all classes; the RRC scale
    lower bound is substituted per class from the policy."""

    out_resolution: int = 176
    r_low: float = 3.0 / 4.0
    r_up: float = 4.0 / 3.0
    s_up: float = 1.0
    hflip_prob: float = 0.5
    jitter_intensity: float = 0.0
    jitter_prob: float = 0.0


def apply_policy(
    img: np.ndarray,
    label: str,
    policy: AugPolicy,
    config: TransformConfig,
    rng: np.random.Generator,
    known_classes=None,
) -> np.ndarray:
    """Augment one sample with its class's strength from the policy.

    Order is crop -> flip -> colorjitter.  Classes mapped to no
    augmentation get a deterministic full-image resize; labels outside
    known_classes fall back to the default strength with a warning.
    """
    if known_classes is not None and label not in known_classes:
        log.warning("unknown class %r; falling back to default strength", label)
    strength = policy.strength_for(label)
    h, w = img.shape[:2]
    if strength is None:
        return resize_bilinear(img, config.out_resolution, config.out_resolution)
    params = RrcParams(
        s_low=strength / 100.0,
        s_up=config.s_up,
        r_low=config.r_low,
        r_up=config.r_up,
        out_resolution=config.out_resolution,
    )
    rect = rrc_sample(params, h, w, rng)
    out = rrc_apply(img, rect, config.out_resolution)
    if rng.uniform() < config.hflip_prob:
        out = hflip(out)
    if config.jitter_prob > 0.0 and config.jitter_intensity > 0.0:
        out = colorjitter(out, config.jitter_intensity, config.jitter_prob, rng)
    return out
