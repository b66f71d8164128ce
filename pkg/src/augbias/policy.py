"""Class-conditional augmentation policies.

A policy keeps the strongest strength of the evaluated grid as the global
default and overrides it for a small set of classes: either with the
strength minimizing that class's total FP + FN mistakes, or (for the
baseline being compared against) by disabling augmentation entirely.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputConsistencyError
from .metrics import MetricCurves, ORIGINAL, delta_fp

NO_AUGMENTATION = None  # override value meaning deterministic resize only


@dataclass(frozen=True)
class AugPolicy:
    """Per-class augmentation strengths with a global default.

    Override values are strengths from the evaluated grid, or None for
    no augmentation at all (deterministic resize).
    """

    default_strength: float
    overrides: dict[str, float | None] = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def strength_for(self, class_id: str) -> float | None:
        return self.overrides.get(class_id, self.default_strength)

    def to_dict(self) -> dict:
        return {
            "default_strength": self.default_strength,
            "overrides": dict(sorted(self.overrides.items())),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AugPolicy":
        overrides = {
            str(k): (None if v is None else float(v))
            for k, v in data.get("overrides", {}).items()
        }
        return cls(
            default_strength=float(data["default_strength"]),
            overrides=overrides,
            provenance=dict(data.get("provenance", {})),
        )


def optimal_strength(curves: MetricCurves, class_id: str, mode: str = ORIGINAL) -> float:
    """Grid strength minimizing seed-mean FP + FN for the class; ties break
    toward the strongest (smallest) strength."""
    fp = curves.fp_counts(mode)
    fn = curves.fn_counts(mode)
    if class_id not in fp or class_id not in fn:
        raise InputConsistencyError(f"no FP/FN curves for class {class_id!r}")
    fp_points = fp[class_id]
    fn_points = fn[class_id]
    missing = [s for s in curves.strengths if s not in fp_points or s not in fn_points]
    if missing:
        raise InputConsistencyError(
            f"class {class_id!r} lacks FP/FN values at strengths {missing}"
        )
    best = None
    best_total = None
    for s in sorted(curves.strengths):
        total = fp_points[s].mean + fn_points[s].mean
        if best_total is None or total < best_total:
            best, best_total = s, total
    return best


def select_intervention_classes(
    curves: MetricCurves, m: int, mode: str = ORIGINAL
) -> list[str]:
    """Top-m classes by FP growth at the strongest strength; equal growth
    breaks ties by class id."""
    growth = delta_fp(curves, mode)
    if m > len(growth):
        raise InputConsistencyError(
            f"m={m} exceeds number of classes ({len(growth)})"
        )
    ranked = sorted(growth.items(), key=lambda kv: (-kv[1], kv[0]))
    return [k for k, _ in ranked[:m]]


def build_policy(curves: MetricCurves, m: int, mode: str = ORIGINAL) -> AugPolicy:
    """Default to the strongest strength; tune the m classes whose FP counts
    grew the most to their FP+FN-minimizing strength."""
    selected = select_intervention_classes(curves, m, mode)
    overrides = {}
    for class_id in selected:
        s_star = optimal_strength(curves, class_id, mode)
        if s_star != curves.strongest:
            overrides[class_id] = s_star
    return AugPolicy(
        default_strength=curves.strongest,
        overrides=overrides,
        provenance={"method": "fp_fn_tradeoff", "m": m, "mode": mode},
    )


def baseline_remove_augmentation(affected, strongest: float = 8.0) -> AugPolicy:
    """Baseline policy: keep the strongest strength everywhere except the
    affected classes, which get no augmentation at all."""
    overrides = {class_id: NO_AUGMENTATION for class_id in affected}
    return AugPolicy(
        default_strength=strongest,
        overrides=overrides,
        provenance={"method": "remove_augmentation", "m": len(overrides)},
    )
