"""Class-pair overlap and semantic similarity, and the four-way
categorization of confused class pairs.

A pair is placed into one of four buckets by crossing two binary signals:
high/low label overlap (co-occurrence ratio or IoU of multi-label sets)
and high/low semantic similarity (taxonomy-tree score or name-embedding
cosine).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InputConsistencyError
from .metrics import ConfusionCurves, MetricCurves, ORIGINAL, accuracy_drop, affected_classes
from .records import AnnotationSet

AMBIGUOUS = "ambiguous"
CO_OCCURRING = "co_occurring"
FINE_GRAINED = "fine_grained"
UNRELATED = "unrelated"
CATEGORIES = (AMBIGUOUS, CO_OCCURRING, FINE_GRAINED, UNRELATED)


class TaxonomyTree:
    """Rooted tree of class/synset ids with child -> parent edges.

    The root has depth 1; every node must reach the root.
    """

    def __init__(self, parents: dict[str, str], root: str):
        if root in parents:
            raise InputConsistencyError("root must not have a parent")
        self.root = root
        self.parents = dict(parents)
        self._depth: dict[str, int] = {root: 1}
        for node in parents:
            self._resolve_depth(node)
        self._children: dict[str, list[str]] = {}
        for child, parent in parents.items():
            self._children.setdefault(parent, []).append(child)

    def _resolve_depth(self, node: str) -> int:
        seen = []
        while node not in self._depth:
            seen.append(node)
            if node not in self.parents:
                raise InputConsistencyError(
                    f"node {seen[0]!r} does not reach the root"
                )
            node = self.parents[node]
            if node in seen:
                raise InputConsistencyError(f"cycle through node {node!r}")
        depth = self._depth[node]
        for n in reversed(seen):
            depth += 1
            self._depth[n] = depth
        return self._depth[seen[0]] if seen else self._depth[node]

    def __contains__(self, node: str) -> bool:
        return node in self._depth

    def depth(self, node: str) -> int:
        try:
            return self._depth[node]
        except KeyError:
            raise InputConsistencyError(f"node {node!r} not in taxonomy") from None

    def ancestors(self, node: str) -> list[str]:
        """Path from the node up to the root, inclusive."""
        self.depth(node)
        path = [node]
        while node != self.root:
            node = self.parents[node]
            path.append(node)
        return path

    def least_common_subsumer(self, a: str, b: str) -> str:
        up_a = set(self.ancestors(a))
        for node in self.ancestors(b):
            if node in up_a:
                return node
        return self.root


def wu_palmer(tree: TaxonomyTree, k: str, l: str) -> float:
    """2 * depth(LCS) / (depth(k) + depth(l)), with the root at depth 1."""
    lcs = tree.least_common_subsumer(k, l)
    return 2.0 * tree.depth(lcs) / (tree.depth(k) + tree.depth(l))


def subtree_members(tree: TaxonomyTree, root_node: str) -> set[str]:
    """All descendants of a node, including the node itself."""
    tree.depth(root_node)
    members = set()
    stack = [root_node]
    while stack:
        node = stack.pop()
        members.add(node)
        stack.extend(tree._children.get(node, ()))
    return members


class EmbeddingTable:
    """Word/class-name embedding vectors of a fixed dimension."""

    def __init__(self, vectors: dict[str, tuple[float, ...]]):
        dims = {len(v) for v in vectors.values()}
        if len(dims) > 1:
            raise InputConsistencyError(f"mixed embedding dimensions: {sorted(dims)}")
        self.vectors = {k: tuple(float(x) for x in v) for k, v in vectors.items()}

    def class_vector(self, name: str) -> tuple[float, ...] | None:
        """Embedding for a class name: direct lookup, else the mean of its
        in-vocabulary word vectors; None when every word is out of vocabulary."""
        if name in self.vectors:
            return self.vectors[name]
        words = [w for w in name.replace("-", " ").lower().split() if w]
        hits = [self.vectors[w] for w in words if w in self.vectors]
        if not hits:
            return None
        dim = len(hits[0])
        return tuple(sum(v[i] for v in hits) / len(hits) for i in range(dim))


def _cosine(u, v) -> float:
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0.0 or nv == 0.0:
        raise InputConsistencyError("cosine of a zero vector is undefined")
    return sum(a * b for a, b in zip(u, v)) / (nu * nv)


def embed_similarity(table: EmbeddingTable, k: str, l: str) -> float | None:
    """Cosine similarity of class-name embeddings; None if either name is
    fully out of vocabulary."""
    vk = table.class_vector(k)
    vl = table.class_vector(l)
    if vk is None or vl is None:
        return None
    return _cosine(vk, vl)


def co_occurrence(ann: AnnotationSet, k: str, l: str) -> float | None:
    """Fraction of samples carrying label k that also carry label l."""
    if ann.multilabel is None:
        raise InputConsistencyError("annotation set has no multi-label map")
    with_k = 0
    with_both = 0
    for labels in ann.multilabel.values():
        if k in labels:
            with_k += 1
            if l in labels:
                with_both += 1
    if with_k == 0:
        return None
    return with_both / with_k


def iou(ann: AnnotationSet, k: str, l: str) -> float | None:
    """Intersection-over-union of the two classes' multi-label supports."""
    if ann.multilabel is None:
        raise InputConsistencyError("annotation set has no multi-label map")
    either = 0
    both = 0
    for labels in ann.multilabel.values():
        has_k = k in labels
        has_l = l in labels
        if has_k or has_l:
            either += 1
        if has_k and has_l:
            both += 1
    if either == 0:
        return None
    return both / either


@dataclass(frozen=True)
class PairScores:
    """Overlap and similarity scores for an ordered class pair; None marks
    an absent score."""

    c_kl: float | None = None
    iou: float | None = None
    tree_sim: float | None = None
    embed_sim: float | None = None


@dataclass(frozen=True)
class CategoryThresholds:
    """Cutoffs separating high from low overlap/similarity.

    Calibrated once against a transcribed reference ledger of hand-labeled
    confused pairs; the reference labeling is partly human judgment, so the
    defaults target majority agreement, not exact reproduction.
    """

    c: float = 0.3
    iou: float = 0.15
    tree: float = 0.7
    embed: float = 0.58


def categorize_pair(scores: PairScores, thresholds: CategoryThresholds | None = None) -> str:
    """Assign one of the four confusion categories from pair scores."""
    t = thresholds or CategoryThresholds()
    if scores.c_kl is None and scores.iou is None:
        raise InputConsistencyError("categorization needs an overlap score")
    if scores.tree_sim is None and scores.embed_sim is None:
        raise InputConsistencyError("categorization needs a similarity score")
    overlap = (scores.c_kl is not None and scores.c_kl >= t.c) or (
        scores.iou is not None and scores.iou >= t.iou
    )
    semantic = (scores.tree_sim is not None and scores.tree_sim >= t.tree) or (
        scores.embed_sim is not None and scores.embed_sim >= t.embed
    )
    if overlap and semantic:
        return AMBIGUOUS
    if overlap:
        return CO_OCCURRING
    if semantic:
        return FINE_GRAINED
    return UNRELATED


@dataclass(frozen=True)
class PartnerEntry:
    partner: str
    delta_cr: float
    delta_cr_star: float
    scores: PairScores
    category: str | None


@dataclass(frozen=True)
class ClassEntry:
    class_id: str
    delta_acc: float
    partners: tuple[PartnerEntry, ...]


@dataclass
class ConfusionReport:
    entries: tuple[ClassEntry, ...]
    category_distribution: dict[str, float]


@dataclass
class ReportConfig:
    mode: str = ORIGINAL
    top_n: int | None = None
    min_drop: float | None = 0.05
    min_delta_cr: float = 0.025
    exclude_subtree: str | None = None
    thresholds: CategoryThresholds = field(default_factory=CategoryThresholds)


def confusion_report(
    conf: ConfusionCurves,
    curves: MetricCurves,
    ann: AnnotationSet,
    tree: TaxonomyTree | None = None,
    table: EmbeddingTable | None = None,
    config: ReportConfig | None = None,
) -> ConfusionReport:
    """For each affected class, its confused partners with overlap/similarity
    scores and assigned category, plus the overall category distribution."""
    config = config or ReportConfig()
    affected = affected_classes(
        curves, config.mode, top_n=config.top_n, min_drop=config.min_drop
    )
    if config.exclude_subtree is not None:
        if tree is None:
            raise InputConsistencyError("subtree exclusion requires a taxonomy")
        excluded = subtree_members(tree, config.exclude_subtree)
        affected = [k for k in affected if k not in excluded]
    drops = accuracy_drop(curves)
    entries = []
    category_counts: dict[str, int] = {}
    n_categorized = 0
    for k in affected:
        partners = []
        for l in conf.classes:
            if l == k:
                continue
            d_cr = conf.delta_cr(k, l)
            if d_cr < config.min_delta_cr:
                continue
            scores = PairScores(
                c_kl=co_occurrence(ann, k, l) if ann.multilabel is not None else None,
                iou=iou(ann, k, l) if ann.multilabel is not None else None,
                tree_sim=wu_palmer(tree, k, l) if tree and k in tree and l in tree else None,
                embed_sim=embed_similarity(table, k, l) if table else None,
            )
            has_overlap = scores.c_kl is not None or scores.iou is not None
            has_sim = scores.tree_sim is not None or scores.embed_sim is not None
            category = None
            if has_overlap and has_sim:
                category = categorize_pair(scores, config.thresholds)
                category_counts[category] = category_counts.get(category, 0) + 1
                n_categorized += 1
            partners.append(
                PartnerEntry(
                    partner=l,
                    delta_cr=d_cr,
                    delta_cr_star=conf.delta_cr_star(l, k),
                    scores=scores,
                    category=category,
                )
            )
        partners.sort(key=lambda p: (-p.delta_cr, p.partner))
        drop = drops[k]
        delta = drop.original if config.mode == ORIGINAL else drop.multilabel
        entries.append(ClassEntry(class_id=k, delta_acc=delta, partners=tuple(partners)))
    distribution = {
        c: (category_counts.get(c, 0) / n_categorized if n_categorized else 0.0)
        for c in CATEGORIES
    }
    return ConfusionReport(entries=tuple(entries), category_distribution=distribution)
