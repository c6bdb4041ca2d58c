"""Core domain types: score domains, scored datasets, metric selectors, CSV I/O.

Scores are kept in the caller's original units.  Everything downstream that
does transport math normalizes to [0, 1] through :class:`ScoreDomain` and maps
results back, so the same code serves probability outputs and e.g. 0-100
credit-score axes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DatasetError

__all__ = [
    "ScoreDomain",
    "ScoredRow",
    "ScoredDataset",
    "MetricKind",
    "MetricCombo",
    "PR",
    "TPR",
    "FPR",
    "NR",
    "TNR",
    "FNR",
    "METRICS_BY_NAME",
    "parse_metric",
    "parse_combo",
    "validate_dataset",
    "subset_by_label",
    "load_csv",
    "write_csv",
]

# A group needs at least this many rows for its empirical quantile function
# to be meaningful.
MIN_ROWS_PER_GROUP = 2


@dataclass(frozen=True)
class ScoreDomain:
    """Closed interval [lo, hi] that every score must lie in."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DatasetError("score domain bounds must be finite")
        if not self.hi > self.lo:
            raise DatasetError(f"score domain needs hi > lo, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(np.isfinite(x)) and np.all(x >= self.lo) and np.all(x <= self.hi))

    def normalize(self, x):
        """Affine map of scores onto [0, 1]."""
        return (np.asarray(x, dtype=float) - self.lo) / self.width

    def denormalize(self, z):
        """Inverse of :meth:`normalize`."""
        return self.lo + np.asarray(z, dtype=float) * self.width


@dataclass(frozen=True)
class ScoredRow:
    """One observation: a score, a group identifier, an optional binary label."""

    score: float
    group: str
    label: int | None = None


class ScoredDataset:
    """Validated collection of scored rows with a fixed domain and group order.

    Immutable after construction; the numpy views exposed here are read-only.
    Build instances through :func:`validate_dataset` (or :func:`load_csv`),
    not the constructor.
    """

    def __init__(self, scores, groups, labels, domain, *, _min_rows=MIN_ROWS_PER_GROUP):
        scores = np.array(scores, dtype=float)
        labels = np.array(labels, dtype=int)  # -1 encodes "no label"
        groups = list(groups)
        if scores.ndim != 1 or len(groups) != scores.size or labels.size != scores.size:
            raise DatasetError("scores, groups and labels must be equal-length 1-d sequences")
        if scores.size == 0:
            raise DatasetError("dataset has zero rows")
        if not np.all(np.isfinite(scores)):
            raise DatasetError("scores must be finite")
        if scores.min() < domain.lo or scores.max() > domain.hi:
            bad = scores[(scores < domain.lo) | (scores > domain.hi)][0]
            raise DatasetError(
                f"score out of domain: {bad} not in [{domain.lo}, {domain.hi}]"
            )
        ok = (labels == -1) | (labels == 0) | (labels == 1)
        if not np.all(ok):
            raise DatasetError(f"non-binary label: {labels[~ok][0]}")

        self.domain = domain
        # Deterministic group order: lexicographic on the identifier.
        self.groups: tuple[str, ...] = tuple(sorted(set(groups)))
        index = {g: i for i, g in enumerate(self.groups)}
        self._scores = scores
        self._labels = labels
        self._group_idx = np.fromiter((index[g] for g in groups), dtype=int, count=len(groups))
        self._scores.flags.writeable = False
        self._labels.flags.writeable = False
        self._group_idx.flags.writeable = False

        counts = np.bincount(self._group_idx, minlength=len(self.groups))
        for g, c in zip(self.groups, counts):
            if c < _min_rows:
                raise DatasetError(f"group '{g}' has {c} row(s), needs at least {_min_rows}")
        self._counts = counts

    # -- basic accessors ---------------------------------------------------

    def __len__(self) -> int:
        return self._scores.size

    @property
    def scores(self) -> np.ndarray:
        return self._scores

    @property
    def labels(self) -> np.ndarray:
        """Per-row labels; -1 marks a missing label."""
        return self._labels

    @property
    def group_indices(self) -> np.ndarray:
        """Per-row index into :attr:`groups`."""
        return self._group_idx

    @property
    def is_labeled(self) -> bool:
        return bool(np.all(self._labels >= 0))

    @property
    def proportions(self) -> np.ndarray:
        """Group proportions p_g in :attr:`groups` order; sums to 1."""
        return self._counts / self._scores.size

    def group_count(self, group: str) -> int:
        return int(self._counts[self._group_index_of(group)])

    def group_scores(self, group: str) -> np.ndarray:
        return self._scores[self._group_idx == self._group_index_of(group)]

    def _group_index_of(self, group: str) -> int:
        try:
            return self.groups.index(group)
        except ValueError:
            raise DatasetError(f"unknown group '{group}'") from None

    @property
    def rows(self) -> list[ScoredRow]:
        return [
            ScoredRow(float(s), self.groups[g], None if l < 0 else int(l))
            for s, g, l in zip(self._scores, self._group_idx, self._labels)
        ]

    def replace_scores(self, new_scores) -> "ScoredDataset":
        """Same rows with new scores (used by repair application)."""
        return ScoredDataset(
            new_scores,
            [self.groups[i] for i in self._group_idx],
            self._labels,
            self.domain,
            _min_rows=1,
        )


def validate_dataset(rows, domain: ScoreDomain) -> ScoredDataset:
    """Validate raw rows into a :class:`ScoredDataset`.

    Rows may be ScoredRow instances or (score, group[, label]) tuples.  Groups
    are discovered from the data and ordered lexicographically; every group
    must contribute at least two rows.
    """
    scores, groups, labels = [], [], []
    for row in rows:
        if isinstance(row, ScoredRow):
            score, group, label = row.score, row.group, row.label
        else:
            score, group = row[0], row[1]
            label = row[2] if len(row) > 2 else None
        scores.append(float(score) if score is not None else np.nan)
        groups.append(str(group))
        labels.append(-1 if label is None else int(label))
    return ScoredDataset(scores, groups, labels, domain)


# ---------------------------------------------------------------------------
# Metric selectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricKind:
    """A thresholded confusion-matrix rate.

    ``label_condition`` is 1, 0, or None (unconditional); ``predicted_class``
    is the predicted side whose probability the rate measures.
    """

    name: str
    label_condition: int | None
    predicted_class: int

    def __post_init__(self):
        if self.label_condition not in (None, 0, 1):
            raise DatasetError("label_condition must be 0, 1 or None")
        if self.predicted_class not in (0, 1):
            raise DatasetError("predicted_class must be 0 or 1")

    @property
    def needs_labels(self) -> bool:
        return self.label_condition is not None

    def __str__(self) -> str:
        return self.name


PR = MetricKind("pr", None, 1)
TPR = MetricKind("tpr", 1, 1)
FPR = MetricKind("fpr", 0, 1)
NR = MetricKind("nr", None, 0)
TNR = MetricKind("tnr", 0, 0)
FNR = MetricKind("fnr", 1, 0)

METRICS_BY_NAME = {m.name: m for m in (PR, TPR, FPR, NR, TNR, FNR)}


def parse_metric(name: str) -> MetricKind:
    try:
        return METRICS_BY_NAME[name.strip().lower()]
    except KeyError:
        raise DatasetError(
            f"unknown metric '{name}' (choose from {', '.join(METRICS_BY_NAME)})"
        ) from None


@dataclass(frozen=True)
class MetricCombo:
    """Nonnegatively weighted combination of metric kinds."""

    terms: tuple[tuple[MetricKind, float], ...]

    def __post_init__(self):
        if not self.terms:
            raise DatasetError("metric combination needs at least one term")
        for kind, w in self.terms:
            if not (math.isfinite(w) and w >= 0):
                raise DatasetError(f"weight for {kind} must be finite and >= 0")

    @property
    def kinds(self) -> list[MetricKind]:
        return [k for k, _ in self.terms]

    @property
    def needs_labels(self) -> bool:
        return any(k.needs_labels for k, _ in self.terms)

    @property
    def single_kind(self) -> MetricKind | None:
        return self.terms[0][0] if len(self.terms) == 1 else None

    def __str__(self) -> str:
        return ",".join(f"{k.name}:{w:g}" for k, w in self.terms)


def parse_combo(text: str) -> MetricCombo:
    """Parse ``"tpr"`` or weighted forms like ``"tpr:1,fpr:0.5"``."""
    terms = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            name, _, w = part.partition(":")
            try:
                weight = float(w)
            except ValueError:
                raise DatasetError(f"bad metric weight in '{part}'") from None
        else:
            name, weight = part, 1.0
        terms.append((parse_metric(name), weight))
    return MetricCombo(tuple(terms))


# ---------------------------------------------------------------------------
# Label conditioning
# ---------------------------------------------------------------------------


def subset_by_label(ds: ScoredDataset, kind: MetricKind) -> ScoredDataset:
    """Rows matching the metric's label condition (all rows if unconditional).

    Raises if the condition needs labels the data does not carry, or if any
    group is left empty (its conditional distribution would be undefined).
    """
    if kind.label_condition is None:
        return ds
    if not ds.is_labeled:
        raise DatasetError(f"metric '{kind}' conditions on labels but the data is unlabeled")
    mask = ds.labels == kind.label_condition
    kept = np.bincount(ds.group_indices[mask], minlength=len(ds.groups))
    for g, c in zip(ds.groups, kept):
        if c == 0:
            raise DatasetError(f"group '{g}' is empty under Y={kind.label_condition}")
    return ScoredDataset(
        ds.scores[mask],
        [ds.groups[i] for i in ds.group_indices[mask]],
        ds.labels[mask],
        ds.domain,
        _min_rows=1,
    )


# ---------------------------------------------------------------------------
# CSV interface: header "score,group,label", label column optional
# ---------------------------------------------------------------------------


def load_csv(path, domain: ScoreDomain) -> ScoredDataset:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "score" not in reader.fieldnames or "group" not in reader.fieldnames:
            raise DatasetError(f"{path}: CSV must have 'score' and 'group' columns")
        has_label = "label" in reader.fieldnames
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            raw = (rec.get("score") or "").strip()
            if not raw:
                raise DatasetError(f"{path}:{lineno}: missing score")
            try:
                score = float(raw)
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: bad score '{raw}'") from None
            label = None
            if has_label:
                raw_label = (rec.get("label") or "").strip()
                if raw_label:
                    try:
                        label = int(raw_label)
                    except ValueError:
                        raise DatasetError(f"{path}:{lineno}: bad label '{raw_label}'") from None
            rows.append((score, (rec.get("group") or "").strip(), label))
    return validate_dataset(rows, domain)


def write_csv(ds: ScoredDataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        labeled = ds.is_labeled
        writer.writerow(["score", "group", "label"] if labeled else ["score", "group"])
        for s, g, l in zip(ds.scores, ds.group_indices, ds.labels):
            row = [repr(float(s)), ds.groups[g]]
            if labeled:
                row.append(int(l))
            writer.writerow(row)
