"""Barycenter repair plans: fit, shift, partial application, serialization.

A plan stores each group's fitted (unconditional) score distribution and the
group proportions.  Full repair transports a score onto the proportion-
weighted barycenter of all group distributions; partial repair moves it a
fraction lambda of the way along that straight-line path.  Fitting needs no
labels; labels only ever enter through the choice of lambda.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataset import ScoreDomain, ScoredDataset
from .errors import DatasetError
from .ot import EmpiricalDistribution, barycenter_quantile

__all__ = ["RepairPlan", "fit_plan", "load_plan", "save_plan"]

PLAN_FORMAT_VERSION = 1


@dataclass(frozen=True)
class RepairPlan:
    """Fitted per-group quantile tables, proportions, and a lambda per group."""

    domain: ScoreDomain
    groups: tuple[str, ...]
    group_weights: np.ndarray
    fitted: dict[str, EmpiricalDistribution]
    lambdas: dict[str, float]

    def __post_init__(self):
        w = np.asarray(self.group_weights, dtype=float)
        if len(self.groups) < 2:
            raise DatasetError("repair needs at least 2 groups")
        if w.shape != (len(self.groups),) or abs(w.sum() - 1.0) > 1e-9 or np.any(w < 0):
            raise DatasetError("group weights must be nonnegative and sum to 1")
        for g in self.groups:
            if g not in self.fitted:
                raise DatasetError(f"group '{g}' has no fitted distribution")
            lam = self.lambdas.get(g)
            if lam is None or not 0.0 <= lam <= 1.0:
                raise DatasetError(f"lambda for group '{g}' must lie in [0, 1]")
        object.__setattr__(self, "group_weights", w)

    # -- core maps (x in original score units) ------------------------------

    def _group_pos(self, group: str) -> int:
        try:
            return self.groups.index(group)
        except ValueError:
            raise DatasetError(f"group '{group}' not in plan") from None

    def total_repair_score(self, group: str, x):
        """Fully repaired score: transport of x onto the group barycenter."""
        pos = self._group_pos(group)
        z = self.domain.normalize(x)
        if np.any(z < 0) or np.any(z > 1):
            raise DatasetError("score outside plan domain")
        dists = [self.fitted[g] for g in self.groups]
        q = dists[pos].cdf(z)
        return self.domain.denormalize(barycenter_quantile(dists, self.group_weights, q))

    def shift(self, group: str, x):
        """Signed adjustment t(x) = fully-repaired(x) - x; may be negative."""
        return self.total_repair_score(group, x) - np.asarray(x, dtype=float)

    def repaired_score(self, group: str, x, lam: float | None = None):
        """Partial repair x + lambda * t(x); lambda defaults to the plan's."""
        lam = self.lambdas[group] if lam is None else float(lam)
        if not 0.0 <= lam <= 1.0:
            raise DatasetError("lambda must lie in [0, 1]")
        out = np.asarray(x, dtype=float) + lam * self.shift(group, x)
        return np.clip(out, self.domain.lo, self.domain.hi)

    def apply(self, ds: ScoredDataset) -> ScoredDataset:
        """Repair every row's score with its group's lambda; labels untouched."""
        unknown = set(ds.groups) - set(self.groups)
        if unknown:
            raise DatasetError(f"dataset groups not in plan: {sorted(unknown)}")
        if ds.domain != self.domain:
            raise DatasetError(
                f"dataset domain [{ds.domain.lo}, {ds.domain.hi}] does not match "
                f"plan domain [{self.domain.lo}, {self.domain.hi}]"
            )
        new_scores = np.array(ds.scores)
        for g in ds.groups:
            mask = ds.group_indices == ds.groups.index(g)
            new_scores[mask] = self.repaired_score(g, ds.scores[mask])
        return ds.replace_scores(new_scores)

    def repaired_distribution(self, group: str, lam: float) -> EmpiricalDistribution:
        """The group's fitted atoms pushed through the lambda-repair map.

        Normalized units.  lambda = 0 returns the fitted distribution;
        lambda = 1 is the group's image on the barycenter.
        """
        if not 0.0 <= lam <= 1.0:
            raise DatasetError("lambda must lie in [0, 1]")
        d = self.fitted[self.groups[self._group_pos(group)]]
        dists = [self.fitted[g] for g in self.groups]
        targets = barycenter_quantile(dists, self.group_weights, d.breakpoints)
        atoms = (1.0 - lam) * d.atoms + lam * np.asarray(targets)
        return EmpiricalDistribution(np.clip(atoms, 0.0, 1.0), d.weights)

    def with_lambdas(self, lambdas: dict[str, float]) -> "RepairPlan":
        merged = dict(self.lambdas)
        merged.update(lambdas)
        return RepairPlan(self.domain, self.groups, self.group_weights, self.fitted, merged)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format_version": PLAN_FORMAT_VERSION,
            "domain": {"lo": self.domain.lo, "hi": self.domain.hi},
            "groups": list(self.groups),
            "group_weights": [float(w) for w in self.group_weights],
            "fitted": {
                g: {
                    "atoms": [float(a) for a in d.atoms],
                    "weights": [float(w) for w in d.weights],
                }
                for g, d in self.fitted.items()
            },
            "lambdas": {g: float(self.lambdas[g]) for g in self.groups},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RepairPlan":
        version = data.get("format_version")
        if version != PLAN_FORMAT_VERSION:
            raise DatasetError(f"unsupported plan format_version {version!r}")
        domain = ScoreDomain(float(data["domain"]["lo"]), float(data["domain"]["hi"]))
        fitted = {
            g: EmpiricalDistribution(spec["atoms"], spec["weights"])
            for g, spec in data["fitted"].items()
        }
        return cls(
            domain,
            tuple(data["groups"]),
            np.asarray(data["group_weights"], dtype=float),
            fitted,
            {g: float(v) for g, v in data["lambdas"].items()},
        )


def fit_plan(ds: ScoredDataset, lambdas: dict[str, float] | float = 1.0) -> RepairPlan:
    """Fit per-group unconditional distributions; proportions become weights.

    Label-free.  The default lambda of 1 gives full repair; solvers typically
    replace it afterwards via :meth:`RepairPlan.with_lambdas`.
    """
    if len(ds.groups) < 2:
        raise DatasetError("need at least 2 groups to fit a repair plan")
    fitted = {
        g: EmpiricalDistribution.from_samples(ds.domain.normalize(ds.group_scores(g)))
        for g in ds.groups
    }
    if not isinstance(lambdas, dict):
        lambdas = {g: float(lambdas) for g in ds.groups}
    return RepairPlan(ds.domain, ds.groups, ds.proportions, fitted, lambdas)


def save_plan(plan: RepairPlan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_plan(path) -> RepairPlan:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{path}: not valid plan JSON ({exc})") from None
    return RepairPlan.from_dict(data)
