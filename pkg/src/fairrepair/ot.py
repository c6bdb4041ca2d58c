"""Closed-form univariate optimal transport on empirical distributions.

All distributions here live on normalized scores in [0, 1].  An empirical
distribution is a weighted set of atoms; its CDF is a right-continuous step
function and its quantile function is the generalized inverse
F^-1(a) = inf{t : F(t) >= a}.  In one dimension that is enough for exact
Wasserstein distances, barycenters, and monotone transport maps: the distance
is an integral of the quantile difference, the barycenter's quantile function
is the weighted average of the inputs' quantile functions, and the transport
map from mu to nu is F_nu^-1 o F_mu.
"""

from __future__ import annotations

import numpy as np

from .errors import DatasetError

__all__ = [
    "EmpiricalDistribution",
    "TransportMap",
    "wasserstein",
    "wasserstein_uniform",
    "barycenter_quantile",
    "transport_to_barycenter",
]

_WEIGHT_TOL = 1e-12


class EmpiricalDistribution:
    """Sorted atoms in [0, 1] with positive weights summing to 1.

    Duplicate atom values are merged (weights summed) so the CDF and quantile
    functions are well defined.  Instances are immutable.
    """

    __slots__ = ("atoms", "weights", "_cumw")

    def __init__(self, atoms, weights):
        atoms = np.asarray(atoms, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if atoms.ndim != 1 or atoms.shape != weights.shape:
            raise DatasetError("atoms and weights must be equal-length 1-d arrays")
        if atoms.size == 0:
            raise DatasetError("empirical distribution needs at least one atom")
        if not np.all(np.isfinite(atoms)):
            raise DatasetError("atoms must be finite")
        if atoms.min() < -_WEIGHT_TOL or atoms.max() > 1 + _WEIGHT_TOL:
            raise DatasetError("atoms must lie in [0, 1] (normalized scores)")
        if np.any(weights <= 0):
            raise DatasetError("weights must be positive")
        total = weights.sum()
        if abs(total - 1.0) > 1e-9:
            raise DatasetError(f"weights must sum to 1, got {total}")

        order = np.argsort(atoms, kind="stable")
        atoms = np.clip(atoms[order], 0.0, 1.0)
        weights = weights[order] / total

        # Merge exact ties.
        keep = np.empty(atoms.size, dtype=bool)
        keep[0] = True
        np.not_equal(atoms[1:], atoms[:-1], out=keep[1:])
        idx = np.cumsum(keep) - 1
        merged_atoms = atoms[keep]
        merged_weights = np.zeros(merged_atoms.size)
        np.add.at(merged_weights, idx, weights)

        cumw = np.cumsum(merged_weights)
        cumw[-1] = 1.0  # kill cumulative rounding at the top

        self.atoms = merged_atoms
        self.weights = merged_weights
        self._cumw = cumw
        for a in (self.atoms, self.weights, self._cumw):
            a.flags.writeable = False

    @classmethod
    def from_samples(cls, values, weights=None) -> "EmpiricalDistribution":
        """Distribution of a sample (uniform weights unless given).

        Requires at least two sample points; ties may still merge to a single
        atom (a legitimate point mass).
        """
        values = np.asarray(values, dtype=float)
        if values.size < 2:
            raise DatasetError("need at least 2 sample points")
        if weights is None:
            weights = np.full(values.size, 1.0 / values.size)
        return cls(values, weights)

    @property
    def n_atoms(self) -> int:
        return self.atoms.size

    @property
    def breakpoints(self) -> np.ndarray:
        """Cumulative weights; quantile() is constant on (cumw[i-1], cumw[i]]."""
        return self._cumw

    def cdf(self, x):
        """P(X <= x); right-continuous step function."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.atoms, x, side="right")
        padded = np.concatenate(([0.0], self._cumw))
        out = padded[idx]
        return float(out) if out.ndim == 0 else out

    def quantile(self, a):
        """Generalized inverse inf{t : F(t) >= a} for a in [0, 1].

        a = 0 returns the smallest atom (infimum over the support).
        """
        a = np.asarray(a, dtype=float)
        if np.any(a < -_WEIGHT_TOL) or np.any(a > 1 + _WEIGHT_TOL):
            raise DatasetError("quantile level must lie in [0, 1]")
        idx = np.searchsorted(self._cumw, np.clip(a, 0.0, 1.0), side="left")
        idx = np.minimum(idx, self.atoms.size - 1)
        out = self.atoms[idx]
        return float(out) if out.ndim == 0 else out

    def mean(self) -> float:
        return float(self.atoms @ self.weights)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EmpiricalDistribution)
            and np.array_equal(self.atoms, other.atoms)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self) -> str:
        return f"EmpiricalDistribution({self.n_atoms} atoms on [{self.atoms[0]:g}, {self.atoms[-1]:g}])"


def _merged_breakpoints(dists) -> np.ndarray:
    grids = [d.breakpoints for d in dists]
    return np.union1d(grids[0], np.concatenate(grids[1:])) if len(grids) > 1 else grids[0]


def wasserstein(d1: EmpiricalDistribution, d2: EmpiricalDistribution, p: float = 1.0) -> float:
    """p-th power of the p-Wasserstein distance, W_p^p.

    Computed exactly as the integral over [0, 1] of |F1^-1 - F2^-1|^p: both
    quantile functions are constant between consecutive merged cumulative
    weights, so the integral is a finite sum over that partition.
    """
    if p < 1:
        raise DatasetError("order p must be >= 1")
    q = _merged_breakpoints((d1, d2))
    seg = np.diff(q, prepend=0.0)
    diff = np.abs(d1.quantile(q) - d2.quantile(q))
    return float(seg @ diff**p)


def wasserstein_uniform(x, y, p: float = 1.0) -> float:
    """W_p^p for two equal-size uniformly weighted samples.

    Fast path: with matched sample sizes the optimal coupling pairs order
    statistics, so W_p^p is the mean p-th power of sorted differences.  Agrees
    with :func:`wasserstein` to within float round-off.
    """
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise DatasetError("fast path needs equal sample sizes")
    if p < 1:
        raise DatasetError("order p must be >= 1")
    return float(np.mean(np.abs(x - y) ** p))


def _check_barycenter_args(dists, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if len(dists) < 2:
        raise DatasetError("barycenter needs at least 2 distributions")
    if w.shape != (len(dists),):
        raise DatasetError("one weight per distribution required")
    if np.any(w < 0):
        raise DatasetError("barycenter weights must be nonnegative")
    if abs(w.sum() - 1.0) > 1e-9:
        raise DatasetError(f"barycenter weights must sum to 1, got {w.sum()}")
    return w


def barycenter_quantile(dists, w, q):
    """Quantile of the weighted barycenter: sum_i w_i F_i^-1(q)."""
    w = _check_barycenter_args(dists, w)
    q = np.asarray(q, dtype=float)
    out = np.zeros(q.shape)
    for wi, d in zip(w, dists):
        if wi != 0.0:
            out = out + wi * d.quantile(q)
    return float(out) if out.ndim == 0 else out


class TransportMap:
    """Monotone rearrangement of a source distribution onto a target.

    Composes the target's quantile evaluation with the source CDF:
    T(x) = Q_target(F_source(x)); values stay in [0, 1].
    """

    __slots__ = ("source", "target_quantile")

    def __init__(self, source: EmpiricalDistribution, target_quantile):
        self.source = source
        self.target_quantile = target_quantile

    @classmethod
    def to_distribution(cls, source, target: EmpiricalDistribution) -> "TransportMap":
        return cls(source, target.quantile)

    @classmethod
    def to_barycenter(cls, dists, w, source_index: int) -> "TransportMap":
        if not 0 <= source_index < len(dists):
            raise DatasetError(f"source_index {source_index} out of range")
        w = _check_barycenter_args(dists, w)
        return cls(dists[source_index], lambda q: barycenter_quantile(dists, w, q))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < -_WEIGHT_TOL) or np.any(x > 1 + _WEIGHT_TOL):
            raise DatasetError("transport input must lie in [0, 1]")
        return self.target_quantile(self.source.cdf(x))


def transport_to_barycenter(dists, w, source_index: int, x):
    """Monotone map sending source mass at x onto the weighted barycenter.

    Evaluates F_beta^-1(F_source(x)).  Out-of-sample x below (above) every
    source atom maps to the barycenter's minimum (maximum) quantile.
    """
    return TransportMap.to_barycenter(dists, w, source_index)(x)
