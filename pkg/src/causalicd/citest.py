"""Conditional-independence decision sources.

Two testers share one counted, cached base: a perfect oracle backed by
d-separation in the true DAG, and a Fisher-z partial-correlation test
for linear-Gaussian data.  Counters track the number of distinct
statistical evaluations per conditioning-set size; cache hits are not
recounted (the cache can be disabled to measure raw invocations).
"""

from __future__ import annotations

import csv
import math
from collections import Counter

import numpy as np
from scipy.stats import norm

from .graphs import MixedGraph, NodePartition
from .separation import d_separated


class CiError(ValueError):
    pass


class CiTester:
    """Base CI tester with symmetric caching and per-size counters."""

    def __init__(self, use_cache=True):
        self.use_cache = use_cache
        self._cache = {}
        self._counts = Counter()

    def independent(self, x: int, y: int, z=()) -> bool:
        z = frozenset(z)
        if x == y or x in z or y in z:
            raise CiError("degenerate CI query")
        key = (min(x, y), max(x, y), z)
        if self.use_cache and key in self._cache:
            return self._cache[key]
        result = self._decide(key[0], key[1], z)
        self._counts[len(z)] += 1
        if self.use_cache:
            self._cache[key] = result
        return result

    def _decide(self, x, y, z):
        raise NotImplementedError

    def counters_snapshot(self):
        """Immutable copy of the per-size evaluation counts."""
        return dict(self._counts)

    def total_tests(self):
        return sum(self._counts.values())

    def reset_counters(self):
        self._counts.clear()


class OracleCiTester(CiTester):
    """Perfect oracle answering d-separation in the true DAG.

    Queries are posed in observed-index space (positions within the
    sorted observed set); the selection set is always added to the
    conditioning set internally.
    """

    def __init__(self, dag: MixedGraph, partition: NodePartition, use_cache=True):
        super().__init__(use_cache)
        dag.validate_dag()
        partition.validate_for(dag)
        self.dag = dag
        self.partition = partition
        self._obs = list(partition.observed)
        self._sel = frozenset(partition.selection)

    @property
    def num_observed(self):
        return len(self._obs)

    def _decide(self, x, y, z):
        try:
            dx, dy = self._obs[x], self._obs[y]
            dz = {self._obs[v] for v in z}
        except IndexError:
            raise CiError("query node outside the observed set")
        return d_separated(self.dag, dx, dy, dz | self._sel)


class Dataset:
    """Sample matrix (rows = samples) with one column per observed node."""

    def __init__(self, values, labels=None):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or values.shape[0] < 1:
            raise CiError("dataset must be a non-empty 2-D matrix")
        if np.isnan(values).any():
            raise CiError("dataset may not contain missing values")
        self.values = values
        self.labels = list(labels) if labels is not None else [
            f"V{i}" for i in range(values.shape[1])
        ]

    @property
    def num_samples(self):
        return self.values.shape[0]

    @property
    def num_vars(self):
        return self.values.shape[1]

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.labels)
            w.writerows([repr(float(v)) for v in row] for row in self.values)

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if len(rows) < 2:
            raise CiError("CSV must have a header and at least one sample row")
        return cls(np.array(rows[1:], dtype=float), rows[0])


def fisher_z_statistic(corr, x, y, z, n_samples):
    """Fisher-z statistic for partial correlation of x,y given z.

    Returns (zstat, singular_flag).  The partial correlation comes from
    inverting the correlation submatrix; on singularity a pseudo-inverse
    is tried and the result flagged.
    """
    idx = [x, y] + sorted(z)
    sub = corr[np.ix_(idx, idx)]
    singular = False
    try:
        prec = np.linalg.inv(sub)
    except np.linalg.LinAlgError:
        prec = np.linalg.pinv(sub)
        singular = True
    denom = math.sqrt(abs(prec[0, 0] * prec[1, 1]))
    if denom == 0 or not np.isfinite(denom):
        return math.inf, True
    rho = -prec[0, 1] / denom
    rho = min(max(rho, -1.0 + 1e-12), 1.0 - 1e-12)
    dof = n_samples - len(z) - 3
    zstat = 0.5 * math.log((1 + rho) / (1 - rho)) * math.sqrt(dof)
    return zstat, singular


class FisherZCiTester(CiTester):
    """Partial-correlation CI test for linear-Gaussian data.

    Independence is declared when |zstat| <= Phi^-1(1 - alpha/2).  A
    singular correlation submatrix is reported as dependence and flagged
    on ``singular_queries``.
    """

    def __init__(self, dataset: Dataset, alpha=0.01, use_cache=True):
        super().__init__(use_cache)
        if not 0 < alpha < 1:
            raise CiError("alpha must be in (0, 1)")
        self.dataset = dataset
        self.alpha = alpha
        self.corr = np.corrcoef(dataset.values, rowvar=False)
        self.singular_queries = []

    @property
    def num_observed(self):
        return self.dataset.num_vars

    def _decide(self, x, y, z):
        n = self.dataset.num_samples
        if n <= len(z) + 3:
            raise CiError(
                f"need more than |z|+3 = {len(z) + 3} samples, have {n}"
            )
        zstat, singular = fisher_z_statistic(self.corr, x, y, z, n)
        if singular:
            self.singular_queries.append((x, y, frozenset(z)))
            return False
        return abs(zstat) <= norm.ppf(1 - self.alpha / 2)
