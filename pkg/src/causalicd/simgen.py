"""Benchmark generation: random latent-variable DAGs and linear-Gaussian
structural-equation sampling, seeded and reproducible.

Each run derives two independent RNG streams from the configured seed:
one for graph structure and weights, one for data, so CI counts and
datasets are independently reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .citest import Dataset
from .graphs import GraphError, MixedGraph, NodePartition


@dataclass
class GenConfig:
    n_total: int
    rho: float = 2.0
    seed: int = 0
    weight_range: tuple = (0.5, 2.0)

    def __post_init__(self):
        if self.n_total < 3:
            raise GraphError("need at least three nodes")
        if self.rho <= 0:
            raise GraphError("connectivity factor must be positive")
        lo, hi = self.weight_range
        if not 0 < lo <= hi:
            raise GraphError("bad weight magnitude range")


@dataclass
class Sem:
    """Linear-Gaussian model: node = sum(weight * parent) + N(0, 1)."""

    dag: MixedGraph
    partition: NodePartition
    weights: dict  # (parent, child) -> coefficient


def graph_rng(cfg: GenConfig):
    return np.random.default_rng(np.random.SeedSequence([cfg.seed, 0]))


def data_rng(cfg: GenConfig):
    return np.random.default_rng(np.random.SeedSequence([cfg.seed, 1]))


def _connected(adj):
    n = adj.shape[0]
    und = adj | adj.T
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(und[v]):
            if w not in seen:
                seen.add(int(w))
                stack.append(int(w))
    return len(seen) == n


def random_dag(cfg: GenConfig, rng=None):
    """Upper-triangular Bernoulli(rho/(n-1)) DAG with a latent split.

    Resamples until the undirected skeleton is connected and at least one
    parentless node has two or more children; the latent set is a
    uniformly chosen half (rounded down, minimum one) of those nodes.
    """
    rng = rng if rng is not None else graph_rng(cfg)
    n = cfg.n_total
    p = cfg.rho / (n - 1)
    while True:
        adj = np.triu(rng.random((n, n)) < p, k=1)
        if not _connected(adj):
            continue
        parentless = ~adj.any(axis=0)
        candidates = [v for v in range(n)
                      if parentless[v] and adj[v].sum() >= 2]
        if not candidates:
            continue
        break
    k_latent = max(1, len(candidates) // 2)
    latent = sorted(rng.choice(candidates, size=k_latent, replace=False).tolist())
    observed = sorted(set(range(n)) - set(latent))
    dag = MixedGraph.from_directed_edges(n, zip(*np.nonzero(adj)))
    return dag, NodePartition(observed=observed, latent=latent)


def make_sem(dag: MixedGraph, partition: NodePartition, cfg: GenConfig,
             rng=None) -> Sem:
    """Draw edge weights uniformly over +/-[lo, hi], sign by fair coin."""
    rng = rng if rng is not None else graph_rng(cfg)
    lo, hi = cfg.weight_range
    weights = {}
    for child in range(dag.num_nodes):
        for parent in dag.parents(child):
            mag = rng.uniform(lo, hi)
            sign = 1.0 if rng.random() < 0.5 else -1.0
            weights[(parent, child)] = sign * mag
    return Sem(dag=dag, partition=partition, weights=weights)


def sample_sem(sem: Sem, n_samples: int, rng) -> Dataset:
    """Ancestral sampling in topological order; latent columns dropped."""
    if n_samples < 1:
        raise GraphError("need at least one sample")
    dag = sem.dag
    order = dag.topological_order()
    values = np.zeros((n_samples, dag.num_nodes))
    for v in order:
        noise = rng.standard_normal(n_samples)
        mean = np.zeros(n_samples)
        for p in dag.parents(v):
            mean += sem.weights[(p, v)] * values[:, p]
        values[:, v] = mean + noise
    obs = list(sem.partition.observed)
    return Dataset(values[:, obs], labels=[f"V{v}" for v in obs])


def partition_sidecar_text(sem: Sem) -> str:
    """Plain-text sidecar listing the partition and edge weights."""
    lines = ["observed: " + " ".join(map(str, sem.partition.observed)),
             "latent: " + " ".join(map(str, sem.partition.latent)),
             "selection: " + " ".join(map(str, sem.partition.selection))]
    for (p, c), w in sorted(sem.weights.items()):
        lines.append(f"weight {p} {c} {w!r}")
    return "\n".join(lines) + "\n"
