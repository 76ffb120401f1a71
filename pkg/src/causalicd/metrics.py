"""Structural accuracy measurements against the ground-truth PAG."""

from __future__ import annotations

from dataclasses import dataclass

from .citest import OracleCiTester
from .fci import fci
from .graphs import GraphError, MixedGraph, NodePartition


@dataclass(frozen=True)
class SkeletonConfusion:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def fpr(self):
        return self.fp / (self.fp + self.tn) if self.fp + self.tn else 0.0

    @property
    def fnr(self):
        return self.fn / (self.fn + self.tp) if self.fn + self.tp else 0.0

    @property
    def f1(self):
        denom = 2 * self.tp + self.fp + self.fn
        return 2 * self.tp / denom if denom else 1.0


def ground_truth_pag(dag: MixedGraph, partition: NodePartition) -> MixedGraph:
    """Completed PAG of the true equivalence class, via a perfect oracle."""
    oracle = OracleCiTester(dag, partition)
    pag, _ = fci(oracle, oracle.num_observed)
    return pag


def skeleton_confusion(learned: MixedGraph, truth: MixedGraph) -> SkeletonConfusion:
    if learned.num_nodes != truth.num_nodes:
        raise GraphError("node-count mismatch")
    tp = fp = fn = tn = 0
    for a in range(truth.num_nodes):
        for b in range(a + 1, truth.num_nodes):
            in_l, in_t = learned.has_edge(a, b), truth.has_edge(a, b)
            if in_l and in_t:
                tp += 1
            elif in_l:
                fp += 1
            elif in_t:
                fn += 1
            else:
                tn += 1
    return SkeletonConfusion(tp, fp, fn, tn)


def orientation_accuracy(learned: MixedGraph, truth: MixedGraph) -> float:
    """Fraction of true-graph edge-end marks reproduced exactly.

    The denominator is twice the number of true edges; a missing edge
    scores both of its marks wrong.  Circle marks count as marks.
    """
    if learned.num_nodes != truth.num_nodes:
        raise GraphError("node-count mismatch")
    total = correct = 0
    for a, b in truth.edges():
        total += 2
        if learned.has_edge(a, b):
            if learned.marks[a, b] == truth.marks[a, b]:
                correct += 1
            if learned.marks[b, a] == truth.marks[b, a]:
                correct += 1
    return correct / total if total else 1.0
