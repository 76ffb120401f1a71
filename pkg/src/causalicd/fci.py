"""Two-stage FCI baseline sharing the CI tester and orientation engine.

Stage 1 is the adjacency-limited skeleton search plus v-structures;
stage 2 prunes surviving edges by testing subsets of each endpoint's
collider-or-triangle reachability set.  Used for output-equivalence
checks and CI-count comparisons.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .graphs import Mark, MixedGraph, SepsetMap
from .orientation import (RuleSetMode, apply_rules, orient_v_structures,
                          reset_to_circles)


@dataclass
class FciTrace:
    """Per-stage CI accounting plus the final graph."""

    stage1_counts: dict = field(default_factory=dict)
    stage2_counts: dict = field(default_factory=dict)
    pag: MixedGraph = None

    def total_counts(self):
        out = dict(self.stage1_counts)
        for k, v in self.stage2_counts.items():
            out[k] = out.get(k, 0) + v
        return out

    def total(self):
        return sum(self.total_counts().values())


def pc_skeleton(ci, num_observed: int):
    """Level-wise skeleton search over adjacency-limited conditioning sets.

    At level k each surviving edge (X, Y) is tested against the size-k
    subsets of the current adjacencies of X and then of Y; the edge is
    removed (and the set recorded) on the first independence found.
    """
    if num_observed < 2:
        raise ValueError("need at least two observed nodes")
    g = MixedGraph.complete(num_observed, Mark.CIRCLE)
    sepsets = SepsetMap()
    k = 0
    while True:
        any_testable = False
        for x, y in g.edges():
            if not g.has_edge(x, y):
                continue
            removed = False
            for side, other in ((x, y), (y, x)):
                adj = [v for v in g.neighbors(side) if v != other]
                if len(adj) < k:
                    continue
                any_testable = True
                for subset in combinations(sorted(adj), k):
                    if ci.independent(x, y, subset):
                        g.remove_edge(x, y)
                        sepsets.record(x, y, subset)
                        removed = True
                        break
                if removed:
                    break
        if not any_testable:
            break
        k += 1
    return g, sepsets


def possible_d_sep(g: MixedGraph, a: int, b: int = None) -> set:
    """Nodes reachable from ``a`` along collider-or-triangle paths.

    Computed on a v-structure-oriented graph.  The other tested endpoint
    plays no role in reachability; callers exclude it from candidate
    subsets.
    """
    out = set()
    queue = deque()
    for v in g.neighbors(a):
        out.add(v)
        queue.append((a, v))
    seen = set()
    while queue:
        prev, cur = queue.popleft()
        if (prev, cur) in seen:
            continue
        seen.add((prev, cur))
        for nxt in g.neighbors(cur):
            if nxt == prev or nxt == a:
                continue
            collider = (g.marks[prev, cur] == int(Mark.ARROW)
                        and g.marks[nxt, cur] == int(Mark.ARROW))
            if collider or g.is_triangle(prev, cur, nxt):
                out.add(nxt)
                queue.append((cur, nxt))
    return out


def fci(ci, num_observed: int, strict_orientation: bool = True):
    """Full two-stage run; returns (final PAG, trace)."""
    before = ci.counters_snapshot()

    skel, sepsets = pc_skeleton(ci, num_observed)
    g1 = orient_v_structures(skel, sepsets)
    after_stage1 = ci.counters_snapshot()

    g2 = g1.copy()
    for x, y in g2.edges():
        if not g2.has_edge(x, y):
            continue
        pds_x = sorted(possible_d_sep(g2, x) - {x, y})
        pds_y = sorted(possible_d_sep(g2, y) - {x, y})
        tried = set()
        removed = False
        max_k = max(len(pds_x), len(pds_y))
        for k in range(max_k + 1):
            for pds in (pds_x, pds_y):
                if k > len(pds):
                    continue
                for subset in combinations(pds, k):
                    fs = frozenset(subset)
                    if fs in tried:
                        continue
                    tried.add(fs)
                    if ci.independent(x, y, fs):
                        g2.remove_edge(x, y)
                        sepsets.record(x, y, fs)
                        removed = True
                        break
                if removed:
                    break
            if removed:
                break
    after_stage2 = ci.counters_snapshot()

    final = reset_to_circles(g2)
    final = orient_v_structures(final, sepsets)
    final = apply_rules(final, RuleSetMode.COMPLETE, sepsets,
                        strict=strict_orientation)

    trace = FciTrace(
        stage1_counts=_delta(before, after_stage1),
        stage2_counts=_delta(after_stage1, after_stage2),
        pag=final,
    )
    return final, trace


def _delta(before, after):
    out = {}
    for size, count in after.items():
        d = count - before.get(size, 0)
        if d:
            out[size] = d
    return out
