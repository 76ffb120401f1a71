"""Anytime iterative discovery of partial ancestral graphs.

Starting from a complete circle-marked graph, iteration r removes every
edge whose endpoints are separated by a candidate set of size exactly r
harvested from trees of collider-or-triangle paths rooted at the tested
endpoints, then re-orients.  Interrupting after any iteration yields a
sound (if less informative) graph.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .graphs import Mark, MixedGraph, SepsetMap
from .orientation import (RuleSetMode, apply_rules, orient_v_structures,
                          reset_to_circles)


@dataclass
class PdsTreeEntry:
    node: int
    parent: "PdsTreeEntry | None"
    depth: int


@dataclass
class PdsTree:
    """Tree of collider-or-triangle paths from ``root``, with the other
    tested endpoint excluded and depth capped at the search radius."""

    root: int
    excluded: int
    max_depth: int
    entries: list = field(default_factory=list)

    def reachable(self):
        """Map node -> minimum depth over all tree entries (root omitted)."""
        out = {}
        for e in self.entries:
            if e.node == self.root:
                continue
            if e.node not in out or e.depth < out[e.node]:
                out[e.node] = e.depth
        return out


@dataclass(frozen=True)
class CandidateSet:
    """Size-r conditioning-set candidate with its ordering score."""

    nodes: frozenset
    score: float
    origin: int


@dataclass
class IcdConfig:
    n: int = None  # maximum radius; defaults to |O| - 2 at run time
    use_condition_3: bool = True
    ordering: str = "eq1_heuristic"  # or "lexicographic"
    strict_orientation: bool = True
    snapshot_dir: str = None

    def __post_init__(self):
        if self.ordering not in ("eq1_heuristic", "lexicographic"):
            raise ValueError(f"unknown ordering {self.ordering!r}")


def _pds_step_ok(g, prev, cur, nxt):
    """The triple <prev, cur, nxt> keeps the path a collider-or-triangle
    path: cur is a collider, or the triple forms a triangle."""
    return ((g.marks[prev, cur] == int(Mark.ARROW)
             and g.marks[nxt, cur] == int(Mark.ARROW))
            or g.is_triangle(prev, cur, nxt))


def build_pds_tree(g: MixedGraph, root: int, excluded: int, max_depth: int) -> PdsTree:
    """Breadth-first expansion of collider-or-triangle paths from root.

    Children of the root are exactly its graph neighbors other than the
    excluded node (a single edge always qualifies).  Deeper expansion
    from entry U with tree parent P adds neighbor W whenever W is not the
    excluded node, differs from P, and <P, U, W> is collider-or-triangle.
    """
    if root == excluded:
        raise ValueError("root and excluded endpoint must differ")
    tree = PdsTree(root=root, excluded=excluded, max_depth=max_depth)
    root_entry = PdsTreeEntry(root, None, 0)
    tree.entries.append(root_entry)
    if max_depth < 1:
        return tree
    queue = deque()
    for w in g.neighbors(root):
        if w == excluded:
            continue
        e = PdsTreeEntry(w, root_entry, 1)
        tree.entries.append(e)
        queue.append(e)
    while queue:
        entry = queue.popleft()
        if entry.depth >= max_depth:
            continue
        p = entry.parent.node
        u = entry.node
        for w in g.neighbors(u):
            if w == excluded or w == p or w == root:
                continue
            if _pds_step_ok(g, p, u, w):
                child = PdsTreeEntry(w, entry, entry.depth + 1)
                tree.entries.append(child)
                queue.append(child)
    return tree


def _pds_reachable(g, root, excluded, max_depth):
    """Minimum collider-or-triangle path depth per reachable node.

    Breadth-first search over (previous, current) edge states; agrees
    with ``build_pds_tree(...).reachable()`` without materializing the
    tree.  Interior nodes may optionally be restricted to ``allowed``.
    """
    depth = {}
    queue = deque()
    seen = set()
    for w in g.neighbors(root):
        if w == excluded:
            continue
        depth.setdefault(w, 1)
        queue.append((root, w, 1))
        seen.add((root, w))
    while queue:
        prev, cur, d = queue.popleft()
        if d >= max_depth:
            continue
        for nxt in g.neighbors(cur):
            if nxt == excluded or nxt == prev or nxt == root:
                continue
            if (cur, nxt) in seen:
                continue
            if _pds_step_ok(g, prev, cur, nxt):
                seen.add((cur, nxt))
                depth.setdefault(nxt, d + 1)
                queue.append((cur, nxt, d + 1))
    return depth


def _closure_path_exists(g, root, excluded, target, members, max_len):
    """Collider-or-triangle path root -> target of length <= max_len whose
    interior nodes all lie in ``members`` (target itself included)."""
    if g.has_edge(root, target):
        return True
    allowed = set(members)
    seen = set()
    stack = deque((root, t, 1) for t in g.neighbors(root)
                  if t != excluded and t in allowed)
    while stack:
        prev, cur, depth = stack.popleft()
        if cur == target:
            return True
        if depth >= max_len or (prev, cur) in seen:
            continue
        seen.add((prev, cur))
        for nxt in g.neighbors(cur):
            if nxt == excluded or nxt == prev or nxt == root or nxt not in allowed:
                continue
            if _pds_step_ok(g, prev, cur, nxt):
                stack.append((cur, nxt, depth + 1))
    return False


def _candidates_from_root(g, root, excluded, r):
    """All closure-valid size-r subsets reachable from one root, scored by
    the mean of members' minimum path depths."""
    depth = _pds_reachable(g, root, excluded, r)
    universe = sorted(depth)
    out = {}
    for subset in combinations(universe, r):
        members = frozenset(subset)
        if all(_closure_path_exists(g, root, excluded, t, members, r)
               for t in subset):
            score = sum(depth[t] for t in subset) / r
            out[members] = score
    return out


def enumerate_icd_sep(g: MixedGraph, a: int, b: int, r: int,
                      cfg: IcdConfig) -> list:
    """Ordered candidate conditioning sets of size r for the edge a--b.

    Harvested from trees rooted at both endpoints, deduplicated (keeping
    the smaller score), optionally filtered by the possible-ancestor
    condition, and sorted by score with lexicographic tie-breaks.
    """
    if r == 0:
        return [CandidateSet(frozenset(), 0.0, a)]
    scored = {}
    for root, other in ((a, b), (b, a)):
        for members, score in _candidates_from_root(g, root, other, r).items():
            if members not in scored or score < scored[members][0]:
                scored[members] = (score, root)
    if cfg.use_condition_3:
        poss = g.possible_ancestors_of(a) | g.possible_ancestors_of(b)
        scored = {m: v for m, v in scored.items() if m <= poss}
    candidates = [CandidateSet(m, s, o) for m, (s, o) in scored.items()]
    if cfg.ordering == "eq1_heuristic":
        candidates.sort(key=lambda c: (c.score, tuple(sorted(c.nodes))))
    else:
        candidates.sort(key=lambda c: tuple(sorted(c.nodes)))
    return candidates


def icd_iteration(g: MixedGraph, sepsets: SepsetMap, r: int, ci,
                  cfg: IcdConfig):
    """One refinement pass with conditioning sets of size r.

    Edges are visited in lexicographic order; removals take effect
    immediately, so later edges enumerate candidates against the pruned
    graph.  Returns (graph, sepsets, done) where done means no edge
    produced any candidate.
    """
    g = g.copy()
    sepsets = sepsets.copy()
    done = True
    for x, y in g.edges():
        if not g.has_edge(x, y):
            continue  # removed earlier in this same pass
        candidates = enumerate_icd_sep(g, x, y, r, cfg)
        if candidates:
            done = False
        for cand in candidates:
            if ci.independent(x, y, cand.nodes):
                g.remove_edge(x, y)
                sepsets.record(x, y, cand.nodes)
                break
    g = reset_to_circles(g)
    g = orient_v_structures(g, sepsets)
    g = apply_rules(g, RuleSetMode.ANYTIME, sepsets, strict=cfg.strict_orientation)
    return g, sepsets, done


def icd(ci, num_observed: int, cfg: IcdConfig = None):
    """Full anytime run: iterate r = 0..n until no candidates remain.

    Returns (final PAG, separating-set record, iterations executed).
    The final graph is re-oriented with the complete rule set.
    """
    if num_observed < 2:
        raise ValueError("need at least two observed nodes")
    cfg = cfg or IcdConfig()
    n = cfg.n if cfg.n is not None else num_observed - 2
    if not 0 <= n <= num_observed - 2:
        raise ValueError(f"radius bound n={n} outside 0..{num_observed - 2}")

    g = MixedGraph.complete(num_observed, Mark.CIRCLE)
    sepsets = SepsetMap()
    iterations = 0
    r = 0
    done = False
    while r <= n and not done:
        g, sepsets, done = icd_iteration(g, sepsets, r, ci, cfg)
        iterations += 1
        if cfg.snapshot_dir is not None:
            path = Path(cfg.snapshot_dir) / f"pag_r{r}.txt"
            path.write_text(g.to_text())
        r += 1
    g = reset_to_circles(g)
    g = orient_v_structures(g, sepsets)
    g = apply_rules(g, RuleSetMode.COMPLETE, sepsets, strict=cfg.strict_orientation)
    return g, sepsets, iterations


def compute_nmax(num_observed: int, n: int) -> int:
    """Worst-case total number of CI tests for a run up to radius n."""
    if not 0 <= n <= num_observed - 2:
        raise ValueError(f"radius bound n={n} outside 0..{num_observed - 2}")
    pairs = math.comb(num_observed, 2)
    return 2 * pairs * sum(math.comb(num_observed - 2, r) for r in range(n + 1))
