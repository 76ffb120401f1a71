"""Mixed-graph representation shared by DAGs, MAGs and PAGs.

A graph over n nodes is stored as a dense n x n matrix of per-end edge
marks.  ``marks[a, b]`` holds the mark at the *b* end of the edge a--b,
so the directed edge a -> b is stored as ``marks[a, b] = ARROW`` and
``marks[b, a] = TAIL``.  Nodes are dense integer indices 0..n-1; labels
are cosmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np


class Mark(IntEnum):
    NONE = 0
    CIRCLE = 1
    TAIL = 2
    ARROW = 3


# serialization tokens, left end and right end of an edge line
_LEFT_TOKEN = {Mark.CIRCLE: "o", Mark.TAIL: "-", Mark.ARROW: "<"}
_RIGHT_TOKEN = {Mark.CIRCLE: "o", Mark.TAIL: "-", Mark.ARROW: ">"}
_LEFT_MARK = {v: k for k, v in _LEFT_TOKEN.items()}
_RIGHT_MARK = {v: k for k, v in _RIGHT_TOKEN.items()}


class GraphError(ValueError):
    pass


class MixedGraph:
    """Node set plus per-ordered-pair edge marks.

    The same container is used for DAG, MAG and PAG views; validity of a
    particular view is checked by the ``validate_*`` helpers.
    """

    def __init__(self, num_nodes, node_labels=None):
        if num_nodes < 1:
            raise GraphError("graph needs at least one node")
        self.num_nodes = int(num_nodes)
        self.marks = np.zeros((num_nodes, num_nodes), dtype=np.int8)
        self.node_labels = list(node_labels) if node_labels is not None else None

    # -- construction -------------------------------------------------

    @classmethod
    def complete(cls, num_nodes, mark=Mark.CIRCLE, node_labels=None):
        """Complete graph with the given mark at every edge end."""
        g = cls(num_nodes, node_labels)
        g.marks[:, :] = int(mark)
        np.fill_diagonal(g.marks, int(Mark.NONE))
        return g

    @classmethod
    def from_directed_edges(cls, num_nodes, edges, node_labels=None):
        """DAG-view graph from (parent, child) pairs."""
        g = cls(num_nodes, node_labels)
        for a, b in edges:
            g.set_edge(a, b, Mark.TAIL, Mark.ARROW)
        return g

    def copy(self):
        g = MixedGraph(self.num_nodes, self.node_labels)
        g.marks = self.marks.copy()
        return g

    # -- basic queries and mutation -----------------------------------

    def mark(self, a, b):
        """Mark at the ``b`` end of edge a--b (NONE when non-adjacent)."""
        return Mark(self.marks[a, b])

    def set_edge(self, a, b, mark_at_a, mark_at_b):
        """Set both end marks of the pair a,b atomically.

        NONE at either end removes the edge entirely.
        """
        if a == b:
            raise GraphError("self-loops are not allowed")
        if mark_at_a == Mark.NONE or mark_at_b == Mark.NONE:
            mark_at_a = mark_at_b = Mark.NONE
        self.marks[b, a] = int(mark_at_a)
        self.marks[a, b] = int(mark_at_b)

    def remove_edge(self, a, b):
        self.set_edge(a, b, Mark.NONE, Mark.NONE)

    def has_edge(self, a, b):
        return self.marks[a, b] != int(Mark.NONE)

    def neighbors(self, a):
        return [int(v) for v in np.flatnonzero(self.marks[a]) if v != a]

    def edges(self):
        """Unordered adjacent pairs (a, b) with a < b, lexicographic."""
        out = []
        for a in range(self.num_nodes):
            for b in range(a + 1, self.num_nodes):
                if self.has_edge(a, b):
                    out.append((a, b))
        return out

    def num_edges(self):
        return len(self.edges())

    # -- primitive structural queries ---------------------------------

    def is_collider(self, u, v, w):
        """True iff both edge marks at v on u--v and w--v are arrowheads."""
        if not (self.has_edge(u, v) and self.has_edge(v, w)):
            raise GraphError("is_collider requires u-v and v-w adjacent")
        return self.marks[u, v] == int(Mark.ARROW) and self.marks[w, v] == int(Mark.ARROW)

    def is_triangle(self, u, v, w):
        if len({u, v, w}) < 3:
            return False
        return self.has_edge(u, v) and self.has_edge(v, w) and self.has_edge(u, w)

    def is_possible_ancestor(self, x, y):
        """True iff some path from x to y never points back toward x.

        Every step's edge must carry no arrowhead at the near node and no
        tail at the far node.  Reflexive by convention.
        """
        if x == y:
            return True
        seen = {x}
        stack = [x]
        while stack:
            u = stack.pop()
            for v in self.neighbors(u):
                if v in seen:
                    continue
                if self.marks[v, u] != int(Mark.ARROW) and self.marks[u, v] != int(Mark.TAIL):
                    if v == y:
                        return True
                    seen.add(v)
                    stack.append(v)
        return False

    def possible_ancestors_of(self, y):
        """All x with is_possible_ancestor(x, y), via reverse reachability."""
        out = {y}
        stack = [y]
        while stack:
            v = stack.pop()
            for u in self.neighbors(v):
                if u in out:
                    continue
                if self.marks[v, u] != int(Mark.ARROW) and self.marks[u, v] != int(Mark.TAIL):
                    out.add(u)
                    stack.append(u)
        return out

    # -- comparisons ---------------------------------------------------

    def skeletons_equal(self, other):
        self._check_same_size(other)
        return np.array_equal(self.marks != 0, other.marks != 0)

    def marks_equal(self, other):
        self._check_same_size(other)
        return np.array_equal(self.marks, other.marks)

    def _check_same_size(self, other):
        if self.num_nodes != other.num_nodes:
            raise GraphError("node-count mismatch")

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self.num_nodes == other.num_nodes and np.array_equal(self.marks, other.marks)

    def __hash__(self):
        return hash((self.num_nodes, self.marks.tobytes()))

    # -- DAG view ------------------------------------------------------

    def validate_dag(self):
        """Raise unless every edge is tail->arrow and the graph is acyclic."""
        used = self.marks != 0
        bad = used & ~(
            ((self.marks == int(Mark.ARROW)) & (self.marks.T == int(Mark.TAIL)))
            | ((self.marks == int(Mark.TAIL)) & (self.marks.T == int(Mark.ARROW)))
        )
        if bad.any():
            raise GraphError("not a DAG view: found non tail/arrow edge")
        order = self.topological_order()
        if order is None:
            raise GraphError("not a DAG view: directed cycle")

    def parents(self, v):
        return [int(u) for u in np.flatnonzero(self.marks[:, v] == int(Mark.ARROW))
                if self.marks[v, u] == int(Mark.TAIL)]

    def children(self, v):
        return [int(u) for u in np.flatnonzero(self.marks[v, :] == int(Mark.ARROW))
                if self.marks[u, v] == int(Mark.TAIL)]

    def topological_order(self):
        """Topological order over directed (tail->arrow) edges, or None."""
        indeg = [len(self.parents(v)) for v in range(self.num_nodes)]
        queue = [v for v in range(self.num_nodes) if indeg[v] == 0]
        order = []
        while queue:
            v = queue.pop()
            order.append(v)
            for c in self.children(v):
                indeg[c] -= 1
                if indeg[c] == 0:
                    queue.append(c)
        return order if len(order) == self.num_nodes else None

    # -- serialization -------------------------------------------------

    def to_text(self):
        lines = [f"nodes: {self.num_nodes}"]
        for a, b in self.edges():
            left = _LEFT_TOKEN[self.mark(b, a)]
            right = _RIGHT_TOKEN[self.mark(a, b)]
            lines.append(f"{a} {left}-{right} {b}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("nodes:"):
            raise GraphError("missing 'nodes: n' header")
        g = cls(int(lines[0].split(":", 1)[1]))
        for ln in lines[1:]:
            a_s, mid, b_s = ln.split()
            if (len(mid) != 3 or mid[1] != "-"
                    or mid[0] not in _LEFT_MARK or mid[2] not in _RIGHT_MARK):
                raise GraphError(f"bad edge token {mid!r}")
            g.set_edge(int(a_s), int(b_s), _LEFT_MARK[mid[0]], _RIGHT_MARK[mid[2]])
        return g

    def __repr__(self):
        return f"MixedGraph(n={self.num_nodes}, edges={self.num_edges()})"


@dataclass(frozen=True)
class NodePartition:
    """Disjoint split of a DAG's nodes into observed, latent, selection."""

    observed: tuple
    latent: tuple = ()
    selection: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "observed", tuple(sorted(self.observed)))
        object.__setattr__(self, "latent", tuple(sorted(self.latent)))
        object.__setattr__(self, "selection", tuple(sorted(self.selection)))
        sets = [set(self.observed), set(self.latent), set(self.selection)]
        total = sum(len(s) for s in sets)
        if len(set().union(*sets)) != total:
            raise GraphError("partition sets must be disjoint")

    def validate_for(self, dag):
        if set(self.observed) | set(self.latent) | set(self.selection) != set(range(dag.num_nodes)):
            raise GraphError("partition must cover all DAG nodes")


class SepsetMap:
    """Separating sets recorded per unordered node pair."""

    def __init__(self):
        self._sets = {}

    @staticmethod
    def _key(a, b):
        return (a, b) if a < b else (b, a)

    def record(self, a, b, zset):
        z = frozenset(zset)
        if a in z or b in z:
            raise GraphError("separating set may not contain its endpoints")
        self._sets[self._key(a, b)] = z

    def get(self, a, b):
        return self._sets.get(self._key(a, b))

    def __contains__(self, pair):
        return self._key(*pair) in self._sets

    def items(self):
        return self._sets.items()

    def copy(self):
        m = SepsetMap()
        m._sets = dict(self._sets)
        return m

    def __len__(self):
        return len(self._sets)
