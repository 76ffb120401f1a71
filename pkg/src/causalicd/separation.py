"""Ground-truth separation semantics.

d-separation in DAGs (reachability over active trails), the DAG -> MAG
projection over a node partition, and m-separation in MAGs.  These back
the perfect CI oracle and the reference graphs used by the metrics.
"""

from __future__ import annotations

from collections import deque

from .graphs import GraphError, Mark, MixedGraph, NodePartition


class SeparationError(ValueError):
    pass


def _check_query(num_nodes, x, y, z):
    z = frozenset(z)
    if x == y:
        raise SeparationError("query endpoints must differ")
    if x in z or y in z:
        raise SeparationError("query endpoint inside conditioning set")
    if not all(0 <= v < num_nodes for v in z | {x, y}):
        raise SeparationError("node index out of range")
    return z


def ancestors_of(dag: MixedGraph, nodes) -> set:
    """Nodes with a directed path into ``nodes``, including ``nodes``."""
    out = set(nodes)
    stack = list(nodes)
    while stack:
        v = stack.pop()
        for p in dag.parents(v):
            if p not in out:
                out.add(p)
                stack.append(p)
    return out


def d_separated(dag: MixedGraph, x: int, y: int, z) -> bool:
    """Standard d-separation, implemented as Bayes-ball reachability.

    States are (node, direction) with direction 'up' (moving to parents)
    or 'down' (moving to children).
    """
    z = _check_query(dag.num_nodes, x, y, z)
    anc_z = ancestors_of(dag, z) if z else set()

    queue = deque([(x, "up")])
    visited = set()
    while queue:
        v, d = queue.popleft()
        if (v, d) in visited:
            continue
        visited.add((v, d))
        if v == y and v not in z:
            return False
        if d == "up":
            if v not in z:
                for p in dag.parents(v):
                    queue.append((p, "up"))
                for c in dag.children(v):
                    queue.append((c, "down"))
        else:
            if v not in z:
                for c in dag.children(v):
                    queue.append((c, "down"))
            if v in anc_z:
                for p in dag.parents(v):
                    queue.append((p, "up"))
    return True


def dag_to_mag(dag: MixedGraph, partition: NodePartition) -> MixedGraph:
    """Project a DAG with latent/selection nodes onto its unique MAG.

    Output nodes are the observed set, re-indexed in ascending original
    order.  Two observed nodes are adjacent iff no subset of the observed
    nodes separates them (given selection); the mark at A is a tail iff A
    is an ancestor of the other endpoint or of a selection node.
    """
    dag.validate_dag()
    partition.validate_for(dag)
    obs = list(partition.observed)
    sel = set(partition.selection)
    n = len(obs)
    labels = None
    if dag.node_labels is not None:
        labels = [dag.node_labels[v] for v in obs]
    mag = MixedGraph(n, labels)

    for i in range(n):
        for j in range(i + 1, n):
            a, b = obs[i], obs[j]
            # separable iff separable by the observable ancestors of
            # {a, b} union S; this single check decides MAG adjacency
            canonical = (ancestors_of(dag, {a, b} | sel) & set(obs)) - {a, b}
            if d_separated(dag, a, b, canonical | sel):
                continue
            anc_a = ancestors_of(dag, {b} | sel)
            anc_b = ancestors_of(dag, {a} | sel)
            mark_at_a = Mark.TAIL if a in anc_a else Mark.ARROW
            mark_at_b = Mark.TAIL if b in anc_b else Mark.ARROW
            mag.set_edge(i, j, mark_at_a, mark_at_b)
    return mag


def validate_mag(mag: MixedGraph):
    """Raise unless the graph is ancestral.

    Checks: only arrow/tail marks, no directed cycles, and no
    almost-directed cycles (a <-> b with a an ancestor of b), and no
    arrowhead into a node with an undirected edge.
    """
    for a, b in mag.edges():
        if mag.mark(a, b) == Mark.CIRCLE or mag.mark(b, a) == Mark.CIRCLE:
            raise SeparationError("MAG view may not contain circle marks")
    anc = {v: ancestors_of(mag, {v}) for v in range(mag.num_nodes)}
    for a, b in mag.edges():
        m_ab, m_ba = mag.mark(a, b), mag.mark(b, a)
        if m_ab == Mark.ARROW and b in anc[a]:
            raise SeparationError("directed or almost-directed cycle")
        if m_ba == Mark.ARROW and a in anc[b]:
            raise SeparationError("directed or almost-directed cycle")
        if m_ab == Mark.TAIL and m_ba == Mark.TAIL:
            # undirected edge: neither endpoint may have an arrowhead
            for g, other in ((a, b), (b, a)):
                for u in mag.neighbors(g):
                    if mag.mark(u, g) == Mark.ARROW:
                        raise SeparationError("arrowhead at endpoint of undirected edge")


def m_separated(mag: MixedGraph, x: int, y: int, z, validate=False) -> bool:
    """m-separation in an ancestral graph via active-trail reachability.

    A collider on a path is open iff it is an ancestor of the
    conditioning set; a non-collider is open iff outside it.  States are
    (previous node, current node) so collider status at the current node
    can be decided per step.
    """
    z = _check_query(mag.num_nodes, x, y, z)
    if validate:
        validate_mag(mag)
    anc_z = ancestors_of(mag, z) if z else set()

    queue = deque((x, v) for v in mag.neighbors(x))
    visited = set()
    while queue:
        prev, cur = queue.popleft()
        if (prev, cur) in visited:
            continue
        visited.add((prev, cur))
        if cur == y:
            return False
        for nxt in mag.neighbors(cur):
            if nxt == prev:
                continue
            collider = (mag.mark(prev, cur) == Mark.ARROW
                        and mag.mark(nxt, cur) == Mark.ARROW)
            if collider:
                if cur in anc_z:
                    queue.append((cur, nxt))
            else:
                if cur not in z:
                    queue.append((cur, nxt))
    return True
