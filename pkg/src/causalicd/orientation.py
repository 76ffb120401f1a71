"""Edge-mark orientation for partial ancestral graphs.

v-structures are oriented from recorded separating sets, then the
standard rule catalog is applied to fixpoint.  ``Anytime`` mode applies
the sound first-stage rules (R1-R4); ``Complete`` mode additionally
applies the selection-bias and tail-completion rules (R5-R10).  Rules
only ever replace circle marks: an attempt to overwrite a tail with an
arrowhead (or vice versa) signals unfaithful input and either raises or
is skipped, depending on ``strict``.
"""

from __future__ import annotations

from enum import Enum
from itertools import combinations

from .graphs import Mark, MixedGraph, SepsetMap


class RuleSetMode(Enum):
    ANYTIME = "anytime"
    COMPLETE = "complete"


class OrientationError(ValueError):
    pass


def reset_to_circles(g: MixedGraph) -> MixedGraph:
    """Copy of g with every edge end reset to a circle mark."""
    out = g.copy()
    out.marks[out.marks != 0] = int(Mark.CIRCLE)
    return out


def orient_v_structures(g: MixedGraph, sepsets: SepsetMap) -> MixedGraph:
    """Orient arrowheads at Z for every unshielded X - Z - Y with
    Z outside the recorded separating set of the non-adjacent pair X,Y."""
    out = g.copy()
    n = out.num_nodes
    for z in range(n):
        nbrs = out.neighbors(z)
        for x, y in combinations(nbrs, 2):
            if out.has_edge(x, y):
                continue
            sep = sepsets.get(x, y)
            if sep is None:
                raise OrientationError(
                    f"non-adjacent pair ({x},{y}) has no recorded separating set"
                )
            if z not in sep:
                out.marks[x, z] = int(Mark.ARROW)
                out.marks[y, z] = int(Mark.ARROW)
    return out


def _set_mark(g, a, b, mark, strict):
    """Set mark at b on edge a--b; only circles may change."""
    cur = g.marks[a, b]
    if cur == int(mark):
        return False
    if cur != int(Mark.CIRCLE):
        if strict:
            raise OrientationError(
                f"rule wants {Mark(mark).name} at {b} on edge ({a},{b}) "
                f"but found {Mark(cur).name}"
            )
        return False
    g.marks[a, b] = int(mark)
    return True


def _uncovered_circle_paths(g, a, b):
    """Uncovered paths a..b whose edges are all o-o, interior non-trivial."""
    results = []

    def extend(path):
        cur = path[-1]
        for nxt in g.neighbors(cur):
            if nxt in path:
                continue
            if g.marks[cur, nxt] != int(Mark.CIRCLE) or g.marks[nxt, cur] != int(Mark.CIRCLE):
                continue
            if len(path) >= 2 and g.has_edge(path[-2], nxt):
                continue  # covered triple
            if nxt == b:
                if len(path) >= 3:
                    results.append(path + [b])
                continue
            extend(path + [nxt])

    for c in g.neighbors(a):
        if c == b or g.has_edge(c, b):
            continue
        if g.marks[a, c] == int(Mark.CIRCLE) and g.marks[c, a] == int(Mark.CIRCLE):
            extend([a, c])
    return results


def _uncovered_pd_path_exists(g, a, first, b):
    """Uncovered possibly-directed path a, first, ..., b."""

    def step_ok(u, v):
        return g.marks[v, u] != int(Mark.ARROW) and g.marks[u, v] != int(Mark.TAIL)

    if not step_ok(a, first):
        return False
    if first == b:
        return True
    stack = [[a, first]]
    while stack:
        path = stack.pop()
        cur = path[-1]
        for nxt in g.neighbors(cur):
            if nxt in path:
                continue
            if not step_ok(cur, nxt):
                continue
            if g.has_edge(path[-2], nxt):
                continue  # covered triple
            if nxt == b:
                return True
            stack.append(path + [nxt])
    return False


def _discriminating_paths(g, a, b, c):
    """Discriminating paths <d, ..., a, b, c> for b, returned as d values.

    Every vertex between d and b (a included) is a collider on the path
    and a parent of c; d is not adjacent to c.  The b--a path edge must
    carry an arrowhead at a; the mark at b is unconstrained (the rule
    consuming these paths is what decides b's collider status).
    """
    found = []
    # walk backwards from a: predecessors u with u*->a and a a parent of c
    if g.marks[b, a] != int(Mark.ARROW):
        return found
    if not (g.marks[a, c] == int(Mark.ARROW) and g.marks[c, a] == int(Mark.TAIL)):
        return found
    stack = [[b, a]]
    seen = set()
    while stack:
        path = stack.pop()
        tip = path[-1]
        for u in g.neighbors(tip):
            if u in path or u == c:
                continue
            if g.marks[u, tip] != int(Mark.ARROW):
                continue  # path edge must point into the previous collider
            if not g.has_edge(u, c):
                found.append(u)
                continue
            # u must itself be a collider on the path and a parent of c
            if (g.marks[tip, u] == int(Mark.ARROW)
                    and g.marks[c, u] == int(Mark.TAIL)
                    and g.marks[u, c] == int(Mark.ARROW)):
                key = tuple(path + [u])
                if key not in seen:
                    seen.add(key)
                    stack.append(path + [u])
    return found


def apply_rules(g: MixedGraph, mode: RuleSetMode, sepsets: SepsetMap = None,
                strict: bool = True) -> MixedGraph:
    """Apply the orientation rule catalog to fixpoint.

    ``sepsets`` is needed by the discriminating-path rule; omitting it
    disables that rule's sepset branch and falls back to collider
    orientation only when a recorded set is unavailable.
    """
    out = g.copy()
    changed = True
    while changed:
        changed = False
        changed |= _rule_r1(out, strict)
        changed |= _rule_r2(out, strict)
        changed |= _rule_r3(out, strict)
        changed |= _rule_r4(out, sepsets, strict)
        if mode is RuleSetMode.COMPLETE:
            changed |= _rule_r5(out, strict)
            changed |= _rule_r6(out, strict)
            changed |= _rule_r7(out, strict)
            changed |= _rule_r8(out, strict)
            changed |= _rule_r9(out, strict)
            changed |= _rule_r10(out, strict)
    return out


def _adjacent_pairs(g):
    n = g.num_nodes
    for a in range(n):
        for b in range(n):
            if a != b and g.has_edge(a, b):
                yield a, b


def _rule_r1(g, strict):
    # a*->b o-* c with a,c non-adjacent  =>  b -> c
    changed = False
    for b, c in _adjacent_pairs(g):
        if g.marks[c, b] != int(Mark.CIRCLE):
            continue
        for a in g.neighbors(b):
            if a == c or g.has_edge(a, c):
                continue
            if g.marks[a, b] == int(Mark.ARROW):
                changed |= _set_mark(g, b, c, Mark.ARROW, strict)
                changed |= _set_mark(g, c, b, Mark.TAIL, strict)
                break
    return changed


def _rule_r2(g, strict):
    # (a -> b *-> c) or (a *-> b -> c), a *-o c  =>  a *-> c
    changed = False
    for a, c in _adjacent_pairs(g):
        if g.marks[a, c] != int(Mark.CIRCLE):
            continue
        for b in g.neighbors(a):
            if b == c or not g.has_edge(b, c):
                continue
            first = (g.marks[a, b] == int(Mark.ARROW)
                     and g.marks[b, a] == int(Mark.TAIL)
                     and g.marks[b, c] == int(Mark.ARROW))
            second = (g.marks[a, b] == int(Mark.ARROW)
                      and g.marks[b, c] == int(Mark.ARROW)
                      and g.marks[c, b] == int(Mark.TAIL))
            if first or second:
                changed |= _set_mark(g, a, c, Mark.ARROW, strict)
                break
    return changed


def _rule_r3(g, strict):
    # a*->b<-*c, a*-o d o-*c, a,c non-adjacent, d*-o b  =>  d*->b
    changed = False
    n = g.num_nodes
    for d, b in _adjacent_pairs(g):
        if g.marks[d, b] != int(Mark.CIRCLE):
            continue
        for a in range(n):
            if a in (d, b) or not g.has_edge(a, b) or not g.has_edge(a, d):
                continue
            if g.marks[a, b] != int(Mark.ARROW) or g.marks[a, d] != int(Mark.CIRCLE):
                continue
            for c in range(n):
                if c in (a, b, d) or g.has_edge(a, c):
                    continue
                if (g.has_edge(c, b) and g.has_edge(c, d)
                        and g.marks[c, b] == int(Mark.ARROW)
                        and g.marks[c, d] == int(Mark.CIRCLE)):
                    changed |= _set_mark(g, d, b, Mark.ARROW, strict)
                    break
            if g.marks[d, b] != int(Mark.CIRCLE):
                break
    return changed


def _rule_r4(g, sepsets, strict):
    # discriminating path <d,...,a,b,c> for b with b o-* c:
    # b in sepset(d, c)  =>  b -> c ; otherwise a <-> b <-> c
    changed = False
    n = g.num_nodes
    for b, c in _adjacent_pairs(g):
        if g.marks[c, b] != int(Mark.CIRCLE):
            continue
        done = False
        for a in g.neighbors(b):
            if a == c or done:
                continue
            for d in _discriminating_paths(g, a, b, c):
                sep = sepsets.get(d, c) if sepsets is not None else None
                if sep is not None and b in sep:
                    changed |= _set_mark(g, c, b, Mark.TAIL, strict)
                    changed |= _set_mark(g, b, c, Mark.ARROW, strict)
                else:
                    changed |= _set_mark(g, c, b, Mark.ARROW, strict)
                    changed |= _set_mark(g, b, c, Mark.ARROW, strict)
                    changed |= _set_mark(g, b, a, Mark.ARROW, strict)
                    changed |= _set_mark(g, a, b, Mark.ARROW, strict)
                done = True
                break
    return changed


def _rule_r5(g, strict):
    # a o-o b with an uncovered circle path <a,c,...,d,b>, a,d and b,c
    # non-adjacent  =>  the a-b edge and every path edge become undirected
    changed = False
    for a in range(g.num_nodes):
        for b in range(a + 1, g.num_nodes):
            if not g.has_edge(a, b):
                continue
            if g.marks[a, b] != int(Mark.CIRCLE) or g.marks[b, a] != int(Mark.CIRCLE):
                continue
            for path in _uncovered_circle_paths(g, a, b):
                if g.has_edge(path[1], b) or g.has_edge(a, path[-2]):
                    continue
                changed |= _set_mark(g, a, b, Mark.TAIL, strict)
                changed |= _set_mark(g, b, a, Mark.TAIL, strict)
                for u, v in zip(path, path[1:]):
                    changed |= _set_mark(g, u, v, Mark.TAIL, strict)
                    changed |= _set_mark(g, v, u, Mark.TAIL, strict)
                break
    return changed


def _rule_r6(g, strict):
    # a - b (undirected) and b o-* c  =>  tail at b on b--c
    changed = False
    for b, c in _adjacent_pairs(g):
        if g.marks[c, b] != int(Mark.CIRCLE):
            continue
        for a in g.neighbors(b):
            if a == c:
                continue
            if g.marks[a, b] == int(Mark.TAIL) and g.marks[b, a] == int(Mark.TAIL):
                changed |= _set_mark(g, c, b, Mark.TAIL, strict)
                break
    return changed


def _rule_r7(g, strict):
    # a -o b o-* c with a,c non-adjacent  =>  tail at b on b--c
    changed = False
    for b, c in _adjacent_pairs(g):
        if g.marks[c, b] != int(Mark.CIRCLE):
            continue
        for a in g.neighbors(b):
            if a == c or g.has_edge(a, c):
                continue
            if g.marks[b, a] == int(Mark.TAIL) and g.marks[a, b] == int(Mark.CIRCLE):
                changed |= _set_mark(g, c, b, Mark.TAIL, strict)
                break
    return changed


def _rule_r8(g, strict):
    # (a -> b -> c) or (a -o b -> c), and a o-> c  =>  a -> c
    changed = False
    for a, c in _adjacent_pairs(g):
        if not (g.marks[a, c] == int(Mark.ARROW) and g.marks[c, a] == int(Mark.CIRCLE)):
            continue
        for b in g.neighbors(a):
            if b == c or not g.has_edge(b, c):
                continue
            into_b = g.marks[a, b]
            at_a = g.marks[b, a]
            b_to_c = (g.marks[b, c] == int(Mark.ARROW)
                      and g.marks[c, b] == int(Mark.TAIL))
            if b_to_c and at_a == int(Mark.TAIL) and into_b in (int(Mark.ARROW), int(Mark.CIRCLE)):
                changed |= _set_mark(g, c, a, Mark.TAIL, strict)
                break
    return changed


def _rule_r9(g, strict):
    # a o-> c with an uncovered possibly-directed path <a,b,...,c>,
    # b,c non-adjacent  =>  a -> c
    changed = False
    for a, c in _adjacent_pairs(g):
        if not (g.marks[a, c] == int(Mark.ARROW) and g.marks[c, a] == int(Mark.CIRCLE)):
            continue
        for b in g.neighbors(a):
            if b == c or g.has_edge(b, c):
                continue
            if _uncovered_pd_path_exists(g, a, b, c):
                changed |= _set_mark(g, c, a, Mark.TAIL, strict)
                break
    return changed


def _rule_r10(g, strict):
    # a o-> c, b -> c <- d, uncovered p.d. paths p1: a..b and p2: a..d
    # whose first steps m, n satisfy m != n and m,n non-adjacent => a -> c
    changed = False
    for a, c in _adjacent_pairs(g):
        if not (g.marks[a, c] == int(Mark.ARROW) and g.marks[c, a] == int(Mark.CIRCLE)):
            continue
        into_c = [b for b in g.neighbors(c)
                  if b != a and g.marks[b, c] == int(Mark.ARROW)
                  and g.marks[c, b] == int(Mark.TAIL)]
        hit = False
        for b, d in combinations(into_c, 2):
            for m in g.neighbors(a):
                if hit or m == c:
                    continue
                for n in g.neighbors(a):
                    if n == c or n == m or g.has_edge(m, n):
                        continue
                    if (_uncovered_pd_path_exists(g, a, m, b)
                            and _uncovered_pd_path_exists(g, a, n, d)):
                        changed |= _set_mark(g, c, a, Mark.TAIL, strict)
                        hit = True
                        break
            if hit:
                break
    return changed
