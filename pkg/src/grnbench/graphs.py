"""Directed-graph utilities: reachability, structural distance, acyclicity."""

from __future__ import annotations

from collections import deque
from typing import Iterator

import numpy as np

from grnbench.dataset import RankedEdgeList, WeightedAdjacency
from grnbench.validation import require


def _adjacency_lists(pairs, m: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(m)]
    for parent, child in pairs:
        require(0 <= parent < m and 0 <= child < m, "edge endpoint out of range")
        out[parent].append(child)
    return out


def reachable_pairs(edges: RankedEdgeList, m: int) -> set[tuple[int, int]]:
    """All ordered pairs (i, j), i != j, joined by a directed path in ``edges``.

    The complement of the result over all ordered pairs is the set of
    predicted non-relations ("negative pairs") used by the false omission
    rate. Cycles are permitted; (i, i) pairs are excluded by definition.
    """
    require(m >= 1, "m must be positive")
    succ = _adjacency_lists(edges.pairs(), m)
    result: set[tuple[int, int]] = set()
    for source in range(m):
        if not succ[source]:
            continue
        seen = np.zeros(m, dtype=bool)
        queue = deque(succ[source])
        while queue:
            node = queue.popleft()
            if seen[node]:
                continue
            seen[node] = True
            queue.extend(child for child in succ[node] if not seen[child])
        result.update((source, int(j)) for j in np.nonzero(seen)[0] if int(j) != source)
    return result


def shd(predicted: RankedEdgeList, truth: WeightedAdjacency) -> int:
    """Structural Hamming distance between an edge list and a weighted graph.

    Counts the insertions, deletions and reversals needed to turn the
    predicted edge set into the nonzero edge set of ``truth``; a reversed
    edge costs 1, not 2.
    """
    d = truth.d
    predicted_pairs = predicted.pair_set()
    for parent, child in predicted_pairs:
        require(
            0 <= parent < d and 0 <= child < d,
            f"predicted edge ({parent}, {child}) exceeds graph size {d}",
        )
    truth_pairs = truth.edge_set()
    extra = predicted_pairs - truth_pairs
    missing = truth_pairs - predicted_pairs
    reversals = sum(1 for i, j in extra if (j, i) in missing)
    return len(extra) + len(missing) - reversals


def is_acyclic(adj: WeightedAdjacency) -> bool:
    """True iff the nonzero-edge digraph admits a topological order."""
    return topological_order(adj) is not None


def topological_order(adj: WeightedAdjacency) -> list[int] | None:
    """Kahn's algorithm; returns None when the graph contains a cycle."""
    d = adj.d
    nonzero = adj.weights != 0.0
    indegree = nonzero.sum(axis=0).astype(np.int64)
    ready = deque(int(i) for i in np.nonzero(indegree == 0)[0])
    order: list[int] = []
    while ready:
        node = ready.popleft()
        order.append(node)
        for child in np.nonzero(nonzero[node])[0]:
            indegree[child] -= 1
            if indegree[child] == 0:
                ready.append(int(child))
    return order if len(order) == d else None


def find_cycle(pairs: set[tuple[int, int]], m: int) -> list[tuple[int, int]] | None:
    """Return the edges of one directed cycle, or None when acyclic."""
    succ = _adjacency_lists(pairs, m)
    state = np.zeros(m, dtype=np.int8)  # 0 unvisited, 1 on stack, 2 done
    parent_of: dict[int, int] = {}

    for root in range(m):
        if state[root] != 0:
            continue
        stack: list[tuple[int, Iterator[int]]] = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            node, successors = stack[-1]
            advanced = False
            for child in successors:
                if state[child] == 0:
                    state[child] = 1
                    parent_of[child] = node
                    stack.append((child, iter(succ[child])))
                    advanced = True
                    break
                if state[child] == 1:
                    cycle = [(node, child)]
                    current = node
                    while current != child:
                        prev = parent_of[current]
                        cycle.append((prev, current))
                        current = prev
                    cycle.reverse()
                    return cycle
            if not advanced:
                state[node] = 2
                stack.pop()
    return None
