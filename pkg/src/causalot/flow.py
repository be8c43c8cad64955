"""Exact maximum flow (Dinic) over rational capacities.

Dinic's algorithm augments along shortest paths only, so it terminates for
arbitrary real capacities; with :class:`~fractions.Fraction` capacities every
flow value it produces is exact.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction


class FlowNetwork:
    """Directed network with paired residual arcs.

    Arc ``2k`` is the k-th added arc, arc ``2k + 1`` its reverse.
    """

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.head: list = []
        self.cap: list = []
        self.adj: list = [[] for _ in range(num_nodes)]

    def add_edge(self, u: int, v: int, capacity) -> int:
        k = len(self.head)
        self.head += [v, u]
        self.cap += [capacity, Fraction(0)]
        self.adj[u].append(k)
        self.adj[v].append(k + 1)
        return k // 2

    def flow(self, edge: int):
        """Flow currently carried by the edge returned from :meth:`add_edge`."""
        return self.cap[2 * edge + 1]

    def _levels(self, s: int, t: int):
        level = [-1] * self.num_nodes
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for a in self.adj[u]:
                v = self.head[a]
                if self.cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _blocking(self, s: int, t: int, level: list):
        it = [0] * self.num_nodes
        total = Fraction(0)
        while True:
            # iterative DFS for one augmenting path in the level graph
            path: list = []
            u = s
            while u != t:
                arcs = self.adj[u]
                while it[u] < len(arcs):
                    a = arcs[it[u]]
                    v = self.head[a]
                    if self.cap[a] > 0 and level[v] == level[u] + 1:
                        break
                    it[u] += 1
                else:
                    if u == s:
                        return total
                    level[u] = -1
                    a = path.pop()
                    u = self.head[a ^ 1]
                    it[u] += 1
                    continue
                path.append(a)
                u = self.head[a]
            push = min(self.cap[a] for a in path)
            for a in path:
                self.cap[a] -= push
                self.cap[a ^ 1] += push
            total += push

    def max_flow(self, s: int, t: int):
        total = Fraction(0)
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            total += self._blocking(s, t, level)

    def residual_reachable(self, s: int) -> set:
        """Nodes reachable from ``s`` along arcs with positive residual capacity."""
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for a in self.adj[u]:
                v = self.head[a]
                if self.cap[a] > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen
