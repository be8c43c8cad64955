"""Bounded-variable primal simplex for the transportation polytope.

Every cell ``(i, j)`` of the ``m x n`` table is a variable. Allowed cells have
bounds ``[0, ∞)``; forbidden cells are fixed to ``[0, 0]``, which lets them sit
in the basis at zero so that a spanning-tree basis always exists, even when
the allowed cells alone are disconnected.

A basis is a spanning tree of the bipartite graph rows ∪ columns. Entering
and leaving variables follow Bland's rule (lowest cell index), which rules
out cycling on degenerate pivots. The arithmetic is generic: pass floats with
a positive tolerance, or Fractions with ``tol=0`` for an exact solve.
"""

from __future__ import annotations

from collections import deque


class TransportSimplex:
    """Maximize ``Σ c[i][j] x[i][j]`` over couplings of ``supply`` and ``demand``.

    Args:
        cost: ``m x n`` nested sequence of cell values.
        allowed: ``m x n`` nested sequence of booleans; ``False`` cells are
            fixed at zero.
        start: feasible starting flow as ``{(i, j): value}``; only allowed
            cells may be positive.
        tol: optimality / ratio tolerance (``0`` for exact arithmetic).
        max_iter: pivot budget; exceeding it raises ``RuntimeError``.
    """

    def __init__(self, cost, allowed, start: dict, tol=1e-12, max_iter: int = 100_000):
        self.m = len(cost)
        self.n = len(cost[0]) if self.m else 0
        self.cost = [list(row) for row in cost]
        self.allowed = [[bool(a) for a in row] for row in allowed]
        self.tol = tol
        self.max_iter = max_iter
        zero = 0 * next(iter(start.values())) if start else 0
        self.zero = zero
        self.x = [[zero] * self.n for _ in range(self.m)]
        for (i, j), v in start.items():
            if v and not self.allowed[i][j]:
                raise ValueError(f"starting flow uses forbidden cell ({i}, {j})")
            self.x[i][j] = v
        self.iterations = 0
        self.basis = self._initial_basis()

    # tree helpers: rows are nodes 0..m-1, columns are nodes m..m+n-1

    def _tree_path(self, basis, a: int, b: int) -> list:
        """Cells on the tree path from node ``a`` to node ``b``, in order."""
        adj: dict = {}
        for i, j in basis:
            adj.setdefault(i, []).append((self.m + j, (i, j)))
            adj.setdefault(self.m + j, []).append((i, (i, j)))
        prev = {a: None}
        queue = deque([a])
        while queue:
            u = queue.popleft()
            if u == b:
                break
            for v, cell in adj.get(u, ()):
                if v not in prev:
                    prev[v] = (u, cell)
                    queue.append(v)
        path = []
        u = b
        while prev[u] is not None:
            u, cell = prev[u]
            path.append(cell)
        path.reverse()
        return path

    def _initial_basis(self) -> set:
        m, n = self.m, self.n
        while True:
            parent = list(range(m + n))

            def find(u):
                while parent[u] != u:
                    parent[u] = parent[parent[u]]
                    u = parent[u]
                return u

            forest: set = set()
            cycle = None
            for i in range(m):
                for j in range(n):
                    if not self.x[i][j]:
                        continue
                    ri, rj = find(i), find(m + j)
                    if ri == rj:
                        cycle = (i, j)
                        break
                    parent[ri] = rj
                    forest.add((i, j))
                if cycle:
                    break
            if cycle is None:
                break
            self._cancel_cycle(forest, cycle)
        for want_allowed in (True, False):
            for i in range(m):
                for j in range(n):
                    if self.allowed[i][j] is want_allowed and (i, j) not in forest:
                        ri, rj = find(i), find(m + j)
                        if ri != rj:
                            parent[ri] = rj
                            forest.add((i, j))
        return forest

    def _cancel_cycle(self, forest: set, cell: tuple) -> None:
        i, j = cell
        path = self._tree_path(forest, self.m + j, i)
        minus = path[0::2]
        theta = min(self.x[a][b] for a, b in minus)
        self.x[i][j] += theta
        for k, (a, b) in enumerate(path):
            self.x[a][b] += -theta if k % 2 == 0 else theta

    def _potentials(self) -> tuple:
        m = self.m
        u = [None] * m
        v = [None] * self.n
        adj: dict = {}
        for i, j in self.basis:
            adj.setdefault(i, []).append(m + j)
            adj.setdefault(m + j, []).append(i)
        u[0] = self.zero
        queue = deque([0])
        while queue:
            a = queue.popleft()
            for b in adj.get(a, ()):
                if a < m:
                    if v[b - m] is None:
                        v[b - m] = self.cost[a][b - m] - u[a]
                        queue.append(b)
                elif u[b] is None:
                    u[b] = self.cost[b][a - m] - v[a - m]
                    queue.append(b)
        return u, v

    def _entering(self):
        u, v = self._potentials()
        for i in range(self.m):
            for j in range(self.n):
                if self.allowed[i][j] and (i, j) not in self.basis:
                    if self.cost[i][j] - u[i] - v[j] > self.tol:
                        return i, j
        return None

    def pivot(self, cell: tuple) -> None:
        i, j = cell
        path = self._tree_path(self.basis, self.m + j, i)
        minus, plus = path[0::2], path[1::2]
        # a forbidden cell on a '+' position is blocked at its upper bound 0
        blocking = [(self.x[a][b], (a, b)) for a, b in minus]
        blocking += [(self.zero, (a, b)) for a, b in plus if not self.allowed[a][b]]
        theta = min(val for val, _ in blocking)
        leaving = min(c for val, c in blocking if val <= theta + self.tol)
        self.x[i][j] += theta
        for a, b in minus:
            self.x[a][b] -= theta
        for a, b in plus:
            self.x[a][b] += theta
        self.basis.remove(leaving)
        self.basis.add(cell)
        self.x[leaving[0]][leaving[1]] = self.zero

    def solve(self) -> "TransportSimplex":
        if self.m == 0 or self.n == 0:
            return self
        while True:
            cell = self._entering()
            if cell is None:
                return self
            self.iterations += 1
            if self.iterations > self.max_iter:
                raise RuntimeError("simplex pivot budget exhausted")
            self.pivot(cell)

    @property
    def objective(self):
        return sum(
            (self.cost[i][j] * self.x[i][j] for i, j in self.flow()), self.zero
        )

    def flow(self) -> dict:
        return {
            (i, j): self.x[i][j]
            for i in range(self.m)
            for j in range(self.n)
            if self.x[i][j] > self.tol
        }
