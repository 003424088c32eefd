"""Union-find and minimum-spanning-tree machinery.

Shared by the ultrametric certifier, the chain-infimum metric, and the
scale decomposition. Prim runs in O(n^2), which beats sorting all n^2/2
edges once spaces get into the hundreds of points.
"""

from __future__ import annotations

from fractions import Fraction


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def prim_mst(dist) -> list[tuple[Fraction, int, int]]:
    """Minimum spanning tree edges of a complete graph given as a matrix.

    Deterministic: ties go to the smallest candidate index. Returns
    (weight, i, j) with i the tree endpoint discovered earlier.
    """
    n = len(dist)
    if n <= 1:
        return []
    in_tree = [False] * n
    best = list(dist[0])
    best_from = [0] * n
    in_tree[0] = True
    edges: list[tuple[Fraction, int, int]] = []
    for _ in range(n - 1):
        v = -1
        for u in range(n):
            if not in_tree[u] and (v == -1 or best[u] < best[v]):
                v = u
        edges.append((best[v], best_from[v], v))
        in_tree[v] = True
        row = dist[v]
        for u in range(n):
            if not in_tree[u] and row[u] < best[u]:
                best[u] = row[u]
                best_from[u] = v
    return edges


def bottleneck_matrix(n: int, mst_edges) -> list[list[Fraction]]:
    """All-pairs minimax edge weight along the tree, as a full matrix.

    Processing tree edges by increasing weight and merging member lists
    assigns each pair exactly once, so the fill is O(n^2) overall.
    """
    zero = Fraction(0)
    rho = [[zero] * n for _ in range(n)]
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    ds = DisjointSet(n)
    for w, i, j in sorted(mst_edges, key=lambda e: (e[0], e[1], e[2])):
        ra, rb = ds.find(i), ds.find(j)
        if ra == rb:
            continue
        side_a, side_b = members[ra], members[rb]
        for a in side_a:
            row = rho[a]
            for b in side_b:
                row[b] = w
                rho[b][a] = w
        ds.union(ra, rb)
        root = ds.find(ra)
        merged = side_a + side_b
        members.pop(ra, None)
        members.pop(rb, None)
        members[root] = merged
    return rho


def tree_path(n: int, mst_edges, start: int, goal: int) -> list[int]:
    """Vertex path from start to goal inside the spanning tree."""
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for _, i, j in mst_edges:
        adj[i].append(j)
        adj[j].append(i)
    parent = {start: start}
    queue = [start]
    while queue:
        nxt: list[int] = []
        for u in queue:
            if u == goal:
                queue = []
                break
            for v in adj[u]:
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
        else:
            queue = nxt
            continue
        break
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    path.reverse()
    return path
