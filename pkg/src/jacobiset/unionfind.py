"""Array-based union-find with path halving and union by size."""

from __future__ import annotations

import numpy as np


class UnionFind:
    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return int(x)

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def labels(self) -> np.ndarray:
        """Canonical labels: components numbered by first occurrence."""
        roots = np.array([self.find(i) for i in range(len(self.parent))])
        label_of_root: dict[int, int] = {}
        out = np.empty(len(roots), dtype=np.int64)
        for i, r in enumerate(roots):
            if r not in label_of_root:
                label_of_root[r] = len(label_of_root)
            out[i] = label_of_root[r]
        return out
