"""Bipartite matching and edge coloring used by the schedulers.

Both routines are deterministic: vertices and neighbours are visited in
sorted order, so equal inputs always give equal outputs.
"""

from __future__ import annotations

import heapq

from typing import Dict, Hashable, List, Mapping, Sequence, Tuple


def max_matching(adjacency: Mapping[Hashable, Sequence[Hashable]]) -> Dict[Hashable, Hashable]:
    """Maximum bipartite matching by augmenting paths (Kuhn's algorithm).

    ``adjacency`` maps each left vertex to its right neighbours.  Left
    vertices are processed in sorted order and neighbours are tried in
    sorted order, which makes the augmenting choices lexicographic.
    Returns a dict left -> right.
    """
    match_right: Dict[Hashable, Hashable] = {}
    adj = {u: sorted(vs) for u, vs in adjacency.items()}

    def augment(u, visited):
        for v in adj[u]:
            if v in visited:
                continue
            visited.add(v)
            if v not in match_right or augment(match_right[v], visited):
                match_right[v] = u
                return True
        return False

    for u in sorted(adj):
        augment(u, set())
    return {u: v for v, u in match_right.items()}


def edge_color(edges: Sequence[Tuple[Hashable, Hashable]]) -> List[int]:
    """Color a bipartite multigraph's edges with max-degree many colors.

    ``edges[k] = (left, right)``; parallel edges are allowed.  Uses the
    alternating-path recoloring argument behind Konig's edge coloring
    theorem.  Returns the color of each edge (0-based).
    """
    palette: Dict[Tuple[int, Hashable], _Palette] = {}
    colors: List[int] = [-1] * len(edges)

    def at(vertex) -> "_Palette":
        p = palette.get(vertex)
        if p is None:
            p = palette[vertex] = _Palette()
        return p

    for k, (left, right) in enumerate(edges):
        u, v = at((0, left)), at((1, right))
        a = u.lowest_free()
        b = v.lowest_free()
        if a in v.used:
            # walk the a/b alternating path from v and swap its colors;
            # in a bipartite graph it cannot reach u
            path = []
            node, side, want = v, 1, a
            while want in node.used:
                e = node.used[want]
                path.append(e)
                l, r = edges[e]
                node, side = (palette[(0, l)], 0) if side == 1 else (palette[(1, r)], 1)
                want = b if want == a else a
            for e in path:
                l, r = edges[e]
                palette[(0, l)].release(colors[e])
                palette[(1, r)].release(colors[e])
            for e in path:
                l, r = edges[e]
                colors[e] = b if colors[e] == a else a
                palette[(0, l)].take(colors[e], e)
                palette[(1, r)].take(colors[e], e)
        colors[k] = a
        u.take(a, k)
        v.take(a, k)
    return colors


class _Palette:
    """Colors in use at one vertex, with a heap of gaps for fast lookup."""

    __slots__ = ("used", "top", "gaps")

    def __init__(self):
        self.used: Dict[int, int] = {}
        self.top = 0
        self.gaps: List[int] = []

    def lowest_free(self) -> int:
        while self.gaps and self.gaps[0] in self.used:
            heapq.heappop(self.gaps)
        return self.gaps[0] if self.gaps else self.top

    def take(self, color: int, edge: int) -> None:
        if color >= self.top:
            for c in range(self.top, color):
                heapq.heappush(self.gaps, c)
            self.top = color + 1
        self.used[color] = edge

    def release(self, color: int) -> None:
        del self.used[color]
        heapq.heappush(self.gaps, color)
