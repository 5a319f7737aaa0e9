"""Exact transportation feasibility via Edmonds-Karp max-flow.

Capacities are ints or ``Fraction``s; augmenting along shortest paths keeps
every flow value inside the same number domain, so integer inputs give an
integral witness and rational inputs a rational one.
"""
from collections import deque


class FlowNetwork:
    def __init__(self, n):
        self.n = n
        self.adj = [[] for _ in range(n)]
        # edge list: [to, capacity, reverse edge index]
        self.edges = []

    def add_edge(self, u, v, cap):
        self.adj[u].append(len(self.edges))
        self.edges.append([v, cap, len(self.edges) + 1])
        self.adj[v].append(len(self.edges))
        self.edges.append([u, 0, len(self.edges) - 1])
        return len(self.edges) - 2

    def max_flow(self, s, t):
        total = 0
        edges = self.edges
        while True:
            parent = [-1] * self.n
            parent[s] = -2
            queue = deque([s])
            while queue and parent[t] == -1:
                u = queue.popleft()
                for ei in self.adj[u]:
                    v, cap, _ = edges[ei]
                    if cap > 0 and parent[v] == -1:
                        parent[v] = ei
                        queue.append(v)
            if parent[t] == -1:
                return total
            push = None
            v = t
            while v != s:
                ei = parent[v]
                push = edges[ei][1] if push is None else min(push, edges[ei][1])
                v = edges[edges[ei][2]][0]
            v = t
            while v != s:
                ei = parent[v]
                edges[ei][1] -= push
                edges[edges[ei][2]][1] += push
                v = edges[edges[ei][2]][0]
            total += push

    def flow_on(self, ei):
        """Flow currently carried by forward edge ``ei``."""
        return self.edges[self.edges[ei][2]][1]


def transport(supply, demand, allowed):
    """Find rho on ``allowed`` pairs with the given row and column sums.

    ``supply`` and ``demand`` are sequences of (key, amount) with positive
    amounts; ``allowed`` is an iterable of (left key, right key).  Returns a
    dict from allowed pairs to positive amounts, or None if infeasible.
    """
    total = sum(a for _, a in supply)
    if total != sum(a for _, a in demand):
        return None
    left = {k: i + 1 for i, (k, _) in enumerate(supply)}
    right = {k: len(left) + 1 + j for j, (k, _) in enumerate(demand)}
    sink = len(left) + len(right) + 1
    net = FlowNetwork(sink + 1)
    for k, a in supply:
        net.add_edge(0, left[k], a)
    for k, a in demand:
        net.add_edge(right[k], sink, a)
    middle = []
    for pair in allowed:
        l, r = pair
        if l in left and r in right:
            # the source edge bounds this flow, so ``total`` acts as infinity
            middle.append((pair, net.add_edge(left[l], right[r], total)))
    if net.max_flow(0, sink) != total:
        return None
    witness = {}
    for pair, ei in middle:
        f = net.flow_on(ei)
        if f:
            witness[pair] = f
    return witness
