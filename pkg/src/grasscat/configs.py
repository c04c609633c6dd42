"""Subspace configurations read off the close-packed contours of a profile."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

import networkx as nx

from grasscat.errors import DomainError
from grasscat.profiles import Profile, quasi_boxes


class Verdict(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


@dataclass
class SubspacePoset:
    """Vertices carry multiplicities; an edge u -> v means u includes into v."""

    graph: nx.DiGraph
    bottom: str

    def mult(self, v: str) -> int:
        return self.graph.nodes[v]["mult"]

    @property
    def rank(self) -> int:
        return self.mult(self.bottom)

    def multiplicities(self) -> list[int]:
        return sorted(self.mult(v) for v in self.graph)

    def copy(self) -> "SubspacePoset":
        return SubspacePoset(self.graph.copy(), self.bottom)

    def to_json(self) -> dict:
        return {
            "vertices": [[v, self.mult(v)] for v in self.graph],
            "edges": [list(e) for e in self.graph.edges],
            "bottom": self.bottom,
        }

    def to_dot(self) -> str:
        lines = ["digraph poset {"]
        for v in self.graph:
            lines.append(f'  "{v}" [label="{self.mult(v)}"];')
        for a, b in self.graph.edges:
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines)


def poset_from_graph(mults: dict[str, int], edges) -> SubspacePoset:
    G = nx.DiGraph()
    for v, m in mults.items():
        G.add_node(v, mult=m)
    G.add_edges_from(edges)
    top = max(mults.values())
    bottoms = [v for v, m in mults.items() if m == top]
    if len(bottoms) != 1:
        raise DomainError("the rank must label exactly one vertex")
    return SubspacePoset(G, bottoms[0])


def poset_from_profile(P: Profile) -> SubspacePoset:
    """One vertex per quasi-box between rows r and r+1 (multiplicity r), plus the bottom.

    A region joins the first region found directly below it along a shared
    edge: the next level whose quasi-box covers that edge, else the bottom.
    """
    m = P.m
    if m < 2:
        raise DomainError("no configuration for rank < 2")
    G = nx.DiGraph()
    levels: list[list[tuple[str, set[int]]]] = []
    for r in range(1, m):
        row = []
        for b, qb in enumerate(quasi_boxes(P.rows[r - 1], P.rows[r])):
            v = f"L{r}.{b}"
            G.add_node(v, mult=r, arc=qb.arc)
            row.append((v, set(qb.edges)))
        levels.append(row)
    bottom = f"L{m}"
    G.add_node(bottom, mult=m)
    for r, row in enumerate(levels):
        for v, edges in row:
            for e in edges:
                target = bottom
                for deeper in levels[r + 1 :]:
                    hit = [w for w, ew in deeper if e in ew]
                    if hit:
                        target = hit[0]
                        break
                G.add_edge(v, target)
    R = nx.transitive_reduction(G)
    R.add_nodes_from(G.nodes(data=True))
    return SubspacePoset(R, bottom)


def _removable(S: SubspacePoset, u: str) -> bool:
    """u equals the generic intersection of some of its out-neighbours inside a common z."""
    G = S.graph
    outs = sorted(G.successors(u))
    mu = S.mult(u)
    for t in range(2, len(outs) + 1):
        for ws in combinations(outs, t):
            common = set.intersection(*(set(nx.descendants(G, w)) for w in ws))
            for z in sorted(common):
                if sum(S.mult(w) for w in ws) - (t - 1) * S.mult(z) == mu:
                    return True
    return False


def simplify(S: SubspacePoset) -> SubspacePoset:
    """Drop subspaces forced as intersections, smallest id first, to a fixed point."""
    S = S.copy()
    while True:
        for u in sorted(S.graph):
            if u != S.bottom and _removable(S, u):
                G = S.graph
                for a in list(G.predecessors(u)):
                    for b in G.successors(u):
                        G.add_edge(a, b)
                G.remove_node(u)
                R = nx.transitive_reduction(G)
                R.add_nodes_from(G.nodes(data=True))
                S = SubspacePoset(R, S.bottom)
                break
        else:
            return S


def _tree_type(G: nx.Graph) -> Optional[str]:
    """'dynkin', 'euclidean' or None for a tree with a simply-laced shape."""
    if not nx.is_tree(G):
        if G.number_of_nodes() >= 3 and all(d == 2 for _, d in G.degree()) and nx.is_connected(G):
            return "euclidean"  # cycle: type A~
        return None
    deg = dict(G.degree())
    branch = [v for v, d in deg.items() if d >= 3]
    if not branch:
        return "dynkin"
    if len(branch) > 2 or any(deg[v] > 4 for v in branch):
        return None
    if len(branch) == 2:
        if any(deg[v] != 3 for v in branch):
            return None
        # D~: both branch points carry two leaves
        leaves = all(sum(1 for w in G[v] if deg[w] == 1) == 2 for v in branch)
        return "euclidean" if leaves else None
    c = branch[0]
    H = G.copy()
    H.remove_node(c)
    arms = sorted(len(comp) for comp in nx.connected_components(H))
    if deg[c] == 4:
        return "euclidean" if arms == [1, 1, 1, 1] else None
    p, q, r = arms
    s = Fraction(1, p + 1) + Fraction(1, q + 1) + Fraction(1, r + 1)
    if s > 1:
        return "dynkin"
    if s == 1:
        return "euclidean"
    return None


def tits_form(S: SubspacePoset) -> int:
    G = S.graph
    return sum(S.mult(v) ** 2 for v in G) - sum(S.mult(a) * S.mult(b) for a, b in G.edges)


def generic_indecomposable(S: SubspacePoset) -> Verdict:
    """Root test on the underlying graph of a simplified poset."""
    U = S.graph.to_undirected()
    if U.number_of_nodes() == 0 or not nx.is_connected(U):
        return Verdict.NO
    kind = _tree_type(U)
    qv = tits_form(S)
    if kind == "dynkin":
        return Verdict.YES if qv == 1 else Verdict.NO
    if kind == "euclidean":
        return Verdict.YES if qv in (0, 1) else Verdict.NO
    return Verdict.UNKNOWN


def classify_profile(P: Profile) -> Verdict:
    return generic_indecomposable(simplify(poset_from_profile(P)))
