"""Predicate-level dependency graph and dependency-ordered goal scheduling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import networkx as nx

from .program import Literal, Program, instantiate_body_only_variables

Node = tuple  # (predicate, arity)


@dataclass(frozen=True)
class DependencyGraph:
    graph: nx.DiGraph  # edge p -> q: q occurs in the body of a rule with head p
    component: dict  # node -> SCC index
    rank: dict  # SCC index -> topological rank, dependencies ranked lower

    def depends_on(self, p: Node, q: Node) -> bool:
        """True when p depends on q, directly or through other predicates."""
        if p not in self.graph or q not in self.graph:
            return False
        return any(nx.has_path(self.graph, r, q) for r in self.graph.successors(p))

    def node_rank(self, node: Node) -> int:
        if node not in self.component:
            return 0
        return self.rank[self.component[node]]

    def sccs(self) -> list[set]:
        groups: dict[int, set] = {}
        for node, c in self.component.items():
            groups.setdefault(c, set()).add(node)
        return [groups[c] for c in sorted(groups)]


def build_dependency_graph(program: Program) -> DependencyGraph:
    program = instantiate_body_only_variables(program)
    g = nx.DiGraph()
    for rule in program.rules:
        head = rule.head.signature
        g.add_node(head)
        for lit in rule.body:
            g.add_edge(head, lit.atom.signature)
    cond = nx.condensation(g)
    component = dict(cond.graph["mapping"])
    # rank = length of the longest dependency path below a component
    rank = {}
    for c in reversed(list(nx.topological_sort(cond))):
        rank[c] = max((rank[d] + 1 for d in cond.successors(c)), default=0)
    return DependencyGraph(g, component, rank)


def order_goals(graph: DependencyGraph, goals: Sequence[Literal]) -> list[Literal]:
    """Stable sort of goals so that dependencies come before their dependents."""
    return sorted(goals, key=lambda l: graph.node_rank(l.atom.signature))
