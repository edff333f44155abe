import re
from functools import cached_property
from typing import Dict, List, Set, Tuple

import networkx as nx

from drawext.constants import CROSSING_PREFIX, IC_PLANAR, MODES, ONE_PLANAR
from drawext.drawing import (Edge, Node, OnePlanarDrawing, Violation, cyclic_canonical, edge_key, restrict,
                             validate_ic_planar, validate_one_planar)
from drawext.exceptions import InstanceError


class ExtensionInstance:
    """A graph G together with a fixed drawing of a connected subgraph H of G.

    Attributes
        :graph: The full graph G.
        :drawing: The fixed 1-planar drawing of H.
        :mode: '1planar' or 'ic'.
    """

    def __init__(self, graph: nx.Graph, drawing: OnePlanarDrawing, mode: str = ONE_PLANAR):
        self.graph: nx.Graph = graph
        self.drawing: OnePlanarDrawing = drawing
        self.mode: str = mode

        self._validate_mode()
        self._validate_subgraph()
        self._validate_drawing()
        self._validate_added_vertices()

    def __repr__(self):
        return f'ExtensionInstance(n={self.graph.number_of_nodes()}, h={len(self.h_vertices)}, ' \
               f'v_add={len(self.v_add)}, k={self.k}, kappa={self.kappa}, mode={self.mode})'

    @property
    def ic(self) -> bool:
        return self.mode == IC_PLANAR

    @cached_property
    def h_graph(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(self.drawing.vertices)
        h.add_edges_from(self.drawing.edges)

        return h

    @cached_property
    def h_vertices(self) -> Set[Node]:
        return set(self.drawing.vertices)

    @cached_property
    def h_edges(self) -> Set[Edge]:
        return set(self.drawing.edges)

    @cached_property
    def v_add(self) -> List[Node]:
        return sorted(n for n in self.graph.nodes if n not in self.h_vertices)

    @cached_property
    def e_add(self) -> List[Edge]:
        return sorted(edge_key(u, v) for u, v in self.graph.edges if edge_key(u, v) not in self.h_edges)

    @cached_property
    def e_add_h(self) -> List[Edge]:
        """Added edges with both endpoints in H."""
        return [e for e in self.e_add if e[0] in self.h_vertices and e[1] in self.h_vertices]

    @cached_property
    def e_add_not_h(self) -> List[Edge]:
        return [e for e in self.e_add if e[0] not in self.h_vertices or e[1] not in self.h_vertices]

    @cached_property
    def join_vertices(self) -> Set[Node]:
        """H vertices incident to at least one added edge."""
        return {w for e in self.e_add for w in e if w in self.h_vertices}

    @property
    def k(self) -> int:
        return len(self.e_add)

    @property
    def kappa(self) -> int:
        return len(self.v_add) + len(self.e_add_h)

    def added_neighbours(self, v: Node) -> List[Node]:
        """Endpoints of added edges at v, in sorted order."""
        return sorted(w for w in self.graph.neighbors(v) if edge_key(v, w) not in self.h_edges)

    def with_parts(self, graph: nx.Graph, drawing: OnePlanarDrawing) -> 'ExtensionInstance':
        """Returns a new instance of the same mode on other data."""
        return ExtensionInstance(graph, drawing, self.mode)

    def _validate_mode(self):
        if self.mode not in MODES:
            raise InstanceError(f'Expected a mode in {MODES}, found {self.mode}.')

    def _validate_subgraph(self):
        for v in self.drawing.vertices:
            if v not in self.graph:
                raise InstanceError(f'Drawn vertex {v} is not a vertex of G.')

        for u, v in self.drawing.edges:
            if not self.graph.has_edge(u, v):
                raise InstanceError(f'Drawn edge {(u, v)} is not an edge of G.')

        for v in self.graph.nodes:
            if not isinstance(v, str) or re.fullmatch(rf'{CROSSING_PREFIX}\d+', v):
                raise InstanceError(f'Vertex ids must be strings that do not look like crossing ids, found {v!r}.')

        if not self.drawing.vertices:
            raise InstanceError('Expected at least 1 drawn vertex, found 0.')

        if not nx.is_connected(self.h_graph):
            raise InstanceError(f'H must be connected, found {nx.number_connected_components(self.h_graph)} components.')

    def _validate_drawing(self):
        violations = validate_ic_planar(self.drawing) if self.ic else validate_one_planar(self.drawing)
        if violations:
            raise InstanceError(f'The drawing of H is invalid: {violations[0].message}')

    def _validate_added_vertices(self):
        for v in self.v_add:
            if self.graph.degree(v) < 1:
                raise InstanceError(f'Expected at least 1 added edge at {v}, found 0.')


def extension_violations(solution: OnePlanarDrawing, instance: ExtensionInstance) -> List[Violation]:
    """Lists why solution is not an extension of the instance; empty when it is one."""
    violations: List[Violation] = []
    graph_edges = {edge_key(u, v) for u, v in instance.graph.edges}
    for v in sorted(set(instance.graph.nodes) - set(solution.vertices)):
        violations.append(Violation('missing-vertex', v, f'Vertex {v} of G is not drawn.'))

    for v in sorted(set(solution.vertices) - set(instance.graph.nodes)):
        violations.append(Violation('extra-vertex', v, f'Vertex {v} is drawn but not in G.'))

    for e in sorted(graph_edges - set(solution.edges)):
        violations.append(Violation('missing-edge', e, f'Edge {e} of G is not drawn.'))

    for e in sorted(set(solution.edges) - graph_edges):
        violations.append(Violation('extra-edge', e, f'Edge {e} is drawn but not in G.'))

    if violations:
        return violations

    violations = validate_ic_planar(solution) if instance.ic else validate_one_planar(solution)
    if violations:
        return violations

    return embedding_differences(restrict(solution, instance.h_vertices, instance.h_edges), instance.drawing)


def embedding_differences(restricted: OnePlanarDrawing, base: OnePlanarDrawing) -> List[Violation]:
    """Compares two drawings of the same graph by rotation, crossings and outer face, matching crossings by edge pair."""
    if set(restricted.vertices) != set(base.vertices) or set(restricted.edges) != set(base.edges):
        return [Violation('graph', None, 'The drawings do not draw the same graph.')]

    by_pair: Dict[Tuple[Edge, Edge], Node] = {pair: x for x, pair in base.crossings.items()}
    rename: Dict[Node, Node] = {}
    for x, pair in restricted.crossings.items():
        if pair not in by_pair:
            return [Violation('crossing', pair, f'Edges {pair[0]} and {pair[1]} cross outside the base drawing.')]

        rename[x] = by_pair[pair]

    if len(rename) != len(base.crossings):
        return [Violation('crossing', None, f'Expected {len(base.crossings)} crossings of H, found {len(rename)}.')]

    violations = []
    for node, nbrs in sorted(restricted.rotation.items()):
        node = rename.get(node, node)
        ours = cyclic_canonical(rename.get(w, w) for w in nbrs)
        if ours != cyclic_canonical(base.rotation[node]):
            violations.append(Violation('rotation', node, f'Rotation at {node} differs: expected '
                                                          f'{base.rotation[node]}, found {tuple(ours)}.'))

    if violations or base.outer is None:
        return violations

    back = {v: k for k, v in rename.items()}
    outer = (back.get(base.outer[0], base.outer[0]), back.get(base.outer[1], base.outer[1]))
    if restricted.outer is None or restricted.walk_of[outer] != restricted.walk_of[restricted.outer]:
        violations.append(Violation('outer-face', base.outer, 'The outer face of H differs from the base drawing.'))

    return violations


def is_extension(solution: OnePlanarDrawing, instance: ExtensionInstance) -> bool:
    return not extension_violations(solution, instance)
