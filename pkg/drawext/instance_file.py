"""JSON instance and solution documents.

An instance document holds the drawing of H and the parts to add::

    {
      "vertices": ["a", "b", "c"],
      "h_edges": [["a", "b"], ["a", "c"], ["b", "c"]],
      "crossings": [],
      "rotation": {"a": [[0, 0], [1, 0]], ...},
      "outer": {"node": "a", "segment": [0, 0]},
      "add_vertices": ["u"],
      "add_edges": [["a", "u"]],
      "mode": "1planar"
    }

Edges are referenced by their index in ``h_edges``; a segment reference ``[edge, i]`` names the i-th
piece of the edge counted from its first endpoint. Crossing nodes are named ``x0``, ``x1``, ... by
their index in ``crossings``. A solution document has the same drawing members with ``edges`` in
place of ``h_edges`` and no added parts.
"""
import json
from typing import Dict, List, Optional, Tuple

import networkx as nx

from drawext.constants import CROSSING_PREFIX, MODES, ONE_PLANAR
from drawext.drawing import (Dart, Edge, Node, OnePlanarDrawing, cyclic_canonical, edge_key, twin,
                             validate_one_planar)
from drawext.exceptions import InstanceError, ParseError, SemanticError, StructureError
from drawext.instance import ExtensionInstance

DRAWING_KEYS = {'vertices', 'crossings', 'rotation', 'outer'}
INSTANCE_KEYS = DRAWING_KEYS | {'h_edges', 'add_vertices', 'add_edges'}
SOLUTION_KEYS = DRAWING_KEYS | {'edges'}


def _dumps(doc: Dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + '\n'


def _drawing_doc(drawing: OnePlanarDrawing, edges_key: str) -> Dict:
    edges = list(drawing.edges)
    eid = {e: i for i, e in enumerate(edges)}
    pairs = sorted(tuple(sorted(eid[e] for e in pair)) for pair in drawing.crossings.values())
    names = {x: f'{CROSSING_PREFIX}{pairs.index(tuple(sorted(eid[e] for e in pair)))}'
             for x, pair in drawing.crossings.items()}

    def ref(dart: Dart) -> List[int]:
        e = drawing.edge_of(dart)
        segments = drawing.segments(e)
        return [eid[e], segments.index(dart) if dart in segments else segments.index(twin(dart))]

    def dart_doc(dart: Optional[Dart]) -> Optional[Dict]:
        if dart is None:
            return None

        return {'node': names.get(dart[0], dart[0]), 'segment': ref(dart)}

    rotation = {}
    for node, nbrs in drawing.rotation.items():
        refs = cyclic_canonical(tuple(ref((node, w))) for w in nbrs)
        rotation[names.get(node, node)] = [list(r) for r in refs]

    doc = {
        'vertices': list(drawing.vertices),
        edges_key: [list(e) for e in edges],
        'crossings': [{'edges': list(pair)} for pair in pairs],
        'rotation': rotation,
        'outer': dart_doc(drawing.outer),
    }
    if drawing.nested:
        doc['nested'] = {anchor: {'outward': dart_doc(outward), 'host': dart_doc(host)}
                         for anchor, (outward, host) in drawing.nested.items()}

    return doc


def write_instance(instance: ExtensionInstance) -> str:
    """Serializes an instance in canonical form: sorted keys and fixed array orders."""
    doc = _drawing_doc(instance.drawing, 'h_edges')
    doc['add_vertices'] = list(instance.v_add)
    doc['add_edges'] = [list(e) for e in instance.e_add]
    doc['mode'] = instance.mode

    return _dumps(doc)


def write_drawing(drawing: OnePlanarDrawing) -> str:
    """Serializes a solution drawing in canonical form."""
    return _dumps(_drawing_doc(drawing, 'edges'))


def _load(text: str) -> Dict:
    try:
        doc = json.loads(text)

    except json.JSONDecodeError as exc:
        raise ParseError(f'Invalid JSON: {exc.msg}.', f'line {exc.lineno}') from exc

    if not isinstance(doc, dict):
        raise ParseError(f'Expected a JSON object, found {type(doc).__name__}.', '$')

    return doc


def _check_keys(doc: Dict, required: set, optional: set):
    for key in sorted(required - set(doc)):
        raise ParseError(f'Missing member {key!r}.', '$')

    for key in sorted(set(doc) - required - optional):
        raise ParseError(f'Unknown member {key!r}.', f'$.{key}')


def _ids(value, path: str) -> List[str]:
    if not isinstance(value, list):
        raise ParseError(f'Expected a list of ids, found {type(value).__name__}.', path)

    for i, v in enumerate(value):
        if not isinstance(v, str):
            raise ParseError(f'Expected a string id, found {v!r}.', f'{path}[{i}]')

    if len(set(value)) != len(value):
        raise SemanticError(f'Ids in {path} must be distinct.', path)

    return value


def _edges(value, path: str) -> List[Edge]:
    if not isinstance(value, list):
        raise ParseError(f'Expected a list of edges, found {type(value).__name__}.', path)

    edges = []
    for i, e in enumerate(value):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(w, str) for w in e)):
            raise ParseError(f'Expected an edge [u, v], found {e!r}.', f'{path}[{i}]')

        if e[0] == e[1]:
            raise SemanticError(f'Self-loop at {e[0]} is not allowed.', f'{path}[{i}]')

        key = edge_key(*e)
        if key in edges:
            raise SemanticError(f'Edge {key} is listed twice.', f'{path}[{i}]')

        edges.append(key)

    return edges


def _int(value, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f'Expected an integer, found {value!r}.', path)

    return value


class _DrawingReader:
    """Turns the drawing members of a document back into a map, checking every reference."""

    def __init__(self, doc: Dict, edges_key: str):
        self.doc = doc
        self.edges_key = edges_key
        self.vertices = _ids(doc['vertices'], '$.vertices')
        self.edges = _edges(doc[edges_key], f'$.{edges_key}')
        for i, e in enumerate(self.edges):
            for w in e:
                if w not in self.vertices:
                    raise SemanticError(f'Edge {e} has the unknown endpoint {w}.', f'$.{edges_key}[{i}]')

        self.crossings: Dict[Node, Tuple[Edge, Edge]] = {}
        self.crossed: Dict[int, Node] = {}
        self.violations = []
        self._read_crossings()

    def _read_crossings(self):
        value = self.doc['crossings']
        if not isinstance(value, list):
            raise ParseError(f'Expected a list of crossings, found {type(value).__name__}.', '$.crossings')

        for i, item in enumerate(value):
            path = f'$.crossings[{i}]'
            if not isinstance(item, dict) or set(item) != {'edges'} or not isinstance(item['edges'], list) \
                    or len(item['edges']) != 2:
                raise ParseError(f'Expected {{"edges": [i, j]}}, found {item!r}.', path)

            x = f'{CROSSING_PREFIX}{i}'
            pair = []
            for j, raw in enumerate(item['edges']):
                index = _int(raw, f'{path}.edges[{j}]')
                if not 0 <= index < len(self.edges):
                    raise SemanticError(f'Expected an edge index below {len(self.edges)}, found {index}.',
                                        f'{path}.edges[{j}]')

                if index in self.crossed:
                    raise SemanticError(f'Edge {self.edges[index]} is in two crossings '
                                        f'({self.crossed[index]} and {x}).', f'{path}.edges[{j}]')

                self.crossed[index] = x
                pair.append(self.edges[index])

            self.crossings[x] = tuple(sorted(pair))

    def segments(self, index: int) -> List[Dart]:
        u, v = self.edges[index]
        x = self.crossed.get(index)
        if x is None:
            return [(u, v)]

        return [(u, x), (x, v)]

    def dart(self, node: Node, value, path: str) -> Dart:
        if not (isinstance(value, list) and len(value) == 2):
            raise ParseError(f'Expected a segment reference [edge, index], found {value!r}.', path)

        index = _int(value[0], f'{path}[0]')
        seg = _int(value[1], f'{path}[1]')
        if not 0 <= index < len(self.edges):
            raise SemanticError(f'Expected an edge index below {len(self.edges)}, found {index}.', path)

        segments = self.segments(index)
        if not 0 <= seg < len(segments):
            raise SemanticError(f'Edge {self.edges[index]} has {len(segments)} segment(s), found index {seg}.', path)

        a, b = segments[seg]
        if node not in (a, b):
            raise SemanticError(f'Segment {[index, seg]} of {self.edges[index]} is not incident to {node}.', path)

        return (node, b) if node == a else (node, a)

    def dart_ref(self, value, path: str, nodes: set) -> Optional[Dart]:
        if value is None:
            return None

        if not isinstance(value, dict) or set(value) != {'node', 'segment'}:
            raise ParseError(f'Expected {{"node": id, "segment": [edge, index]}}, found {value!r}.', path)

        if value['node'] not in nodes:
            raise SemanticError(f'Unknown node {value["node"]!r}.', f'{path}.node')

        return self.dart(value['node'], value['segment'], f'{path}.segment')

    def read(self) -> OnePlanarDrawing:
        value = self.doc['rotation']
        if not isinstance(value, dict):
            raise ParseError(f'Expected a rotation object, found {type(value).__name__}.', '$.rotation')

        nodes = set(self.vertices) | set(self.crossings)
        for node in sorted(set(value) - nodes):
            raise SemanticError(f'Rotation names the unknown node {node!r}.', f'$.rotation.{node}')

        for node in sorted(nodes - set(value)):
            raise SemanticError(f'Node {node} has no rotation.', '$.rotation')

        rotation = {}
        for node, refs in value.items():
            path = f'$.rotation.{node}'
            if not isinstance(refs, list):
                raise ParseError(f'Expected a list of segment references, found {type(refs).__name__}.', path)

            rotation[node] = tuple(self.dart(node, r, f'{path}[{i}]')[1] for i, r in enumerate(refs))

        for x in sorted(self.crossings):
            if len(rotation[x]) != 4:
                raise SemanticError(f'Expected 4 segments at crossing {x}, found {len(rotation[x])}.', f'$.rotation.{x}')

        outer = self.dart_ref(self.doc['outer'], '$.outer', nodes)
        nested = {}
        raw_nested = self.doc.get('nested', {})
        if not isinstance(raw_nested, dict):
            raise ParseError(f'Expected a nested object, found {type(raw_nested).__name__}.', '$.nested')

        for anchor, entry in raw_nested.items():
            path = f'$.nested.{anchor}'
            if anchor not in self.vertices:
                raise SemanticError(f'Nested anchor {anchor!r} is not a vertex.', path)

            if not isinstance(entry, dict) or set(entry) != {'outward', 'host'} or entry['host'] is None:
                raise ParseError(f'Expected {{"outward": ..., "host": ...}}, found {entry!r}.', path)

            nested[anchor] = (self.dart_ref(entry['outward'], f'{path}.outward', nodes),
                              self.dart_ref(entry['host'], f'{path}.host', nodes))

        drawing = OnePlanarDrawing(rotation, self.crossings, outer, nested)
        try:
            violations = validate_one_planar(drawing)

        except StructureError as exc:
            raise SemanticError(exc.message, '$.rotation') from exc

        self.violations = violations
        return drawing


def parse_instance(text: str) -> ExtensionInstance:
    """Reads an instance document.

    :raises ParseError: on malformed JSON or members of the wrong shape.
    :raises SemanticError: when the document describes no valid instance.
    """
    doc = _load(text)
    _check_keys(doc, INSTANCE_KEYS, {'mode', 'nested'})
    reader = _DrawingReader(doc, 'h_edges')
    drawing = reader.read()
    if reader.violations:
        raise SemanticError(reader.violations[0].message, '$.rotation')

    mode = doc.get('mode', ONE_PLANAR)
    if mode not in MODES:
        raise SemanticError(f'Expected a mode in {MODES}, found {mode!r}.', '$.mode')

    add_vertices = _ids(doc['add_vertices'], '$.add_vertices')
    add_edges = _edges(doc['add_edges'], '$.add_edges')
    graph = nx.Graph()
    graph.add_nodes_from(reader.vertices)
    graph.add_nodes_from(add_vertices)
    graph.add_edges_from(reader.edges)
    for i, e in enumerate(add_edges):
        for w in e:
            if w not in graph:
                raise SemanticError(f'Added edge {e} has the unknown endpoint {w}.', f'$.add_edges[{i}]')

        if e in reader.edges:
            raise SemanticError(f'Added edge {e} is already drawn.', f'$.add_edges[{i}]')

    graph.add_edges_from(add_edges)
    for v in add_vertices:
        if v in reader.vertices:
            raise SemanticError(f'Added vertex {v} is already drawn.', '$.add_vertices')

    try:
        return ExtensionInstance(graph, drawing, mode)

    except InstanceError as exc:
        raise SemanticError(exc.message, '$') from exc


def parse_drawing(text: str) -> OnePlanarDrawing:
    """Reads a solution document. Structural errors raise; 1-planarity is left to the validators.

    :raises ParseError: on malformed JSON or members of the wrong shape.
    :raises SemanticError: when a reference does not resolve or the map is malformed.
    """
    doc = _load(text)
    _check_keys(doc, SOLUTION_KEYS, {'nested'})

    return _DrawingReader(doc, 'edges').read()
