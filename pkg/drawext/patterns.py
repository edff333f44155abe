"""Patterns record how the added part of a drawing meets the cells of H.

For every cell touched by an added edge, a pattern keeps the clockwise order in which added edges reach
the boundary, either at a vertex of H or by crossing one of its uncrossed edges. Cells are abstract
elements; a placement maps them back onto the cells of a concrete drawing.
"""
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import factorial
from typing import Dict, FrozenSet, Hashable, Iterator, List, NamedTuple, Optional, Tuple

from drawext.constants import CROSSING_TAG
from drawext.drawing import (CellId, Dart, Edge, Node, OnePlanarDrawing, Violation, base_dart, cell_lineage,
                             logger)
from drawext.embedding_graph import EDGE, FACE, EmbeddingGraph
from drawext.exceptions import PatternError
from drawext.instance import ExtensionInstance, extension_violations

Element = Hashable
Entry = Tuple[Edge, str]


def rotation_key(seq) -> Tuple:
    """Smallest rotation of a cyclic sequence, equal for sequences that differ by rotation only."""
    seq = tuple(seq)
    if not seq:
        return seq

    return min(seq[i:] + seq[:i] for i in range(len(seq)))


@dataclass(frozen=True, eq=False)
class Pattern:
    """A pattern over abstract cells.

    Patterns compare equal when they differ only by the names of their elements and by rotations of
    their cyclic orders.

    Attributes
        :elements: The abstract cells.
        :vertex_faces: Cell of every added vertex.
        :edge_faces: For every added edge, the cell it leaves its first endpoint in and the cell it
            reaches its second endpoint in. Edges that stay in one cell map to the same element twice.
        :join_faces: For every vertex of H with an added edge, the cells it is reached in.
        :orders: Per cell, the clockwise cyclic order of (edge, vertex of H) and (edge, 'crossing') entries.
    """
    elements: Tuple[Element, ...] = ()
    vertex_faces: Dict[Node, Element] = field(default_factory=dict)
    edge_faces: Dict[Edge, Tuple[Element, Element]] = field(default_factory=dict)
    join_faces: Dict[Node, FrozenSet[Element]] = field(default_factory=dict)
    orders: Dict[Element, Tuple[Entry, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self._validate_elements()
        self._validate_orders()

    def __repr__(self):
        return f'Pattern(elements={len(self.elements)}, edges={len(self.edge_faces)}, ' \
               f'vertices={len(self.vertex_faces)})'

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented

        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    @property
    def k(self) -> int:
        return len(self.edge_faces)

    def order(self, s: Element) -> Tuple[Entry, ...]:
        return self.orders.get(s, ())

    def walk_order(self, s: Element) -> Tuple[Entry, ...]:
        """Entries of s in the order a boundary walk with s on its left meets them."""
        return tuple(reversed(self.order(s)))

    def crossing_edges(self) -> List[Edge]:
        """Added edges that cross an edge of H."""
        return sorted({e for entries in self.orders.values() for e, tag in entries if tag == CROSSING_TAG})

    def relabel(self, mapping: Dict[Element, Element]) -> 'Pattern':
        return Pattern(tuple(mapping[s] for s in self.elements),
                       {v: mapping[s] for v, s in self.vertex_faces.items()},
                       {e: (mapping[a], mapping[b]) for e, (a, b) in self.edge_faces.items()},
                       {w: frozenset(mapping[s] for s in faces) for w, faces in self.join_faces.items()},
                       {mapping[s]: entries for s, entries in self.orders.items()})

    def restricted(self, elements) -> 'Pattern':
        """The part of the pattern living in the given elements."""
        keep = set(elements)
        return Pattern(tuple(s for s in self.elements if s in keep),
                       {v: s for v, s in self.vertex_faces.items() if s in keep},
                       {e: pair for e, pair in self.edge_faces.items() if pair[0] in keep},
                       {w: faces & keep for w, faces in self.join_faces.items() if faces & keep},
                       {s: entries for s, entries in self.orders.items() if s in keep})

    def canonical(self) -> Tuple:
        """Names elements by first use over sorted vertices then sorted edges."""
        first_use: List[Element] = [self.vertex_faces[v] for v in sorted(self.vertex_faces)]
        for e in sorted(self.edge_faces):
            first_use.extend(self.edge_faces[e])

        first_use.extend(sorted(self.elements, key=repr))
        names: Dict[Element, int] = {}
        for s in first_use:
            names.setdefault(s, len(names))

        return (len(self.elements),
                tuple(sorted((v, names[s]) for v, s in self.vertex_faces.items())),
                tuple(sorted((e, (names[a], names[b])) for e, (a, b) in self.edge_faces.items())),
                tuple(sorted((w, tuple(sorted(names[s] for s in faces))) for w, faces in self.join_faces.items())),
                tuple(sorted((names[s], rotation_key(entries)) for s, entries in self.orders.items() if entries)))

    def _validate_elements(self):
        if len(set(self.elements)) != len(self.elements):
            raise PatternError(f'Expected distinct elements, found {self.elements}.')

        if len(self.elements) > 2 * self.k:
            raise PatternError(f'Expected at most {2 * self.k} elements for {self.k} edges, found {len(self.elements)}.')

        known = set(self.elements)
        used = list(self.vertex_faces.values()) + [s for pair in self.edge_faces.values() for s in pair]
        used.extend(s for faces in self.join_faces.values() for s in faces)
        used.extend(self.orders)
        for s in used:
            if s not in known:
                raise PatternError(f'Element {s!r} is not one of {self.elements}.')

    def _validate_orders(self):
        for s, entries in self.orders.items():
            for (e, tag), count in Counter(entries).items():
                if e not in self.edge_faces:
                    raise PatternError(f'Entry {(e, tag)} names {e}, which is not an added edge.')

                if s not in self.edge_faces[e]:
                    raise PatternError(f'Edge {e} occurs around {s!r} but runs through {self.edge_faces[e]}.')

                if tag == CROSSING_TAG:
                    if count > 2:
                        raise PatternError(f'Expected at most 2 crossings of {e} around {s!r}, found {count}.')

                    continue

                if count > 1:
                    raise PatternError(f'Expected {(e, tag)} at most once around {s!r}, found {count}.')

                if tag not in e:
                    raise PatternError(f'Entry {(e, tag)} joins {e} to a vertex it does not end at.')

                if s not in self.join_faces.get(tag, ()):
                    raise PatternError(f'Vertex {tag} is reached around {s!r}, which is not one of its cells.')

            for e, count in Counter(e for e, _ in entries).items():
                if count > 2:
                    raise PatternError(f'Expected at most 2 entries of {e} around {s!r}, found {count}.')


def conformance_errors(pattern: Pattern, instance: ExtensionInstance) -> List[Violation]:
    """Lists why a pattern cannot describe an extension of the instance."""
    errors: List[Violation] = []
    if set(pattern.vertex_faces) != set(instance.v_add):
        errors.append(Violation('domain', 'vertices', f'Expected cells for {instance.v_add}, '
                                                      f'found {sorted(pattern.vertex_faces)}.'))

    if set(pattern.edge_faces) != set(instance.e_add):
        errors.append(Violation('domain', 'edges', f'Expected cells for {instance.e_add}, '
                                                   f'found {sorted(pattern.edge_faces)}.'))

    if set(pattern.join_faces) != instance.join_vertices:
        errors.append(Violation('domain', 'join', f'Expected cells for {sorted(instance.join_vertices)}, '
                                                  f'found {sorted(pattern.join_faces)}.'))

    if errors:
        return errors

    for e, faces in sorted(pattern.edge_faces.items()):
        for side, q in enumerate(e):
            s = faces[side]
            if q in instance.h_vertices:
                count = pattern.order(s).count((e, q))
                if count != 1:
                    errors.append(Violation('endpoint', (e, q), f'Expected the end of {e} at {q} once around '
                                                                f'{s!r}, found {count}.'))

            elif pattern.vertex_faces[q] != s:
                errors.append(Violation('endpoint', (e, q), f'Edge {e} leaves {q} in {s!r}, but {q} lies in '
                                                            f'{pattern.vertex_faces[q]!r}.'))

        a, b = faces
        counts = (pattern.order(a).count((e, CROSSING_TAG)), pattern.order(b).count((e, CROSSING_TAG)))
        if a == b and counts[0] not in (0, 2):
            errors.append(Violation('crossing', e, f'Expected 0 or 2 crossings of {e} around {a!r}, '
                                                   f'found {counts[0]}.'))

        if a != b and counts != (1, 1):
            errors.append(Violation('crossing', e, f'Expected one crossing of {e} around each of {a!r} and '
                                                   f'{b!r}, found {counts}.'))

    return errors


def corner_edges(base: OnePlanarDrawing, current: OnePlanarDrawing, corner: Tuple[Node, Optional[Dart]]) -> List[Edge]:
    """Added edges leaving a corner of base in an extension of it, in clockwise order."""
    u, d = corner
    nbrs = current.rotation[u]
    if d is None:
        return [current.edge_of((u, w)) for w in nbrs]

    before = (u, base.pred_cw(u, d[1]))
    start = next(i for i, w in enumerate(nbrs) if base_dart(base, current, (u, w)) == before)
    found = []
    for step in range(1, len(nbrs) + 1):
        w = nbrs[(start + step) % len(nbrs)]
        if base_dart(base, current, (u, w)) is not None:
            break

        found.append(current.edge_of((u, w)))

    return found


def base_corner(base: OnePlanarDrawing, current: OnePlanarDrawing, corner: Tuple[Node, Optional[Dart]]) -> Optional[Dart]:
    """The dart of base whose corner contains a corner of current, None for a vertex isolated in base."""
    q, dart = corner
    if dart is None:
        return None

    nbrs = current.rotation[q]
    start = nbrs.index(dart[1])
    for step in range(len(nbrs)):
        parent = base_dart(base, current, (q, nbrs[(start + step) % len(nbrs)]))
        if parent is not None:
            return parent

    return None


def crossing_partner(base: OnePlanarDrawing, current: OnePlanarDrawing, dart: Dart) -> Optional[Edge]:
    """The added edge crossing an uncrossed segment of base in current, if any."""
    e = base.edge_of(dart)
    x = current.crossed_edges.get(e)
    if x is None or e in base.crossed_edges:
        return None

    return next(g for g in current.crossings[x] if g != e)


def _walk_entries(base: OnePlanarDrawing, current: OnePlanarDrawing, cell: CellId) -> List[Entry]:
    boundary = base.cell_by_id[cell]
    entries: List[Entry] = []
    if not boundary.darts:
        for v in boundary.floating:
            entries.extend((e, v) for e in corner_edges(base, current, (v, None)))

        return entries

    for d in boundary.darts:
        if not base.is_crossing(d[0]):
            entries.extend((e, d[0]) for e in corner_edges(base, current, (d[0], d)))

        if base.is_crossable(d):
            partner = crossing_partner(base, current, d)
            if partner is not None:
                entries.append((partner, CROSSING_TAG))

    return entries


def derive_pattern(solution: OnePlanarDrawing, instance: ExtensionInstance, validate: bool = True) -> Pattern:
    """Reads the pattern of a solution, naming every element by the base cell it stands for.

    :param validate: Checks first that solution is an extension of the instance.
    :raises PatternError: when solution is not an extension.
    """
    if validate:
        violations = extension_violations(solution, instance)
        if violations:
            raise PatternError(f'Cannot derive a pattern from an invalid solution: {violations[0].message}')

    base = instance.drawing
    lineage = cell_lineage(base, solution)
    vertex_faces = {v: lineage[solution.cells_of(v)[0]] for v in instance.v_add}
    edge_faces = {}
    for e in instance.e_add:
        segments = solution.segments(e)
        edge_faces[e] = (lineage[solution.cell_of(segments[0])], lineage[solution.cell_of(segments[-1])])

    elements = sorted({s for pair in edge_faces.values() for s in pair} | set(vertex_faces.values()), key=repr)
    join_faces = {w: frozenset(c for c in base.cells_of(w) if c in elements) for w in instance.join_vertices}
    orders = {s: tuple(reversed(_walk_entries(base, solution, s))) for s in elements}

    return Pattern(tuple(elements), vertex_faces, edge_faces, join_faces, orders)


def pattern_matches(derived: Pattern, pattern: Pattern, face_of: Dict[Element, CellId]) -> bool:
    """Whether a derived pattern realizes pattern once face_of maps the elements of pattern to cells."""
    if set(derived.elements) != {face_of[s] for s in pattern.elements}:
        return False

    if any(derived.vertex_faces.get(v) != face_of[s] for v, s in pattern.vertex_faces.items()):
        return False

    if any(derived.edge_faces.get(e) != (face_of[a], face_of[b]) for e, (a, b) in pattern.edge_faces.items()):
        return False

    for w, faces in pattern.join_faces.items():
        if not {face_of[s] for s in faces} <= derived.join_faces.get(w, frozenset()):
            return False

    return all(rotation_key(derived.order(face_of[s])) == rotation_key(pattern.order(s)) for s in pattern.elements)


def pattern_bound(k: int) -> int:
    return 2 * k * (2 ** (2 * k)) ** (3 * k) * (factorial(2 * k) * 2 ** (3 * k)) ** (2 * k)


def _entry_domain(instance: ExtensionInstance) -> List[Entry]:
    entries = {(e, q) for e in instance.e_add for q in e if q in instance.h_vertices}
    entries |= {(e, CROSSING_TAG) for e in instance.e_add}

    return sorted(entries)


def _cyclic_sequences(entries: List[Entry], longest: int) -> List[Tuple[Entry, ...]]:
    sequences = []
    for length in range(longest + 1):
        for seq in product(entries, repeat=length):
            if rotation_key(seq) != seq:
                continue

            counts = Counter(seq)
            if any(c > (2 if tag == CROSSING_TAG else 1) for (_, tag), c in counts.items()):
                continue

            if any(c > 2 for c in Counter(e for e, _ in seq).values()):
                continue

            sequences.append(seq)

    return sequences


def _all_patterns(instance: ExtensionInstance) -> Iterator[Pattern]:
    k = instance.k
    sequences = _cyclic_sequences(_entry_domain(instance), 2 * k)
    join = sorted(instance.join_vertices)
    for m in range(1, 2 * k + 1):
        elements = tuple(range(m))
        pairs = list(product(elements, repeat=2))
        subsets = [frozenset(c) for r in range(m + 1) for c in combinations(elements, r)]
        for vertex_choice in product(elements, repeat=len(instance.v_add)):
            for edge_choice in product(pairs, repeat=k):
                if len(set(vertex_choice) | {s for pair in edge_choice for s in pair}) != m:
                    continue

                for join_choice in product(subsets, repeat=len(join)):
                    for order_choice in product(sequences, repeat=m):
                        try:
                            pattern = Pattern(elements, dict(zip(instance.v_add, vertex_choice)),
                                              dict(zip(instance.e_add, edge_choice)), dict(zip(join, join_choice)),
                                              dict(zip(elements, order_choice)))

                        except PatternError:
                            continue

                        if not conformance_errors(pattern, instance):
                            yield pattern


def _block_labels(n: int) -> Iterator[Tuple[int, ...]]:
    """Restricted growth strings: every partition of n items into blocks, once."""
    def extend(labels: List[int], top: int):
        if len(labels) == n:
            yield tuple(labels)
            return

        for b in range(top + 2):
            yield from extend(labels + [b], max(top, b))

    if n == 0:
        yield ()
        return

    yield from extend([0], 0)


def _cyclic_orders(contacts: List[Entry]) -> List[Tuple[Entry, ...]]:
    if len(contacts) < 2:
        return [tuple(contacts)]

    found = {rotation_key((contacts[0],) + rest) for rest in permutations(contacts[1:])}
    return sorted(found)


def _minimal_patterns(instance: ExtensionInstance) -> Iterator[Pattern]:
    for kinds in product((False, True), repeat=instance.k):
        crossing = dict(zip(instance.e_add, kinds))
        slot_of = {}
        for e in instance.e_add:
            for side in (0, 1):
                slot_of[(e, side)] = (e, side if crossing[e] else 0)

        groups = _Groups()
        for (e, side), slot in slot_of.items():
            groups.add(slot)
            if e[side] in instance.v_add:
                groups.union(slot, e[side])

        for v in instance.v_add:
            groups.add(v)

        roots = sorted({groups.find(x) for x in groups.parent}, key=repr)
        for labels in _block_labels(len(roots)):
            block = dict(zip(roots, labels))
            face = {x: block[groups.find(x)] for x in groups.parent}
            elements = tuple(range(max(labels) + 1))
            edge_faces = {e: (face[slot_of[(e, 0)]], face[slot_of[(e, 1)]]) for e in instance.e_add}
            vertex_faces = {v: face[v] for v in instance.v_add}
            contacts: Dict[int, List[Entry]] = {s: [] for s in elements}
            for e in instance.e_add:
                for side, q in enumerate(e):
                    if q in instance.h_vertices:
                        contacts[edge_faces[e][side]].append((e, q))

                if crossing[e]:
                    contacts[edge_faces[e][0]].append((e, CROSSING_TAG))
                    contacts[edge_faces[e][1]].append((e, CROSSING_TAG))

            join_faces = {w: frozenset(s for s in elements if any(tag == w for _, tag in contacts[s]))
                          for w in instance.join_vertices}
            choices = [_cyclic_orders(contacts[s]) for s in elements]
            for orders in product(*choices):
                try:
                    pattern = Pattern(elements, vertex_faces, edge_faces, join_faces, dict(zip(elements, orders)))

                except PatternError:
                    continue

                if not conformance_errors(pattern, instance):
                    yield pattern


class _Groups:
    def __init__(self):
        self.parent = {}

    def add(self, a):
        self.parent.setdefault(a, a)

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]

        return a

    def union(self, a, b):
        self.add(a)
        self.add(b)
        self.parent[self.find(a)] = self.find(b)


def enumerate_patterns(instance: ExtensionInstance, minimal_incidences: bool = False) -> Iterator[Pattern]:
    """Yields every conformant pattern of the instance once.

    Elements of a pattern are always used by an added vertex or edge. The full enumeration is only practical
    for a single added edge. With minimal_incidences, every vertex of H is only reached in the cells its
    added edges end in, which is the form derived patterns take.
    """
    if not instance.e_add:
        yield Pattern()
        return

    seen = set()
    source = _minimal_patterns(instance) if minimal_incidences else _all_patterns(instance)
    for pattern in source:
        key = pattern.canonical()
        if key in seen:
            continue

        seen.add(key)
        yield pattern

    logger.debug(f'Enumerated {len(seen)} patterns for k={instance.k}')


class PlacementAssignment(NamedTuple):
    """Where the pattern lands in a drawing.

    Attributes
        :faces: Face-vertex chosen for each element.
        :crossings: Edge-vertex crossed by each added edge that crosses H.
        :shadows: Shadow vertex for each entry, keyed by element and index in walk order.
    """
    faces: Dict[Element, tuple]
    crossings: Dict[Edge, tuple]
    shadows: Dict[Tuple[Element, int], tuple]

    def cell(self, s: Element) -> CellId:
        return self.faces[s][1]

    def crossed_edge(self, e: Edge) -> Optional[Edge]:
        node = self.crossings.get(e)
        return None if node is None else node[1]


def _distinct_choices(keys: List, candidates: Dict) -> Iterator[Dict]:
    chosen: Dict = {}

    def extend(i: int):
        if i == len(keys):
            yield dict(chosen)
            return

        for c in candidates[keys[i]]:
            if c in chosen.values():
                continue

            chosen[keys[i]] = c
            yield from extend(i + 1)
            del chosen[keys[i]]

    yield from extend(0)


def _hosts(eg: EmbeddingGraph, pattern: Pattern, s: Element, cell: CellId) -> bool:
    return all(eg.shadows_of(cell, eg.vertex_node(w)) for w, faces in pattern.join_faces.items() if s in faces)


def _crossable_between(eg: EmbeddingGraph, e: Edge, a: CellId, b: CellId) -> List[tuple]:
    found = []
    drawing = eg.drawing
    for node, role in eg.graph.nodes(data='role'):
        if role != EDGE:
            continue

        u, w = node[1]
        if {u, w} & set(e):
            continue

        sides = sorted([drawing.cell_of((u, w)), drawing.cell_of((w, u))], key=repr)
        if sides == sorted([a, b], key=repr):
            found.append(node)

    return sorted(found)


def cyclically_ordered(positions: List[int], length: int) -> bool:
    """Whether positions on a cycle of the given length are met in this order by one turn around it."""
    m = len(positions)
    total = sum((positions[(i + 1) % m] - positions[i]) % length for i in range(m))

    return total in (0, length)


def _face_shadows(pattern: Pattern, eg: EmbeddingGraph, s: Element, cell: CellId,
                  crossings: Dict[Edge, tuple]) -> Iterator[Dict[Tuple[Element, int], tuple]]:
    entries = pattern.walk_order(s)
    cycle = eg.shadow_cycle(cell)
    position = {n: i for i, n in enumerate(cycle)}
    options = []
    for e, tag in entries:
        target = crossings[e] if tag == CROSSING_TAG else eg.vertex_node(tag)
        options.append([n for n in eg.shadows_of(cell, target) if n in position])

    for choice in product(*options):
        picked = [c for c, (_, tag) in zip(choice, entries) if tag == CROSSING_TAG]
        if len(set(picked)) != len(picked):
            continue

        if cyclically_ordered([position[c] for c in choice], len(cycle)):
            yield {(s, j): c for j, c in enumerate(choice)}


def iter_pattern_placements(pattern: Pattern, pattern_graph, eg: EmbeddingGraph) -> Iterator[PlacementAssignment]:
    """Yields every assignment of the pattern onto the faces, crossable edges and shadows of eg.

    :param pattern_graph: The witness that pattern is valid.
    :raises PatternError: when pattern_graph witnesses another pattern.
    """
    if pattern_graph.pattern != pattern:
        raise PatternError('The pattern graph witnesses another pattern.')

    if not pattern.elements:
        yield PlacementAssignment({}, {}, {})
        return

    faces = sorted((n for n, role in eg.graph.nodes(data='role') if role == FACE), key=repr)
    candidates = {s: [f for f in faces if _hosts(eg, pattern, s, f[1])] for s in pattern.elements}
    crossing_edges = pattern.crossing_edges()
    for chosen in _distinct_choices(list(pattern.elements), candidates):
        crossable = {}
        for e in crossing_edges:
            a, b = pattern.edge_faces[e]
            crossable[e] = _crossable_between(eg, e, chosen[a][1], chosen[b][1])

        for crossings in _distinct_choices(crossing_edges, crossable):
            per_face = []
            for s in pattern.elements:
                options = list(_face_shadows(pattern, eg, s, chosen[s][1], crossings))
                if not options:
                    break

                per_face.append(options)

            else:
                for parts in product(*per_face):
                    shadows = {}
                    for part in parts:
                        shadows.update(part)

                    yield PlacementAssignment(dict(chosen), dict(crossings), shadows)


def place_pattern(pattern: Pattern, pattern_graph, eg: EmbeddingGraph) -> Optional[PlacementAssignment]:
    """The first placement of the pattern, or None when it cannot be placed."""
    return next(iter_pattern_placements(pattern, pattern_graph, eg), None)
