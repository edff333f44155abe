"""Two added vertices joined only to H.

Each placement of the hubs r and b is reduced to a closed r-b-r curve that no added edge crosses. The
region outside it is then swept from one half of the curve to the other. Every step of the sweep fixes
at most two hub edges, colours the faces between the old and the new cut, and routes by two flows as many
of the edges reachable before the new cut as that colouring allows. The last step must route the rest.
"""
from collections import deque
from dataclasses import dataclass, field
from itertools import islice
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Set, Tuple, Union

import networkx as nx

from drawext.constants import (NOT_APPLICABLE, SAME_CELL_MAX_CROSSING_PAIRS, SHORT_PATH_LENGTH,
                               SWEEP_STATES_PER_RECORD)
from drawext.drawing import (CellId, Corner, Dart, Edge, Node, OnePlanarDrawing, Placement, apply_placement,
                             base_dart, cell_lineage, edge_key, iter_placements, logger, place_vertex, restrict,
                             twin, validate_one_planar)
from drawext.exceptions import PlacementError, RegimeError
from drawext.instance import ExtensionInstance, embedding_differences, is_extension
from drawext.vertex_flow import BLUE, RED, FaceColoring, auxiliary_graph, solve_far_two_vertices, solve_lambda, targets_of

PATH = 'path'
HUG = 'hug'
GAP = 'gap'

RED_FACE = 'red'
BLUE_FACE = 'blue'
PURPLE_FACE = 'purple'

START = 'start'
END = 'end'
GREEN_POINTER = 'green-pointer'
DOUBLE_INCURSION = 'double-incursion'
LEFT_INCURSION = 'left-incursion'
RIGHT_INCURSION = 'right-incursion'
SLICE = 'slice'
RECORD_KINDS = [START, GREEN_POINTER, DOUBLE_INCURSION, LEFT_INCURSION, RIGHT_INCURSION, SLICE, END]

_OTHER = {RED: BLUE, BLUE: RED}


class AuxiliaryGraph:
    """Face-vertices and edge-vertices of a drawing; a face is adjacent to every segment on its boundary."""

    def __init__(self, drawing: OnePlanarDrawing):
        self.drawing = drawing
        self.graph: nx.Graph = auxiliary_graph(drawing)

    def __repr__(self):
        return f'AuxiliaryGraph(faces={len(self.drawing.cells)}, nodes={self.graph.number_of_nodes()})'

    def distance(self, a: CellId, b: CellId) -> float:
        try:
            return nx.shortest_path_length(self.graph, ('f', a), ('f', b))

        except nx.NetworkXNoPath:
            return float('inf')

    def short_paths(self, a: CellId, b: CellId,
                    cutoff: int = SHORT_PATH_LENGTH) -> Iterator[Tuple[Tuple[CellId, ...], Tuple[Dart, ...]]]:
        """Yields face paths from a to b with at most cutoff edges, each with the darts it crosses."""
        if a == b:
            yield (a,), ()
            return

        for path in nx.all_simple_paths(self.graph, ('f', a), ('f', b), cutoff=cutoff):
            cells = tuple(n[1] for n in path[0::2])
            yield from self._oriented(cells, [n[1] for n in path[1::2]])

    def _oriented(self, cells: Tuple[CellId, ...], segments: List[Tuple[Node, Node]],
                  prefix: Tuple[Dart, ...] = ()) -> Iterator[Tuple[Tuple[CellId, ...], Tuple[Dart, ...]]]:
        i = len(prefix)
        if i == len(segments):
            yield cells, prefix
            return

        u, w = segments[i]
        for d in ((u, w), (w, u)):
            if self.drawing.has_dart(d) and self.drawing.cell_of(d) == cells[i] \
                    and self.drawing.cell_of(twin(d)) == cells[i + 1]:
                yield from self._oriented(cells, segments, prefix + (d,))


@dataclass(frozen=True)
class Delimiter:
    """An r-b curve of the sweep, kept as the cut it makes in both boundary sequences.

    Attributes
        :kind: The record kind it was computed for.
        :cut: First unswept position in the r sequence and in the b sequence.
        :crossed: Darts the curve crosses.
        :faces: Faces the curve passes through.
    """
    kind: str
    cut: Tuple[int, int]
    crossed: Tuple[Dart, ...] = ()
    faces: FrozenSet[CellId] = frozenset()

    def is_right_of(self, other: 'Delimiter') -> bool:
        return self.cut[0] >= other.cut[0] and self.cut[1] >= other.cut[1] and self.cut != other.cut


@dataclass(frozen=True)
class InitialDelimiter:
    """A closed r-b-r curve no added edge may cross.

    Attributes
        :kind: 'path' along a short face path, 'hug' around a drawn rb edge, 'gap' for hubs sharing a cell.
        :drawing: H with both hubs and every edge drawn while choosing the curve.
        :cells: Cells the r-b half enters, in order.
        :crossed: Darts the r-b half crosses, each with the previous cell on its left.
        :gaps: For 'gap', the consecutive added-edge endpoints around r and around b framing the curve.
    """
    kind: str
    r: Node
    b: Node
    drawing: OnePlanarDrawing = field(compare=False, repr=False)
    cells: Tuple[CellId, ...] = ()
    crossed: Tuple[Dart, ...] = ()
    gaps: Optional[Tuple[Tuple[Node, Node], Tuple[Node, Node]]] = None

    def is_compatible(self, solution: OnePlanarDrawing) -> bool:
        """Decides whether the curve can be drawn in solution without crossing an added edge."""
        if self.r not in solution.rotation or self.b not in solution.rotation:
            return False

        if embedding_differences(restrict(solution, self.drawing.vertices, self.drawing.edges), self.drawing):
            return False

        if self.kind == HUG:
            return True

        lineage = cell_lineage(self.drawing, solution)
        if self.kind == GAP:
            shared = set(solution.cells_of(self.r)) & set(solution.cells_of(self.b))
            return any(lineage.get(c) == self.cells[0] for c in shared)

        frontier = {c for c in solution.cells_of(self.r) if lineage.get(c) == self.cells[0]}
        for dart in self.crossed:
            frontier = {solution.cell_of(twin(d)) for c in frontier for d in solution.cell_by_id[c].all_darts
                        if base_dart(self.drawing, solution, d) == dart}

        return bool(frontier & set(solution.cells_of(self.b)))


class DelimiterChoice(NamedTuple):
    """Candidate initial delimiters, or a direct answer when the hubs are far apart."""
    delimiters: Iterable[InitialDelimiter]
    direct: object = NOT_APPLICABLE


@dataclass(frozen=True)
class DPRecord:
    """A sweep position: up to one fixed edge or boundary position per hub, and the kind of step.

    Boundary positions are indices into the sweep sequences; fixed edges are placements in the drawing of
    the initial delimiter.
    """
    kind: str
    alpha_r: Union[int, Placement, None] = None
    alpha_b: Union[int, Placement, None] = None
    cut: Tuple[int, int] = (0, 0)
    faces: FrozenSet[CellId] = frozenset()
    side: str = RED

    def placements(self) -> List[Placement]:
        return [a for a in (self.alpha_r, self.alpha_b) if isinstance(a, Placement)]


class BoundaryIndex:
    """Boundary sequences of the hub faces and the colours of the faces around them.

    Attributes
        :omega: The initial delimiter the sweep starts from.
        :hub_cells: Per side, the cells holding that hub and not the other one.
        :sequences: Per side, (vertex, dart) occurrences in sweep order.
        :contacts: Per side and face, the positions whose dart is a crossable H-segment into that face.
        :colors: Face to 'red', 'blue' or 'purple'.
        :green: Edges on the boundary of a red and of a blue hub cell.
    """

    def __init__(self, omega: InitialDelimiter, hub_cells: Dict[str, List[CellId]],
                 sequences: Dict[str, List[Tuple[Node, Dart]]], contacts: Dict[str, Dict[CellId, List[int]]],
                 colors: Dict[CellId, str], green: Set[Edge]):
        self.omega = omega
        self.hub_cells = hub_cells
        self.sequences = sequences
        self.contacts = contacts
        self.colors = colors
        self.green = green
        self._position = {side: {d: i for i, (_, d) in enumerate(seq)} for side, seq in sequences.items()}

    def __repr__(self):
        return f'BoundaryIndex(r={len(self.sequences[RED])}, b={len(self.sequences[BLUE])}, ' \
               f'purple={len(self.faces_of(PURPLE_FACE))}, green={len(self.green)})'

    @property
    def drawing(self) -> OnePlanarDrawing:
        return self.omega.drawing

    @property
    def end(self) -> Tuple[int, int]:
        return len(self.sequences[RED]), len(self.sequences[BLUE])

    def hub(self, side: str) -> Node:
        return self.omega.r if side == RED else self.omega.b

    def faces_of(self, color: str) -> List[CellId]:
        return [f for f, c in self.colors.items() if c == color]

    def position(self, side: str, dart: Dart) -> Optional[int]:
        return self._position[side].get(dart)

    def sweep_weights(self) -> Dict[Dart, int]:
        """Sweep position of every hub-cell boundary dart, for flows that should cross early segments first."""
        return {d: i for side in (RED, BLUE) for d, i in self._position[side].items()}

    def corner_position(self, side: str, corner: Corner) -> Optional[int]:
        """Position of the occurrence that a corner of a hub cell sits at."""
        if corner[1] is None:
            return None

        dart = corner[1] if side == RED else self.drawing.prev_dart(corner[1])
        return self.position(side, dart)

    def across(self, side: str, i: int) -> Optional[CellId]:
        for face, positions in self.contacts[side].items():
            if i in positions:
                return face

        return None

    def first_reach(self, side: str, target: Node) -> Optional[int]:
        """The earliest position from which the hub of side can reach target."""
        for i, (v, d) in enumerate(self.sequences[side]):
            if v == target:
                return i

            face = self.across(side, i)
            if face is not None and target not in d and target in self.drawing.cell_by_id[face].incident_real_vertices:
                return i

        return None

    def omega_right(self, face: CellId) -> List[Dart]:
        """Darts of face from its last r contact to its last b contact, avoiding its first b contact."""
        reds, blues = self.contacts[RED].get(face), self.contacts[BLUE].get(face)
        if not reds or not blues:
            return []

        walk = list(self.drawing.cell_by_id[face].all_darts)
        at = {d: i for i, d in enumerate(walk)}
        pr = at[twin(self.sequences[RED][max(reds)][1])]
        pb = at[twin(self.sequences[BLUE][max(blues)][1])]
        low = at[twin(self.sequences[BLUE][min(blues)][1])]
        forward = [walk[(pr + i) % len(walk)] for i in range((pb - pr) % len(walk) + 1)]
        if low == pb or walk[low] not in forward:
            return forward

        return [walk[(pb + i) % len(walk)] for i in range((pr - pb) % len(walk) + 1)]

    def is_synchronized(self) -> bool:
        """Green edges appear in the same order in both sequences."""
        def order(side):
            seen = []
            for _, d in self.sequences[side]:
                e = self.drawing.edge_of(d)
                if e in self.green and e not in seen:
                    seen.append(e)

            return seen

        return order(RED) == order(BLUE)


def hub_drawings(instance: ExtensionInstance) -> Iterator[OnePlanarDrawing]:
    """Yields every placement of both hubs into cells, with the edge between them drawn when G has it."""
    r, b = instance.v_add
    for cell_r in instance.drawing.cells:
        with_r = place_vertex(instance.drawing, r, cell_r.id)
        for cell_b in with_r.cells:
            with_b = place_vertex(with_r, b, cell_b.id)
            if not instance.graph.has_edge(r, b):
                yield with_b
                continue

            for placement in iter_placements(with_b, r, b):
                placed = apply_placement(with_b, placement)
                if not validate_one_planar(placed):
                    yield placed


def _hug(drawing: OnePlanarDrawing, r: Node, b: Node) -> InitialDelimiter:
    x = drawing.crossed_edges[edge_key(r, b)]
    f_r, f_b = drawing.cells_of(r)[0], drawing.cells_of(b)[0]
    exit_dart = next(d for d in drawing.cell_by_id[f_r].darts if d[1] == x and d[0] != r)

    return InitialDelimiter(HUG, r, b, drawing, (f_r, f_b), (exit_dart,))


def _consecutive_choices(ends: List[Node]) -> List[Tuple[Node, Node]]:
    if len(ends) == 1:
        return [(ends[0], ends[0])]

    return [(p, q) for p in ends for q in ends if p != q]


def _drawn_with(instance: ExtensionInstance, drawing: OnePlanarDrawing, hub: Node,
                ends: Iterable[Node]) -> Iterator[OnePlanarDrawing]:
    pending = [t for t in dict.fromkeys(ends) if edge_key(hub, t) not in drawing.edges]
    if not pending:
        yield drawing
        return

    for placement in iter_placements(drawing, hub, pending[0]):
        placed = apply_placement(drawing, placement)
        if not validate_one_planar(placed):
            yield from _drawn_with(instance, placed, hub, pending[1:])


def _leaving(drawing: OnePlanarDrawing, hub: Node, target: Node) -> Node:
    """The rotation neighbour of hub along the edge to target."""
    e = edge_key(hub, target)
    segments = drawing.segments(e)
    return segments[0][1] if e[0] == hub else segments[-1][0]


def _gap_cell(drawing: OnePlanarDrawing, r: Node, gap_r: Tuple[Node, Node], b: Node,
              gap_b: Tuple[Node, Node]) -> Optional[CellId]:
    cells = []
    for hub, (first, last) in ((r, gap_r), (b, gap_b)):
        before, after = _leaving(drawing, hub, first), _leaving(drawing, hub, last)
        if drawing.pred_cw(hub, after) != before:
            return None

        cells.append(drawing.cell_of_corner((hub, (hub, after))))

    return cells[0] if cells[0] == cells[1] else None


def _crossing_pairs(instance: ExtensionInstance, drawing: OnePlanarDrawing, r: Node, b: Node,
                    limit: int) -> Iterator[OnePlanarDrawing]:
    """Yields drawing with up to limit pairs of an r-edge and a b-edge crossing each other inside the shared cell."""
    yield drawing
    if limit == 0:
        return

    shared = set(drawing.cells_of(r)) & set(drawing.cells_of(b))
    for t in targets_of(instance, drawing, r):
        for first in iter_placements(drawing, r, t):
            if first.crossing is not None or drawing.cell_of_corner(first.u_corner) not in shared:
                continue

            with_r = apply_placement(drawing, first)
            for s in targets_of(instance, with_r, b):
                for second in iter_placements(with_r, b, s):
                    if second.crossing is None or with_r.edge_of(second.crossing) != edge_key(r, t):
                        continue

                    paired = apply_placement(with_r, second)
                    if not validate_one_planar(paired):
                        yield from islice(_crossing_pairs(instance, paired, r, b, limit - 1), 1, None)


def _gap_delimiters(instance: ExtensionInstance, drawing: OnePlanarDrawing, r: Node, b: Node) -> Iterator[InitialDelimiter]:
    for paired in _crossing_pairs(instance, drawing, r, b, SAME_CELL_MAX_CROSSING_PAIRS):
        for gap_r in _consecutive_choices(instance.added_neighbours(r)):
            for with_r in _drawn_with(instance, paired, r, gap_r):
                for gap_b in _consecutive_choices(instance.added_neighbours(b)):
                    for with_b in _drawn_with(instance, with_r, b, gap_b):
                        cell = _gap_cell(with_b, r, gap_r, b, gap_b)
                        if cell is not None:
                            yield InitialDelimiter(GAP, r, b, with_b, (cell,), (), (gap_r, gap_b))


def enumerate_initial_delimiters(instance: ExtensionInstance, drawing: OnePlanarDrawing) -> DelimiterChoice:
    """Builds the candidate curves for one placement of the hubs.

    :param drawing: H with both hubs placed and the rb edge drawn when G has it.
    :returns: The candidates, or a direct answer when the hub cells are far apart.
    """
    r, b = instance.v_add
    cells_r, cells_b = drawing.cells_of(r), drawing.cells_of(b)
    if set(cells_r) & set(cells_b):
        return DelimiterChoice(_gap_delimiters(instance, drawing, r, b))

    if edge_key(r, b) in drawing.edges:
        return DelimiterChoice([_hug(drawing, r, b)])

    far = solve_far_two_vertices(instance, drawing, {r: cells_r[0], b: cells_b[0]})
    if far is not NOT_APPLICABLE:
        return DelimiterChoice([], far)

    aux = AuxiliaryGraph(drawing)
    delimiters = [InitialDelimiter(PATH, r, b, drawing, cells, crossed)
                  for cells, crossed in aux.short_paths(cells_r[0], cells_b[0])]
    logger.debug(f'{len(delimiters)} short face paths between {r} and {b}')

    return DelimiterChoice(delimiters)


def _anchor(omega: InitialDelimiter, side: str) -> Optional[Dart]:
    """The boundary dart of the hub cell where the r-b half of the curve leaves it."""
    drawing = omega.drawing
    if omega.kind == PATH:
        return omega.crossed[0] if side == RED else twin(omega.crossed[-1])

    if omega.kind == HUG:
        if side == RED:
            return omega.crossed[0]

        x = omega.crossed[0][1]
        return next(d for d in drawing.cell_by_id[omega.cells[-1]].darts if d[0] == x and d[1] != omega.b)

    return None


def _sweep(drawing: OnePlanarDrawing, cells: List[CellId], hub: Node, anchor: Optional[Dart],
           side: str) -> List[Tuple[Node, Dart]]:
    sequence = []
    for cid in cells:
        walk = list(drawing.cell_by_id[cid].darts)
        if anchor in walk:
            i = walk.index(anchor)
            walk = walk[i + 1:] + walk[:i + 1] if side == RED else walk[i:] + walk[:i]

        if side == RED:
            sequence.extend((d[0], d) for d in walk if hub not in d)

        else:
            sequence.extend((d[1], d) for d in reversed(walk) if hub not in d)

    return sequence


def classify_faces(instance: ExtensionInstance, omega: InitialDelimiter) -> BoundaryIndex:
    """Indexes the hub-cell boundaries in sweep order and colours the faces reachable from them."""
    drawing = omega.drawing
    shared = set(drawing.cells_of(omega.r)) & set(drawing.cells_of(omega.b))
    hub_cells = {RED: [c for c in drawing.cells_of(omega.r) if c not in shared],
                 BLUE: [c for c in drawing.cells_of(omega.b) if c not in shared]}
    sequences = {side: _sweep(drawing, hub_cells[side], omega.r if side == RED else omega.b, _anchor(omega, side), side)
                 for side in (RED, BLUE)}

    contacts: Dict[str, Dict[CellId, List[int]]] = {RED: {}, BLUE: {}}
    green: Set[Edge] = set()
    for side, sequence in sequences.items():
        hub = omega.r if side == RED else omega.b
        for i, (_, d) in enumerate(sequence):
            face = drawing.cell_of(twin(d))
            if face in hub_cells[_OTHER[side]]:
                green.add(drawing.edge_of(d))

            if face in hub_cells[side] or face in shared or hub in d or not drawing.is_crossable(d):
                continue

            if drawing.edge_of(d) in instance.h_edges and face not in hub_cells[_OTHER[side]]:
                contacts[side].setdefault(face, []).append(i)

    colors: Dict[CellId, str] = {}
    for face in set(contacts[RED]) | set(contacts[BLUE]):
        if face in contacts[RED] and face in contacts[BLUE]:
            colors[face] = PURPLE_FACE

        else:
            colors[face] = RED_FACE if face in contacts[RED] else BLUE_FACE

    return BoundaryIndex(omega, hub_cells, sequences, contacts, colors, green)


def _hub_placements(instance: ExtensionInstance, index: BoundaryIndex, side: str) -> List[Tuple[Placement, int]]:
    """Placements of hub edges that cross out of the hub cell, with the position of the crossed dart."""
    drawing = index.drawing
    hub = index.hub(side)
    found = []
    for t in targets_of(instance, drawing, hub):
        for placement in iter_placements(drawing, hub, t):
            if placement.crossing is None or drawing.edge_of(placement.crossing) not in instance.h_edges:
                continue

            i = index.position(side, placement.crossing)
            if i is not None:
                found.append((placement, i))

    return found


def _oriented_cut(side: str, own: int, other: int) -> Tuple[int, int]:
    return (own, other) if side == RED else (other, own)


def _record(kind: str, side: str, own, other, cut: Tuple[int, int], faces: Iterable[CellId] = ()) -> DPRecord:
    alpha_r, alpha_b = (own, other) if side == RED else (other, own)
    return DPRecord(kind, alpha_r, alpha_b, cut, frozenset(faces), side)


def _green_pointers(index: BoundaryIndex) -> List[DPRecord]:
    records = []
    for i, (_, d) in enumerate(index.sequences[RED]):
        if index.drawing.edge_of(d) not in index.green:
            continue

        j = index.position(BLUE, twin(d))
        if j is not None:
            records.append(DPRecord(GREEN_POINTER, i, j, (i + 1, j + 1)))

    return records


def _incursions(instance: ExtensionInstance, index: BoundaryIndex, side: str) -> List[DPRecord]:
    other = _OTHER[side]
    records = []
    for placement, i in _hub_placements(instance, index, side):
        j = index.position(other, twin(placement.crossing))
        q = index.corner_position(other, placement.v_corner)
        if j is None or q is None:
            continue

        if q < j:
            records.append(_record(LEFT_INCURSION, side, placement, j, _oriented_cut(side, i + 1, j + 1)))

        elif q > j:
            records.append(_record(RIGHT_INCURSION, side, placement, q, _oriented_cut(side, i + 1, q + 1)))

    return records


def _walk_back(drawing: OnePlanarDrawing, face: CellId, start: Dart, corner: Corner) -> List[Node]:
    """Vertices met walking the boundary of face against its orientation from start to corner."""
    walk = list(drawing.cell_by_id[face].all_darts)
    if start not in walk or corner[1] not in walk:
        return []

    i, stop = walk.index(start), walk.index(corner[1])
    vertices = [start[1]]
    for _ in range(len(walk)):
        vertices.append(walk[i][0])
        if i == stop:
            break

        i = (i - 1) % len(walk)

    return vertices


def _double_incursions(instance: ExtensionInstance, index: BoundaryIndex, side: str) -> List[DPRecord]:
    other = _OTHER[side]
    drawing = index.drawing
    theirs = _hub_placements(instance, index, other)
    records = []
    for placement, i in _hub_placements(instance, index, side):
        face = drawing.cell_of(twin(placement.crossing))
        walk = _walk_back(drawing, face, twin(placement.crossing), placement.v_corner)
        for answer, m in theirs:
            if answer.v_corner[0] not in walk:
                continue

            faces = {face, drawing.cell_of(twin(answer.crossing))}
            records.append(_record(DOUBLE_INCURSION, side, placement, answer, _oriented_cut(side, i + 1, m + 1), faces))

    return records


def _strictly_right(index: BoundaryIndex, face: CellId) -> Tuple[Set[Dart], Set[Node]]:
    """Darts and vertices of the right walk of face other than its two bounding contacts."""
    walk = index.omega_right(face)
    return set(walk[1:-1]), {d[1] for d in walk[1:-2]}


def _slice_candidates(instance: ExtensionInstance, index: BoundaryIndex, side: str, face: CellId,
                      right: Tuple[Set[Dart], Set[Node]]) -> List[Tuple[Union[int, Placement], int]]:
    darts, vertices = right
    found: List[Tuple[Union[int, Placement], int]] = []
    for i in index.contacts[side].get(face, []):
        if twin(index.sequences[side][i][1]) not in darts:
            found.append((i, i))

    for placement, i in _hub_placements(instance, index, side):
        if index.drawing.cell_of(twin(placement.crossing)) == face and placement.v_corner[0] not in vertices:
            found.append((placement, i))

    return found


def _slices(instance: ExtensionInstance, index: BoundaryIndex) -> List[DPRecord]:
    records = []
    for face in index.faces_of(PURPLE_FACE):
        right = _strictly_right(index, face)
        for alpha_r, i in _slice_candidates(instance, index, RED, face, right):
            for alpha_b, j in _slice_candidates(instance, index, BLUE, face, right):
                records.append(DPRecord(SLICE, alpha_r, alpha_b, (i + 1, j + 1), frozenset([face])))

    return records


def enumerate_records(instance: ExtensionInstance, index: BoundaryIndex) -> List[DPRecord]:
    """Lists every well-formed record, Start first and End last."""
    records = [DPRecord(START, cut=(0, 0), faces=frozenset(index.omega.cells[1:-1]))]
    records.extend(_green_pointers(index))
    for side in (RED, BLUE):
        records.extend(_incursions(instance, index, side))
        records.extend(_double_incursions(instance, index, side))

    records.extend(_slices(instance, index))
    records.append(DPRecord(END, cut=index.end, faces=frozenset(index.omega.cells[1:-1])))

    return list(dict.fromkeys(records))


def delimiter_for(record: DPRecord, index: BoundaryIndex) -> Delimiter:
    """Computes the curve a record stands for."""
    if record.kind in (START, END):
        return Delimiter(record.kind, record.cut, index.omega.crossed, record.faces)

    if record.kind == GREEN_POINTER:
        return Delimiter(record.kind, record.cut, (index.sequences[RED][record.alpha_r][1],))

    crossed = []
    for side, alpha in ((RED, record.alpha_r), (BLUE, record.alpha_b)):
        if isinstance(alpha, Placement):
            crossed.append(alpha.crossing)

        elif isinstance(alpha, int):
            crossed.append(index.sequences[side][alpha][1])

    return Delimiter(record.kind, record.cut, tuple(crossed), record.faces)


def _slab_colors(index: BoundaryIndex, previous: Delimiter, current: Delimiter) -> Dict[CellId, str]:
    """Face colours seen between two cuts; red and blue faces keep their colour everywhere."""
    colors = {}
    for face, color in index.colors.items():
        if color != PURPLE_FACE:
            colors[face] = color
            continue

        reds = any(previous.cut[0] <= i < current.cut[0] for i in index.contacts[RED][face])
        blues = any(previous.cut[1] <= j < current.cut[1] for j in index.contacts[BLUE][face])
        if reds and blues:
            colors[face] = PURPLE_FACE

        elif reds or blues:
            colors[face] = RED_FACE if reds else BLUE_FACE

    return colors


def _untouched_purple(index: BoundaryIndex, previous: Delimiter, current: Delimiter) -> bool:
    touched = previous.faces | current.faces
    for face in index.faces_of(PURPLE_FACE):
        if face in touched:
            continue

        if any(previous.cut[0] <= i < current.cut[0] for i in index.contacts[RED][face]) or \
                any(previous.cut[1] <= j < current.cut[1] for j in index.contacts[BLUE][face]):
            return True

    return False


def _near_part(drawing: OnePlanarDrawing, base: OnePlanarDrawing, crossing: Dart) -> Optional[CellId]:
    """The sub-cell across a crossed dart that holds the segment starting at its head."""
    for d in drawing.darts:
        if d[0] == crossing[1] and base_dart(base, drawing, d) == twin(crossing):
            return drawing.cell_of(d)

    return None


def _holding(drawing: OnePlanarDrawing, base: OnePlanarDrawing, darts: Iterable[Dart]) -> Set[CellId]:
    darts = set(darts)
    return {drawing.cell_of(d) for d in drawing.darts if base_dart(base, drawing, d) in darts}


def _bounded_by(drawing: OnePlanarDrawing, cell: CellId, edge: Edge) -> bool:
    return any(drawing.edge_of(d) == edge for d in drawing.cell_by_id[cell].all_darts)


def lambda_for(record: DPRecord, previous: Delimiter, current: Delimiter, index: BoundaryIndex,
               drawing: OnePlanarDrawing, beta_r: Optional[Placement] = None,
               beta_b: Optional[Placement] = None) -> FaceColoring:
    """Colours the cells of drawing for the step from previous to current.

    :param drawing: The drawing so far, with the fixed edges of record and the betas already drawn.
    """
    base = index.drawing
    lineage = cell_lineage(base, drawing)
    hubs = {RED: index.omega.r, BLUE: index.omega.b}
    holds = {side: set(drawing.cells_of(hub)) for side, hub in hubs.items()}
    slab = _slab_colors(index, previous, current)
    coloring: FaceColoring = {}
    fixed: Dict[CellId, Optional[str]] = {}

    if record.kind == DOUBLE_INCURSION:
        own, theirs = (record.alpha_r, record.alpha_b) if record.side == RED else (record.alpha_b, record.alpha_r)
        face = base.cell_of(twin(own.crossing))
        near = _near_part(drawing, base, own.crossing)
        for cid, origin in lineage.items():
            if origin == face and cid not in holds[RED] | holds[BLUE]:
                fixed[cid] = record.side if cid == near else _OTHER[record.side]

        answer = _near_part(drawing, base, theirs.crossing)
        if answer is not None and answer not in holds[RED] | holds[BLUE]:
            fixed[answer] = _OTHER[record.side]

    if record.kind == SLICE:
        face = next(iter(record.faces))
        right = _holding(drawing, base, index.omega_right(face))
        for cid, origin in lineage.items():
            if origin != face:
                continue

            fixed[cid] = None
            if cid in right:
                continue

            if isinstance(record.alpha_r, Placement) and _bounded_by(drawing, cid, record.alpha_r.edge):
                fixed[cid] = RED

            elif isinstance(record.alpha_b, Placement) and _bounded_by(drawing, cid, record.alpha_b.edge):
                fixed[cid] = BLUE

    residual = [f for f in previous.faces - current.faces if index.colors.get(f) == PURPLE_FACE]
    for face in residual:
        targets = {RED: None, BLUE: None}
        for side, beta in ((RED, beta_r), (BLUE, beta_b)):
            positions = index.contacts[side].get(face)
            if beta is not None and positions:
                cells = _holding(drawing, base, [twin(index.sequences[side][max(positions)][1])])
                targets[side] = next(iter(cells)) if len(cells) == 1 else None

        for cid, origin in lineage.items():
            if origin == face:
                fixed[cid] = None

        for side, cid in targets.items():
            if cid is not None and cid != targets[_OTHER[side]]:
                fixed[cid] = side

    for cell in drawing.cells:
        origin = lineage.get(cell.id)
        for side in (RED, BLUE):
            if cell.id in holds[side] and cell.id not in holds[_OTHER[side]] and origin in index.hub_cells[side]:
                coloring[cell.id] = side

        if cell.id in coloring:
            continue

        if cell.id in fixed:
            if fixed[cell.id] is not None:
                coloring[cell.id] = fixed[cell.id]

            continue

        for side in (RED, BLUE):
            if origin in index.hub_cells[side] and cell.id not in holds[side] and \
                    record.kind in (LEFT_INCURSION, RIGHT_INCURSION, DOUBLE_INCURSION):
                coloring[cell.id] = _OTHER[side]

        if cell.id not in coloring and slab.get(origin) in (RED_FACE, BLUE_FACE):
            coloring[cell.id] = RED if slab[origin] == RED_FACE else BLUE

    return coloring


def _transfer(base: OnePlanarDrawing, current: OnePlanarDrawing, placement: Placement) -> Optional[OnePlanarDrawing]:
    """Draws into current the edge a placement of base describes, along the same base route."""
    hub, target = placement.u_corner[0], placement.v_corner[0]
    if edge_key(hub, target) in current.edges:
        return None

    lineage = cell_lineage(base, current)
    origin = base.cell_of_corner(placement.u_corner)
    for candidate in iter_placements(current, hub, target):
        if (candidate.crossing is None) != (placement.crossing is None):
            continue

        if candidate.crossing is not None and base_dart(base, current, candidate.crossing) != placement.crossing:
            continue

        if lineage.get(current.cell_of_corner(candidate.u_corner)) != origin:
            continue

        if base_dart(base, current, candidate.v_corner[1]) == placement.v_corner[1]:
            return apply_placement(current, candidate)

    return None


def _slab_targets(instance: ExtensionInstance, index: BoundaryIndex, drawing: OnePlanarDrawing, current: Delimiter,
                  record: DPRecord) -> Dict[Node, List[Node]]:
    """Pending targets first reachable before the new cut; at the end, every pending target."""
    targets = {}
    for k, side in enumerate((RED, BLUE)):
        hub = index.hub(side)
        remaining = targets_of(instance, drawing, hub)
        if record.kind == END:
            targets[hub] = remaining
            continue

        chosen = []
        for t in remaining:
            reach = index.first_reach(side, t)
            if reach is not None and reach < current.cut[k]:
                chosen.append(t)

        targets[hub] = chosen

    return targets


def _betas(instance: ExtensionInstance, index: BoundaryIndex, drawing: OnePlanarDrawing, previous: Delimiter,
           current: Delimiter) -> Iterator[Tuple[OnePlanarDrawing, Optional[Placement], Optional[Placement]]]:
    residual = [f for f in previous.faces - current.faces if index.colors.get(f) == PURPLE_FACE]
    if not residual:
        yield drawing, None, None
        return

    face = residual[0]
    right = {d[0] for d in index.omega_right(face)}
    options = {}
    for side in (RED, BLUE):
        options[side] = [None] + [p for p, _ in _hub_placements(instance, index, side)
                                  if index.drawing.cell_of(twin(p.crossing)) == face and p.v_corner[0] in right]

    for beta_r in options[RED]:
        with_r = drawing if beta_r is None else _transfer(index.drawing, drawing, beta_r)
        if with_r is None:
            continue

        for beta_b in options[BLUE]:
            with_b = with_r if beta_b is None else _transfer(index.drawing, with_r, beta_b)
            if with_b is not None:
                yield with_b, beta_r, beta_b


def _advance(instance: ExtensionInstance, index: BoundaryIndex, drawing: OnePlanarDrawing, record: DPRecord,
             previous: Delimiter, current: Delimiter) -> Optional[OnePlanarDrawing]:
    try:
        for alpha in record.placements():
            drawing = _transfer(index.drawing, drawing, alpha)
            if drawing is None:
                return None

        if record.kind in (LEFT_INCURSION, RIGHT_INCURSION):
            own = record.alpha_r if record.side == RED else record.alpha_b
            if is_dominated(own.edge, drawing, index):
                logger.debug(f'Discarding {record.kind}: {own.edge} lies inside an earlier incursion')
                return None

        weights = index.sweep_weights()
        for drawn, beta_r, beta_b in _betas(instance, index, drawing, previous, current):
            coloring = lambda_for(record, previous, current, index, drawn, beta_r, beta_b)
            targets = _slab_targets(instance, index, drawn, current, record)
            result = solve_lambda(instance, drawn, {index.omega.r: RED, index.omega.b: BLUE}, coloring, targets,
                                  weights=weights, require_all=record.kind == END)
            if result is None:
                continue

            if record.kind != END or is_extension(result, instance):
                return result

    except PlacementError as exc:
        logger.debug(f'Discarding {record.kind}: {exc.message}')

    return None


class _Step(NamedTuple):
    record: DPRecord
    drawing: OnePlanarDrawing
    parent: Optional['_Step'] = None


def dp_solve(instance: ExtensionInstance, omega: InitialDelimiter,
             index: Optional[BoundaryIndex] = None) -> Optional[OnePlanarDrawing]:
    """Sweeps from the start half of omega to its end half; returns an omega-compatible extension or None.

    Each record keeps up to a few distinct drawings of the swept part, so that a slab routed one way does
    not hide another routing of the same slab that later steps need.
    """
    index = index or classify_faces(instance, omega)
    records = enumerate_records(instance, index)
    delimiters = {record: delimiter_for(record, index) for record in records}
    start = _Step(records[0], omega.drawing)
    reach: Dict[DPRecord, List[_Step]] = {records[0]: [start]}
    seen: Dict[DPRecord, Set[Tuple]] = {records[0]: {omega.drawing.canonical()}}
    queue = deque([start])
    logger.debug(f'Sweep over {len(records)} records with {index}')

    while queue:
        step = queue.popleft()
        previous = delimiters[step.record]
        for candidate in records:
            current = delimiters[candidate]
            if len(reach.get(candidate, ())) >= SWEEP_STATES_PER_RECORD or not current.is_right_of(previous) \
                    or _untouched_purple(index, previous, current):
                continue

            drawn = _advance(instance, index, step.drawing, candidate, previous, current)
            if drawn is None or drawn.canonical() in seen.get(candidate, ()):
                continue

            reached = _Step(candidate, drawn, step)
            if candidate.kind == END:
                logger.debug(f'Sweep reached the end through {len(_run(reached))} records')
                return drawn

            reach.setdefault(candidate, []).append(reached)
            seen.setdefault(candidate, set()).add(drawn.canonical())
            queue.append(reached)

    return None


def _run(step: _Step) -> List[DPRecord]:
    run = []
    while step is not None:
        run.append(step.record)
        step = step.parent

    return run[::-1]


def _enclosure(fragment: OnePlanarDrawing, index: BoundaryIndex, edge: Edge, hub: Node) -> Optional[FrozenSet[Dart]]:
    """Base darts cut off by a crossing hub edge, on the side away from the other hub or from the right walk."""
    base = index.drawing
    if edge not in fragment.crossed_edges:
        return None

    single = restrict(fragment, base.vertices, set(base.edges) | {edge})
    lineage = cell_lineage(base, single)
    x = single.crossed_edges[edge]
    outward = (x, edge[1]) if edge[0] == hub else (x, edge[0])
    face = lineage[single.cell_of(outward)]
    side = RED if hub == index.omega.r else BLUE
    if face in index.hub_cells[_OTHER[side]]:
        excluded = set(single.cells_of(index.hub(_OTHER[side])))

    elif index.colors.get(face) == PURPLE_FACE:
        excluded = _holding(single, base, index.omega_right(face))

    else:
        return None

    region = set()
    for cid, origin in lineage.items():
        if origin == face and cid not in excluded:
            region.update(base_dart(base, single, d) for d in single.cell_by_id[cid].all_darts)

    region.discard(None)
    return frozenset(region)


def is_dominated(item: Union[Edge, Node], fragment: OnePlanarDrawing, index: BoundaryIndex) -> bool:
    """Decides whether another added edge encloses item; a vertex counts as an arbitrarily small loop.

    :param item: A crossing hub edge drawn in fragment, or a vertex of H.
    """
    hubs = (index.omega.r, index.omega.b)
    added = [e for e in fragment.edges if e not in index.drawing.edges and e in fragment.crossed_edges]
    if isinstance(item, tuple):
        edge = edge_key(*item)
        hub = edge[0] if edge[0] in hubs else edge[1]
        region = _enclosure(fragment, index, edge, hub)
        if region is None:
            return False

        for other in added:
            if other == edge or hub not in other:
                continue

            theirs = _enclosure(fragment, index, other, hub)
            if theirs is not None and (region < theirs or (region == theirs and other < edge)):
                return True

        return False

    for other in added:
        hub = other[0] if other[0] in hubs else other[1]
        region = _enclosure(fragment, index, other, hub)
        if region and item not in other and any(d[0] == item for d in region):
            return True

    return False


def solve_two_vertices(instance: ExtensionInstance,
                       max_delimiters: Optional[int] = None) -> Optional[OnePlanarDrawing]:
    """Decides an instance adding two vertices and no edges inside H.

    Every hub placement is swept from each of its initial delimiters; hub cells far apart are decided by two
    independent flows instead.

    :param max_delimiters: How many initial delimiters to sweep per hub placement; all of them by default.
    :raises RegimeError: when the instance is not of that shape or asks for IC-planarity.
    """
    if len(instance.v_add) != 2 or instance.e_add_h:
        raise RegimeError(f'Expected two added vertices and no added edges inside H, found {len(instance.v_add)} '
                          f'and {len(instance.e_add_h)}.')

    if instance.ic:
        raise RegimeError('The two-vertex sweep covers 1-planar extensions only.')

    for drawing in hub_drawings(instance):
        choice = enumerate_initial_delimiters(instance, drawing)
        if choice.direct is not NOT_APPLICABLE:
            if choice.direct is not None:
                logger.info('Two-vertex instance solved by independent flows')
                return choice.direct

            continue

        for omega in islice(choice.delimiters, max_delimiters):
            result = dp_solve(instance, omega)
            if result is not None and is_extension(result, instance):
                logger.info(f'Two-vertex instance solved by the sweep from a {omega.kind} delimiter')
                return result

    return None
