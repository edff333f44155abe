from itertools import permutations, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Set, Tuple

from drawext.drawing import (CellId, Corner, Dart, Edge, Node, OnePlanarDrawing, Placement, apply_placement, edge_key,
                             logger, twin, validate_one_planar)
from drawext.exceptions import RegimeError
from drawext.instance import ExtensionInstance, is_extension

SegmentKey = Tuple[CellId, int]


class Segment(NamedTuple):
    """The boundary stretch of a cell between two consecutive occurrences of X vertices."""
    start: Optional[Node]
    end: Optional[Node]
    edges: FrozenSet[Edge]
    first: Optional[Edge]
    last: Optional[Edge]


class CellProfile(NamedTuple):
    darts: FrozenSet[Dart]
    occurrences: Tuple[Node, ...]
    segments: Tuple[Segment, ...]


def _stretches(darts: List[Dart], xs: FrozenSet[Node]) -> List[Tuple[Optional[Node], Optional[Node], List[Dart]]]:
    """Splits a cell boundary at the occurrences of X vertices; the whole boundary if there are none."""
    positions = [i for i, d in enumerate(darts) if d[0] in xs]
    if not positions:
        return [(None, None, list(darts))]

    spans = []
    for j, i in enumerate(positions):
        nxt = positions[(j + 1) % len(positions)]
        stretch = darts[i:nxt] if nxt > i else darts[i:] + darts[:nxt]
        spans.append((darts[i][0], darts[nxt][0], stretch))

    return spans


class PartitionProfile:
    """Per-cell X occurrences and boundary segments of a drawing, with capped shared-edge counts.

    Attributes
        :xs: The vertices tracked on cell boundaries.
        :k: Counts above k are stored as k + 1.
        :cells: Cell id to its occurrences and segments.
        :shared: Sorted pair of segment keys to the capped number of uncrossed edges on both.
    """

    def __init__(self, xs: Iterable[Node], k: int):
        self.xs: FrozenSet[Node] = frozenset(xs)
        self.k: int = k
        self.cells: Dict[CellId, CellProfile] = {}
        self.shared: Dict[Tuple[SegmentKey, SegmentKey], int] = {}
        self.edge_index: Dict[Edge, List[SegmentKey]] = {}

    def __repr__(self):
        return f'PartitionProfile(cells={len(self.cells)}, xs={sorted(self.xs)}, k={self.k})'

    def __eq__(self, other):
        if not isinstance(other, PartitionProfile):
            return NotImplemented

        return self.xs == other.xs and self.k == other.k and self.cells == other.cells and self.shared == other.shared

    def cap(self, count: int) -> int:
        return min(count, self.k + 1)

    def copy(self) -> 'PartitionProfile':
        clone = PartitionProfile(self.xs, self.k)
        clone.cells = dict(self.cells)
        clone.shared = dict(self.shared)
        clone.edge_index = {e: list(keys) for e, keys in self.edge_index.items()}

        return clone

    def segment(self, key: SegmentKey) -> Segment:
        return self.cells[key[0]].segments[key[1]]

    def count(self, s: SegmentKey, t: SegmentKey) -> int:
        if s == t:
            return self.cap(len(self.segment(s).edges))

        return self.shared.get(tuple(sorted((s, t))), 0)

    def _add_cell(self, drawing: OnePlanarDrawing, cid: CellId):
        cell = drawing.cell_by_id[cid]
        darts = cell.all_darts
        occurrences = tuple(d[0] for d in darts if d[0] in self.xs)
        segments = []
        for start, end, stretch in _stretches(darts, self.xs):
            edges = [drawing.edge_of(d) for d in stretch if drawing.is_crossable(d)]
            segments.append(Segment(start, end, frozenset(edges), edges[0] if edges else None,
                                    edges[-1] if edges else None))

        self.cells[cid] = CellProfile(frozenset(darts), occurrences, tuple(segments))
        for i, seg in enumerate(segments):
            for e in seg.edges:
                self.edge_index.setdefault(e, []).append((cid, i))

    def _drop_cell(self, cid: CellId):
        profile = self.cells.pop(cid)
        for i, seg in enumerate(profile.segments):
            for e in seg.edges:
                keys = self.edge_index.get(e, [])
                if (cid, i) in keys:
                    keys.remove((cid, i))

                if not keys:
                    self.edge_index.pop(e, None)

    def _recount(self, edges: Iterable[Edge]):
        touched: Set[Tuple[SegmentKey, SegmentKey]] = set()
        for e in edges:
            for s in self.edge_index.get(e, []):
                for t in self.edge_index.get(e, []):
                    if s < t:
                        touched.add((s, t))

        for pair in list(self.shared):
            if pair[0][0] not in self.cells or pair[1][0] not in self.cells:
                del self.shared[pair]

        for s, t in touched:
            common = self.segment(s).edges & self.segment(t).edges
            if common:
                self.shared[(s, t)] = self.cap(len(common))

            else:
                self.shared.pop((s, t), None)

    def updated(self, drawing: OnePlanarDrawing) -> 'PartitionProfile':
        """Returns the profile of drawing, recomputing only cells whose boundary changed."""
        clone = self.copy()
        current = {c.id: frozenset(c.all_darts) for c in drawing.cells}
        stale = [cid for cid, profile in clone.cells.items() if current.get(cid) != profile.darts]
        fresh = [cid for cid, darts in current.items() if cid in stale or cid not in clone.cells]
        dirty: Set[Edge] = set()
        for cid in stale:
            dirty.update(e for seg in clone.cells[cid].segments for e in seg.edges)
            clone._drop_cell(cid)

        clone.shared = {p: c for p, c in clone.shared.items() if p[0][0] not in stale and p[1][0] not in stale}
        for cid in fresh:
            clone._add_cell(drawing, cid)
            dirty.update(e for seg in clone.cells[cid].segments for e in seg.edges)

        clone._recount(dirty)

        return clone


def compute_profile(drawing: OnePlanarDrawing, xs: Iterable[Node], k: int) -> PartitionProfile:
    profile = PartitionProfile(xs, k)
    for cell in drawing.cells:
        profile._add_cell(drawing, cell.id)

    profile._recount(profile.edge_index)

    return profile


def _touched_cells(before: OnePlanarDrawing, placement: Placement) -> FrozenSet[CellId]:
    cells = {before.cell_of_corner(placement.u_corner), before.cell_of_corner(placement.v_corner)}
    return frozenset(cells)


def _new_cells(profile: PartitionProfile, base: PartitionProfile) -> List[CellId]:
    return sorted((cid for cid, cell in profile.cells.items()
                   if cid not in base.cells or base.cells[cid].darts != cell.darts), key=repr)


def _alignments(a: CellProfile, b: CellProfile) -> List[Tuple[int, bool]]:
    """Shifts (and orientation) that carry the occurrence sequence of a onto that of b."""
    m = len(a.occurrences)
    if m != len(b.occurrences) or len(a.segments) != len(b.segments):
        return []

    if m == 0:
        return [(0, False)]

    found = []
    for r in range(m):
        if all(a.occurrences[j] == b.occurrences[(j + r) % m] for j in range(m)):
            found.append((r, False))

        if all(a.occurrences[j] == b.occurrences[(r - j) % m] for j in range(m)):
            found.append((r, True))

    return found


def _map_segment(i: int, m: int, r: int, flip: bool) -> int:
    if m == 0:
        return 0

    return (r - i - 1) % m if flip else (i + r) % m


def _flags(profile: PartitionProfile, s: SegmentKey, t: SegmentKey, flip: bool) -> Tuple[bool, bool]:
    seg = profile.segment(s)
    other = profile.segment(t).edges
    first = seg.first in other if seg.first is not None else False
    last = seg.last in other if seg.last is not None else False

    return (last, first) if flip else (first, last)


def _matches(p1: PartitionProfile, p2: PartitionProfile, sigma: Dict[SegmentKey, Tuple[SegmentKey, bool]],
             moved: List[SegmentKey], fixed: List[SegmentKey]) -> bool:
    for s in moved:
        s2, flip = sigma[s]
        for t in moved + fixed:
            t2 = sigma[t][0] if t in sigma else t
            if p1.count(s, t) != p2.count(s2, t2):
                return False

            if _flags(p1, s, t, False) != _flags(p2, s2, t2, flip):
                return False

    return True


def profiles_equivalent(p1: PartitionProfile, p2: PartitionProfile, base: PartitionProfile) -> bool:
    """Looks for a bijection between the cells new in p1 and p2 (identity elsewhere) preserving the profile."""
    new1 = _new_cells(p1, base)
    new2 = _new_cells(p2, base)
    if len(new1) != len(new2) or set(p1.cells) - set(new1) != set(p2.cells) - set(new2):
        return False

    fixed = [(cid, i) for cid in p1.cells if cid not in new1 for i in range(len(p1.cells[cid].segments))]
    moved = [(cid, i) for cid in new1 for i in range(len(p1.cells[cid].segments))]
    for image in permutations(new2):
        options = [_alignments(p1.cells[c1], p2.cells[c2]) for c1, c2 in zip(new1, image)]
        if any(not o for o in options):
            continue

        for choice in product(*options):
            sigma = {}
            for c1, c2, (r, flip) in zip(new1, image, choice):
                m = len(p1.cells[c1].occurrences)
                for i in range(len(p1.cells[c1].segments)):
                    sigma[(c1, i)] = ((c2, _map_segment(i, m, r, flip)), flip)

            if _matches(p1, p2, sigma, moved, fixed):
                return True

    return False


def equivalent(p1: Placement, p2: Placement, drawing: OnePlanarDrawing, k: int, remaining: Iterable[Edge]) -> bool:
    """Decides whether two placements of the same edge leave partition-equivalent drawings."""
    if p1 == p2:
        return True

    if _touched_cells(drawing, p1) != _touched_cells(drawing, p2):
        return False

    xs = {w for e in remaining for w in e} | set(p1.edge)
    base = compute_profile(drawing, xs, k)

    return profiles_equivalent(base.updated(apply_placement(drawing, p1)), base.updated(apply_placement(drawing, p2)),
                               base)


LEFT = 'left'
RIGHT = 'right'


class InsertionClass(NamedTuple):
    """Placements of one edge that leave partition-equivalent drawings.

    The canonical fields describe the representative. A corner is the X-occurrence index of an endpoint's
    corner in its cell, which fixes the side the edge leaves from. A crossing lies in the boundary segment
    ``gap`` of the first cell, with ``value`` uncrossed edges of that segment on its ``selector`` side; the
    selector is None once both sides hold more than k.
    """
    representative: Placement
    corners: Tuple[Optional[int], Optional[int]]
    gap: Optional[int]
    selector: Optional[str]
    value: Optional[int]
    drawing: OnePlanarDrawing
    profile: PartitionProfile
    size: int


ClassKey = Tuple[Tuple[Optional[int], Optional[int]], Optional[int], Optional[str], Optional[int]]


def _occurrence(drawing: OnePlanarDrawing, xs: FrozenSet[Node], corner: Corner) -> Optional[int]:
    cid = drawing.cell_of_corner(corner)
    if cid is None or corner[1] is None:
        return None

    starts = [d for d in drawing.cell_by_id[cid].all_darts if d[0] in xs]

    return starts.index(corner[1]) if corner[1] in starts else None


def iter_slots(length: int, k: int) -> Iterator[Tuple[Optional[str], int, range]]:
    """Positions in a segment of the given length, keyed by the side with fewer edges and its capped count."""
    for value in range(k + 1):
        if value <= length - 1 - value:
            yield LEFT, value, range(value, value + 1)

        if value < length - 1 - value:
            yield RIGHT, value, range(length - 1 - value, length - value)

    yield None, k + 1, range(k + 1, length - 1 - k)


def iter_canonical(drawing: OnePlanarDrawing, edge: Edge, profile: PartitionProfile
                   ) -> Iterator[Tuple[ClassKey, Placement]]:
    """Yields the placements of an edge under their canonical keys, slot by slot.

    Chords come first. Crossings are taken per corner of u and boundary segment of its cell, reading the
    exact slots directly and only walking the stretch of the segment where both sides exceed k.
    """
    u, v = edge
    key = edge_key(u, v)
    u_corners = [(c, drawing.cell_of_corner(c)) for c in drawing.corners_of(u)]
    v_corners = [(c, drawing.cell_of_corner(c)) for c in drawing.corners_of(v)]

    for cu, cell_u in u_corners:
        for cv, cell_v in v_corners:
            if cell_u == cell_v:
                corners = (_occurrence(drawing, profile.xs, cu), _occurrence(drawing, profile.xs, cv))
                yield (corners, None, None, None), Placement(key, cu, cv, None)

    for cu, cell_u in u_corners:
        if cell_u is None:
            continue

        at_u = _occurrence(drawing, profile.xs, cu)
        for gap, (_, _, stretch) in enumerate(_stretches(drawing.cell_by_id[cell_u].all_darts, profile.xs)):
            crossable = [d for d in stretch if drawing.is_crossable(d)]
            for selector, value, positions in iter_slots(len(crossable), profile.k):
                for p in positions:
                    d = crossable[p]
                    if {d[0], d[1]} & {u, v}:
                        continue

                    cell_v = drawing.cell_of(twin(d))
                    for cv, cv_cell in v_corners:
                        if cv_cell == cell_v:
                            corners = (at_u, _occurrence(drawing, profile.xs, cv))
                            yield (corners, gap, selector, value), Placement(key, cu, cv, d)


def enumerate_classes(drawing: OnePlanarDrawing, edge: Edge, k: int, profile: Optional[PartitionProfile] = None,
                      xs: Optional[Iterable[Node]] = None) -> List[InsertionClass]:
    """Builds one representative per equivalence class from the canonical keys of the edge's placements.

    Placements under the same key are folded into its class; a new key opens a class only when no class
    with the same touched cells is already equivalent.
    """
    if profile is None:
        profile = compute_profile(drawing, set(xs) if xs is not None else set(edge), k)

    classes: List[InsertionClass] = []
    by_key: Dict[ClassKey, int] = {}
    for key, placement in iter_canonical(drawing, edge, profile):
        touched = _touched_cells(drawing, placement)
        placed = apply_placement(drawing, placement)
        after = profile.updated(placed)
        candidates = [by_key[key]] if key in by_key else []
        candidates += [i for i in range(len(classes)) if i not in candidates]
        for i in candidates:
            cls = classes[i]
            if _touched_cells(drawing, cls.representative) == touched and profiles_equivalent(after, cls.profile, profile):
                classes[i] = cls._replace(size=cls.size + 1)
                by_key.setdefault(key, i)
                break

        else:
            by_key.setdefault(key, len(classes))
            classes.append(InsertionClass(placement, *key, placed, after, 1))

    logger.debug(f'Edge {edge} has {sum(c.size for c in classes)} placements in {len(classes)} classes')

    return classes


def class_bound(k: int) -> int:
    return 4 * (2 * k + 1) * 2 * (k + 1)


def _branch(drawing: OnePlanarDrawing, profile: PartitionProfile, edges: List[Edge], i: int,
            instance: ExtensionInstance) -> Optional[OnePlanarDrawing]:
    if i == len(edges):
        if validate_one_planar(drawing) or not is_extension(drawing, instance):
            logger.warning('Edge insertion reached a leaf that does not validate')
            return None

        return drawing

    for cls in enumerate_classes(drawing, edges[i], profile.k, profile):
        result = _branch(cls.drawing, cls.profile, edges, i + 1, instance)
        if result is not None:
            return result

    return None


def solve_edges_only(instance: ExtensionInstance) -> Optional[OnePlanarDrawing]:
    """Inserts the added edges one by one, branching over one placement per equivalence class.

    :raises RegimeError: when the instance adds vertices or asks for IC-planarity.
    """
    if instance.v_add:
        raise RegimeError(f'Expected no added vertices, found {len(instance.v_add)}.')

    if instance.ic:
        raise RegimeError('Edge insertion by equivalence classes covers 1-planar extensions only.')

    xs = {w for e in instance.e_add for w in e}
    profile = compute_profile(instance.drawing, xs, instance.k)
    result = _branch(instance.drawing, profile, list(instance.e_add), 0, instance)
    logger.info(f'Edge insertion answers {"YES" if result is not None else "NO"} for {instance}')

    return result
