from html import escape
from typing import Dict, Iterable, Tuple

import networkx as nx

from drawext.drawing import Edge, Node, OnePlanarDrawing, edge_key

SCALE = 60.0
MARGIN = 30.0
VERTEX_RADIUS = 6.0
CROSSING_RADIUS = 3.0
EDGE_COLOR = '#333333'
HIGHLIGHT_COLOR = '#d62728'


def layout(drawing: OnePlanarDrawing) -> Dict[Node, Tuple[float, float]]:
    """Straight-line positions for every map node, crossings included, that respect the rotation system."""
    embedding = nx.PlanarEmbedding()
    embedding.add_nodes_from(drawing.rotation)
    embedding.set_data({n: list(nbrs) for n, nbrs in drawing.rotation.items() if nbrs})
    if embedding.number_of_nodes() < 3:
        return {n: (float(i), 0.0) for i, n in enumerate(sorted(drawing.rotation))}

    pos = nx.combinatorial_embedding_to_pos(embedding)

    return {n: (float(x), float(y)) for n, (x, y) in pos.items()}


def render_svg(drawing: OnePlanarDrawing, highlight: Iterable[Edge] = ()) -> str:
    """Renders the drawing as SVG 1.1 text. Each edge is one polyline through its crossing point, if any.

    :param highlight: Edges drawn in the highlight colour, usually the added edges of a solution.
    """
    highlight = {edge_key(*e) for e in highlight}
    pos = layout(drawing)
    xs = [x for x, _ in pos.values()] or [0.0]
    ys = [y for _, y in pos.values()] or [0.0]
    width = (max(xs) - min(xs)) * SCALE + 2 * MARGIN
    height = (max(ys) - min(ys)) * SCALE + 2 * MARGIN

    def point(n: Node) -> str:
        x, y = pos[n]
        # svg y grows downwards
        return f'{(x - min(xs)) * SCALE + MARGIN:.2f},{(max(ys) - y) * SCALE + MARGIN:.2f}'

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.2f}" height="{height:.2f}" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
    ]
    for e in drawing.edges:
        nodes = [e[0]] + [d[1] for d in drawing.segments(e)]
        added = e in highlight
        lines.append(f'  <polyline class="{"edge added" if added else "edge"}" '
                     f'points="{" ".join(point(n) for n in nodes)}" fill="none" '
                     f'stroke="{HIGHLIGHT_COLOR if added else EDGE_COLOR}" stroke-width="2"/>')

    for x in sorted(drawing.crossings):
        cx, cy = point(x).split(',')
        lines.append(f'  <circle class="crossing" cx="{cx}" cy="{cy}" r="{CROSSING_RADIUS}" fill="{EDGE_COLOR}"/>')

    for v in drawing.vertices:
        cx, cy = point(v).split(',')
        lines.append(f'  <circle class="vertex" cx="{cx}" cy="{cy}" r="{VERTEX_RADIUS}" fill="white" '
                     f'stroke="{EDGE_COLOR}"/>')
        lines.append(f'  <text x="{float(cx) + VERTEX_RADIUS + 2:.2f}" y="{float(cy) - VERTEX_RADIUS:.2f}" '
                     f'font-size="12">{escape(v)}</text>')

    lines.append('</svg>')

    return '\n'.join(lines) + '\n'
