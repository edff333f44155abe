from drawext.drawing import (OnePlanarDrawing, Placement, Violation, apply_placement, delete_edge, drawing_from_rotation,
                             iter_placements, place_edge, place_vertex, restrict, validate_ic_planar, validate_one_planar)
from drawext.instance import ExtensionInstance, extension_violations, is_extension
from drawext.embedding_graph import EmbeddingGraph, build_embedding_graph, prune, radius_check, recombine
from drawext.patterns import Pattern, derive_pattern, enumerate_patterns, place_pattern
from drawext.pattern_graph import assemble_solution, check_validity
from drawext.ic_patterns import ExtendedPattern, check_validity_extended, derive_extended_pattern
from drawext.edge_insertion import enumerate_classes, equivalent, solve_edges_only
from drawext.vertex_flow import solve_lambda, solve_single_vertex
from drawext.two_vertex_dp import solve_two_vertices
from drawext.oracle import SearchLimits, brute_force_solve, enumerate_all_extensions
from drawext.solver import Extender, solve_with_patterns
from drawext.instance_file import parse_drawing, parse_instance, write_drawing, write_instance
from drawext.generator import generate_instance
from drawext.svg import render_svg
