from typing import Callable, Dict, Optional

from drawext.constants import IC_PLANAR, PATTERN_MAX_K, SOLVER_MODES
from drawext.drawing import OnePlanarDrawing, logger
from drawext.edge_insertion import solve_edges_only
from drawext.embedding_graph import build_embedding_graph, prune, recombine
from drawext.exceptions import ConsistencyError, RegimeError
from drawext.instance import ExtensionInstance, extension_violations
from drawext.oracle import SearchLimits, brute_force_solve
from drawext.pattern_graph import assemble_solution, check_validity
from drawext.patterns import enumerate_patterns, iter_pattern_placements
from drawext.two_vertex_dp import solve_two_vertices
from drawext.vertex_flow import solve_single_vertex


def _solve_pruned(instance: ExtensionInstance) -> Optional[OnePlanarDrawing]:
    eg = build_embedding_graph(instance.drawing, instance.join_vertices)
    valid = 0
    for pattern in enumerate_patterns(instance, minimal_incidences=True):
        pattern_graph = check_validity(pattern, instance)
        if pattern_graph is None:
            continue

        valid += 1
        for placement in iter_pattern_placements(pattern, pattern_graph, eg):
            try:
                return assemble_solution(placement, pattern_graph, instance)

            except ConsistencyError as exc:
                logger.debug(f'Placement discarded: {exc.message}')

    logger.debug(f'None of {valid} valid patterns could be placed')
    return None


def solve_with_patterns(instance: ExtensionInstance) -> Optional[OnePlanarDrawing]:
    """Decides the instance by placing valid patterns into each pruned part and merging the results."""
    if not instance.e_add:
        return instance.drawing

    result = prune(instance)
    if result.certified_no:
        return None

    solutions = []
    for sub in result.instances:
        solution = _solve_pruned(sub.instance)
        if solution is None:
            logger.info(f'No pattern fits the part {sub.instance}')
            return None

        solutions.append(solution)

    return recombine(instance, result, solutions)


class Extender:
    """Decides extension instances with the solver that fits their shape."""

    def __repr__(self):
        return f'Extender(mode={self.mode}, ic={self.ic}, pattern_max_k={self.pattern_max_k}, limits={self.limits})'

    @property
    def mode(self) -> str:
        return getattr(self, '_mode', 'auto')

    def set_mode(self, mode: str) -> 'Extender':
        """Sets the solver to use, or 'auto' to pick one per instance. Returns itself for fluent-style chaining."""
        if mode not in SOLVER_MODES:
            raise RegimeError(f'Expected a solver in {SOLVER_MODES}, found {mode}.')

        self._mode = mode

        return self

    @property
    def ic(self) -> bool:
        return getattr(self, '_ic', False)

    def set_ic(self, ic: bool = True) -> 'Extender':
        """Asks for IC-planar extensions of every instance. Returns itself for fluent-style chaining."""
        self._ic = ic

        return self

    @property
    def limits(self) -> SearchLimits:
        return getattr(self, '_limits', SearchLimits())

    def set_limits(self, limits: SearchLimits) -> 'Extender':
        """Sets the budgets of the exhaustive search. Returns itself for fluent-style chaining."""
        self._limits = limits

        return self

    @property
    def pattern_max_k(self) -> int:
        return getattr(self, '_pattern_max_k', PATTERN_MAX_K)

    def set_pattern_max_k(self, k: int) -> 'Extender':
        """Sets the largest number of added edges handed to the pattern search. Returns itself for fluent-style chaining."""
        self._pattern_max_k = k

        return self

    def prepare(self, instance: ExtensionInstance) -> ExtensionInstance:
        if self.ic and not instance.ic:
            return ExtensionInstance(instance.graph, instance.drawing, IC_PLANAR)

        return instance

    def solver_for(self, instance: ExtensionInstance) -> str:
        """Names the solver for an instance.

        :raises RegimeError: when no solver covers the instance in auto mode.
        """
        if self.mode != 'auto':
            return self.mode

        if not instance.ic:
            if not instance.v_add:
                return 'edges'

            if len(instance.v_add) == 1 and not instance.e_add_h:
                return 'one-vertex'

            if len(instance.v_add) == 2 and not instance.e_add_h:
                return 'two-vertex'

        if instance.k <= self.pattern_max_k:
            return 'patterns'

        limits = self.limits
        if instance.graph.number_of_nodes() <= limits.max_vertices and instance.k <= limits.max_k:
            return 'oracle'

        raise RegimeError(f'No solver covers {instance}: more than {self.pattern_max_k} added edges and beyond '
                          f'the search limits.')

    def _oracle(self, instance: ExtensionInstance) -> Optional[OnePlanarDrawing]:
        return brute_force_solve(instance, self.limits.copy().set_ic(instance.ic))

    def solve(self, instance: ExtensionInstance) -> Optional[OnePlanarDrawing]:
        """Returns an extension of the instance, or None when there is none.

        :raises RegimeError: when the chosen solver does not cover the instance.
        :raises BudgetError: when the exhaustive search runs out of budget.
        :raises ConsistencyError: when a solver returns a drawing that is not an extension.
        """
        instance = self.prepare(instance)
        if not instance.e_add:
            logger.info(f'{instance} adds nothing; the drawing of H is the extension')
            return instance.drawing

        name = self.solver_for(instance)
        logger.info(f'Solving {instance} with the {name} solver')
        solvers: Dict[str, Callable[[ExtensionInstance], Optional[OnePlanarDrawing]]] = {
            'edges': solve_edges_only,
            'one-vertex': solve_single_vertex,
            'two-vertex': solve_two_vertices,
            'patterns': solve_with_patterns,
            'oracle': self._oracle,
        }
        solution = solvers[name](instance)
        if solution is None:
            logger.info(f'{name} solver: no extension')
            return None

        violations = extension_violations(solution, instance)
        if violations:
            logger.warning(f'Discarding a witness of the {name} solver: {violations[0].message}')
            raise ConsistencyError(f'The {name} solver returned an invalid extension: {violations[0].message}')

        logger.info(f'{name} solver: extension found')
        return solution
