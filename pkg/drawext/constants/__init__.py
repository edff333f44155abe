CROSSING_PREFIX = 'x'

ONE_PLANAR = '1planar'
IC_PLANAR = 'ic'
MODES = [ONE_PLANAR, IC_PLANAR]

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_REGIME = 3

DEFAULT_MAX_VERTICES = 12
DEFAULT_MAX_K = 8
DEFAULT_MAX_PLACEMENTS = 2_000_000

PATTERN_MAX_K = 2
SAME_CELL_MAX_CROSSING_PAIRS = 2
FAR_DISTANCE = 6
SHORT_PATH_LENGTH = 4

SOLVER_MODES = ['auto', 'edges', 'one-vertex', 'two-vertex', 'patterns', 'oracle']
NOT_APPLICABLE = 'not-applicable'
SWEEP_STATES_PER_RECORD = 3

CROSSING_TAG = 'crossing'
CROSS_MARK = 'cross'
SKELETON_PREFIX = '~'
