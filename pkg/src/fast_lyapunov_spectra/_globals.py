_BUILTIN_MAP_NAMES = ("gauss", "renyi", "middle_third_gaps")

_SCALING_FAMILIES = (
    "power",
    "exp",
    "factorial_block",
    "nlogn",
    "oscillating_exp",
    "noisy_exp",
    "double_exp",
    "expression",
    "log_expression",
    "table",
    "star",
    "scaled",
)

_SEQUENCE_FAMILIES = ("exp", "double_exp", "constant", "table")

_HYPOTHESIS_NAMES = {
    1: "consecutive branch intervals share exactly one endpoint",
    2: "each branch extends to a C1 diffeomorphism of its closed interval",
    3: "the map is expanding away from an optional parabolic fixed point",
    4: "each branch maps its closed interval onto [0, 1]",
    5: "derivative on branch n is comparable to n^gamma",
}
_BLOCKING_HYPOTHESES = (1, 5)

_DEFAULT_BRANCH_HORIZON = 64
_DEFAULT_SAMPLES_PER_BRANCH = 16
_DEFAULT_BIT_BUDGET = 2**20
_DEFAULT_NODE_BUDGET = 10**6
_DEFAULT_DECODE_TOLERANCE = 1e-12
_DEFAULT_DECODE_ITERATION_CAP = 10_000

# Infinite-tail searches stop after this many non-improving candidates
_DEFAULT_SENTINEL_RUN = 64
_DEFAULT_DECAY_BITS = 10
_DEFAULT_SCAN_CAP = 2**20

_XI_CAP = 1e6
_DIGIT_DISPLAY_THRESHOLD = 2**63

_B_ONE_TOLERANCE = 0.05
_B_INFINITE_THRESHOLD = 64.0

# 1! + 2! + ... + k! for k = 1, ..., 11
_FACTORIAL_BLOCK_BOUNDARIES = (1, 3, 9, 33, 153, 873, 5913, 46233, 409113, 4037913, 43954713)
