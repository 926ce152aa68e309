"""
Constants for Pixel Adapter Bench
"""

# Neighbor slot outside the image
PAD = -1

# Kernel identifiers
KERNEL_PAM = 'pam'
KERNEL_PGA = 'pga'
KERNEL_HALO = 'halo'
KERNEL_GLOBAL = 'global'
KERNEL_KINDS = (KERNEL_PAM, KERNEL_PGA, KERNEL_HALO, KERNEL_GLOBAL)

# Precision modes
PRECISION_F32 = 'f32'
PRECISION_F64 = 'f64'
PRECISIONS = {PRECISION_F32: 'float32', PRECISION_F64: 'float64'}

# Benchmark CSV schema, order is part of the contract
BENCH_CSV_FIELDS = ('kernel', 'b', 'c', 'h', 'w', 'k', 'reps',
                    'wall_ns_median', 'peak_bytes', 'flops_est')
BENCH_CSV_HEADER = ','.join(BENCH_CSV_FIELDS)

# Benchmark defaults
DEFAULT_SEED = 42
DEFAULT_SIZES = (16, 32, 64, 128)
DEFAULT_CHANNELS = 16
DEFAULT_WINDOW = 3
DEFAULT_REPS = 5
MIN_REPS = 3
DEFAULT_HALO_BLOCK = 8
DEFAULT_HALO_WIDTH = 2
DEFAULT_PGA_MAX_PIXELS = 128 * 128

# Verification defaults
DEFAULT_VERIFY_CASES = 20
ORACLE_TOLERANCE = 1e-9
SOFTMAX_TOLERANCE = 1e-12
HOG_ORACLE_TOLERANCE = 1e-12
DEFAULT_GRADCHECK_EPS = 1e-5
DEFAULT_GRADCHECK_TOL = 1e-6
GRADCHECK_DENOM_FLOOR = 1e-8

# HOG defaults
DEFAULT_CELL_SIZE = 8
DEFAULT_N_BINS = 9
DEFAULT_GAMMA = 0.5
DEFAULT_EPSILON = 1e-6
HOG_BINNING_MODES = ('count', 'magnitude')
DEFAULT_LCA_WEIGHT = 0.1
LCA_DISTANCES = ('l1', 'l2')
PIX_REDUCTIONS = ('norm', 'mean')

# MSRB
DEFAULT_MSRB_LAYERS = 5

# Demo
DEMO_UPSCALE = 2
DEMO_LIFT_SEED_OFFSET = 1
DEMO_PAM_SEED_OFFSET = 2
PGM_MAX_VALUE = 255
