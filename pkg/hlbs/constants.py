import numpy as np


VERSION = '0.1.0'

BIG_NEGATIVE = np.finfo(np.float64).min
BIG_POSITIVE = np.finfo(np.float64).max
MACHINE_EPSILON = np.finfo(np.float64).eps

INV_E = np.exp(-1.0)

# Ai(0) and Ai'(0)
AIRY_AI_0 = 0.35502805388781723926
AIRY_AIP_0 = -0.25881940379280679840

# Largest supported index of the interlaced Airy constants
MAX_SIGMA_INDEX = 50

# Distance from -1/e below which Lambert W switches to the branch-point series
LAMBERT_BRANCH_WINDOW = 1e-8
LAMBERT_DOMAIN_SLACK = 1e-15

# Below these scaled separations the closed forms use their series
SMALL_T_SERIES = 1e-6
SMALL_ETA_SERIES = 1e-2

# Spacing-independent guard used instead of x = 0 for one-sided limits
ORIGIN_GUARD = 1e-8
