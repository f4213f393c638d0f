ALPHA = -1.0
EPSILONS = [0.2, 0.1, 0.05, 0.025]
LEVELS = 3
BS_LEVELS = 2
PROCESSES = None

LIGHT_X_MAX = 10.0
LIGHT_SAMPLES = 401
POTENTIAL_X_MAX = 8.0
POTENTIAL_KNOTS = 120
