from hlbs.constants import BIG_NEGATIVE, BIG_POSITIVE


PARAMETER_CONFIG = {
    'alpha': {
        'lower_bound': BIG_NEGATIVE,
        'upper_bound': BIG_POSITIVE,
        'default_value': -1.0,
    },
    'epsilon': {
        'lower_bound': 0.0,
        'upper_bound': BIG_POSITIVE,
        'default_value': 0.1,
    },
}


MASS_CONFIG = {
    'M': {
        'lower_bound': 0.0,
        'upper_bound': BIG_POSITIVE,
        'default_value': 1.0,
    },
    'm': {
        'lower_bound': 0.0,
        'upper_bound': BIG_POSITIVE,
        'default_value': 0.01,
    },
}


QUAD_CONFIG = {
    'rel_tol': 1e-10,
    'abs_tol': 1e-14,
    'limit': 400,
}


BS_GRID_CONFIG = {
    'nodes': 1600,
    'max_nodes': 4800,
    'panel_order': 8,
    'first_panel_width': 0.25,
    'panel_growth': 1.05,
    'nu_max_factor': 12.0,
    'tol': 1e-4,
    'refine_nodes_factor': 1.5,
    'refine_nu_max_factor': 1.25,
    'upper_bracket_slack': 1.0,
    'root_method': 'brentq',
    'max_dense_order': 6000,
}


EFFECTIVE_CONFIG = {
    'nodes': 8001,
    'tol': 1e-5,
    'margin': 0.05,
    'turning_point_shift': 0.1,
    'decay_lengths': 8.0,
    'min_potential_fraction': 0.9,
    'r_knots': 240,
    'r_origin_offset': 1e-6,
    'max_epsilon': 1.0,
}


K1_CONFIG = {
    'nodes': 8001,
    'tail': 12.0,
}


DELTA_CONFIG = {
    'samples': 400,
    'x_max_factor': 40.0,
}


LIGHTSPEC_CONFIG = {
    'x_min': -10.0,
    'x_max': 10.0,
    'samples': 401,
    'with_correction': True,
}


VALIDATE_CONFIG = {
    'alpha': -1.0,
    'couplings': (-0.5, -1.0, -2.0),
    'epsilons': (0.2, 0.1, 0.05),
    'ratio_epsilons': (0.2, 0.1, 0.05, 0.025),
    'levels': 3,
    'bs_levels': 2,
    'light_samples': 200,
    'psi_samples': 20,
    'sigma_max_index': 30,
    'k1_levels': 6,
    'k1_tol': 1e-4,
    'parity_tol': 1e-8,
    # |r_k - s_k| at the smallest ratio epsilon, per sector and level k
    'ratio_gates': {
        'b': (0.09, 0.64, 1.31),
        'f': (0.34, 0.97, 1.67),
    },
    # delta/|alpha| and |alpha| x* of the sup of R
    'delta_baseline': (0.62447740, 0.380511),
    'delta_rel_tol': 1e-6,
    'delta_x_tol': 1e-3,
    'cross_slope_gate': 1.0,
    'hs_allowance': 1e-3,
    'psd_floor': -1e-10,
    'figure_tol': 2e-2,
}
