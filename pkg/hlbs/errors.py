class HlbsError(Exception):
    pass


class DomainError(HlbsError, ValueError):
    '''Argument outside the mathematical domain of an operation.'''


class RangeError(HlbsError, ValueError):
    '''Argument outside the supported (implemented) range.'''


class ConfigError(HlbsError, ValueError):
    pass


class BracketError(HlbsError):
    '''Root bracket whose endpoint values do not change sign.'''


class ConvergenceError(HlbsError):
    pass


class GridConvergenceError(ConvergenceError):
    '''Result moved by more than the allowed amount under grid refinement.'''


class DiscretizationError(HlbsError):
    pass


class SizeError(HlbsError):
    '''Dense problem larger than the desk-scale cap.'''
