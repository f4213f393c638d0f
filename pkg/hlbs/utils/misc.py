from typing import Any, Union

import numpy as np


def is_none(a: Any) -> bool:
    if type(a) == type(None):
        return True
    else:
        return False


def is_scalar(a: Union[float, np.ndarray]) -> bool:
    return np.ndim(a) == 0


def restore_shape(
    a: np.ndarray,
    like: Union[float, np.ndarray],
) -> Union[float, np.ndarray]:
    if is_scalar(like):
        return float(np.asarray(a).reshape(()))
    return np.asarray(a).reshape(np.shape(like))


def significant(value: float, digits: int = 17) -> str:
    return format(float(value), f'.{digits}g')
