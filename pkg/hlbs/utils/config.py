from typing import Any, Union

import numpy as np

from hlbs.errors import ConfigError
from hlbs.utils.misc import is_none


def get_config_values(
    id: str,
    config: dict,
) -> dict:
    return {member: subconfig[id] for member, subconfig in config.items()}


def get_default_values(config: dict) -> dict:
    return get_config_values('default_value', config)


def resolve(
    value: Any,
    config: dict,
    id: str,
) -> Any:
    '''Returns value, or config[id] (or its default) when value is None.'''
    if not is_none(value):
        return value
    entry = config[id]
    if isinstance(entry, dict):
        return entry['default_value']
    return entry


def check_bounds(
    id: str,
    value: Union[float, np.ndarray],
    config: dict,
    strict_lower: bool = False,
) -> None:
    lower = config[id]['lower_bound']
    upper = config[id]['upper_bound']
    value = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(value)):
        raise ConfigError(f'{id} must be finite, got {value}')
    below = value <= lower if strict_lower else value < lower
    if np.any(below) or np.any(value > upper):
        bracket = '(' if strict_lower else '['
        raise ConfigError(f'{id}={value} outside {bracket}{lower}, {upper}]')
