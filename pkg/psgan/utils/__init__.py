# Utility functions and helpers
from .validators import (
    find_missing_fields,
    find_unknown_fields,
    is_power_of_two,
    validate_non_negative,
    validate_ordered_pair,
    validate_positive,
)

__all__ = [
    'find_missing_fields',
    'find_unknown_fields',
    'is_power_of_two',
    'validate_non_negative',
    'validate_ordered_pair',
    'validate_positive',
]
