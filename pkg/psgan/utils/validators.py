from psgan.errors import ConfigError


def validate_positive(name, value):
    """Validate that an integer setting is at least one"""
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError(f'{name} must be a positive integer, got {value!r}')
    return value


def validate_non_negative(name, value):
    """Validate that a numeric setting is not negative"""
    if value < 0:
        raise ConfigError(f'{name} must be >= 0, got {value!r}')
    return value


def validate_ordered_pair(name, pair):
    """Validate a (low, high) pair with low <= high"""
    if len(pair) != 2 or pair[0] > pair[1]:
        raise ConfigError(f'{name} must be an ordered (low, high) pair, got {pair!r}')
    return tuple(pair)


def is_power_of_two(value):
    """Check whether value is 2**k for some k >= 0"""
    return value >= 1 and value & (value - 1) == 0


def find_missing_fields(data, required_fields):
    """Return the required fields that are absent or empty in data"""
    missing_fields = []
    for field in required_fields:
        value = data.get(field)
        if value is None or (isinstance(value, str) and not value.strip()):
            missing_fields.append(field)
    return missing_fields


def find_unknown_fields(data, allowed_fields):
    """Return the keys of data that are not in allowed_fields"""
    return sorted(key for key in data if key not in allowed_fields)
