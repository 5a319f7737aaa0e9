import os

DEFAULT_MAX_ENUM = 1_000_000
ENV_VAR = "NABLA_MAX_ENUM"


def default_limit():
    """Enumeration cap: ``$NABLA_MAX_ENUM`` if set, else the built-in default."""
    raw = os.environ.get(ENV_VAR)
    if raw:
        value = int(raw)
        if value < 1:
            raise ValueError(f"{ENV_VAR} must be >= 1, got {value}")
        return value
    return DEFAULT_MAX_ENUM


def resolve_limit(limit):
    return default_limit() if limit is None else limit
