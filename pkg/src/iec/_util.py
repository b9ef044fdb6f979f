"""Small shared numeric helpers."""


def round_half_away(x: float) -> int:
    """Round to nearest integer, halves away from zero (unlike built-in round)."""
    if x >= 0:
        return int(x + 0.5)
    return -int(-x + 0.5)
