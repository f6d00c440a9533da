"""Enumeration budgets.

Every budget is multiplied by the ``GCADEC_BUDGET`` environment variable
(a positive float, default 1).
"""

import os

TABLE_ORDER_BOUND = 2000
ENDOMORPHISM_ENUM_ORDER = 24
VERBAL_TUPLE_BUDGET = 1_000_000
VERBAL_MAX_ARITY = 3
VERBAL_SEARCH_MAX_LEN = 4
ISOMORPHISM_BUDGET = 200_000
CYCLIC_EXPONENT_BUDGET = 1 << 16
REACH_CELL_BUDGET = 4096
REACH_STATE_BUDGET = 2_000_000
KERNEL_SEARCH_BUDGET = 2_000_000


def scale():
    raw = os.environ.get("GCADEC_BUDGET", "1")
    try:
        value = float(raw)
    except ValueError:
        return 1.0
    return value if value > 0 else 1.0


def budget(base):
    """Return ``base`` scaled by ``GCADEC_BUDGET``."""
    return max(1, int(base * scale()))

# abelian leaves with p^n above this are rejected as too large
ABELIAN_LEAF_BOUND = 13 ** 8
