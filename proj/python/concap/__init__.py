"""Consensus capacity bounds, GF(2^16) coding primitives, and the simulator."""

import json as _json

from ._concap import (
    InvariantPanic,
    ValidationError,
    brute_force_bound,
    capacity_upper_bound,
    check_consistency,
    count_pairs_above,
    encode,
    four_node_bound,
    fuzz,
    gf16_add,
    gf16_inv,
    gf16_mul,
    gf16_pow,
    pair_sum,
    select_check_triple,
    solve,
)
from ._concap import simulate as _simulate_text


def simulate(config):
    """Run one scenario (dict or JSON text) and return the report as a dict."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(_simulate_text(text))


__all__ = [
    "InvariantPanic",
    "ValidationError",
    "brute_force_bound",
    "capacity_upper_bound",
    "check_consistency",
    "count_pairs_above",
    "encode",
    "four_node_bound",
    "fuzz",
    "gf16_add",
    "gf16_inv",
    "gf16_mul",
    "gf16_pow",
    "pair_sum",
    "select_check_triple",
    "simulate",
    "solve",
]
