"""Certified eigenvalues of the quartic anharmonic oscillator.

Thin Python layer over the C++ core. Energies are returned as decimal
strings (use ``decimal.Decimal`` or ``mpmath.mpf`` to do arithmetic).
"""

import json

from ._core import Params, classify, coefficients, oracle, run_cli, solve_json, table1

__all__ = ["Params", "classify", "coefficients", "oracle", "run_cli", "solve", "table1"]


def solve(levels=(0, 9), params=None, **kwargs):
    """Certify levels ``levels[0]..levels[1]``; returns the parsed JSON document."""
    lo, hi = (levels, levels) if isinstance(levels, int) else levels
    return json.loads(solve_json(lo, hi, params if params is not None else Params(), **kwargs))
