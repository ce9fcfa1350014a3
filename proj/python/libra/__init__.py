"""Sparse regularization paths via the Linearized Bregman iteration.

Thin wrapper around the compiled ``_libra`` extension.
"""

try:
    from ._libra import (  # noqa: F401
        DataError,
        DivergenceError,
        gen_linear_data,
        ggm,
        gibbs_grid,
        ising,
        iss,
        lb,
        pair_index,
        potts,
        shrinkage,
        support_recovery_curve,
    )
except ImportError:  # in-tree build: extension on sys.path, not in package
    from _libra import (  # noqa: F401
        DataError,
        DivergenceError,
        gen_linear_data,
        ggm,
        gibbs_grid,
        ising,
        iss,
        lb,
        pair_index,
        potts,
        shrinkage,
        support_recovery_curve,
    )

__all__ = [
    "DataError",
    "DivergenceError",
    "gen_linear_data",
    "ggm",
    "gibbs_grid",
    "ising",
    "iss",
    "lb",
    "pair_index",
    "potts",
    "shrinkage",
    "support_recovery_curve",
]
