"""Default size caps and numerical settings.

All values are plain module-level defaults; every public routine that uses one
accepts an override argument of the same name.
"""

from dataclasses import dataclass, field, replace

TRUTH_TABLE_CAP = 2**20
RESTRICTION_ARITY_CAP = 12
BLOCK_SENSITIVITY_ARITY_CAP = 12
SPECTRAL_CELL_CAP = 2**26
PAIR_SCAN_CAP = 2**34
RECTANGLE_SEARCH_CAP = 64
OPTIMIZER_PAIR_CAP = 2**22
SYNTHESIS_ARITY_CAP = 4

NORM_TOL = 1e-9
BRACKET_TOL = 1e-6
DIST_TOL = 1e-9


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings shared by the bracket routines.

    ``seed``, ``iterations`` and ``restarts`` fully determine every optimizer
    run; two runs with equal configs give bitwise-identical values.
    """

    seed: int = 0
    iterations: int = 400
    restarts: int = 4
    temperature_blocks: int = 8
    spectral_cell_cap: int = SPECTRAL_CELL_CAP
    pair_scan_cap: int = PAIR_SCAN_CAP
    optimizer_pair_cap: int = OPTIMIZER_PAIR_CAP
    extra_lower: tuple = field(default_factory=tuple)
    extra_upper: tuple = field(default_factory=tuple)

    def with_(self, **kwargs):
        return replace(self, **kwargs)
