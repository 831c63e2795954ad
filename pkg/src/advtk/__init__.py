"""Quantum adversary bounds and formula size lower bounds for Boolean functions."""

__version__ = "0.1.0"

from .boolfn import (
    BUILTINS,
    BooleanFunction,
    ambainis,
    and_,
    builtin,
    collision,
    iterate,
    maj3,
    or_,
    parity,
    parse_bf,
    read_bf,
    write_bf,
)
from .config import OptimizerConfig
from .errors import (
    AdvtkError,
    DomainError,
    FormulaMismatchError,
    FormulaSyntaxError,
    InfiniteWitnessError,
    NoCrossPairsError,
    ResourceCapError,
    VerificationError,
)
from .measures import block_sensitivity, certificate_complexity, sensitivity
