"""Adversary bounds: primal witnesses, dual objects, optimizers and brackets."""

from .bounds import (
    Bracket,
    Certificate,
    formula_bound,
    maxpi_bracket,
    prob_formula_bound,
    quantum_bound,
    sumpi_bracket,
)
from .classical import hastad_bound, khrapchenko, koutsoupias
from .optimize import (
    MaxPIPrimal,
    SpectralAdversary,
    SumPIPrimal,
    optimize_maxpi_primal,
    optimize_spectral,
    optimize_sumpi_primal,
)
from .spectral import (
    ProbSchemeWitness,
    check_adversary_matrix,
    difference_masks,
    hamming_one_matrix,
    index_selection_problems,
    index_selection_value,
    khrapchenko_scheme,
    prob_scheme_value,
    selection_from_witness,
    smallest_index_selection,
    spectral_value,
    validate_index_selection,
)
from .witnesses import (
    ProbabilityFamily,
    WitnessEvaluation,
    ambainis_witness,
    certificate_barrier,
    certificate_witness,
    collision_maxpi_witness,
    compose_functions,
    compose_witness,
    eval_maxpi_witness,
    eval_sumpi_witness,
    evaluate_witness,
    iterate_witness,
)
