"""Formulas: exact size search and Karchmer-Wigderson rectangles."""

from .ast import (
    AND,
    OR,
    Gate,
    Leaf,
    depth,
    eval_formula,
    find_mismatch,
    formula_function,
    iterate_formula,
    leaf_count,
    leaves,
    negate,
    num_vars,
    parse_formula,
    to_text,
    truth_table,
)
from .kw import KWPartition, PartitionNumber, color_cover, kw_partition, rectangle_partition_number
from .synthesis import SynthesisResult, formula_size_table, min_formula_size

MAJ3_FORMULA = "(x1&x2)|((x1|x2)&x3)"
AMBAINIS_FORMULA = "(!x1|x3|!x4)&((!x1&x3&x4)|((x1|!x2)&(x2|!x3)))"
