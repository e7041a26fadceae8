"""Ranks of finite semigroups, with ``A+(B_n)`` and Brandt semigroups built in."""

from .affine import build_cayley, compose, enumerate_aff, enumerate_aplus, parse_element, parse_expression
from .brandt import Permutation, build_brandt, symmetric_group, trivial_group
from .ranks import (
    RankReport,
    SearchBudget,
    certified_lower_rank_aplus,
    independent_set_search,
    large_rank,
    lower_rank,
    small_rank,
    smallest_prime_subset,
)
from .semigroup import ElementSet, FiniteSemigroup, Witness, closure, is_generating, is_independent, is_prime_subset

__version__ = "0.1.0"
