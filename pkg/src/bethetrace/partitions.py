"""Integer-partition machinery for turning ordered sums into unrestricted ones.

An ordered sum over strictly increasing indices decomposes into a signed
combination of unrestricted sums, one per integer partition, where each
partition block glues that many indices together.  Everything here is exact
rational arithmetic; floating point only enters downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import OutOfRange
from .model import PartitionShape

MAX_N = 16


@dataclass(frozen=True)
class PartitionSet:
    """All integer partitions of ``n``, each with its exact signed weight."""

    n: int
    shapes: tuple[PartitionShape, ...]


def _partitions(n: int, max_part: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n: int) -> PartitionSet:
    """All partitions of ``n`` in reverse-lexicographic order.

    The single-block partition comes first, the all-ones partition last.
    """
    if not 1 <= n <= MAX_N:
        raise OutOfRange(f"partition enumeration supports 1 <= n <= {MAX_N}, got {n}")
    shapes = tuple(PartitionShape(blocks) for blocks in _partitions(n, n))
    return PartitionSet(n, shapes)


def binomial_identity_check(n: int, r: int) -> bool:
    """Exact check that ``binom(r, n) = sum_a C_a * r**d(a)``.

    Counting strictly increasing n-tuples from a range of size r both ways:
    directly, and through the signed unrestricted decomposition.
    """
    total = Fraction(0)
    for shape in enumerate_partitions(n).shapes:
        total += shape.coefficient * Fraction(r) ** shape.dimension
    return total == comb(r, n)


def ordered_sum_decomposition_check(n: int, range_size: int, summand) -> tuple[Fraction, Fraction]:
    """Evaluate an ordered sum and its unrestricted decomposition exactly.

    ``summand`` must be symmetric in its ``n`` integer arguments and return
    exact values (int or Fraction).  Returns ``(lhs, rhs)`` where lhs sums
    over strictly increasing index tuples from ``{1..range_size}`` and rhs is
    the signed partition decomposition; the two agree for symmetric summands.
    Blocks consume indices left to right: the first block's value feeds the
    first ``a_1`` arguments, the next block the following ``a_2``, and so on.
    """
    indices = range(1, range_size + 1)
    lhs = Fraction(0)
    for combo in itertools.combinations(indices, n):
        lhs += Fraction(summand(*combo))

    rhs = Fraction(0)
    for shape in enumerate_partitions(n).shapes:
        block_sum = Fraction(0)
        for values in itertools.product(indices, repeat=shape.dimension):
            args = []
            for block, value in zip(shape.blocks, values):
                args.extend([value] * block)
            block_sum += Fraction(summand(*args))
        rhs += shape.coefficient * block_sum
    return lhs, rhs
