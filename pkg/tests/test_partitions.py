"""Exact partition enumeration and ordered-sum decomposition checks."""

import itertools
import random
from fractions import Fraction
from math import comb, factorial

import pytest

from bethetrace import (
    OutOfRange,
    binomial_identity_check,
    enumerate_partitions,
    ordered_sum_decomposition_check,
)


def coefficients(n):
    return {s.blocks: s.coefficient for s in enumerate_partitions(n).shapes}


class TestEnumeration:
    def test_counts(self):
        for n, expected in ((1, 1), (2, 2), (3, 3), (4, 5), (10, 42), (16, 231)):
            assert len(enumerate_partitions(n).shapes) == expected

    def test_reverse_lexicographic_order(self):
        blocks = [s.blocks for s in enumerate_partitions(4).shapes]
        assert blocks == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            enumerate_partitions(0)
        with pytest.raises(OutOfRange):
            enumerate_partitions(17)

    def test_coefficients_n2(self):
        assert coefficients(2) == {(1, 1): Fraction(1, 2), (2,): Fraction(-1, 2)}

    def test_coefficients_n3(self):
        assert coefficients(3) == {
            (1, 1, 1): Fraction(1, 6),
            (2, 1): Fraction(-1, 2),
            (3,): Fraction(1, 3),
        }

    def test_coefficients_n4(self):
        # cross-checked by the exact binomial identity below
        assert coefficients(4) == {
            (1, 1, 1, 1): Fraction(1, 24),
            (2, 1, 1): Fraction(-1, 4),
            (2, 2): Fraction(1, 8),
            (3, 1): Fraction(1, 3),
            (4,): Fraction(-1, 4),
        }

    def test_extreme_coefficients(self):
        for n in range(1, 11):
            coeffs = coefficients(n)
            assert coeffs[(1,) * n] == Fraction(1, factorial(n))
            assert coeffs[(n,)] == Fraction((-1) ** (n - 1), n)

    def test_block_sums(self):
        for n in range(1, 13):
            for shape in enumerate_partitions(n).shapes:
                assert shape.total == n
                assert sum(m * s for m, s in shape.multiplicity_counts.items()) == n
                assert sum(shape.multiplicity_counts.values()) == shape.dimension


class TestBinomialIdentity:
    def test_small_cases(self):
        assert binomial_identity_check(2, 5)   # 10 = 25/2 - 5/2
        assert binomial_identity_check(3, 4)   # 4 = 64/6 - 16/2 + 4/3
        assert binomial_identity_check(10, 30)

    def test_full_range(self):
        assert all(
            binomial_identity_check(n, r)
            for n in range(1, 11)
            for r in range(1, 31)
        )

    def test_identity_is_exact_not_float(self):
        # a deliberate perturbation must break it
        total = sum(
            s.coefficient * Fraction(7) ** s.dimension
            for s in enumerate_partitions(4).shapes
        )
        assert total == comb(7, 4)
        assert total + Fraction(1, 10**12) != comb(7, 4)


class TestOrderedSumDecomposition:
    def test_constant_summand(self):
        lhs, rhs = ordered_sum_decomposition_check(2, 3, lambda *i: 1)
        assert lhs == rhs == 3

    def test_linear_summand(self):
        lhs, rhs = ordered_sum_decomposition_check(3, 4, lambda *i: sum(i))
        assert lhs == rhs == 30  # 6 + 7 + 8 + 9 over the four ordered triples

    def test_product_summand(self):
        def product(*i):
            out = 1
            for v in i:
                out *= v
            return out

        brute = sum(
            a * b * c * d
            for a, b, c, d in itertools.combinations(range(1, 7), 4)
        )
        lhs, rhs = ordered_sum_decomposition_check(4, 6, product)
        assert lhs == rhs == brute

    def test_random_symmetric_polynomials(self):
        rng = random.Random(20240811)
        for _ in range(100):
            n = rng.randint(2, 5)
            range_size = rng.randint(n, 8)
            c1 = rng.randint(-3, 3)
            c2 = rng.randint(-3, 3)
            c3 = rng.randint(0, 2)

            def summand(*idx, c1=c1, c2=c2, c3=c3):
                s1 = sum(idx)
                s2 = sum(v * v for v in idx)
                prod = 1
                for v in idx:
                    prod *= v
                return c1 * s1 + c2 * s2 + c3 * prod + s1 * s1

            lhs, rhs = ordered_sum_decomposition_check(n, range_size, summand)
            assert lhs == rhs
