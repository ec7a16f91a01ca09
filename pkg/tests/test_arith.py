import math

import pytest
from hypothesis import given, strategies as st

from cartan_odd.arith import PrimeField, fp_inv, lucas_binom, tuple_binom


def test_inverse_examples():
  assert fp_inv(1, 5) == 1
  assert fp_inv(2, 5) == 3
  assert fp_inv(3, 7) == 5


def test_inverse_of_zero_raises():
  with pytest.raises(ZeroDivisionError):
    fp_inv(0, 5)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_inverse_is_involution(p):
  for a in range(1, p):
    assert a * fp_inv(a, p) % p == 1
    assert fp_inv(fp_inv(a, p), p) == a


def test_binomial_examples():
  assert lucas_binom(4, 2, 5) == 1
  assert lucas_binom(5, 1, 5) == 0
  assert lucas_binom(6, 3, 5) == 0
  assert lucas_binom(2, 3, 5) == 0


@pytest.mark.parametrize("p", [5, 7])
def test_binomial_matches_factorials(p):
  for a in range(2 * p + 1):
    for b in range(a + 2):
      assert lucas_binom(a, b, p) == math.comb(a, b) % p


@given(st.integers(0, 400), st.integers(0, 400), st.sampled_from([5, 7, 11]))
def test_binomial_large_arguments(a, b, p):
  assert lucas_binom(a, b, p) == math.comb(a, b) % p


def test_tuple_binomial():
  assert tuple_binom((0, 0, 0), (0, 0, 0), 1, 5) == 1
  assert tuple_binom((2, 0, 0), (1, 0, 0), 1, 5) == 3
  assert tuple_binom((2, 0, 0), (3, 0, 0), 1, 5) == 0


@given(st.lists(st.integers(0, 4), min_size=2, max_size=2),
       st.lists(st.integers(0, 4), min_size=2, max_size=2))
def test_tuple_binomial_symmetric(r, s):
  r, s = tuple(r) + (0, 1, 1), tuple(s) + (1, 0, 1)
  assert tuple_binom(r, s, 2, 5) == tuple_binom(s, r, 2, 5)


@pytest.mark.parametrize("p", [1, 2, 3, 4, 9, 25])
def test_field_rejects_bad_primes(p):
  with pytest.raises(ValueError):
    PrimeField(p)
