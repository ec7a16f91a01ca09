import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_odd.dps import (Shape, SuperElement, VectorField, dp_product, multiply,
                            p_power, partial, tables, vf_apply, vf_bracket)

S1 = Shape(1, 2, 5)
S2 = Shape(2, 3, 5)


def x(s, k):
  return SuperElement.var(s, k)


def mono(s, r, c=1):
  return SuperElement.monomial(s, r, c)


def test_product_examples():
  assert dp_product((1, 0, 0), (1, 0, 0), S1) == (2, (2, 0, 0))
  assert dp_product((0, 1, 0), (0, 1, 0), S1)[0] == 0
  assert dp_product((0, 0, 1), (0, 1, 0), S1) == (4, (0, 1, 1))
  assert dp_product((0, 1, 0), (0, 0, 1), S1) == (1, (0, 1, 1))


def test_product_truncates_even_overflow():
  assert dp_product((3, 0, 0), (2, 0, 0), S1)[0] == 0


def test_multiply_examples():
  f = mono(S1, (2, 1, 0), 3)
  assert multiply(SuperElement.one(S1), f) == f
  assert multiply(x(S1, 1), x(S1, 1)) == mono(S1, (2, 0, 0), 2)
  assert multiply(x(S1, 2), x(S1, 3)) == -multiply(x(S1, 3), x(S1, 2))


def test_shape_mismatch():
  with pytest.raises(ValueError):
    multiply(x(S1, 1), x(S2, 1))
  with pytest.raises(ValueError):
    dp_product((1, 0, 0), (1, 0, 0, 0, 0), S1)


def _prod(T, a, b):
  return T.prod_coef[a, b] % 5, T.prod_idx[a, b]


@pytest.mark.parametrize("s", [S1, S2])
def test_associativity_exhaustive(s):
  T = tables(s)
  a, b, c = np.meshgrid(*[np.arange(s.size)] * 3, indexing="ij")
  c1, ab = _prod(T, a, b)
  c2, left = _prod(T, ab, c)
  c3, bc = _prod(T, b, c)
  c4, right = _prod(T, a, bc)
  lc, rc = c1 * c2 % 5, c3 * c4 % 5
  assert np.array_equal(lc, rc)
  nz = lc != 0
  assert np.array_equal(left[nz], right[nz])


@pytest.mark.parametrize("s", [S1, S2])
def test_supercommutative(s):
  T = tables(s)
  par = np.array([s.parity(r) for r in s.indices])
  sign = np.where(np.outer(par, par) == 1, -1, 1)
  assert np.array_equal(T.prod_coef % 5, sign * T.prod_coef.T % 5)
  nz = T.prod_coef % 5 != 0
  assert np.array_equal(T.prod_idx[nz], T.prod_idx.T[nz])
  for r, q in itertools.islice(itertools.product(s.indices, repeat=2), 0, None, 97):
    sg = -1 if s.parity(r) and s.parity(q) else 1
    assert multiply(mono(s, r), mono(s, q)) == multiply(mono(s, q), mono(s, r)).scale(sg)


def test_partial_examples():
  assert partial(1, x(S1, 2)) == 0
  assert partial(1, mono(S1, (2, 0, 0))) == x(S1, 1)
  for i in range(1, 4):
    assert partial(i, SuperElement.one(S1)) == 0
  with pytest.raises(ValueError):
    partial(4, x(S1, 1))


def _dense_leibniz(s, i):
  T = tables(s)
  N, k = s.size, i - 1
  a, b = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
  row = (a * N + b).ravel()

  def acc(out, coef, idx):
    np.add.at(out, (row, idx.ravel()), coef.ravel())

  lhs = np.zeros((N * N, N), dtype=np.int64)
  c, ab = _prod(T, a, b)
  acc(lhs, c * T.d_sign[k, ab], T.d_idx[k, ab])
  rhs = np.zeros_like(lhs)
  da, db = T.d_idx[k, a], T.d_idx[k, b]
  c1, i1 = _prod(T, da, b)
  acc(rhs, T.d_sign[k, a] * c1, i1)
  par = np.array([s.parity(r) for r in s.indices])
  sign = np.where(s.var_parity(i) & par[a] == 1, -1, 1)
  c2, i2 = _prod(T, a, db)
  acc(rhs, sign * T.d_sign[k, b] * c2, i2)
  return lhs % 5, rhs % 5


@pytest.mark.parametrize("s", [S1, S2])
def test_leibniz_exhaustive(s):
  for i in range(1, s.nvars + 1):
    lhs, rhs = _dense_leibniz(s, i)
    assert np.array_equal(lhs, rhs)
  for i in range(1, S1.nvars + 1):
    di = S1.var_parity(i)
    for r in S1.indices:
      for q in S1.indices:
        f, g = mono(S1, r), mono(S1, q)
        sign = -1 if di and S1.parity(r) else 1
        rhs = multiply(partial(i, f), g) + multiply(f, partial(i, g)).scale(sign)
        assert partial(i, multiply(f, g)) == rhs


def test_apply_examples():
  d1 = VectorField.partial_field(S1, 1)
  assert vf_apply(d1, x(S1, 1)) == SuperElement.one(S1)
  assert vf_apply(VectorField(S1), x(S1, 2)) == 0
  e = VectorField(S1, {1: x(S1, 1)})
  assert vf_apply(e, mono(S1, (2, 0, 0))) == mono(S1, (2, 0, 0), 2)


def test_bracket_examples():
  d = lambda k: VectorField.partial_field(S1, k)
  assert vf_bracket(d(1), d(2)) == 0
  assert vf_bracket(d(3), d(3)) == 0
  assert vf_bracket(VectorField(S1, {1: x(S1, 1)}), d(1)) == d(1).scale(-1)


def _random_field(s, rng, parity):
  comps = {}
  for k in range(1, s.nvars + 1):
    want = (parity + s.var_parity(k)) % 2
    cands = [r for r in s.indices if s.parity(r) == want]
    picks = rng.choice(len(cands), size=2, replace=False)
    comps[k] = SuperElement(s, {cands[j]: int(rng.integers(1, s.p)) for j in picks})
  return VectorField(s, comps)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 1), st.integers(0, 1))
def test_bracket_is_operator_commutator(seed, p1, p2):
  rng = np.random.default_rng(seed)
  D1, D2 = _random_field(S1, rng, p1), _random_field(S1, rng, p2)
  B = vf_bracket(D1, D2)
  sign = -1 if p1 and p2 else 1
  for r in S1.indices:
    f = mono(S1, r)
    assert B(f) == D1(D2(f)) - D2(D1(f)).scale(sign)


def test_p_power_examples():
  assert p_power(VectorField.partial_field(S1, 1)) == 0
  e = VectorField(S1, {1: x(S1, 1)})
  assert p_power(e) == e
  assert p_power(VectorField(S1)) == 0
  with pytest.raises(ValueError):
    p_power(VectorField.partial_field(S1, 2))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_p_power_is_operator_power(seed):
  rng = np.random.default_rng(seed)
  D = _random_field(S1, rng, 0)
  P = p_power(D)
  for r in S1.indices:
    f = mono(S1, r)
    g = f
    for _ in range(5):
      g = D(g)
    assert P(f) == g
