import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from cartan_odd.linalg import (Subspace, charpoly, inverse, mm, nullspace, rank,
                               rref, spin)


def matrices(p, max_rows=7, max_cols=7):
  return st.integers(1, max_rows).flatmap(
    lambda r: st.integers(1, max_cols).flatmap(
      lambda c: st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c).map(
        lambda xs: np.array(xs, dtype=np.int64).reshape(r, c))))


@given(matrices(5))
def test_rref_against_sympy_rank(a):
  ref = sp.Matrix(a.tolist())
  # sympy over GF(5) via the domain machinery
  dm = sp.polys.matrices.DomainMatrix.from_Matrix(ref).convert_to(sp.GF(5))
  assert rank(a, 5) == dm.rank()


@given(matrices(7))
def test_rref_is_canonical_and_transform_holds(a):
  r, piv, t = rref(a, 7, transform=True)
  assert np.array_equal(mm(t, a, 7), r)
  for i, c in enumerate(piv):
    col = r[:, c]
    assert col[i] == 1 and np.count_nonzero(col) == 1
  # same row space, same reduced form
  r2, _ = rref(np.vstack([a, a[::-1]]), 7)
  assert np.array_equal(r, r2)


@given(matrices(5))
def test_nullspace(a):
  ns = nullspace(a, 5)
  assert ns.shape[0] == a.shape[1] - rank(a, 5)
  assert not mm(a, ns.T, 5).any()


@settings(max_examples=40)
@given(matrices(7, 8, 8))
def test_charpoly_against_sympy(a):
  if a.shape[0] != a.shape[1]:
    a = a[:min(a.shape), :min(a.shape)]
  x = sp.symbols("x")
  ref = sp.Poly(sp.Matrix(a.tolist()).charpoly(x).as_expr(), x, modulus=7)
  assert charpoly(a, 7) == [int(c) % 7 for c in ref.all_coeffs()]


def test_inverse():
  a = np.array([[1, 2], [3, 4]])
  ai = inverse(a, 5)
  assert np.array_equal(mm(a, ai, 5), np.eye(2, dtype=np.int64))
  with pytest.raises(ZeroDivisionError):
    inverse(np.array([[1, 2], [2, 4]]), 5)


def test_subspace_operations():
  U = Subspace(4, 5, [[1, 1, 0, 0], [0, 0, 1, 0]])
  W = Subspace(4, 5, [[1, 1, 1, 0], [0, 0, 0, 1]])
  assert U.contains([2, 2, 3, 0])
  assert not U.contains([1, 0, 0, 0])
  assert U.intersection(W).dim == 1
  assert U.sum(W).dim == 3
  assert U.annihilator().dim == 2
  assert Subspace(4, 5, U.basis[::-1]) == U


def test_spin_cyclic_shift():
  shift = np.roll(np.eye(5, dtype=np.int64), 1, axis=0)
  assert spin([shift], [[1, 0, 0, 0, 0]], 7).dim == 5
  assert spin([shift], [[1, 1, 1, 1, 1]], 7).dim == 1
  assert spin([shift], [[0, 0, 0, 0, 0]], 7).dim == 0


def test_large_products_are_exact():
  rng = np.random.default_rng(0)
  a = rng.integers(0, 7, (3, 20000))
  b = rng.integers(0, 7, (20000, 2))
  assert np.array_equal(mm(a, b, 7), (a @ b) % 7)
