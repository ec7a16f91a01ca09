import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_odd.chars import (Exhausted, Found, build_example_nonsingular,
                              build_example_singular, char_matrix, delta_max,
                              functional_on_degree_zero, h_elements, is_delta_invertible,
                              is_nonsingular, is_regular_semisimple, negative_generators,
                              rank_chi, regular_semisimple_example, search_char,
                              validate_delta_witness)
from cartan_odd.contact import triangular_split
from cartan_odd.linalg import Subspace, mm
from cartan_odd.lsa import GradingAut, coadjoint_apply
from cartan_odd.repn.modules import PChar, height

from conftest import algebra


def rescaled(g, seed):
  """g in a graded basis with each vector scaled, and χ carried along."""
  rng = np.random.default_rng(seed)
  s = rng.integers(1, g.p, size=g.dim)
  h = g.with_basis(np.diag(s))
  h.meta = {**g.meta, **h.meta}
  return h, s


def random_chi(g, rng, hmin=2):
  """Random p-character with ht ≥ hmin, supported on even elements of degree ≥ hmin−1."""
  E = [i for i in range(g.dim) if g.parity[i] == 0 and g.degree[i] >= hmin - 1]
  while True:
    v = np.zeros(g.dim, dtype=np.int64)
    v[E] = rng.integers(0, g.p, size=len(E)) * (rng.random(len(E)) < 0.4)
    if v.any():
      return PChar(g, v)


# characteristic matrix

def test_char_matrix_shape(m15):
  chi = build_example_nonsingular(m15, 2)
  cm = char_matrix(m15, chi)
  assert cm.h == 2
  assert cm.A1.shape == (len(m15.piece(2)), 2) and cm.A2.shape == (len(m15.piece(3)), 1)


def test_char_matrix_needs_next_piece(m15):
  top = [i for i in m15.piece(4) if m15.parity[i] == 0]
  chi = PChar.from_dict(m15, {top[0]: 1})
  assert height(m15, chi) == 5
  with pytest.raises(ValueError):
    char_matrix(m15, chi)  # g_[6] is empty


@pytest.mark.parametrize("kind,n,p", [("m", 1, 5), ("m", 1, 7), ("m", 2, 5)])
def test_char_matrix_never_zero(kind, n, p):
  # transitivity: χ ≠ 0 on g_[h−1] pairs nontrivially with [g_[h], g_-] + [g_[h+1], g_-]
  g = algebra(kind, n, p)
  for i in range(g.dim):
    if g.parity[i] == 0 and g.degree[i] >= 1 and g.piece(g.degree[i] + 2):
      assert rank_chi(g, PChar.from_dict(g, {i: 1})) >= 1


def test_height_precondition(m15):
  with pytest.raises(ValueError):
    char_matrix(m15, PChar.zero(m15))
  with pytest.raises(ValueError):
    is_nonsingular(m15, PChar.zero(m15))


# examples

def test_nonsingular_example_m15(m15):
  chi = build_example_nonsingular(m15, 2)
  assert height(m15, chi) == 2 and rank_chi(m15, chi) == 3 and is_nonsingular(m15, chi)


def test_nonsingular_example_triangular_minor(m15):
  chi = build_example_nonsingular(m15, 2)
  cm = char_matrix(m15, chi)
  full = np.zeros((cm.A1.shape[0] + cm.A2.shape[0], 3), dtype=np.int64)
  full[:cm.A1.shape[0], :2] = cm.A1
  full[cm.A1.shape[0]:, 2:] = cm.A2
  # some choice of rows gives a triangular minor with nonzero diagonal
  rows = [int(np.nonzero(full[:, b])[0][0]) for b in range(3)]
  minor = full[rows]
  assert all(minor[b, b] for b in range(3))


@pytest.mark.parametrize("h", [2, 3, 4])
def test_nonsingular_example_m17(h):
  g = algebra("m", 1, 7)
  chi = build_example_nonsingular(g, h)
  assert height(g, chi) == h and is_nonsingular(g, chi)


def test_nonsingular_example_m25(m25):
  assert is_nonsingular(m25, build_example_nonsingular(m25, 2))


def test_nonsingular_example_bound(m15):
  with pytest.raises(ValueError):
    build_example_nonsingular(m15, 3)  # h ≥ p−2
  with pytest.raises(ValueError):
    build_example_nonsingular(m15, 1)


def test_singular_example_m25(m25):
  chi = build_example_singular(m25)
  n = m25.meta["n"]
  assert height(m25, chi) == m25.p - 2
  assert not is_nonsingular(m25, chi)
  assert not char_matrix(m25, chi).A1[:, n - 1].any()
  assert chi.reading == "r_2n = 1 and r_n = 0"
  assert len(chi.tried) == 3


def test_singular_example_vanishes_below(m25):
  chi = build_example_singular(m25)
  h = m25.p - 2
  for d in range(2, h - 1):
    assert not chi.values[m25.piece(d)].any()
  assert not chi.values[[i for i in range(m25.dim) if m25.degree[i] >= h]].any()


# invariance

@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10 ** 6), c=st.integers(1, 4))
def test_rank_and_height_invariant_under_grading_auts(seed, c):
  g = algebra("m", 1, 5)
  chi = random_chi(g, np.random.default_rng(seed))
  phi = GradingAut(c, 5)
  tchi = coadjoint_apply(phi, chi)
  assert height(g, tchi) == height(g, chi)
  h = height(g, chi)
  if g.piece(h) and g.piece(h + 1):
    assert rank_chi(g, tchi) == rank_chi(g, chi)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_rank_invariant_under_rescaled_basis(seed):
  g = algebra("m", 1, 5)
  chi = random_chi(g, np.random.default_rng(seed))
  h = height(g, chi)
  if not (g.piece(h) and g.piece(h + 1)):
    return
  g2, s = rescaled(g, seed)
  chi2 = PChar(g2, chi.values * s % 5)
  assert height(g2, chi2) == h
  assert rank_chi(g2, chi2) == rank_chi(g, chi)


# Δ-invertibility

def test_delta_no_for_nonsingular():
  g = algebra("m", 1, 7)
  chi = build_example_nonsingular(g, 4)
  assert is_delta_invertible(g, chi).verdict == "no"


def test_delta_no_for_low_height(m15):
  res = is_delta_invertible(m15, build_example_nonsingular(m15, 2))
  assert res.verdict == "no" and "ht" in res.log[-1]["reason"]


def test_delta_witness_m17():
  g = algebra("m", 1, 7)
  res = search_char(g, "delta-invertible", seed=0, budget=200)
  assert isinstance(res, Found)
  chi = res.chi
  assert height(g, chi) >= 5
  dr = is_delta_invertible(g, chi)
  assert dr.verdict == "yes" and validate_delta_witness(g, chi, dr.witness)


def test_delta_witness_tampering_detected():
  g = algebra("m", 1, 7)
  chi = search_char(g, "delta-invertible", seed=0, budget=200).chi
  w = is_delta_invertible(g, chi).witness
  bad = dict(w, I=w["J"], J=w["I"])
  assert not validate_delta_witness(g, chi, bad)
  bad = dict(w, e=[[0] * g.dim])
  assert not validate_delta_witness(g, chi, bad)


def test_delta_max_is_stable_and_chi_trivial():
  g = algebra("m", 1, 7)
  chi = search_char(g, "delta-invertible", seed=0, budget=200).chi
  h = height(g, chi)
  D = delta_max(g, chi.values, h - 1)
  assert not mm(D, chi.values[:, None], 7).any()
  S = Subspace(g.dim, 7, D)
  for x in g.piece(0):
    for v in D:
      assert S.contains(g.bracket(g.basis_vector(x), v))


def test_delta_mode_validation(m15):
  with pytest.raises(ValueError):
    is_delta_invertible(m15, PChar.zero(m15), mode="all")


# regular semisimple

def test_rss_example_m25(m25):
  chi = regular_semisimple_example(m25)
  assert height(m25, chi) == 1 and is_regular_semisimple(m25, chi)
  assert int(np.dot(h_elements(m25)[0], chi.values) % 5) == 1


def test_rss_false_when_h1_vanishes(m25):
  lo, H, _ = triangular_split(m25)
  h1 = h_elements(m25)[0]
  killers = []
  for k in range(H.shape[0]):
    chi = functional_on_degree_zero(m25, {lo.shape[0] + k: 1})
    if int(np.dot(h1, chi.values) % 5) == 0:
      killers.append(k)
      assert not is_regular_semisimple(m25, chi)
  assert killers
  chi = functional_on_degree_zero(m25, {0: 1, lo.shape[0]: 1})  # touches n^-
  assert not is_regular_semisimple(m25, chi)


@pytest.mark.parametrize("kappa", [0, 1])
def test_rss_example_sm25(kappa):
  g = algebra("sm", 2, 5, kappa)
  assert is_regular_semisimple(g, regular_semisimple_example(g))


def test_rss_n1_warns(m15):
  with pytest.warns(UserWarning):
    assert is_regular_semisimple(m15, regular_semisimple_example(m15))


def test_rss_height_precondition(m15):
  with pytest.raises(ValueError):
    is_regular_semisimple(m15, build_example_nonsingular(m15, 2))


# search

def test_search_budget_zero(m15):
  assert isinstance(search_char(m15, "nonsingular", budget=0), Exhausted)


def test_search_found_is_validated(m15, m25):
  res = search_char(m15, "nonsingular", seed=3)
  assert isinstance(res, Found) and is_nonsingular(m15, res.chi)
  res = search_char(m25, "regular-semisimple")
  assert isinstance(res, Found)
  with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    assert is_regular_semisimple(m25, res.chi)


@pytest.mark.parametrize("kappa", [0, 1, 2])
def test_search_sm1_exhausts(kappa):
  # every nonsingular candidate needs h = 2 and g_[1] has one even element
  g = algebra("sm", 1, 5, kappa)
  res = search_char(g, "nonsingular", budget=300)
  assert isinstance(res, Exhausted) and res.log[-1]["evaluations"] == 300


def test_search_is_deterministic(m15):
  a = search_char(m15, "nonsingular", seed=5, budget=50)
  b = search_char(m15, "nonsingular", seed=5, budget=50)
  assert a.log == b.log and np.array_equal(a.chi.values, b.chi.values)


def test_search_unknown_target(m15):
  with pytest.raises(ValueError):
    search_char(m15, "bogus")


def test_negative_generators(m15):
  xs, one = negative_generators(m15)
  assert [int(m15.degree[i]) for i in xs] == [-1, -1] and m15.degree[one] == -2
