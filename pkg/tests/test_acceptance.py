"""Acceptance suite: one test per criterion, each recording a pass/fail line.

The lines are printed in the "acceptance criteria" section at the end of
the pytest run.
"""

import itertools
import json
import time

import numpy as np
import pytest

from cartan_odd import suites
from cartan_odd.chars import rank_chi
from cartan_odd.cli import execute
from cartan_odd.lsa import GradingAut, coadjoint_apply
from cartan_odd.repn.modules import PChar, height

from conftest import algebra, record


def timed(fn, *args, **kw):
  t = time.perf_counter()
  out = fn(*args, **kw)
  return out, time.perf_counter() - t


def checks_named(rep, name):
  return [c for c in rep["checks"] if c["check"] == name]


@pytest.fixture(scope="module")
def nonsingular_m15():
  return timed(suites.theorem_nonsingular, algebra("m", 1, 5), 0)


@pytest.fixture(scope="module")
def rss_reports():
  out = {}
  for kind, kappa in (("m", None), ("sm", 0), ("sm", 1)):
    out[(kind, kappa)] = timed(suites.theorem_regular_semisimple, algebra(kind, 2, 5, kappa), 0)
  return out


# 1. golden tables

def test_criterion_1_golden_m15():
  rep, dt = timed(suites.golden15, "m")
  ok = rep["status"] == "pass" and rep["checks"][0]["total"] == 20 and dt < 1
  record("1 m(1,5)", "pass" if ok else "fail", f"dims {rep['checks'][0]['got']} in {dt:.2f}s")
  assert ok


@pytest.mark.parametrize("kappa", [0, 2])
def test_criterion_1_golden_sm15(kappa):
  rep, dt = timed(suites.golden15, "sm", kappa)
  ok = rep["status"] == "pass" and rep["checks"][0]["total"] == 10 and dt < 1
  record(f"1 sm(1,{kappa},5)", "pass" if ok else "fail",
         f"dims {rep['checks'][0]['got']} in {dt:.2f}s")
  assert ok


@pytest.mark.xfail(strict=True, reason="ker div_1 has an extra degree-1 element at (1,5)")
def test_criterion_1_golden_sm15_kappa1():
  rep, dt = timed(suites.golden15, "sm", 1)
  got = rep["checks"][0]["got"]
  ok = rep["status"] == "pass"
  record("1 sm(1,1,5)", "pass" if ok else "fail (expected)",
         f"dims {got}, total {rep['checks'][0]['total']}; listed elements "
         f"{rep['checks'][1]['status']}")
  assert ok


# 2. homomorphism law

def test_criterion_2_homomorphism():
  out = []
  total = 0.0
  for n in (1, 2):
    rep, dt = timed(suites.homomorphism, n, 5)
    total += dt
    out.append(rep["status"] == "pass")
  ok = all(out) and total < 10
  record(2, "pass" if ok else "fail", f"(1,5) and (2,5) exhaustive in {total:.1f}s")
  assert ok


# 3. axioms

GRID = [(1, 5), (1, 7), (2, 5)]


def test_criterion_3_axioms():
  bad = []
  t = time.perf_counter()
  for (n, p), (kind, kappa) in itertools.product(GRID, [("m", None), ("sm", 0), ("sm", 1)]):
    g = algebra(kind, n, p, kappa)
    for rep in (suites.jacobi(g), suites.restricted(g)):
      if rep["status"] != "pass":
        bad.append((g.name, rep["suite"]))
  dt = time.perf_counter() - t
  ok = not bad and dt < 60
  record(3, "pass" if ok else "fail", f"9 algebras, jacobi+restricted in {dt:.1f}s {bad or ''}")
  assert ok


# 4. divergence closure

def test_criterion_4_divergence_closure():
  bad = [(n, p, k) for (n, p), k in itertools.product(GRID, (0, 1))
         if suites.divclosure(n, p, k)["status"] != "pass"]
  record(4, "fail" if bad else "pass", f"6 parameter sets {bad or ''}")
  assert not bad


# 5. simplicity

def test_criterion_5_simplicity():
  rep, dt = timed(suites.simplicity, algebra("m", 1, 5))
  ok = rep["status"] == "pass" and dt < 5
  record(5, "pass" if ok else "fail", f"20 ideal closures in {dt:.2f}s")
  assert ok


# 6. Kac dimension law

def test_criterion_6_kac_dimension_law(nonsingular_m15, rss_reports):
  reps = [nonsingular_m15[0]] + [r for r, _ in rss_reports.values()]
  law = [c for rep in reps for c in checks_named(rep, "Kac dimension law")]
  ok = law and all(c["status"] == "pass" for c in law)
  record(6, "pass" if ok else "fail", f"{len(law)} constructed Kac modules")
  assert ok


# 7. nonsingular characters

def test_criterion_7_m15(nonsingular_m15):
  rep, dt = nonsingular_m15
  simple = checks_named(rep, "K simple")
  socle = checks_named(rep, "unique socle")
  ok = (rep["status"] == "pass" and simple and len(simple) == len(socle)
        and all(c["verdict"] == "irreducible" for c in simple) and dt < 300)
  chi = checks_named(rep, "search")[0]["chi"]
  record("7 m(1,5)", "pass" if ok else "fail",
         f"χ={chi}, {len(simple)} heads: K irreducible, unique socle (64 vectors) in {dt:.0f}s")
  assert ok


def _max_rank_sm(g):
  """Exhaustive: largest rank over every χ with ht ≥ 2 (rank only sees χ on g_[h−1])."""
  best = 0
  for h in range(2, max(g.degrees())):
    if not g.piece(h) or not g.piece(h + 1):
      continue
    E = [i for i in g.piece(h - 1) if g.parity[i] == 0]
    for vals in itertools.product(range(g.p), repeat=len(E)):
      if any(vals):
        v = np.zeros(g.dim, dtype=np.int64)
        v[E] = vals
        best = max(best, rank_chi(g, v))
  return best


@pytest.mark.parametrize("kappa", [0, 1, 2])
def test_criterion_7_sm15(kappa):
  g = algebra("sm", 1, 5, kappa)
  rep, dt = timed(suites.theorem_nonsingular, g, 0)
  s = checks_named(rep, "search")[0]
  code = suites.exit_status(rep)
  # independent oracle: no χ reaches rank 2n+1 = 3
  top = _max_rank_sm(g)
  ok = s["verdict"] == "exhausted" and code == 2 and s["log"][-1]["exhausted"] and top < 3
  record(f"7 sm(1,{kappa},5)", "pass" if ok else "fail",
         f"Exhausted after {s['log'][-1]['evaluations']} evaluations (exit {code}); "
         f"largest rank over all χ is {top} < 3")
  assert ok


# 8. regular semisimple characters

def test_criterion_8(rss_reports):
  lines, ok = [], True
  total = 0.0
  for (kind, kappa), (rep, dt) in rss_reports.items():
    total += dt
    simple = checks_named(rep, "K simple")
    heads = checks_named(rep, "head sweep")[0]["heads"]
    good = rep["status"] == "pass" and len(simple) == heads > 0
    ok &= good
    name = "m(2,5)" if kind == "m" else f"sm(2,{kappa},5)"
    lines.append(f"{name}: {heads} heads {'certified' if good else 'NOT certified'}")
  ok &= total < 900
  record(8, "pass" if ok else "fail", "; ".join(lines) + f" in {total:.0f}s")
  assert ok


# 9. Δ-invertible characters

@pytest.fixture(scope="module")
def delta_m17():
  return suites.theorem_delta(algebra("m", 1, 7), 0)


def test_criterion_9_reports_exit_2(delta_m17):
  rep = delta_m17
  code = suites.exit_status(rep)
  s = checks_named(rep, "search")[0]
  w = checks_named(rep, "witness revalidated")[0]
  mods = checks_named(rep, "modules")[0]
  ok = (s["verdict"] == "found" and w["status"] == "pass" and code == 2
        and mods["status"] == "inconclusive" and len(s["log"]) >= 2)
  record("9", "inconclusive (exit 2)" if ok else "fail",
         f"witness χ={s['chi']} ht {s['height']} revalidated; M induced from "
         f"{mods['induced_from']} has dim {mods['dim_M']}, K {mods['dim_K']} > cap {mods['cap']}")
  assert ok


@pytest.mark.xfail(strict=True, reason="simple u_χ(g^0)-modules for the witness exceed desk scale")
def test_criterion_9_simplicity_suites(delta_m17):
  assert delta_m17["status"] == "pass"


# 10. invariance under grading automorphisms

def test_criterion_10_invariance():
  g = algebra("m", 1, 5)
  rng = np.random.default_rng(0)
  E = [i for i in range(g.dim) if g.parity[i] == 0 and 1 <= g.degree[i] <= 3]
  bad, done = [], 0
  while done < 100:
    v = np.zeros(g.dim, dtype=np.int64)
    v[E] = rng.integers(0, 5, size=len(E))
    if height(g, v) < 2:
      continue
    chi = PChar(g, v)
    h, r = height(g, chi), rank_chi(g, chi)
    for c in range(1, 5):
      t = coadjoint_apply(GradingAut(c, 5), chi)
      if height(g, t) != h or rank_chi(g, t) != r:
        bad.append((done, c))
    done += 1
  record(10, "fail" if bad else "pass", "100 seeded χ with ht ≥ 2, c ∈ F_5^×")
  assert not bad


# 11. determinism

DETERMINISM = [
  ["verify", "golden15"],
  ["char", "search", "--seed", "4", "--budget", "60"],
  ["char", "examples", "--n", "2"],
  ["kac", "irreducible", "--seed", "3"],
  ["theorem", "delta-invertible", "--p", "7", "--seed", "1"],
  ["theorem", "regular-semisimple", "--algebra", "sm", "--n", "2", "--kappa", "0"],
]


def test_criterion_11_determinism():
  bad = []
  for argv in DETERMINISM:
    a, b = execute(argv)[2], execute(argv)[2]
    json.loads(a)
    if a != b:
      bad.append(" ".join(argv))
  record(11, "fail" if bad else "pass", f"{len(DETERMINISM)} suites repeated byte-identically")
  assert not bad
