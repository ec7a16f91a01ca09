"""Verification and theorem suites producing JSON-ready reports.

A report is a dict with the suite name, its parameters, one entry per check
and an overall status: "fail" if any check fails, else "inconclusive" if
any check is inconclusive, else "pass".  Reports hold no timings, so equal
inputs and seeds give byte-identical JSON.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .chars import (Found, build_example_nonsingular, build_example_singular, char_matrix,
                    is_delta_invertible, is_nonsingular, is_regular_semisimple,
                    rank_chi, regular_semisimple_example, search_char,
                    validate_delta_witness)
from .contact import (build, contains, element, golden_n1p5, verify_div_closure,
                      verify_homomorphism)
from .linalg import rank
from .lsa import LSA, derived_subalgebra, ideal_closure, verify_jacobi, verify_restricted
from .repn.certify import graded_socle_certificate, unique_socle_check
from .repn.induction import (InducedModule, baby_verma, borel_weights, induced_from_top,
                             kac_dimension, kac_module)
from .repn.meataxe import (Inconclusive, Irreducible, MeatAxeInconclusive,
                           composition_factors, is_isomorphic_simple, meataxe_irreducible,
                           simple_head)
from .repn.modules import (GModule, PChar, extend_trivially, height, nonnegative_part,
                           verify_module)

GOLDEN_M = (1, 2, 3, 4, 4, 3, 2, 1)
GOLDEN_SM = (1, 2, 2, 2, 2, 1)
MODULE_CAP = 20000  # largest Kac module the theorem suites construct


def workers() -> int:
  try:
    return max(1, int(os.environ.get("CARTAN_ODD_THREADS", "1")))
  except ValueError:
    return 1


def pmap(fn, items):
  """Ordered map over independent checks, threaded when CARTAN_ODD_THREADS > 1."""
  items = list(items)
  k = workers()
  if k == 1 or len(items) < 2:
    return [fn(x) for x in items]
  with ThreadPoolExecutor(max_workers=k) as ex:
    return list(ex.map(fn, items))


def check(name: str, status: str, **data) -> dict:
  return {"check": name, "status": status, **data}


def report(suite: str, params: dict, checks: list) -> dict:
  sts = {c["status"] for c in checks}
  status = "fail" if "fail" in sts else "inconclusive" if "inconclusive" in sts else "pass"
  return {"suite": suite, "params": params, "status": status, "checks": checks,
          "version": __version__}


def exit_status(rep: dict) -> int:
  return {"pass": 0, "fail": 1, "inconclusive": 2}[rep["status"]]


def from_report(r) -> dict:
  d = r.to_dict()
  return check(d.pop("check"), d.pop("status"), **d)


def chi_dict(chi) -> dict:
  v = chi.values if isinstance(chi, PChar) else np.asarray(chi)
  return {str(int(i)): int(v[i]) for i in np.nonzero(v)[0]}


def algebra_params(g: LSA) -> dict:
  m = g.meta
  return {"algebra": m["kind"], "n": m["n"], "p": m["p"], "kappa": m["kappa"]}


def graded_dims(g: LSA) -> list[int]:
  d = g.graded_dims()
  return [int(d[k]) for k in sorted(d)]


# structure suites

def golden15(kind: str, kappa: int | None = None) -> dict:
  """Graded dimensions and the listed elements of m(1,5) or sm(1,κ,5)."""
  g = build(kind, 1, 5, kappa)
  want = GOLDEN_M if kind == "m" else GOLDEN_SM
  got = graded_dims(g)
  checks = [check("graded dims", "pass" if tuple(got) == want else "fail",
                  expected=list(want), got=got, degrees=[int(d) for d in sorted(g.graded_dims())],
                  total=g.dim)]
  table = golden_n1p5(0 if kappa is None else kappa)[0 if kind == "m" else 1]
  missing = []
  for deg, elems in sorted(table.items()):
    for terms in elems:
      label = {",".join(map(str, r)): int(c) for r, c in terms.items()}
      if not contains(g, terms):
        missing.append({"degree": deg, "element": label, "reason": "not in span"})
      elif _degree_of(g, terms) != deg:
        missing.append({"degree": deg, "element": label, "reason": "wrong degree"})
  checks.append(check("listed elements", "fail" if missing else "pass",
                      listed=sum(len(e) for e in table.values()), missing=missing))
  return report("golden15", {"algebra": kind, "n": 1, "p": 5, "kappa": kappa}, checks)


def _degree_of(g: LSA, terms) -> int | None:
  v = element(g, terms)
  ds = set(g.degree[np.nonzero(v)[0]].tolist())
  return ds.pop() if len(ds) == 1 else None


def dims(g: LSA) -> dict:
  d = g.graded_dims()
  return report("dims", algebra_params(g),
                [check("graded dims", "pass", degrees=[int(k) for k in sorted(d)],
                       dims=graded_dims(g), total=g.dim)])


def jacobi(g: LSA) -> dict:
  return report("jacobi", algebra_params(g), [from_report(verify_jacobi(g))])


def restricted(g: LSA) -> dict:
  return report("restricted", algebra_params(g), [from_report(verify_restricted(g))])


def homomorphism(n: int, p: int) -> dict:
  return report("homomorphism", {"n": n, "p": p}, [from_report(verify_homomorphism(n, p))])


def divclosure(n: int, p: int, kappa: int) -> dict:
  return report("divclosure", {"n": n, "p": p, "kappa": kappa},
                [from_report(verify_div_closure(n, p, kappa))])


def simplicity(g: LSA, long: bool = False, seed: int = 0) -> dict:
  """ideal_closure of every basis vector is g; with `long`, the sm(3,κ,5)^(2) probe."""
  short = [i for i in range(g.dim) if ideal_closure(g, g.basis_vector(i)).dim < g.dim]
  checks = [check("ideal closure of basis vectors", "fail" if short else "pass",
                  checked=g.dim, proper=short)]
  if long:
    checks.append(_long_probe(g.meta["kappa"] or 0, seed))
  return report("simplicity", {**algebra_params(g), "long": long, "seed": seed}, checks)


def _long_probe(kappa: int, seed: int, n: int = 3, p: int = 5, samples: int = 4) -> dict:
  """Ideal closures of random elements of sm(n,κ,p)^(2); skipped above the memory cap."""
  N = p ** n * 2 ** (n + 1)
  need = 8 * N ** 3
  if need > 2 ** 31:
    return check("sm(3,κ,5)^(2) probe", "inconclusive", n=n, p=p, kappa=kappa, seed=seed,
                 reason=f"dense structure tensor needs {need} bytes")
  g = build("sm", n, p, kappa)
  D = derived_subalgebra(g, 2)
  h = g.with_basis(D.basis)
  rng = np.random.default_rng(seed)
  proper = []
  for k in range(samples):
    v = rng.integers(0, p, size=h.dim)
    if v.any() and ideal_closure(h, v).dim < h.dim:
      proper.append(k)
  return check("sm(3,κ,5)^(2) probe", "fail" if proper else "pass", dim=h.dim,
               samples=samples, proper=proper, seed=seed)


# characters

def classify(g: LSA, chi: PChar) -> dict:
  h = height(g, chi)
  out = {"chi": chi_dict(chi), "height": h}
  if h >= 2:
    try:
      cm = char_matrix(g, chi)
      out.update({"rank": cm.rank, "nonsingular": cm.rank == 2 * g.meta["n"] + 1,
                  "matrix": cm.to_dict()})
      out["delta_invertible"] = is_delta_invertible(g, chi).verdict
    except ValueError as e:
      out["rank_error"] = str(e)
  if h == 1:
    with warnings.catch_warnings(record=True) as w:
      warnings.simplefilter("always")
      out["regular_semisimple"] = is_regular_semisimple(g, chi)
    out["warnings"] = [str(x.message) for x in w]
  return report("classify", algebra_params(g), [check("classification", "pass", **out)])


def search(g: LSA, target: str, seed: int, budget: int) -> dict:
  res = search_char(g, target, seed, budget)
  if isinstance(res, Found):
    c = check("search", "pass", verdict="found", chi=chi_dict(res.chi), log=_jsonable(res.log))
  else:
    c = check("search", "inconclusive", verdict="exhausted", log=_jsonable(res.log))
  return report("search", {**algebra_params(g), "target": target, "seed": seed,
                           "budget": budget}, [c])


def examples(g: LSA) -> dict:
  checks = []
  for h in range(2, g.p - 2):
    try:
      chi = build_example_nonsingular(g, h)
      checks.append(check(f"nonsingular h={h}", "pass", chi=chi_dict(chi),
                          height=height(g, chi), rank=rank_chi(g, chi)))
    except ValueError as e:
      checks.append(check(f"nonsingular h={h}", "pass", unrealizable=str(e)))
  try:
    chi = build_example_singular(g)
    checks.append(check("singular", "fail" if is_nonsingular(g, chi) else "pass",
                        chi=chi_dict(chi), height=height(g, chi), rank=rank_chi(g, chi),
                        reading=chi.reading, rejected=chi.tried))
  except ValueError as e:
    checks.append(check("singular", "pass", unrealizable=str(e)))
  chi = regular_semisimple_example(g)
  with warnings.catch_warnings(record=True) as w:
    warnings.simplefilter("always")
    ok = is_regular_semisimple(g, chi)
  checks.append(check("regular semisimple", "pass" if ok else "fail", chi=chi_dict(chi),
                      height=height(g, chi), warnings=[str(x.message) for x in w]))
  return report("examples", algebra_params(g), checks)


def _jsonable(x):
  if isinstance(x, dict):
    return {str(k): _jsonable(v) for k, v in x.items()}
  if isinstance(x, (list, tuple)):
    return [_jsonable(v) for v in x]
  if isinstance(x, np.ndarray):
    return _jsonable(x.tolist())
  if isinstance(x, np.integer):
    return int(x)
  return x


# simple modules over g^0

def heads_ht1(g: LSA, chi: PChar, seed: int = 0) -> list[GModule]:
  """Simple heads of the baby Vermas for every Borel weight, extended by g^1 ↦ 0."""
  def head(w):
    S = simple_head(baby_verma(g, chi, w), seed)
    M = extend_trivially(S, g, chi)
    M.certificate = S.certificate
    M.weight = w
    return M
  return pmap(head, borel_weights(g, chi))


def heads_ht2(g: LSA, chi: PChar, seed: int = 0) -> list[GModule]:
  """Pairwise non-isomorphic composition factors of u_χ(g^0) ⊗_{u_χ(g^1)} F_χ."""
  out = []
  for S in composition_factors(induced_from_top(g, chi), seed):
    if not any(is_isomorphic_simple(S, T, seed) for T in out):
      out.append(S)
  return out


def _module_checks(g: LSA, chi: PChar, M: GModule, seed: int, socle: bool) -> list[dict]:
  tag = {"head_dim": M.dim, "head": M.name}
  checks = []
  vm = verify_module(M, chi.restrict(M.algebra))
  checks.append(check("head is a u_χ(g^0)-module", "pass" if vm.ok else "fail", **tag,
                      violations=vm.violations[:5]))
  K = kac_module(g, chi, M)
  law = kac_dimension(g, M.dim)
  checks.append(check("Kac dimension law", "pass" if K.dim == law else "fail", **tag,
                      dim=K.dim, expected=law))
  if K.dim > MODULE_CAP:
    checks.append(check("K simple", "inconclusive", **tag, reason="above module cap"))
    return checks
  if K.storable:
    res = meataxe_irreducible(K, seed)
    checks.append(check("K simple", _verdict_status(res), **tag, method="meataxe",
                        verdict=res.verdict, certificate=_jsonable(_cert(res))))
  else:
    cert = graded_socle_certificate(K, seed)
    checks.append(check("K simple", cert["status"], **tag, method="graded socle",
                        certificate=_jsonable(cert)))
  if socle:
    us = unique_socle_check(K, 64, seed)
    checks.append(check("unique socle", "pass" if us.ok else "fail", **tag,
                        vectors=us.checked, violations=us.violations))
  return checks


def _cert(res) -> dict:
  if isinstance(res, Irreducible) or isinstance(res, Inconclusive):
    return res.certificate
  return {**res.certificate, "submodule_dim": res.submodule.dim}


def _verdict_status(res) -> str:
  return {"irreducible": "pass", "reducible": "fail", "inconclusive": "inconclusive"}[res.verdict]


def _kac_for(g, chi, M, seed, socle):
  try:
    return _module_checks(g, chi, M, seed, socle)
  except MeatAxeInconclusive as e:
    return [check("K simple", "inconclusive", head_dim=M.dim, reason=str(e))]


# theorem suites

def theorem_nonsingular(g: LSA, seed: int = 0, budget: int = 1000, socle: bool = True) -> dict:
  """Search a nonsingular χ, then certify K_χ(M) for every simple head M."""
  params = {**algebra_params(g), "seed": seed, "budget": budget}
  res = search_char(g, "nonsingular", seed, budget)
  if not isinstance(res, Found):
    return report("theorem nonsingular", params,
                  [check("search", "inconclusive", verdict="exhausted", log=_jsonable(res.log))])
  chi = res.chi
  checks = [check("search", "pass", verdict="found", chi=chi_dict(chi), height=height(g, chi),
                  rank=rank_chi(g, chi), log=_jsonable(res.log))]
  checks += _sweep(g, chi, seed, socle)
  return report("theorem nonsingular", params, checks)


def _sweep(g, chi, seed, socle) -> list[dict]:
  h = height(g, chi)
  try:
    heads = heads_ht1(g, chi, seed) if h <= 1 else heads_ht2(g, chi, seed)
  except MeatAxeInconclusive as e:
    return [check("head sweep", "inconclusive", reason=str(e))]
  except ValueError as e:
    return [check("head sweep", "inconclusive", reason=str(e))]
  out = [check("head sweep", "pass", heads=len(heads), dims=[M.dim for M in heads])]
  for cs in pmap(lambda M: _kac_for(g, chi, M, seed, socle), heads):
    out += cs
  return out


def theorem_regular_semisimple(g: LSA, seed: int = 0) -> dict:
  """The Cartan-supported χ, then the graded certificate for every λ-sweep head."""
  chi = regular_semisimple_example(g)
  with warnings.catch_warnings(record=True) as w:
    warnings.simplefilter("always")
    ok = is_regular_semisimple(g, chi)
  checks = [check("regular semisimple", "pass" if ok else "fail", chi=chi_dict(chi),
                  height=height(g, chi), warnings=[str(x.message) for x in w])]
  checks += _sweep(g, chi, seed, socle=False)
  return report("theorem regular-semisimple", {**algebra_params(g), "seed": seed}, checks)


def theorem_socle(g: LSA, seed: int = 0, budget: int = 1000) -> dict:
  rep = theorem_nonsingular(g, seed, budget, socle=True)
  keep = [c for c in rep["checks"] if c["check"] in ("search", "head sweep", "unique socle")]
  return report("theorem socle", rep["params"], keep)


def theorem_delta(g: LSA, seed: int = 0, budget: int = 1000) -> dict:
  """Search a Δ-invertible χ, re-validate it, then try to build K_χ(M)."""
  params = {**algebra_params(g), "seed": seed, "budget": budget}
  res = search_char(g, "delta-invertible", seed, budget)
  if not isinstance(res, Found):
    return report("theorem delta-invertible", params,
                  [check("search", "inconclusive", verdict="exhausted",
                         log=_jsonable(res.log))])
  chi = res.chi
  dr = is_delta_invertible(g, chi)
  valid = dr.verdict == "yes" and validate_delta_witness(g, chi, dr.witness)
  checks = [check("search", "pass", verdict="found", chi=chi_dict(chi), height=height(g, chi),
                  rank=rank_chi(g, chi), log=_jsonable(res.log)),
            check("witness revalidated", "pass" if valid else "fail",
                  witness=_jsonable(dr.witness))]
  checks.append(module_feasibility(g, chi))
  return report("theorem delta-invertible", params, checks)


def module_feasibility(g: LSA, chi: PChar) -> dict:
  """Whether a simple u_χ(g^0)-module can be built at desk scale.

  The constructions available here need ht(χ) ≤ 2.  Above that, the
  smallest induction with a 1-dimensional start is from g^k with 2k ≥ ht(χ),
  where χ is a character; its dimension is reported against MODULE_CAP.
  The χ-form on g^0 and g^1 is reported too: its rank bounds how far a
  polarization can cut that dimension down.
  """
  p, h = g.p, height(g, chi)
  if h <= 2:
    return check("modules", "pass", height=h)
  k = (h + 1) // 2
  low = [i for i in range(g.dim) if 0 <= g.degree[i] < k]
  ev = sum(1 for i in low if g.parity[i] == 0)
  od = len(low) - ev
  forms = {}
  for name, lo in (("g^0", 0), ("g^1", 1)):
    idx = [i for i in range(g.dim) if g.degree[i] >= lo]
    B = (g.sc[np.ix_(idx, idx)] @ chi.values) % p
    e = [a for a, i in enumerate(idx) if g.parity[i] == 0]
    o = [a for a, i in enumerate(idx) if g.parity[i] == 1]
    forms[name] = {"even_rank": rank(B[np.ix_(e, e)], p), "odd_rank": rank(B[np.ix_(o, o)], p)}
  dim_m = p ** ev * 2 ** od
  dim_k = kac_dimension(g, dim_m)
  status = "pass" if dim_k <= MODULE_CAP else "inconclusive"
  return check("modules", status, height=h, induced_from=f"g^{k}", dim_M=dim_m, dim_K=dim_k,
               cap=MODULE_CAP, chi_form=forms,
               reason=None if status == "pass" else
               "no simple u_χ(g^0)-module within the module cap; K simplicity and socle "
               "suites not run")


# Kac modules on demand

def kac_build(g: LSA, chi: PChar, seed: int = 0) -> dict:
  h = height(g, chi)
  heads = heads_ht1(g, chi, seed) if h <= 1 else heads_ht2(g, chi, seed)
  checks = []
  for M in heads:
    K = kac_module(g, chi, M)
    law = kac_dimension(g, M.dim)
    checks.append(check("Kac module", "pass" if K.dim == law else "fail", head_dim=M.dim,
                        dim=K.dim, expected=law))
  return report("kac build", {**algebra_params(g), "chi": chi_dict(chi), "seed": seed}, checks)


def kac_irreducible(g: LSA, chi: PChar, seed: int = 0) -> dict:
  checks = [check("head sweep", "pass")]
  checks += _sweep(g, chi, seed, socle=False)
  return report("kac irreducible", {**algebra_params(g), "chi": chi_dict(chi), "seed": seed},
                checks)


def restriction_matches(K: InducedModule) -> bool:
  """The g^0-action on 1⊗M reproduces M."""
  g = K.algebra
  gp = nonnegative_part(g)
  sl = K.block_slice(K.engine.zero)
  d = K.inner.dim
  E = np.zeros((d, K.dim), dtype=np.int64)
  E[np.arange(d), np.arange(sl.start, sl.stop)] = 1
  for a, i in enumerate(gp.meta["indices"]):
    img = K.apply(i, E)
    if np.any(np.delete(img, np.arange(sl.start, sl.stop), axis=1)):
      return False
    if not np.array_equal(img[:, sl], K.inner.matrix(a).T % K.p):
      return False
  return True
