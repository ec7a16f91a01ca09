"""Randomized irreducibility testing of matrix modules (Norton's criterion).

A random element θ of the acting matrix algebra is drawn as a bounded word
in the generators. For an irreducible factor f of its characteristic
polynomial let N = ker f(θ). A proper submodule U has U ∩ N ≠ 0 or its
annihilator meets ker f(θ)ᵀ, so if some v ∈ N and some w ∈ ker f(θ)ᵀ both
spin to the whole space and dim N = deg f (every nonzero vector of N then
generates N over F_p[θ]), the module is irreducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (gf_edf_zassenhaus, gf_gcd, gf_pow_mod,
                                     gf_quo, gf_rem, gf_sqf_list, gf_sub)

from ..linalg import Subspace, as_fp, charpoly, inverse, mm, nullspace
from ..lsa import LSA, subalgebra_generated
from .modules import GModule, quotient, submodule

MAX_WORD = 12
MAX_ATTEMPTS = 200
MAX_FACTOR_DEGREE = 12
LINE_CAP = 64
PATIENCE = 40


@dataclass
class Irreducible:
  certificate: dict
  verdict: str = "irreducible"


@dataclass
class Reducible:
  submodule: Subspace
  certificate: dict = field(default_factory=dict)
  verdict: str = "reducible"


@dataclass
class Inconclusive:
  reason: str
  certificate: dict = field(default_factory=dict)
  verdict: str = "inconclusive"


class MeatAxeInconclusive(RuntimeError):
  pass


# generators of the acting algebra

@lru_cache(maxsize=None)
def _generating_indices(g: LSA) -> tuple:
  degs = sorted(g.degrees())
  tries = [[-1, 1], [-1, 0, 1], [0, 1], [-2, -1, 0, 1]]
  for ds in tries:
    idx = [i for d in ds if d in degs for i in g.piece(d)]
    if idx and subalgebra_generated(g, np.eye(g.dim, dtype=np.int64)[idx]).dim == g.dim:
      return tuple(idx)
  return tuple(range(g.dim))


def generating_indices(g: LSA) -> list[int]:
  """Basis elements generating g as a Lie superalgebra (degrees −1, 0, 1 usually suffice)."""
  return list(_generating_indices(g))


# spinning

def spin_module(M: GModule, v, gens=None, stop_at: int | None = None) -> Subspace:
  """Smallest submodule containing the rows of v."""
  idx = generating_indices(M.algebra) if gens is None else list(gens)
  space = Subspace(M.dim, M.p)
  frontier = space.extend(as_fp(np.atleast_2d(v), M.p).reshape(-1, M.dim))
  cap = M.dim if stop_at is None else stop_at
  while frontier.shape[0] and space.dim < cap:
    frontier = space.extend(np.vstack([M.apply(i, frontier) for i in idx]))
  return space


def _spin_mats(mats, v, p, d) -> Subspace:
  space = Subspace(d, p)
  frontier = space.extend(np.atleast_2d(v))
  while frontier.shape[0] and space.dim < d:
    frontier = space.extend(np.vstack([mm(frontier, A.T, p) for A in mats]))
  return space


# polynomials over F_p, coefficient lists from the leading term down

def _factors_upto(f: list[int], p: int, dmax: int) -> list[tuple[list[int], int]]:
  """Monic irreducible factors of degree ≤ dmax of f with their multiplicities."""
  out = []
  for part, mult in gf_sqf_list(f, p, ZZ)[1]:
    for q in _ddf_upto(part, p, dmax):
      out.append((q, mult))
  return out


def _ddf_upto(f: list[int], p: int, dmax: int) -> list[list[int]]:
  out = []
  x = [1, 0]
  h = x
  for d in range(1, dmax + 1):
    if len(f) - 1 < d:
      break
    h = gf_pow_mod(h, p, f, p, ZZ)
    g = gf_gcd(f, gf_sub(h, x, p, ZZ), p, ZZ)
    if len(g) > 1:
      out.extend(sorted(gf_edf_zassenhaus(g, d, p, ZZ)))
      f = gf_quo(f, g, p, ZZ)
      if len(f) == 1:
        break
      h = gf_rem(h, f, p, ZZ)
  return out


def _poly_at(f: list[int], A: np.ndarray, p: int) -> np.ndarray:
  out = np.zeros_like(A)
  eye = np.eye(A.shape[0], dtype=np.int64)
  for c in f:
    out = (mm(out, A, p) + c * eye) % p
  return out


# the test

def _matrices(M: GModule, gens) -> list[np.ndarray]:
  idx = generating_indices(M.algebra) if gens is None else list(gens)
  mats = [M.matrix(i) for i in idx]
  return [A for A in mats if A.any()]


def meataxe_irreducible(M: GModule, seed: int = 0, gens=None, max_word: int = MAX_WORD,
                        max_attempts: int = MAX_ATTEMPTS,
                        max_degree: int = MAX_FACTOR_DEGREE, line_cap: int = LINE_CAP,
                        patience: int = PATIENCE):
  """Irreducible(certificate) | Reducible(submodule) | Inconclusive(reason).

  When the kernel of every factor tried is larger than its degree, the
  smallest such kernel seen in the first `patience` attempts is searched
  line by line (at most `line_cap` lines on each side).
  """
  d, p = M.dim, M.p
  base = {"seed": seed, "dim": d, "p": p}
  if d == 0:
    return Inconclusive("zero module", base)
  if d == 1:
    return Irreducible({**base, "method": "dimension one"})
  try:
    mats = _matrices(M, gens)
  except MemoryError:
    return Inconclusive("module too large for dense matrices", base)
  if not mats:
    e = np.zeros((1, d), dtype=np.int64)
    e[0, 0] = 1
    return Reducible(Subspace(d, p, e), {**base, "method": "zero action"})
  mats_t = [A.T.copy() for A in mats]
  rng = np.random.default_rng(seed)
  pool = [(A, 1) for A in mats]
  best = None
  # largest kernel dimension for which the line search stays under the cap
  small = max(k for k in range(1, 64) if (p ** k - 1) // (p - 1) <= line_cap)
  for attempt in range(max_attempts):
    if best is not None and attempt >= patience:
      _, N, Nt, cert = best
      found = _exhaust(mats, mats_t, N, Nt, p, d)
      if found is not None:
        return Reducible(found, {**cert, "method": "exhaustive kernel"})
      return Irreducible({**cert, "method": "exhaustive kernel"})
    i, j = (int(a) for a in rng.integers(len(pool), size=2))
    (A, la), (B, lb) = pool[i], pool[j]
    if la + lb <= max_word:
      pool.append((mm(A, B, p), la + lb))
    coef = rng.integers(0, p, size=len(pool))
    theta = np.zeros((d, d), dtype=np.int64)
    for c, (X, _) in zip(coef, pool):
      if c:
        theta = (theta + int(c) * X) % p
    length = max(l for c, (_, l) in zip(coef, pool) if c) if coef.any() else 0
    cp = charpoly(theta, p)
    factors = sorted(_factors_upto(cp, p, max_degree), key=lambda fm: (fm[1], len(fm[0])))
    for f, mult in factors:
      deg = len(f) - 1
      if mult > 1 and (best is not None or deg * mult > small):
        continue
      F = _poly_at(f, theta, p)
      N = nullspace(F, p)
      cert = {**base, "attempt": attempt, "word_length": length, "factor": [int(c) for c in f],
              "nullity": int(N.shape[0])}
      if N.shape[0] == deg:
        # decisive: a proper submodule would contain N or have annihilator ⊇ ker f(θ)ᵀ
        S = _spin_mats(mats, N[0], p, d)
        if S.dim < d:
          return Reducible(S, {**cert, "method": "kernel spin"})
        T = _spin_mats(mats_t, nullspace(F.T, p)[0], p, d)
        if T.dim < d:
          return Reducible(T.annihilator(), {**cert, "method": "dual spin"})
        return Irreducible({**cert, "method": "norton"})
      lines = (p ** N.shape[0] - 1) // (p - 1)
      if lines <= line_cap and (best is None or lines < best[0]):
        best = (lines, N, nullspace(F.T, p), cert)
  if best is not None:
    _, N, Nt, cert = best
    found = _exhaust(mats, mats_t, N, Nt, p, d)
    if found is not None:
      return Reducible(found, {**cert, "method": "exhaustive kernel"})
    return Irreducible({**cert, "method": "exhaustive kernel"})
  return Inconclusive(f"no conclusive element in {max_attempts} attempts", base)


def _lines(N: np.ndarray, p: int):
  k = N.shape[0]
  for c in product(range(p), repeat=k):
    nz = [a for a in c if a]
    if nz and nz[0] == 1:
      yield mm(np.array(c, dtype=np.int64)[None, :], N, p)[0]


def _exhaust(mats, mats_t, N, Nt, p, d):
  for v in _lines(N, p):
    S = _spin_mats(mats, v, p, d)
    if S.dim < d:
      return S
  for w in _lines(Nt, p):
    T = _spin_mats(mats_t, w, p, d)
    if T.dim < d:
      return T.annihilator()
  return None


# heads and composition factors

def _require(result):
  if isinstance(result, Inconclusive):
    raise MeatAxeInconclusive(result.reason)
  return result


def simple_head(M: GModule, seed: int = 0) -> GModule:
  """A simple quotient of M; the result carries its certificate in `.certificate`."""
  cur = M
  while True:
    res = _require(meataxe_irreducible(cur, seed))
    if isinstance(res, Irreducible):
      cur.certificate = res.certificate
      return cur
    cur = quotient(cur, res.submodule)


def composition_factors(M: GModule, seed: int = 0) -> list[GModule]:
  """Composition factors of M, each certified irreducible."""
  out = []
  stack = [M]
  while stack:
    X = stack.pop()
    res = _require(meataxe_irreducible(X, seed))
    if isinstance(res, Irreducible):
      X.certificate = res.certificate
      out.append(X)
    else:
      stack.append(quotient(X, res.submodule))
      stack.append(submodule(X, res.submodule))
  return out


def is_isomorphic_simple(S: GModule, T: GModule, seed: int = 0) -> bool:
  """Isomorphism test for simple modules via a common singular word."""
  if S.dim != T.dim or S.algebra is not T.algebra:
    return False
  p, d = S.p, S.dim
  idx = generating_indices(S.algebra)
  A = [S.matrix(i) for i in idx]
  B = [T.matrix(i) for i in idx]
  rng = np.random.default_rng(seed)
  best = None
  for attempt in range(MAX_ATTEMPTS):
    c = rng.integers(0, p, size=len(idx))
    i, j = (int(a) for a in rng.integers(len(idx), size=2))
    X = (sum(int(a) * m for a, m in zip(c, A)) + mm(A[i], A[j], p)) % p
    Y = (sum(int(a) * m for a, m in zip(c, B)) + mm(B[i], B[j], p)) % p
    if charpoly(X, p) != charpoly(Y, p):
      return False
    for f, _ in _factors_upto(charpoly(X, p), p, MAX_FACTOR_DEGREE):
      NX = nullspace(_poly_at(f, X, p), p)
      if NX.shape[0] != len(f) - 1:
        continue
      NY = nullspace(_poly_at(f, Y, p), p)
      if NY.shape[0] != NX.shape[0]:
        return False
      if best is None or NX.shape[0] < best[0].shape[0]:
        best = (NX, NY)
      break
    # fewest candidate lines wins; a 1-dimensional kernel leaves a single one
    if best is not None and (best[0].shape[0] == 1 or attempt >= PATIENCE):
      NX, NY = best
      # an isomorphism maps v into ker f(Y); scalars do not matter
      return any(_match(A, B, NX[0], w, p, d) for w in _lines(NY, p))
  raise MeatAxeInconclusive("no suitable word for the isomorphism test")


def _match(A, B, v, w, p, d) -> bool:
  # build the spin bases of v and w word by word; an isomorphism maps one onto the other
  bv, bw = [v % p], [w % p]
  S = Subspace(d, p)
  S.extend(bv[0])
  k = 0
  while k < len(bv):
    for a, b in zip(A, B):
      x, y = mm(a, bv[k][:, None], p)[:, 0], mm(b, bw[k][:, None], p)[:, 0]
      if S.extend(x).shape[0]:
        bv.append(x)
        bw.append(y)
    k += 1
  if len(bv) < d:
    return False
  P, Q = np.array(bv).T, np.array(bw).T
  phi = mm(Q, inverse(P, p), p)
  return all(np.array_equal(mm(phi, a, p), mm(b, phi, p)) for a, b in zip(A, B))
