"""Finite-dimensional restricted Z-graded Lie superalgebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linalg import Subspace, as_fp, mat_pow, mm, rref

_F32_LIMIT = 2 ** 24


class LSA:
  """Structure-constant model.

  sc[i, j] is the coefficient vector of [e_i, e_j]; pmap[i] the vector of
  e_i^[p] for even i.  `realization`, when set, computes x^[p] for an
  arbitrary even vector (the p-map is not additive, so the table alone does
  not determine it).
  """

  def __init__(self, p: int, sc, parity, degree, labels: Sequence[str], pmap: dict,
               name: str = "", realization: Callable | None = None,
               basis_terms: list | None = None, meta: dict | None = None):
    self.p = p
    self.sc = as_fp(sc, p)
    self.dim = self.sc.shape[0]
    self.parity = np.asarray(parity, dtype=np.int64) % 2
    self.degree = np.asarray(degree, dtype=np.int64)
    self.labels = list(labels)
    self.pmap = {int(i): as_fp(v, p) for i, v in sorted(pmap.items())}
    self.name = name
    self.realization = realization
    self.basis_terms = basis_terms
    self.meta = dict(meta or {})
    for arr in (self.sc, self.parity, self.degree):
      arr.setflags(write=False)
    self._ad = None

  def __repr__(self):
    return f"LSA({self.name or 'anonymous'}, dim={self.dim}, p={self.p})"

  # basic structure

  def basis_vector(self, i: int) -> np.ndarray:
    v = np.zeros(self.dim, dtype=np.int64)
    v[i] = 1
    return v

  def even_indices(self) -> list[int]:
    return [i for i in range(self.dim) if self.parity[i] == 0]

  def degrees(self) -> list[int]:
    return sorted(set(int(d) for d in self.degree))

  def graded_dims(self) -> dict:
    return {d: int(np.sum(self.degree == d)) for d in self.degrees()}

  def piece(self, d: int) -> list[int]:
    return [i for i in range(self.dim) if self.degree[i] == d]

  def bracket(self, u, v) -> np.ndarray:
    u = as_fp(u, self.p)
    v = as_fp(v, self.p)
    if u.shape != (self.dim,) or v.shape != (self.dim,):
      raise ValueError("vector length does not match algebra dimension")
    w = mm(u[None, :], self.sc.reshape(self.dim, -1), self.p).reshape(self.dim, self.dim)
    return mm(v[None, :], w, self.p)[0]

  @property
  def ad_stack(self) -> np.ndarray:
    """ad_stack[i] is the matrix of ad(e_i) acting on column vectors."""
    if self._ad is None:
      ad = np.ascontiguousarray(self.sc.transpose(0, 2, 1))
      ad.setflags(write=False)
      self._ad = ad
    return self._ad

  def ad(self, u) -> np.ndarray:
    u = as_fp(u, self.p)
    flat = self.ad_stack.reshape(self.dim, -1)
    return mm(u[None, :], flat, self.p).reshape(self.dim, self.dim)

  def vector_parity(self, v) -> int:
    ps = set(int(self.parity[i]) for i in np.nonzero(as_fp(v, self.p))[0])
    if len(ps) > 1:
      raise ValueError("vector is not parity-homogeneous")
    return ps.pop() if ps else 0

  def p_power(self, v) -> np.ndarray:
    """x^[p] for an even vector x."""
    v = as_fp(v, self.p)
    if self.vector_parity(v):
      raise ValueError("p-map is defined on even elements only")
    nz = np.nonzero(v)[0]
    if len(nz) == 0:
      return np.zeros(self.dim, dtype=np.int64)
    if len(nz) == 1 and v[nz[0]] == 1 and int(nz[0]) in self.pmap:
      return self.pmap[int(nz[0])].copy()
    if self.realization is not None:
      return self.realization(v)
    return self._p_power_via_ad(v)

  def _p_power_via_ad(self, v) -> np.ndarray:
    target = mat_pow(self.ad(v), self.p, self.p).reshape(-1)
    flat = self.ad_stack.reshape(self.dim, -1)
    R, piv, T = rref(flat, self.p, transform=True)
    if len(piv) != self.dim:
      raise ValueError("ad is not faithful; p-map of a combination is undetermined")
    y = target[piv]
    if not np.array_equal(mm(y[None, :], R, self.p)[0], target):
      raise ValueError("ad(x)^p is not inner")
    return mm(y[None, :], T, self.p)[0]

  # substructures

  def sub(self, indices: Sequence[int], name: str = "") -> "LSA":
    """Subalgebra spanned by a subset of the basis, in the induced order."""
    idx = list(indices)
    V = np.zeros((len(idx), self.dim), dtype=np.int64)
    V[np.arange(len(idx)), idx] = 1
    labels = [self.labels[i] for i in idx]
    return self.with_basis(V, labels=labels, name=name or f"{self.name}|sub")

  def with_basis(self, V, labels: Sequence[str] | None = None, name: str = "") -> "LSA":
    """Subalgebra with the homogeneous basis given by the rows of V."""
    V = as_fp(np.atleast_2d(V), self.p)
    k = V.shape[0]
    R, piv, T = rref(V, self.p, transform=True)
    if len(piv) != k:
      raise ValueError("basis vectors are linearly dependent")
    p = self.p

    def coords(w):
      w = np.atleast_2d(as_fp(w, p))
      y = w[:, piv]
      if not np.array_equal(mm(y, R, p), w):
        raise ValueError("vector is outside the subalgebra span")
      return mm(y, T, p)

    parity, degree = [], []
    for row in V:
      nz = np.nonzero(row)[0]
      ps = set(self.parity[nz].tolist())
      ds = set(self.degree[nz].tolist())
      if len(ps) != 1 or len(ds) != 1:
        raise ValueError("basis vectors must be homogeneous in parity and degree")
      parity.append(ps.pop())
      degree.append(ds.pop())
    # [v_a, v_b] = sum V[a,i] V[b,j] sc[i,j]
    left = mm(V, self.sc.reshape(self.dim, -1), p).reshape(k, self.dim, self.dim)
    br = np.stack([mm(V, left[a], p) for a in range(k)])  # (a, b, dim)
    sc = coords(br.reshape(-1, self.dim)).reshape(k, k, k)
    parent = self

    def realization(v):
      return coords(parent.p_power(mm(np.atleast_2d(v), V, p)[0]))[0]

    pmap = {a: realization(np.eye(k, dtype=np.int64)[a]) for a in range(k) if parity[a] == 0}
    if labels is None:
      labels = [" + ".join(f"{c}*{self.labels[i]}" if c != 1 else self.labels[i]
                           for i, c in enumerate(row) if c) for row in V]
    terms = None
    if self.basis_terms is not None:
      terms = []
      for row in V:
        acc: dict = {}
        for i, c in enumerate(row):
          if c:
            for r, a in self.basis_terms[i]:
              acc[r] = (acc.get(r, 0) + int(c) * a) % p
        terms.append([(r, a) for r, a in sorted(acc.items()) if a])
    sub = LSA(p, sc, parity, degree, labels, pmap, name=name or f"{self.name}|sub",
              realization=realization, basis_terms=terms,
              meta={k: self.meta[k] for k in ("n", "p", "kappa") if k in self.meta})
    sub.meta["parent_basis"] = V
    sub.meta["parent"] = self
    return sub

  def coords_fn(self, V):
    """Solver mapping ambient vectors in span(V) to V-coordinates."""
    V = as_fp(np.atleast_2d(V), self.p)
    R, piv, T = rref(V, self.p, transform=True)
    p = self.p

    def coords(w):
      w = np.atleast_2d(as_fp(w, p))
      y = w[:, piv]
      if not np.array_equal(mm(y, R, p), w):
        raise ValueError("vector is outside the span")
      return mm(y, T, p)
    return coords


# verification

@dataclass
class Report:
  name: str
  violations: list
  checked: int

  @property
  def ok(self) -> bool:
    return not self.violations

  def to_dict(self) -> dict:
    return {"check": self.name, "status": "pass" if self.ok else "fail",
            "checked": self.checked, "violations": self.violations[:20],
            "violation_count": len(self.violations)}


def _float_dtype(g: LSA):
  return np.float32 if g.dim * (g.p - 1) ** 2 < _F32_LIMIT else np.float64


def _sparse_ads(g: LSA):
  from scipy import sparse
  return [sparse.csr_matrix(g.ad_stack[i]) for i in range(g.dim)]


def verify_jacobi(g: LSA, limit: int = 1000) -> Report:
  """Exhaustive super Jacobi check in operator form.

  ad[e_i, e_j] = ad e_i ad e_j - (-1)^{|i||j|} ad e_j ad e_i on every basis
  pair, plus antisupersymmetry of the table.  A violation (i, j, k) means the
  identity fails for e_i, e_j applied to e_k.
  """
  d, p = g.dim, g.p
  violations = []
  par = g.parity
  swap = (g.sc.transpose(1, 0, 2) * (-np.where(np.outer(par, par) == 1, -1, 1))[:, :, None]) % p
  for i, j, _ in np.argwhere((swap - g.sc) % p != 0)[:limit]:
    violations.append(("antisymmetry", int(i), int(j)))
  ads = _sparse_ads(g)
  for i in range(d):
    for j in range(i, d):
      s = -1 if par[i] and par[j] else 1
      diff = ads[i] @ ads[j] - s * (ads[j] @ ads[i])
      for k in np.nonzero(g.sc[i, j])[0]:
        diff = diff - int(g.sc[i, j, k]) * ads[k]
      diff.data %= p
      diff.eliminate_zeros()
      if diff.nnz:
        for k in sorted(set(diff.indices.tolist()))[:3]:
          if len(violations) < limit:
            violations.append((int(i), int(j), int(k)))
  return Report("jacobi", violations, d * (d + 1) // 2 * d)


def verify_restricted(g: LSA) -> Report:
  violations = []
  evens = g.even_indices()
  for i in evens:
    target = mat_pow(g.ad_stack[i], g.p, g.p)
    if i not in g.pmap:
      violations.append(("missing", i))
      continue
    if not np.array_equal(g.ad(g.pmap[i]), target):
      violations.append(("ad-mismatch", i))
  return Report("restricted", violations, len(evens))


def verify_grading(g: LSA) -> Report:
  nz = np.argwhere(g.sc != 0)
  bad = [tuple(int(a) for a in t) for t in nz if g.degree[t[0]] + g.degree[t[1]] != g.degree[t[2]]]
  badp = [tuple(int(a) for a in t) for t in nz if (g.parity[t[0]] + g.parity[t[1]]) % 2 != g.parity[t[2]]]
  return Report("grading", bad + badp, len(nz))


# subspaces

def ideal_closure(g: LSA, seed) -> Subspace:
  seed = np.asarray(seed, dtype=np.int64).reshape(-1, g.dim)
  space = Subspace(g.dim, g.p)
  frontier = space.extend(seed)
  A = g.ad_stack
  while frontier.shape[0] and space.dim < g.dim:
    # [e_i, v] for every basis element e_i and new vector v
    cand = np.einsum("ikl,vl->ivk", A, frontier).reshape(-1, g.dim) % g.p
    frontier = space.extend(cand)
  return space


def bracket_span(g: LSA, U: Subspace, W: Subspace) -> Subspace:
  if U.dim == 0 or W.dim == 0:
    return Subspace(g.dim, g.p)
  left = mm(U.basis, g.sc.reshape(g.dim, -1), g.p).reshape(U.dim, g.dim, g.dim)
  out = np.concatenate([mm(W.basis, left[a], g.p) for a in range(U.dim)])
  return Subspace(g.dim, g.p, out)


def derived_subalgebra(g: LSA, k: int) -> Subspace:
  if k < 0:
    raise ValueError("k must be non-negative")
  S = Subspace.full(g.dim, g.p)
  for _ in range(k):
    S = bracket_span(g, S, S)
  return S


def filtration_piece(g: LSA, i: int) -> Subspace:
  idx = [j for j in range(g.dim) if g.degree[j] >= i]
  V = np.zeros((len(idx), g.dim), dtype=np.int64)
  V[np.arange(len(idx)), idx] = 1
  return Subspace(g.dim, g.p, V, _reduced=True) if idx else Subspace(g.dim, g.p)


def subalgebra_generated(g: LSA, vectors) -> Subspace:
  S = Subspace(g.dim, g.p)
  S.extend(np.asarray(vectors, dtype=np.int64).reshape(-1, g.dim))
  while True:
    new = bracket_span(g, S, S)
    before = S.dim
    S.extend(new.basis)
    if S.dim == before:
      return S


# grading automorphisms

@dataclass(frozen=True)
class GradingAut:
  c: int
  p: int

  def __post_init__(self):
    if self.c % self.p == 0:
      raise ValueError("grading automorphism needs c != 0")

  def factors(self, g: LSA, inverse: bool = False) -> np.ndarray:
    c = pow(self.c, -1, self.p) if inverse else self.c % self.p
    return np.array([pow(c, int(d), self.p) for d in g.degree], dtype=np.int64)

  def compose(self, other: "GradingAut") -> "GradingAut":
    return GradingAut(self.c * other.c % self.p, self.p)


def apply_grading_aut(phi: GradingAut, g: LSA, v, inverse: bool = False) -> np.ndarray:
  return as_fp(v, g.p) * phi.factors(g, inverse) % g.p


def coadjoint_apply(phi: GradingAut, chi):
  """(Φ·χ)(x) = χ(Φ^{-1} x)."""
  from .repn.modules import PChar
  g = chi.algebra
  return PChar(g, chi.values * phi.factors(g, inverse=True) % g.p)
