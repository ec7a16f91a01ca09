"""Induced modules by PBW straightening: Kac modules and baby Verma modules."""

from __future__ import annotations

import itertools
from collections import defaultdict
from functools import lru_cache

import numpy as np
from scipy import sparse

from ..arith import fp_inv
from ..contact import element, triangular_split
from ..dps import Shape
from ..linalg import mm
from ..lsa import LSA
from .modules import (GModule, PChar, _values, degree_zero, height, nonnegative_part,
                      transfer)

DENSE_LIMIT = 4096       # largest module for which single action matrices are formed
DENSE_ENTRIES = 4 * 10 ** 7  # cap on dim g · dim² for storing every matrix at once


class Induction:
  """Straightening for u_χ(L) ⊗_{u_χ(Q)} M.

  C is an ordered list of L-basis indices spanning a restricted subalgebra
  (the PBW factors X^s = c_1^{s_1} ... c_k^{s_k}); B lists the remaining
  indices, spanning the subalgebra Q that acts on M.  act(x, s) expresses
  x·(X^s ⊗ m) as Σ coef · X^t ⊗ b_z m, with z = -1 for the identity.
  """

  def __init__(self, L: LSA, C, B, chi_values):
    self.L = L
    self.p = p = L.p
    self.C = list(C)
    self.B = list(B)
    if sorted(self.C + self.B) != list(range(L.dim)):
      raise ValueError("C and B must partition the basis")
    self.chi = np.asarray(chi_values, dtype=np.int64) % p
    self.cpos = {c: a for a, c in enumerate(self.C)}
    self.bpos = {b: a for a, b in enumerate(self.B)}
    self.cpar = [int(L.parity[c]) for c in self.C]
    self.caps = [2 if q else p for q in self.cpar]
    self.monomials = list(itertools.product(*[range(c) for c in self.caps]))
    self.index = {t: i for i, t in enumerate(self.monomials)}
    self.zero = tuple(0 for _ in self.C)
    self._lmul: dict = {}
    self._act: dict = {}
    self._half = fp_inv(2, p)

  @property
  def size(self) -> int:
    return len(self.monomials)

  def monomial_parity(self, t) -> int:
    return sum(e for e, q in zip(t, self.cpar) if q) % 2

  def _split(self, y):
    yC = {a: int(y[c]) for a, c in enumerate(self.C) if y[c]}
    yB = {z: int(y[b]) for z, b in enumerate(self.B) if y[b]}
    return yC, yB

  def _c_only(self, y):
    yC, yB = self._split(y)
    if yB:
      raise ArithmeticError("PBW factors do not span a subalgebra")
    return yC

  # left multiplication inside u_χ(C)

  def lmul(self, a: int, t: tuple) -> dict:
    key = (a, t)
    hit = self._lmul.get(key)
    if hit is not None:
      return hit
    p = self.p
    b = next((k for k, e in enumerate(t) if e), len(t))
    out: dict = defaultdict(int)
    if a <= b:
      if t[a] + 1 < self.caps[a]:
        u = list(t)
        u[a] += 1
        out[tuple(u)] = 1
      else:
        rest = list(t)
        rest[a] = 0
        rest = tuple(rest)
        c = self.C[a]
        if self.cpar[a] == 0:
          y = self.L.pmap[c]
          chi_p = pow(int(self.chi[c]), p, p)
          if chi_p:
            out[rest] += chi_p
        else:
          y = self.L.sc[c, c] * self._half % p
        for t2, v in self._lmul_vec(self._c_only(y), rest).items():
          out[t2] += v
    else:
      u = list(t)
      u[b] -= 1
      u = tuple(u)
      cb = self.C[b]
      for t2, v in self._lmul_vec(self._c_only(self.L.sc[self.C[a], cb]), u).items():
        out[t2] += v
      sign = -1 if self.cpar[a] and self.cpar[b] else 1
      for t2, v in self.lmul(a, u).items():
        for t3, w in self.lmul(b, t2).items():
          out[t3] += sign * v * w
    res = {k: v % p for k, v in out.items() if v % p}
    self._lmul[key] = res
    return res

  def _lmul_vec(self, yC: dict, t: tuple) -> dict:
    out: dict = defaultdict(int)
    for a, c in yC.items():
      for t2, v in self.lmul(a, t).items():
        out[t2] += c * v
    return out

  # action of Q-basis elements

  def act_b(self, j: int, s: tuple) -> dict:
    key = (j, s)
    hit = self._act.get(key)
    if hit is not None:
      return hit
    p = self.p
    out: dict = defaultdict(int)
    if s == self.zero:
      out[(s, j)] = 1
    else:
      b = next(k for k, e in enumerate(s) if e)
      u = list(s)
      u[b] -= 1
      u = tuple(u)
      yC, yB = self._split(self.L.sc[self.B[j], self.C[b]])
      for t, v in self._lmul_vec(yC, u).items():
        out[(t, -1)] += v
      for z, c in yB.items():
        for k, v in self.act_b(z, u).items():
          out[k] += c * v
      sign = -1 if self.L.parity[self.B[j]] and self.cpar[b] else 1
      for (t, z), v in self.act_b(j, u).items():
        for t2, w in self.lmul(b, t).items():
          out[(t2, z)] += sign * v * w
    res = {k: v % p for k, v in out.items() if v % p}
    self._act[key] = res
    return res

  def blocks(self, x: int) -> dict:
    """{z: sparse S×S coefficient matrix} for the L-basis element x."""
    cached = getattr(self, "_blocks", None)
    if cached is None:
      cached = self._blocks = {}
    if x in cached:
      return cached[x]
    S = self.size
    data = defaultdict(lambda: ([], [], []))
    for si, s in enumerate(self.monomials):
      if x in self.cpos:
        items = ((t, -1, v) for t, v in self.lmul(self.cpos[x], s).items())
      else:
        items = ((t, z, v) for (t, z), v in self.act_b(self.bpos[x], s).items())
      for t, z, v in items:
        r, c, d = data[z]
        r.append(self.index[t])
        c.append(si)
        d.append(v)
    out = {z: sparse.csr_matrix((d, (r, c)), shape=(S, S), dtype=np.int64)
           for z, (r, c, d) in data.items()}
    cached[x] = out
    return out


class InducedModule(GModule):
  """u_χ(L) ⊗_{u_χ(Q)} M with basis X^s ⊗ m_j (s-major).

  Action matrices are assembled from the straightening blocks.  Large
  modules never store them all: `apply` works blockwise on the
  Kronecker-sum form Σ_z C_z ⊗ ρ(b_z).
  """

  def __init__(self, engine: Induction, M: GModule, name: str = ""):
    self.engine = engine
    self.inner = M
    self.algebra = engine.L
    self.p = engine.p
    self.dim = engine.size * M.dim
    par = np.array([engine.monomial_parity(t) for t in engine.monomials], dtype=np.int64)
    self.parity = ((par[:, None] + M.parity[None, :]) % 2).reshape(-1)
    self.name = name
    self._dense = None
    self._rho = [M.matrix(i) for i in range(M.algebra.dim)]

  @property
  def storable(self) -> bool:
    return self.algebra.dim * self.dim ** 2 <= DENSE_ENTRIES

  def _rho_z(self, z):
    return np.eye(self.inner.dim, dtype=np.int64) if z == -1 else self._rho[z]

  @property
  def action(self) -> np.ndarray:
    if self._dense is None:
      if not self.storable:
        raise MemoryError("module too large for dense action matrices")
      self._dense = np.stack([self._assemble(i) for i in range(self.algebra.dim)])
      self._dense.setflags(write=False)
    return self._dense

  def _assemble(self, x: int) -> np.ndarray:
    out = np.zeros((self.dim, self.dim), dtype=np.int64)
    for z, Cz in self.engine.blocks(x).items():
      out += np.kron(Cz.toarray(), self._rho_z(z))
    return out % self.p

  def matrix(self, i: int) -> np.ndarray:
    if self._dense is not None or self.storable:
      return self.action[i]
    if self.dim > DENSE_LIMIT:
      raise MemoryError("module too large for dense action matrices")
    return self._assemble(i)

  def apply(self, i: int, V) -> np.ndarray:
    V = np.atleast_2d(np.asarray(V, dtype=np.int64)) % self.p
    if self._dense is not None:
      return mm(V, self._dense[i].T, self.p)
    n, S, d = V.shape[0], self.engine.size, self.inner.dim
    X = V.reshape(n, S, d)
    out = np.zeros((S, n * d), dtype=np.int64)
    for z, Cz in self.engine.blocks(i).items():
      W = X if z == -1 else mm(X.reshape(-1, d), self._rho[z].T, self.p).reshape(n, S, d)
      out += (Cz @ W.transpose(1, 0, 2).reshape(S, -1)) % self.p
    return (out % self.p).reshape(S, n, d).transpose(1, 0, 2).reshape(n, S * d)

  def block_slice(self, t) -> slice:
    k = self.engine.index[tuple(t)]
    d = self.inner.dim
    return slice(k * d, (k + 1) * d)


@lru_cache(maxsize=64)
def _engine(L: LSA, C: tuple, B: tuple, chi_key: bytes) -> Induction:
  return Induction(L, C, B, np.frombuffer(chi_key, dtype=np.int64))


def engine_for(L: LSA, C, B, chi_values) -> Induction:
  v = np.ascontiguousarray(np.asarray(chi_values, dtype=np.int64) % L.p)
  return _engine(L, tuple(C), tuple(B), v.tobytes())


# Kac modules

def pbw_negative_order(g: LSA) -> list[int]:
  """Basis indices of M_{x_1'},…,M_{x_n'}, M_{x_n},…,M_{x_1}, M_1."""
  n = g.meta["n"]
  s = Shape(n, n + 1, g.p)
  order = [s.unit(n + i) for i in range(1, n + 1)] + [s.unit(i) for i in range(n, 0, -1)]
  order.append(tuple([0] * s.nvars))
  out = []
  for r in order:
    v = element(g, {r: 1})
    nz = np.nonzero(v)[0]
    if len(nz) != 1 or v[nz[0]] != 1:
      raise ValueError("negative part is not spanned by basis vectors")
    out.append(int(nz[0]))
  return out


def kac_module(g: LSA, chi: PChar, M: GModule) -> InducedModule:
  """K_χ(M) = u_χ(g) ⊗_{u_χ(g^0)} M for a u_χ(g^0)-module M."""
  gp = nonnegative_part(g)
  if M.algebra is not gp:
    raise ValueError("M must be a module over the nonnegative part of g")
  C = pbw_negative_order(g)
  B = gp.meta["indices"]
  eng = engine_for(g, C, B, _values(chi, g))
  return InducedModule(eng, M, name=f"K({M.name})")


def kac_dimension(g: LSA, dim_m: int) -> int:
  n = g.meta["n"]
  return g.p ** n * 2 ** (n + 1) * dim_m


# Borel modules and baby Verma modules over g_[0]

def borel_algebra(g: LSA) -> tuple[LSA, int, int]:
  """g_[0] in the basis n^- ∪ cartan ∪ n^+, with the sizes of n^- and cartan."""
  cache = g.__dict__.setdefault("_subcache", {})
  if "borel" not in cache:
    lo, H, up = triangular_split(g)
    V = np.vstack([lo, H, up])
    Lb = g.with_basis(V, name=f"{g.name}_[0]")
    Lb.meta["indices"] = None
    cache["borel"] = (Lb, lo.shape[0], H.shape[0])
  return cache["borel"]


def _torus_pmap(Lb: LSA, k: int, r: int) -> np.ndarray:
  """h_a^[p] in cartan coordinates; raises if the cartan is not p-closed."""
  out = np.zeros((r, r), dtype=np.int64)
  for a in range(r):
    v = Lb.pmap[k + a]
    if np.any(np.delete(v, range(k, k + r))):
      raise ArithmeticError("cartan basis is not closed under the p-map")
    out[a] = v[k:k + r]
  return out


def rational_weights(g: LSA, chi) -> list[tuple]:
  """All λ ∈ F_p^r with λ(h)^p - λ(h^[p]) = χ(h)^p on the cartan basis."""
  Lb, k, r = borel_algebra(g)
  p = g.p
  c = PChar(g, _values(chi, g)).on(Lb)[k:k + r]
  P = _torus_pmap(Lb, k, r)
  out = []
  for lam in itertools.product(range(p), repeat=r):
    lam_v = np.array(lam)
    if np.all((lam_v - P @ lam_v - c) % p == 0):  # λ^p = λ on F_p
      out.append(lam)
  return out


def borel_module(g: LSA, chi, weight) -> GModule:
  """Module of the Borel part on which n^+ acts by zero.

  `weight` is either λ ∈ F_p^r (1-dimensional) or ("descended", k) for the
  p-dimensional module F_p[θ]/(θ^p - θ - c_0) with h_a acting by
  (c_a/c_0)·θ + k_a, where c = χ on the (toral) cartan basis.
  """
  Lb, k, r = borel_algebra(g)
  p = g.p
  bsub = Lb.sub(range(k, Lb.dim))
  A = np.zeros((bsub.dim, 1, 1), dtype=np.int64)
  c = PChar(g, _values(chi, g)).on(Lb)[k:k + r]
  if isinstance(weight, tuple) and weight and weight[0] == "descended":
    P = _torus_pmap(Lb, k, r)
    if not np.array_equal(P % p, np.eye(r, dtype=np.int64)):
      raise ArithmeticError("descended weights need a toral cartan basis")
    shift = np.asarray(weight[1], dtype=np.int64) % p
    a0 = int(np.nonzero(c)[0][0])
    theta = np.zeros((p, p), dtype=np.int64)
    theta[np.arange(1, p), np.arange(p - 1)] = 1  # θ·θ^i = θ^{i+1}
    theta[0, p - 1] = c[a0]                        # θ^p = θ + c_0
    theta[1, p - 1] = 1
    ratio = c * fp_inv(int(c[a0]), p) % p
    A = np.zeros((bsub.dim, p, p), dtype=np.int64)
    for a in range(r):
      A[a] = (ratio[a] * theta + shift[a] * np.eye(p, dtype=np.int64)) % p
    name = f"E(c={c.tolist()},k={shift.tolist()})"
  else:
    lam = np.asarray(weight, dtype=np.int64) % p
    if len(lam) != r:
      raise ValueError("weight length does not match the cartan rank")
    P = _torus_pmap(Lb, k, r)
    if np.any((lam - P @ lam - c) % p):
      raise ValueError("weight is inconsistent with the character")
    A[:r, 0, 0] = lam
    name = f"F{lam.tolist()}"
  if np.any(PChar(g, _values(chi, g)).on(Lb)[k + r:]):
    raise ValueError("character must vanish on n^+")
  return GModule(bsub, A, name=name)


def descended_classes(g: LSA, chi) -> list[tuple]:
  """Shift vectors k up to the Galois shift k ↦ k + j·c/c_0 (k_{a_0} = 0)."""
  Lb, k, r = borel_algebra(g)
  p = g.p
  c = PChar(g, _values(chi, g)).on(Lb)[k:k + r]
  nz = np.nonzero(c)[0]
  if len(nz) == 0:
    return []
  a0 = int(nz[0])
  free = [a for a in range(r) if a != a0]
  out = []
  for vals in itertools.product(range(p), repeat=len(free)):
    kv = [0] * r
    for a, v in zip(free, vals):
      kv[a] = v
    out.append(("descended", tuple(kv)))
  return out


def borel_weights(g: LSA, chi) -> list:
  """Every simple Borel module consistent with χ, one per isomorphism class."""
  lams = rational_weights(g, chi)
  return lams if lams else descended_classes(g, chi)


def baby_verma(g: LSA, chi, weight) -> GModule:
  """u_χ(g_[0]) ⊗_{u_χ(b)} F_λ, as a module over degree_zero(g)."""
  Lb, k, r = borel_algebra(g)
  E = borel_module(g, chi, weight)
  chi_b = PChar(g, _values(chi, g)).on(Lb)
  eng = engine_for(Lb, range(k), range(k, Lb.dim), chi_b)
  Z = InducedModule(eng, E, name=f"Z({E.name})")
  dense = GModule(Lb, Z.action, Z.parity, name=Z.name)
  return transfer(dense, degree_zero(g))


def induced_from_top(g: LSA, chi) -> GModule:
  """u_χ(g^0) ⊗_{u_χ(g^1)} F_χ for ht(χ) = 2, as a module over nonnegative_part(g).

  g^1 acts on F_χ by χ on even elements and by zero on odd ones; this is a
  character because χ kills [g^1, g^1] ⊆ g^2.
  """
  if height(g, chi) > 2:
    raise ValueError("the top character exists only for ht(chi) <= 2")
  gp = nonnegative_part(g)
  idx = gp.meta["indices"]
  C = [a for a, i in enumerate(idx) if g.degree[i] == 0]
  B = [a for a, i in enumerate(idx) if g.degree[i] >= 1]
  chi_p = PChar(g, _values(chi, g)).on(gp)
  top = gp.sub(B)
  F = GModule(top, chi_p[B].reshape(-1, 1, 1) * (gp.parity[B] == 0).reshape(-1, 1, 1))
  eng = engine_for(gp, C, B, chi_p)
  Z = InducedModule(eng, F, name="Ind(g^1)")
  return GModule(gp, Z.action, Z.parity, name=Z.name)
