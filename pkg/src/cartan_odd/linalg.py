"""Dense linear algebra over F_p on numpy int64 arrays.

Products go through float64 BLAS, which is exact as long as every partial
sum stays below 2**53; larger inner dimensions are split into chunks.
"""

from __future__ import annotations

import numpy as np

_EXACT = 2.0 ** 52


def as_fp(a, p: int) -> np.ndarray:
  return np.mod(np.asarray(a, dtype=np.int64), p)


def mm(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
  """(a @ b) mod p for reduced int64 operands."""
  k = a.shape[-1]
  step = max(1, int(_EXACT // ((p - 1) ** 2)))
  if k <= step:
    out = a.astype(np.float64) @ b.astype(np.float64)
    return np.mod(out, p).astype(np.int64)
  out = np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
  for s in range(0, k, step):
    part = a[..., s:s + step].astype(np.float64) @ b[s:s + step].astype(np.float64)
    out = (out + np.mod(part, p).astype(np.int64)) % p
  return out


def mat_pow(a: np.ndarray, e: int, p: int) -> np.ndarray:
  out = np.eye(a.shape[0], dtype=np.int64)
  base = a.copy()
  while e:
    if e & 1:
      out = mm(out, base, p)
    e >>= 1
    if e:
      base = mm(base, base, p)
  return out


def inv_table(p: int) -> np.ndarray:
  t = np.zeros(p, dtype=np.int64)
  for a in range(1, p):
    t[a] = pow(a, p - 2, p)
  return t


def rref(a, p: int, transform: bool = False):
  """Reduced row echelon form with first-nonzero pivoting.

  Returns (R, pivots) or (R, pivots, T) with T @ a == R (mod p); R keeps only
  the nonzero rows.
  """
  m = as_fp(a, p).copy()
  rows, cols = m.shape
  inv = inv_table(p)
  t = np.eye(rows, dtype=np.int64) if transform else None
  pivots = []
  r = 0
  for c in range(cols):
    if r == rows:
      break
    nz = np.nonzero(m[r:, c])[0]
    if nz.size == 0:
      continue
    i = r + nz[0]
    if i != r:
      m[[r, i]] = m[[i, r]]
      if transform:
        t[[r, i]] = t[[i, r]]
    s = inv[m[r, c]]
    if s != 1:
      m[r] = m[r] * s % p
      if transform:
        t[r] = t[r] * s % p
    col = m[:, c].copy()
    col[r] = 0
    hit = np.nonzero(col)[0]
    if hit.size:
      f = col[hit]
      m[hit] = (m[hit] - np.outer(f, m[r])) % p
      if transform:
        t[hit] = (t[hit] - np.outer(f, t[r])) % p
    pivots.append(c)
    r += 1
  if transform:
    return m[:r], pivots, t[:r]
  return m[:r], pivots


def rank(a, p: int) -> int:
  a = np.asarray(a)
  if a.size == 0:
    return 0
  return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
  """Rows spanning {x : a @ x = 0}, in reduced echelon form."""
  a = np.asarray(a, dtype=np.int64)
  cols = a.shape[1]
  if a.shape[0] == 0:
    return np.eye(cols, dtype=np.int64)
  r, piv = rref(a, p)
  free = [c for c in range(cols) if c not in set(piv)]
  out = np.zeros((len(free), cols), dtype=np.int64)
  for k, f in enumerate(free):
    out[k, f] = 1
    for i, c in enumerate(piv):
      out[k, c] = (-r[i, f]) % p
  if out.shape[0]:
    out = rref(out, p)[0]
  return out


def inverse(a, p: int) -> np.ndarray:
  a = as_fp(a, p)
  n = a.shape[0]
  r, piv, t = rref(a, p, transform=True)
  if len(piv) != n:
    raise ZeroDivisionError("matrix is singular mod p")
  return t


class Subspace:
  """Subspace of F_p^dim held as its canonical reduced echelon basis."""

  def __init__(self, dim: int, p: int, basis=None, _reduced: bool = False):
    self.ambient = dim
    self.p = p
    if basis is None or len(basis) == 0:
      self.basis = np.zeros((0, dim), dtype=np.int64)
      self.pivots = []
    elif _reduced:
      self.basis = basis
      self.pivots = [int(np.nonzero(row)[0][0]) for row in basis]
    else:
      b = np.asarray(basis, dtype=np.int64).reshape(-1, dim)
      self.basis, self.pivots = rref(b, p)

  @classmethod
  def full(cls, dim: int, p: int) -> "Subspace":
    return cls(dim, p, np.eye(dim, dtype=np.int64), _reduced=True)

  @property
  def dim(self) -> int:
    return self.basis.shape[0]

  def __len__(self):
    return self.dim

  def __eq__(self, other):
    return (isinstance(other, Subspace) and self.ambient == other.ambient
            and np.array_equal(self.basis, other.basis))

  def __repr__(self):
    return f"Subspace(dim={self.dim}, ambient={self.ambient}, p={self.p})"

  def reduce(self, v: np.ndarray) -> np.ndarray:
    """Residues of the rows of v modulo the subspace."""
    v = as_fp(v, self.p)
    if self.dim == 0:
      return v
    return (v - mm(v[..., self.pivots], self.basis, self.p)) % self.p

  def contains(self, v) -> bool:
    v = np.atleast_2d(as_fp(v, self.p))
    return not self.reduce(v).any()

  def contains_space(self, other: "Subspace") -> bool:
    return other.dim == 0 or self.contains(other.basis)

  def coords(self, v: np.ndarray) -> np.ndarray:
    """Coordinates of vectors lying in the subspace w.r.t. the echelon basis."""
    return as_fp(v, self.p)[..., self.pivots]

  def extend(self, v) -> np.ndarray:
    """Add vectors in place; returns the new reduced rows (a basis of the increment)."""
    v = np.atleast_2d(np.asarray(v, dtype=np.int64))
    if v.shape[0] == 0:
      return v.reshape(0, self.ambient)
    res = self.reduce(v)
    res = res[res.any(axis=1)]
    if res.shape[0] == 0:
      return res
    new, npiv = rref(res, self.p)
    if self.dim:
      b = (self.basis - mm(self.basis[:, npiv], new, self.p)) % self.p
      allb = np.vstack([b, new])
      allp = self.pivots + npiv
      order = np.argsort(allp, kind="stable")
      self.basis = allb[order]
      self.pivots = [allp[i] for i in order]
    else:
      self.basis, self.pivots = new, list(npiv)
    return new

  def sum(self, other: "Subspace") -> "Subspace":
    out = self.copy()
    out.extend(other.basis)
    return out

  def copy(self) -> "Subspace":
    return Subspace(self.ambient, self.p, self.basis.copy(), _reduced=True)

  def annihilator(self) -> "Subspace":
    if self.dim == 0:
      return Subspace.full(self.ambient, self.p)
    return Subspace(self.ambient, self.p, nullspace(self.basis, self.p))

  def intersection(self, other: "Subspace") -> "Subspace":
    return self.annihilator().sum(other.annihilator()).annihilator()

  def complement_indices(self) -> list[int]:
    s = set(self.pivots)
    return [i for i in range(self.ambient) if i not in s]


def spin(gens, vectors, p: int, dim: int | None = None, stop_at: int | None = None) -> Subspace:
  """Smallest subspace containing `vectors` and stable under the matrices in `gens`.

  Matrices act on column vectors; vectors are given as rows.
  """
  gens = list(gens)
  if dim is None:
    dim = gens[0].shape[0] if gens else np.asarray(vectors).shape[-1]
  space = Subspace(dim, p)
  frontier = space.extend(np.asarray(vectors, dtype=np.int64).reshape(-1, dim))
  cap = dim if stop_at is None else stop_at
  while frontier.shape[0] and space.dim < cap:
    cand = np.vstack([mm(frontier, g.T, p) for g in gens]) if gens else frontier[:0]
    frontier = space.extend(cand)
  return space


def charpoly(a: np.ndarray, p: int) -> list[int]:
  """Characteristic polynomial det(xI - a), coefficients from the leading term down."""
  h = as_fp(a, p).copy()
  n = h.shape[0]
  inv = inv_table(p)
  for j in range(n - 2):
    nz = np.nonzero(h[j + 1:, j])[0]
    if nz.size == 0:
      continue
    i = j + 1 + nz[0]
    if i != j + 1:
      h[[i, j + 1]] = h[[j + 1, i]]
      h[:, [i, j + 1]] = h[:, [j + 1, i]]
    piv = inv[h[j + 1, j]]
    u = h[j + 2:, j] * piv % p
    if u.any():
      h[j + 2:] = (h[j + 2:] - np.outer(u, h[j + 1])) % p
      h[:, j + 1] = (h[:, j + 1] + mm(h[:, j + 2:], u, p)) % p
  # polys[k] holds the charpoly of the leading k x k block, low degree first
  polys = np.zeros((n + 1, n + 1), dtype=np.int64)
  polys[0, 0] = 1
  for m in range(1, n + 1):
    prev = polys[m - 1]
    cur = np.zeros(n + 1, dtype=np.int64)
    cur[1:] = prev[:-1]
    cur = (cur - h[m - 1, m - 1] * prev) % p
    # sum_{i<m} h[i-1, m-1] * prod_{k=i}^{m-1} h[k, k-1] * polys[i-1]
    if m > 1:
      sub = np.ones(m, dtype=np.int64)
      acc = 1
      for i in range(m - 1, 0, -1):
        acc = acc * h[i, i - 1] % p
        sub[i - 1] = acc
      coef = h[0:m - 1, m - 1] * sub[:m - 1] % p
      if coef.any():
        cur = (cur - mm(coef[None, :], polys[0:m - 1], p)[0]) % p
    polys[m] = cur
  return [int(c) for c in polys[n][::-1]]
