"""p-characters and finite-dimensional modules given by action matrices."""

from __future__ import annotations

import numpy as np

from ..linalg import Subspace, as_fp, mm, rref
from ..lsa import LSA, GradingAut, Report


class PChar:
  """A functional on the even part of g, extended by zero on the odd part."""

  def __init__(self, algebra: LSA, values):
    v = as_fp(values, algebra.p).reshape(-1)
    if v.shape != (algebra.dim,):
      raise ValueError("character length does not match algebra dimension")
    if np.any(v[algebra.parity == 1]):
      raise ValueError("a p-character vanishes on the odd part")
    self.algebra = algebra
    self.values = v
    self.values.setflags(write=False)

  @classmethod
  def zero(cls, g: LSA) -> "PChar":
    return cls(g, np.zeros(g.dim, dtype=np.int64))

  @classmethod
  def from_dict(cls, g: LSA, values: dict) -> "PChar":
    v = np.zeros(g.dim, dtype=np.int64)
    for i, c in values.items():
      v[i] = c
    return cls(g, v)

  def __call__(self, x) -> int:
    return int(np.dot(self.values, as_fp(x, self.algebra.p)) % self.algebra.p)

  def __eq__(self, other):
    return (isinstance(other, PChar) and other.algebra is self.algebra
            and np.array_equal(other.values, self.values))

  def __repr__(self):
    nz = {int(i): int(self.values[i]) for i in np.nonzero(self.values)[0]}
    return f"PChar({self.algebra.name}, {nz})"

  def on(self, sub: LSA) -> np.ndarray:
    """Values on the basis of a subalgebra built by `LSA.with_basis`/`LSA.sub`."""
    V = sub.meta.get("parent_basis")
    if V is None:
      raise ValueError("subalgebra does not record its embedding")
    return mm(V, self.values[:, None], self.algebra.p)[:, 0]

  def restrict(self, sub: LSA) -> "PChar":
    return PChar(sub, self.on(sub))

  def to_list(self) -> list[int]:
    return [int(a) for a in self.values]


def _values(chi, g: LSA) -> np.ndarray:
  if isinstance(chi, PChar):
    return chi.values
  return as_fp(chi, g.p).reshape(-1)


def height(g: LSA, chi) -> int:
  """min{i : chi(g^i) = 0} for the degree filtration.

  Accepts a PChar or a raw functional, so functionals supported on odd
  elements can be measured too.
  """
  v = _values(chi, g)
  nz = np.nonzero(v)[0]
  if len(nz) == 0:
    return int(g.degree.min())
  return int(g.degree[nz].max()) + 1


class GModule:
  """Module over an LSA: action[i] is the matrix of basis element i on column vectors."""

  def __init__(self, algebra: LSA, action, parity=None, name: str = ""):
    p = algebra.p
    A = as_fp(action, p)
    if A.ndim != 3 or A.shape[0] != algebra.dim or A.shape[1] != A.shape[2]:
      raise ValueError("action must have shape (dim g, d, d)")
    self.algebra = algebra
    self.p = p
    self._action = A
    self.dim = A.shape[1]
    self.parity = (np.zeros(self.dim, dtype=np.int64) if parity is None
                   else np.asarray(parity, dtype=np.int64) % 2)
    if self.parity.shape != (self.dim,):
      raise ValueError("parity length does not match module dimension")
    self.name = name

  def __repr__(self):
    return f"GModule({self.name or 'anonymous'}, dim={self.dim}, over={self.algebra.name})"

  @property
  def action(self) -> np.ndarray:
    return self._action

  def matrix(self, i: int) -> np.ndarray:
    return self._action[i]

  def act(self, x) -> np.ndarray:
    """Matrix of an arbitrary algebra vector."""
    x = as_fp(x, self.p)
    out = np.zeros((self.dim, self.dim), dtype=np.int64)
    for i in np.nonzero(x)[0]:
      out += int(x[i]) * self.matrix(int(i))
    return out % self.p

  def apply(self, i: int, V) -> np.ndarray:
    """Rows of V acted on by basis element i (returns rows)."""
    return mm(as_fp(V, self.p), self.matrix(i).T, self.p)

  def apply_vec(self, x, V) -> np.ndarray:
    x = as_fp(x, self.p)
    V = as_fp(np.atleast_2d(V), self.p)
    out = np.zeros_like(V)
    for i in np.nonzero(x)[0]:
      out = (out + int(x[i]) * self.apply(int(i), V)) % self.p
    return out

  def generators(self, indices=None) -> list[np.ndarray]:
    idx = range(self.algebra.dim) if indices is None else indices
    return [self.matrix(int(i)) for i in idx]


def trivial_module(g: LSA) -> GModule:
  return GModule(g, np.zeros((g.dim, 1, 1), dtype=np.int64), name="trivial")


def direct_sum(*mods: GModule) -> GModule:
  g = mods[0].algebra
  d = sum(M.dim for M in mods)
  A = np.zeros((g.dim, d, d), dtype=np.int64)
  o = 0
  for M in mods:
    A[:, o:o + M.dim, o:o + M.dim] = M.action
    o += M.dim
  return GModule(g, A, np.concatenate([M.parity for M in mods]), name="sum")


def submodule(M: GModule, S: Subspace) -> GModule:
  """Action on an invariant subspace, in the echelon basis of S."""
  B = S.basis
  p = M.p
  R, piv, T = rref(B, p, transform=True)
  img = np.stack([mm(B, M.matrix(i).T, p) for i in range(M.algebra.dim)])  # rows x·b
  coords = np.stack([mm(img[i][:, piv], T, p) for i in range(M.algebra.dim)])
  for i in range(M.algebra.dim):
    if not np.array_equal(mm(coords[i], B, p), img[i]):
      raise ValueError("subspace is not invariant")
  # coords[i][a] = coordinates of x_i b_a; as a matrix on column vectors take the transpose
  return GModule(M.algebra, coords.transpose(0, 2, 1), _subspace_parity(M, B), name="sub")


def quotient(M: GModule, S: Subspace) -> GModule:
  """Action on M/S in the basis of standard vectors outside the pivots of S."""
  p = M.p
  comp = S.complement_indices()
  A = M.action
  out = np.zeros((M.algebra.dim, len(comp), len(comp)), dtype=np.int64)
  for i in range(M.algebra.dim):
    cols = A[i][:, comp].T  # images of the complement basis, as rows
    red = np.stack([S.reduce(c) for c in cols]) if len(comp) else cols
    out[i] = red[:, comp].T
  return GModule(M.algebra, out % p, M.parity[comp], name="quotient")


def _subspace_parity(M: GModule, B: np.ndarray) -> np.ndarray:
  par = []
  for row in B:
    ps = set(M.parity[np.nonzero(row)[0]].tolist())
    par.append(ps.pop() if len(ps) == 1 else 0)
  return np.array(par, dtype=np.int64)


# verification

def _bracket_pairs(g: LSA, pairs):
  if pairs is not None:
    return list(pairs)
  return [(i, j) for i in range(g.dim) for j in range(i, g.dim)]


def verify_module(M: GModule, chi, pairs=None, exact_limit: int = 128, vectors: int = 8,
                  seed: int = 0) -> Report:
  """Bracket law on basis pairs and the reduced p-th power relation on even basis elements.

  Exact matrix identities when dim M ≤ exact_limit; above that each identity
  is tested on `vectors` seeded random vectors (a wrong identity survives
  with probability at most p^-vectors).
  """
  g, p = M.algebra, M.p
  chi_v = _values(chi, g)
  if chi_v.shape != (g.dim,):
    raise ValueError("character does not belong to the acting algebra")
  d = M.dim
  if d <= exact_limit:
    R = np.eye(d, dtype=np.int64)
  else:
    R = np.random.default_rng(seed).integers(0, p, size=(vectors, d))
  images = [M.apply(i, R) for i in range(g.dim)]
  violations = []
  checked = 0
  for i, j in _bracket_pairs(g, pairs):
    s = -1 if g.parity[i] and g.parity[j] else 1
    lhs = (M.apply(i, images[j]) - s * M.apply(j, images[i])) % p
    rhs = np.zeros_like(lhs)
    for k in np.nonzero(g.sc[i, j])[0]:
      rhs = (rhs + int(g.sc[i, j, k]) * images[k]) % p
    checked += 1
    if not np.array_equal(lhs, rhs):
      violations.append(("bracket", int(i), int(j)))
  for i in g.even_indices():
    V = R
    for _ in range(p):
      V = M.apply(i, V)
    target = (M.apply_vec(g.pmap[i], R) + pow(int(chi_v[i]), p, p) * R) % p
    checked += 1
    if not np.array_equal(V, target):
      violations.append(("p-power", int(i)))
  return Report("module", violations, checked)


# changes of algebra

def transfer(M: GModule, target: LSA) -> GModule:
  """The same module over another basis of the same subalgebra of a common parent."""
  src = M.algebra
  V1, V2 = src.meta.get("parent_basis"), target.meta.get("parent_basis")
  if V1 is None or V2 is None or src.meta.get("parent") is not target.meta.get("parent"):
    raise ValueError("algebras are not bases of a common parent")
  T = src.coords_fn(V1)(V2)  # target basis in source coordinates
  A = M.action.reshape(src.dim, -1)
  return GModule(target, mm(T, A, M.p).reshape(target.dim, M.dim, M.dim), M.parity,
                 name=M.name)


def restrict_module(M: GModule, sub: LSA) -> GModule:
  """Restriction along a subalgebra whose parent is the acting algebra."""
  if sub.meta.get("parent") is not M.algebra:
    raise ValueError("subalgebra does not sit inside the acting algebra")
  V = sub.meta["parent_basis"]
  A = M.action.reshape(M.algebra.dim, -1)
  return GModule(sub, mm(V, A, M.p).reshape(sub.dim, M.dim, M.dim), M.parity, name=M.name)


def extend_trivially(M: GModule, g: LSA, chi=None) -> GModule:
  """Extend a g_[0]-module to g^0 with g^1 acting by zero.

  M must act over `degree_zero(g)`; the result acts over `nonnegative_part(g)`.
  """
  if chi is not None and height(g, chi) > 1:
    raise ValueError("trivial extension needs ht(chi) <= 1")
  g0 = degree_zero(g)
  if M.algebra is not g0:
    M = transfer(M, g0)
  gp = nonnegative_part(g)
  A = np.zeros((gp.dim, M.dim, M.dim), dtype=np.int64)
  pos = {b: a for a, b in enumerate(gp.meta["indices"])}
  for a, b in enumerate(g0.meta["indices"]):
    A[pos[b]] = M.action[a]
  return GModule(gp, A, M.parity, name=f"{M.name}^ext")


def twist_module(M: GModule, phi: GradingAut) -> GModule:
  """M^Φ with x·m = (Φ^{-1}x)m; Φ is diagonal on the graded basis."""
  g = M.algebra
  f = phi.factors(g, inverse=True)
  return GModule(g, M.action * f[:, None, None] % M.p, M.parity, name=f"{M.name}^phi{phi.c}")


# standard subalgebras, cached on the parent's meta

def _indexed_sub(g: LSA, key: str, idx: list[int]) -> LSA:
  cache = g.__dict__.setdefault("_subcache", {})
  if key not in cache:
    s = g.sub(idx, name=f"{g.name}{key}")
    s.meta["indices"] = list(idx)
    cache[key] = s
  return cache[key]


def degree_zero(g: LSA) -> LSA:
  return _indexed_sub(g, "_[0]", g.piece(0))


def nonnegative_part(g: LSA) -> LSA:
  return _indexed_sub(g, "^0", [i for i in range(g.dim) if g.degree[i] >= 0])


def filtration_sub(g: LSA, k: int) -> LSA:
  return _indexed_sub(g, f"^{k}", [i for i in range(g.dim) if g.degree[i] >= k])
