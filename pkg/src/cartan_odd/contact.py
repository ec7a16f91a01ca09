"""The odd contact superalgebra m and its special subalgebras sm(κ)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import check_prime
from .dps import (Shape, SuperElement, VectorField, multiply, partial, tables,
                  vf_apply)
from .linalg import Subspace, as_fp, mm, nullspace, rref
from .lsa import LSA, Report


@dataclass(frozen=True)
class ContactShape:
  n: int
  p: int
  kappa: int | None = None

  def __post_init__(self):
    if self.n < 1:
      raise ValueError("n must be positive")
    check_prime(self.p)

  @property
  def dps(self) -> Shape:
    return Shape(self.n, self.n + 1, self.p)


def _contact_shape(f: SuperElement) -> Shape:
  s = f.shape
  if s.m != s.n + 1:
    raise ValueError("contact operators need shape (n, n+1)")
  return s


def _prime(i: int, n: int) -> int:
  return i + n if i <= n else i - n


def _homogeneous(f: SuperElement) -> int:
  q = f.parity()
  if q is None:
    raise ValueError("element is not parity-homogeneous")
  return q


def euler(f: SuperElement) -> SuperElement:
  s = _contact_shape(f)
  return SuperElement(s, {r: c * sum(r[:2 * s.n]) for r, c in f.coeffs.items()})


def euler_field(s: Shape) -> VectorField:
  return VectorField(s, {i: SuperElement.var(s, i) for i in range(1, 2 * s.n + 1)})


def le_field(f: SuperElement) -> VectorField:
  s = _contact_shape(f)
  q = _homogeneous(f)
  comps: dict = {}
  for i in range(1, 2 * s.n + 1):
    d = partial(i, f)
    if s.var_parity(i) and q:
      d = -d
    j = _prime(i, s.n)
    comps[j] = comps.get(j, SuperElement(s)) + d
  return VectorField(s, comps)


def m_field(f: SuperElement) -> VectorField:
  s = _contact_shape(f)
  q = _homogeneous(f)
  t = 2 * s.n + 1
  top = VectorField(s, {t: f.scale(2) - euler(f)})
  d = partial(t, f)
  ev = euler_field(s).lmul(d)
  if not q:
    ev = -ev
  return top - le_field(f) + ev


def contact_bracket(f: SuperElement, g: SuperElement) -> SuperElement:
  s = _contact_shape(f)
  q = _homogeneous(f)
  extra = multiply(partial(2 * s.n + 1, f), g).scale(2 if not q else -2)
  return vf_apply(m_field(f), g) + extra


def laplacian(f: SuperElement) -> SuperElement:
  s = _contact_shape(f)
  out = SuperElement(s)
  for i in range(1, s.n + 1):
    out = out + partial(i, partial(i + s.n, f))
  return out


def div_kappa(f: SuperElement, kappa: int) -> SuperElement:
  s = _contact_shape(f)
  q = _homogeneous(f)
  d = partial(2 * s.n + 1, f)
  inner = laplacian(f) + euler(d) - d.scale(s.n * kappa)
  return inner.scale(-2 if q else 2)


# dense construction

class ContactTables:
  """Coefficient-level matrices for f ↦ M_f, the contact bracket and div_κ."""

  def __init__(self, n: int, p: int):
    self.shape = Shape(n, n + 1, p)
    s = self.shape
    T = tables(s)
    self.tab = T
    N, K = s.size, s.nvars
    t = 2 * n + 1
    idx = s.indices
    self.parity = T.parity
    self.euler_vals = np.array([sum(r[:2 * n]) for r in idx], dtype=np.int64) % p
    self.norms = np.array([s.norm(r) for r in idx], dtype=np.int64)
    sgn_f = np.where(self.parity == 1, p - 1, 1)
    # comps[k][:, a] = component at ∂_{k+1} of M_{x^(a)}
    comps = np.zeros((K, N, N), dtype=np.int64)
    comps[t - 1] = np.diag((2 - self.euler_vals) % p)
    for i in range(1, 2 * n + 1):
      d = T.deriv[i - 1]
      col_sign = sgn_f if s.var_parity(i) else np.ones(N, dtype=np.int64)
      comps[_prime(i, n) - 1] -= d * col_sign[None, :]
      xi = T.rmul_matrix(np.eye(N, dtype=np.int64)[s.position[s.unit(i)]])
      comps[i - 1] -= mm(xi, T.deriv[t - 1], p) * sgn_f[None, :]
    self.comps = comps % p

  @property
  def p(self) -> int:
    return self.shape.p

  def field_components(self, f: np.ndarray) -> np.ndarray:
    """(K, N) components of M_f for a coefficient vector f."""
    return mm(self.comps, as_fp(f, self.p)[:, None], self.p)[..., 0]

  def operator(self, comps: np.ndarray) -> np.ndarray:
    """Matrix of Σ_k c_k ∂_k acting on coefficient column vectors."""
    p = self.p
    N = self.shape.size
    out = np.zeros((N, N), dtype=np.int64)
    for k in range(comps.shape[0]):
      if comps[k].any():
        out = (out + mm(self.tab.lmul_matrix(comps[k]), self.tab.deriv[k], p)) % p
    return out

  def bracket_table(self) -> np.ndarray:
    """sc[a, b] = coefficient vector of {x^(a), x^(b)}, using monomial sparsity."""
    s, p = self.shape, self.p
    N, K = s.size, s.nvars
    t = 2 * s.n + 1
    T = self.tab
    out = np.zeros((N, N, N), dtype=np.int64)
    cols = np.arange(N)
    for k in range(K):
      # M_{x^(a)}(x^(b)) picks up comps[k][c, a] x^(c) * ∂_k x^(b)
      d, sg = T.d_idx[k], T.d_sign[k]
      for c, a in zip(*np.nonzero(self.comps[k])):
        coef = self.comps[k][c, a] * sg * T.prod_coef[c, d] % p
        np.add.at(out, (a, cols, T.prod_idx[c, d]), coef)
    d, sg = T.d_idx[t - 1], T.d_sign[t - 1]
    for a in range(N):
      if sg[a]:
        f = (-2 if self.parity[a] else 2) * sg[a]
        coef = f * T.prod_coef[d[a], cols] % p
        np.add.at(out, (a, cols, T.prod_idx[d[a], cols]), coef)
    return out % p

  def div_matrix(self, kappa: int) -> np.ndarray:
    s, p = self.shape, self.p
    n, N = s.n, s.size
    D = self.tab.deriv
    lap = np.zeros((N, N), dtype=np.int64)
    for i in range(n):
      lap = (lap + mm(D[i], D[i + n], p)) % p
    d = D[2 * n]
    inner = (lap + (self.euler_vals[:, None] - n * kappa) * d) % p
    sgn = np.where(self.parity == 1, p - 2, 2)
    return inner * sgn[None, :] % p

  def solve_field(self):
    """Returns a function mapping (K, N) components to f with M_f equal to them."""
    p = self.p
    K, N = self.comps.shape[:2]
    A = self.comps.transpose(0, 1, 2).reshape(K * N, N)  # column a = flattened M_{x^(a)}
    R, piv, T = rref(A.T, p, transform=True)
    if len(piv) != N:
      raise ArithmeticError("f -> M_f is not injective")

    def solve(comps):
      b = as_fp(comps, p).reshape(-1)
      y = b[piv]
      if not np.array_equal(mm(y[None, :], R, p)[0], b):
        raise ArithmeticError("vector field is not of the form M_f")
      return mm(y[None, :], T, p)[0]
    return solve

  def field_p_power(self, f: np.ndarray) -> np.ndarray:
    """Components of (M_f)^p."""
    c = self.field_components(f)
    op = self.operator(c)
    out = c.T.copy()  # columns = components
    for _ in range(self.p - 1):
      out = mm(op, out, self.p)
    return out.T


@lru_cache(maxsize=8)
def contact_tables(n: int, p: int) -> ContactTables:
  return ContactTables(n, p)


def _label(r) -> str:
  return "M[x^(" + ",".join(str(a) for a in r) + ")]"


def _combo_label(terms) -> str:
  parts = []
  for r, c in terms:
    body = "x^(" + ",".join(str(a) for a in r) + ")"
    parts.append(body if c == 1 else f"{c}*{body}")
  return "M[" + " + ".join(parts) + "]"


def build_m(shape: ContactShape) -> LSA:
  n, p = shape.n, shape.p
  ct = contact_tables(n, p)
  s = ct.shape
  sc = ct.bracket_table()
  solve = ct.solve_field()

  def realization(v):
    return solve(ct.field_p_power(v))

  pmap = {}
  for a, r in enumerate(s.indices):
    if ct.parity[a] == 1:  # M_f is even exactly when f is odd
      pmap[a] = realization(np.eye(s.size, dtype=np.int64)[a])
  return LSA(p, sc, (ct.parity + 1) % 2, ct.norms - 2, [_label(r) for r in s.indices], pmap,
             name=f"m({n},{p})", realization=realization,
             basis_terms=[[(r, 1)] for r in s.indices],
             meta={"kind": "m", "n": n, "p": p, "kappa": None,
                   "ambient_basis": np.eye(s.size, dtype=np.int64)})


def sm_kernel_basis(n: int, p: int, kappa: int) -> np.ndarray:
  """Echelon basis of ker div_κ, assembled from each (degree, parity) piece."""
  ct = contact_tables(n, p)
  s = ct.shape
  div = ct.div_matrix(kappa)
  rows = []
  for nm in sorted(set(ct.norms.tolist())):
    for q in (0, 1):
      cols = [a for a in range(s.size) if ct.norms[a] == nm and ct.parity[a] == q]
      if not cols:
        continue
      ker = nullspace(div[:, cols], p)
      for k in ker:
        v = np.zeros(s.size, dtype=np.int64)
        v[cols] = k
        rows.append(v)
  B = np.array(rows, dtype=np.int64).reshape(-1, s.size)
  order = np.argsort([int(np.nonzero(b)[0][0]) for b in B], kind="stable")
  return B[order]


def build_sm(shape: ContactShape) -> LSA:
  if shape.kappa is None:
    raise ValueError("sm needs kappa")
  n, p = shape.n, shape.p
  kappa = shape.kappa % p
  m = build_m(ContactShape(n, p))
  B = sm_kernel_basis(n, p, kappa)
  sm = m.with_basis(B, name=f"sm({n},{kappa},{p})")
  terms = sm.basis_terms
  sm.labels = [_combo_label(t) for t in terms]
  sm.name = f"sm({n},{kappa},{p})"
  sm.meta = {"kind": "sm", "n": n, "p": p, "kappa": kappa, "ambient_basis": B,
             "parent": m, "parent_basis": B}
  return sm


def build(kind: str, n: int, p: int, kappa: int | None = None) -> LSA:
  if kind == "m":
    return build_m(ContactShape(n, p))
  if kind == "sm":
    return build_sm(ContactShape(n, p, 0 if kappa is None else kappa))
  raise ValueError(f"unknown algebra {kind!r}")


# verification of the contact model

def verify_homomorphism(n: int, p: int) -> Report:
  """[M_f, M_g] = M_{f,g} on every pair of basis monomials.

  A superderivation of O(n,n+1) is fixed by its values on the variables, so
  comparing all components of both sides is exhaustive.
  """
  ct = contact_tables(n, p)
  sc = ct.bracket_table()
  N, K = ct.shape.size, ct.shape.nvars
  comps = ct.comps
  C = comps.transpose(1, 0, 2).reshape(N, K * N)
  # T[a, :, k, b] = M_{x^(a)} applied to component k of M_{x^(b)}
  T = np.empty((N, N, K, N), dtype=np.int64)
  for a in range(N):
    T[a] = mm(ct.operator(comps[:, :, a]), C, p).reshape(N, K, N)
  par = ct.parity
  bad = []
  for a in range(N):
    sign = np.where((par[a] == 0) & (par == 0), -1, 1)
    lhs = (T[a] - sign[None, None, :] * T[:, :, :, a].transpose(1, 2, 0)) % p
    rhs = mm(comps.reshape(K * N, N), sc[a].T, p).reshape(K, N, N).transpose(1, 0, 2)
    for b in np.nonzero((lhs != rhs).any(axis=(0, 1)))[0]:
      bad.append((int(a), int(b)))
  return Report("homomorphism", bad, N * N)


def verify_div_closure(n: int, p: int, kappa: int) -> Report:
  """{f, g} stays in ker div_κ for every pair of kernel basis vectors."""
  ct = contact_tables(n, p)
  B = sm_kernel_basis(n, p, kappa)
  div = ct.div_matrix(kappa)
  bad = [("kernel", int(a)) for a in np.nonzero(mm(div, B.T, p).any(axis=0))[0]]
  sc = ct.bracket_table()
  N = ct.shape.size
  left = mm(B, sc.reshape(N, -1), p).reshape(len(B), N, N)
  for a in range(len(B)):
    img = mm(div, mm(B, left[a], p).T, p)
    bad += [("bracket", a, int(b)) for b in np.nonzero(img.any(axis=0))[0]]
  return Report("divergence closure", bad, len(B) * len(B))


# elements by monomial data

def element(g: LSA, terms) -> np.ndarray:
  """Coordinates in g of M_f for f = Σ c x^(r), given as {r: c} or [(r, c)]."""
  kind = g.meta.get("kind")
  if kind not in ("m", "sm"):
    raise ValueError("algebra is not a contact construction")
  s = Shape(g.meta["n"], g.meta["n"] + 1, g.p)
  items = terms.items() if isinstance(terms, dict) else terms
  f = np.zeros(s.size, dtype=np.int64)
  for r, c in items:
    f[s.position[tuple(r)]] += c
  f %= g.p
  B = g.meta["ambient_basis"]
  if kind == "m":
    return f
  return g.coords_fn(B)(f)[0]


def contains(g: LSA, terms) -> bool:
  try:
    element(g, terms)
    return True
  except ValueError:
    return False


def _eps(s: Shape, *ks) -> tuple:
  e = [0] * s.nvars
  for k in ks:
    e[k - 1] += 1
  return tuple(e)


def cartan_basis(g: LSA) -> np.ndarray:
  kind = g.meta.get("kind")
  n, p = g.meta["n"], g.p
  s = Shape(n, n + 1, p)
  if kind == "m":
    rows = [element(g, {_eps(s, i, i + n): 1}) for i in range(1, n + 1)]
    rows.append(element(g, {_eps(s, 2 * n + 1): 1}))
  elif kind == "sm":
    kap = g.meta["kappa"]
    rows = [element(g, {_eps(s, i, i + n): 1, _eps(s, i + 1, i + 1 + n): -1})
            for i in range(1, n)]
    rows.append(element(g, {_eps(s, 2 * n + 1): 1, _eps(s, 1, 1 + n): n * kap}))
  else:
    raise ValueError("algebra is not a contact construction")
  return np.array(rows, dtype=np.int64).reshape(-1, g.dim)


def cartan_and_roots(g: LSA):
  """Cartan basis and the joint eigenspace decomposition under its adjoint action."""
  H = cartan_basis(g)
  p = g.p
  spaces = {(): np.eye(g.dim, dtype=np.int64)}
  for h in H:
    adh = g.ad(h)
    new = {}
    for w, V in spaces.items():
      img = mm(V, adh.T, p)
      for a in range(p):
        c = nullspace(((img - a * V) % p).T, p)
        if c.shape[0]:
          new[w + (a,)] = rref(mm(c, V, p), p)[0]
    spaces = new
  total = sum(V.shape[0] for V in spaces.values())
  if total != g.dim:
    raise ArithmeticError("Cartan subalgebra does not act diagonalizably")
  roots = {w: Subspace(g.dim, p, V, _reduced=True) for w, V in sorted(spaces.items())}
  return H, roots


def triangular_split(g: LSA):
  """(n^-, cartan, n^+) of the degree-zero piece, as row bases in g-coordinates."""
  kind = g.meta.get("kind")
  if kind not in ("m", "sm"):
    raise ValueError("algebra is not a contact construction")
  n, p = g.meta["n"], g.p
  s = Shape(n, n + 1, p)
  lower, upper = [], []
  for i in range(1, n + 1):
    for j in range(1, n + 1):
      if j < i:
        lower.append(element(g, {_eps(s, i, j + n): 1}))
      elif i < j:
        upper.append(element(g, {_eps(s, i, j + n): 1}))
  for k in range(1, n + 1):
    for l in range(k + 1, n + 1):
      lower.append(element(g, {_eps(s, k + n, l + n): 1}))
  for k in range(1, n + 1):
    for l in range(k, n + 1):
      upper.append(element(g, {_eps(s, k, l): 1}))
  z = lambda rows: np.array(rows, dtype=np.int64).reshape(-1, g.dim)
  return z(lower), cartan_basis(g), z(upper)


def golden_n1p5(kappa: int = 0):
  """Graded bases of m(1,5) and sm(1,κ,5) in monomial form, by degree."""
  n, p = 1, 5
  nk = n * kappa % p
  m_table = {
    -2: [{(0, 0, 0): 1}],
    -1: [{(1, 0, 0): 1}, {(0, 1, 0): 1}],
    0: [{(2, 0, 0): 1}, {(1, 1, 0): 1}, {(0, 0, 1): 1}],
    1: [{(3, 0, 0): 1}, {(2, 1, 0): 1}, {(1, 0, 1): 1}, {(0, 1, 1): 1}],
    2: [{(4, 0, 0): 1}, {(3, 1, 0): 1}, {(2, 0, 1): 1}, {(1, 1, 1): 1}],
    3: [{(4, 1, 0): 1}, {(3, 0, 1): 1}, {(2, 1, 1): 1}],
    4: [{(4, 0, 1): 1}, {(3, 1, 1): 1}],
    5: [{(4, 1, 1): 1}],
  }
  sm_table = {
    -2: [{(0, 0, 0): 1}],
    -1: [{(1, 0, 0): 1}, {(0, 1, 0): 1}],
    0: [{(2, 0, 0): 1}, {(0, 0, 1): 1, (1, 1, 0): nk}],
    1: [{(3, 0, 0): 1}, {(1, 0, 1): 1, (2, 1, 0): (nk - 1) % p}],
    2: [{(4, 0, 0): 1}, {(2, 0, 1): 1, (3, 1, 0): (nk - 2) % p}],
    3: [{(3, 0, 1): 1, (4, 1, 0): (nk - 3) % p}],
  }
  return m_table, sm_table
