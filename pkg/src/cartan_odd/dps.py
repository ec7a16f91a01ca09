"""Divided-power superalgebra O(n, m) and its distinguished superderivations.

Variables are ordered x_1..x_n (even) then x_{n+1}..x_{n+m} (odd); directions
are numbered from 1 as in the usual notation.  A basis monomial x^(r) is the
product of the even divided powers followed by the odd variables in
increasing order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping

import numpy as np

from .arith import check_prime, tuple_binom

MultiIndex = tuple


@dataclass(frozen=True)
class Shape:
  n: int
  m: int
  p: int

  def __post_init__(self):
    if self.n < 1 or self.m < 1:
      raise ValueError("need n >= 1 and m >= 1")
    check_prime(self.p)

  @property
  def nvars(self) -> int:
    return self.n + self.m

  @cached_property
  def indices(self) -> list:
    ranges = [range(self.p)] * self.n + [range(2)] * self.m
    return [tuple(r) for r in itertools.product(*ranges)]

  @cached_property
  def position(self) -> dict:
    return {r: k for k, r in enumerate(self.indices)}

  @property
  def size(self) -> int:
    return self.p ** self.n * 2 ** self.m

  def valid(self, r) -> bool:
    if len(r) != self.nvars:
      return False
    return (all(0 <= a < self.p for a in r[:self.n])
            and all(a in (0, 1) for a in r[self.n:]))

  def parity(self, r) -> int:
    return sum(r[self.n:]) % 2

  def var_parity(self, k: int) -> int:
    return 0 if k <= self.n else 1

  def unit(self, k: int) -> tuple:
    e = [0] * self.nvars
    e[k - 1] = 1
    return tuple(e)

  def norm(self, r) -> int:
    """Contact weight: every variable counts 1 except the last, which counts 2."""
    if self.m != self.n + 1:
      raise ValueError("norm is defined for m = n + 1")
    return sum(r[:-1]) + 2 * r[-1]


def dp_product(r, s, shape: Shape):
  """Product x^(r) x^(s) = coeff * x^(r+s); coeff is 0 on truncation."""
  if len(r) != shape.nvars or len(s) != shape.nvars:
    raise ValueError("multi-index does not match shape")
  n, p = shape.n, shape.p
  t = tuple(a + b for a, b in zip(r, s))
  for i in range(n, shape.nvars):
    if t[i] > 1:
      return 0, t
  c = tuple_binom(r, s, n, p)
  if not c:
    return 0, t
  sign = 0
  for j in range(n, shape.nvars):
    if r[j]:
      sign += sum(s[n:j])
  if sign % 2:
    c = (-c) % p
  return c, t


class SuperElement:
  """Element of O(n, m) as a sparse map from multi-index to residue."""

  __slots__ = ("shape", "coeffs")

  def __init__(self, shape: Shape, coeffs: Mapping | None = None):
    self.shape = shape
    p = shape.p
    clean = {}
    if coeffs:
      for r, c in coeffs.items():
        r = tuple(int(a) for a in r)
        c = int(c) % p
        if not shape.valid(r):
          raise ValueError(f"invalid multi-index {r} for {shape}")
        if c:
          clean[r] = c
    self.coeffs = dict(sorted(clean.items()))

  @classmethod
  def monomial(cls, shape: Shape, r, c: int = 1) -> "SuperElement":
    return cls(shape, {tuple(r): c})

  @classmethod
  def one(cls, shape: Shape) -> "SuperElement":
    return cls(shape, {(0,) * shape.nvars: 1})

  @classmethod
  def var(cls, shape: Shape, k: int) -> "SuperElement":
    return cls(shape, {shape.unit(k): 1})

  @classmethod
  def from_vector(cls, shape: Shape, v) -> "SuperElement":
    return cls(shape, {shape.indices[i]: int(c) for i, c in enumerate(v) if c})

  def to_vector(self) -> np.ndarray:
    v = np.zeros(self.shape.size, dtype=np.int64)
    for r, c in self.coeffs.items():
      v[self.shape.position[r]] = c
    return v

  def __iter__(self):
    return iter(self.coeffs.items())

  def __bool__(self):
    return bool(self.coeffs)

  def __eq__(self, other):
    if isinstance(other, int) and other == 0:
      return not self.coeffs
    return (isinstance(other, SuperElement) and self.shape == other.shape
            and self.coeffs == other.coeffs)

  def __hash__(self):
    return hash((self.shape, tuple(self.coeffs.items())))

  def _check(self, other):
    if not isinstance(other, SuperElement) or other.shape != self.shape:
      raise ValueError("shape mismatch")

  def __add__(self, other):
    self._check(other)
    out = dict(self.coeffs)
    for r, c in other.coeffs.items():
      out[r] = out.get(r, 0) + c
    return SuperElement(self.shape, out)

  def __neg__(self):
    return SuperElement(self.shape, {r: -c for r, c in self.coeffs.items()})

  def __sub__(self, other):
    return self + (-other)

  def scale(self, a: int) -> "SuperElement":
    return SuperElement(self.shape, {r: a * c for r, c in self.coeffs.items()})

  def __mul__(self, other):
    if isinstance(other, (int, np.integer)):
      return self.scale(int(other))
    return multiply(self, other)

  def __rmul__(self, other):
    if isinstance(other, (int, np.integer)):
      return self.scale(int(other))
    return NotImplemented

  def parity(self) -> int | None:
    """Common parity of the terms, 0 for the zero element, None if mixed."""
    ps = {self.shape.parity(r) for r in self.coeffs}
    if len(ps) > 1:
      return None
    return ps.pop() if ps else 0

  def homogeneous_parts(self) -> dict:
    parts: dict = {}
    for r, c in self.coeffs.items():
      parts.setdefault(self.shape.parity(r), {})[r] = c
    return {q: SuperElement(self.shape, d) for q, d in sorted(parts.items())}

  def __repr__(self):
    if not self.coeffs:
      return "0"
    return " + ".join(f"{c}*x{list(r)}" for r, c in self.coeffs.items())


def _parity_of(f: SuperElement) -> int:
  q = f.parity()
  if q is None:
    raise ValueError("element is not parity-homogeneous")
  return q


def multiply(f: SuperElement, g: SuperElement) -> SuperElement:
  f._check(g)
  out: dict = {}
  p = f.shape.p
  for r, a in f.coeffs.items():
    for s, b in g.coeffs.items():
      c, t = dp_product(r, s, f.shape)
      if c:
        out[t] = (out.get(t, 0) + a * b * c) % p
  return SuperElement(f.shape, out)


def partial_monomial(i: int, r, shape: Shape):
  """∂_i x^(r) = sign * x^(r - e_i); returns (sign, index) or (0, None)."""
  if not 1 <= i <= shape.nvars:
    raise ValueError(f"direction {i} out of range")
  k = i - 1
  if r[k] == 0:
    return 0, None
  t = list(r)
  t[k] -= 1
  sign = 1
  if k >= shape.n and sum(r[shape.n:k]) % 2:
    sign = shape.p - 1
  return sign, tuple(t)


def partial(i: int, f: SuperElement) -> SuperElement:
  out: dict = {}
  for r, c in f.coeffs.items():
    s, t = partial_monomial(i, r, f.shape)
    if s:
      out[t] = out.get(t, 0) + s * c
  return SuperElement(f.shape, out)


class VectorField:
  """Σ_k f_k ∂_k with components stored by direction."""

  __slots__ = ("shape", "components")

  def __init__(self, shape: Shape, components: Mapping | None = None):
    self.shape = shape
    comps = {}
    for k, f in (components or {}).items():
      if not 1 <= k <= shape.nvars:
        raise ValueError(f"direction {k} out of range")
      if f.shape != shape:
        raise ValueError("shape mismatch")
      if f:
        comps[k] = f
    self.components = dict(sorted(comps.items()))

  @classmethod
  def partial_field(cls, shape: Shape, k: int) -> "VectorField":
    return cls(shape, {k: SuperElement.one(shape)})

  def __getitem__(self, k: int) -> SuperElement:
    return self.components.get(k, SuperElement(self.shape))

  def __bool__(self):
    return bool(self.components)

  def __eq__(self, other):
    if isinstance(other, int) and other == 0:
      return not self.components
    return (isinstance(other, VectorField) and other.shape == self.shape
            and self.components == other.components)

  def __add__(self, other):
    keys = sorted(set(self.components) | set(other.components))
    return VectorField(self.shape, {k: self[k] + other[k] for k in keys})

  def __neg__(self):
    return VectorField(self.shape, {k: -f for k, f in self.components.items()})

  def __sub__(self, other):
    return self + (-other)

  def scale(self, a: int) -> "VectorField":
    return VectorField(self.shape, {k: f.scale(a) for k, f in self.components.items()})

  def lmul(self, g: SuperElement) -> "VectorField":
    """The field g·D = Σ_k g f_k ∂_k."""
    return VectorField(self.shape, {k: multiply(g, f) for k, f in self.components.items()})

  def parity(self) -> int | None:
    ps = set()
    for k, f in self.components.items():
      for q, _ in f.homogeneous_parts().items():
        ps.add((q + self.shape.var_parity(k)) % 2)
    if len(ps) > 1:
      return None
    return ps.pop() if ps else 0

  def __call__(self, f: SuperElement) -> SuperElement:
    return vf_apply(self, f)

  def __repr__(self):
    if not self.components:
      return "0"
    return " + ".join(f"({f})d{k}" for k, f in self.components.items())


def vf_apply(D: VectorField, f: SuperElement) -> SuperElement:
  if D.shape != f.shape:
    raise ValueError("shape mismatch")
  out = SuperElement(f.shape)
  for k, fk in D.components.items():
    out = out + multiply(fk, partial(k, f))
  return out


def _field_parity(D: VectorField) -> int:
  q = D.parity()
  if q is None:
    raise ValueError("vector field is not parity-homogeneous")
  return q


def vf_bracket(D1: VectorField, D2: VectorField) -> VectorField:
  if D1.shape != D2.shape:
    raise ValueError("shape mismatch")
  sign = -1 if _field_parity(D1) * _field_parity(D2) else 1
  out = {}
  for k in range(1, D1.shape.nvars + 1):
    out[k] = vf_apply(D1, D2[k]) - vf_apply(D2, D1[k]).scale(sign)
  return VectorField(D1.shape, out)


def p_power(D: VectorField) -> VectorField:
  if _field_parity(D) != 0:
    raise ValueError("p-th power is only defined for even fields")
  out = {}
  for k in range(1, D.shape.nvars + 1):
    f = D[k]
    for _ in range(D.shape.p - 1):
      if not f:
        break
      f = vf_apply(D, f)
    out[k] = f
  return VectorField(D.shape, out)


class Tables:
  """Dense tables for O(n, m): multiplication tensor and derivative matrices.

  mult[a, b] is the coefficient vector of x^(a) x^(b); deriv[k] is the matrix
  of ∂_{k+1} acting on coefficient column vectors.
  """

  def __init__(self, shape: Shape):
    self.shape = shape
    N = shape.size
    idx = shape.indices
    pos = shape.position
    self.parity = np.array([shape.parity(r) for r in idx], dtype=np.int64)
    mult = np.zeros((N, N, N), dtype=np.int64)
    prod_idx = np.zeros((N, N), dtype=np.int64)
    prod_coef = np.zeros((N, N), dtype=np.int64)
    for a, r in enumerate(idx):
      for b, s in enumerate(idx):
        c, t = dp_product(r, s, shape)
        if c:
          mult[a, b, pos[t]] = c
          prod_idx[a, b] = pos[t]
          prod_coef[a, b] = c
    self.mult = mult
    # monomial products: x^(a) x^(b) = prod_coef[a, b] * x^(prod_idx[a, b])
    self.prod_idx = prod_idx
    self.prod_coef = prod_coef
    deriv = np.zeros((shape.nvars, N, N), dtype=np.int64)
    d_idx = np.zeros((shape.nvars, N), dtype=np.int64)
    d_sign = np.zeros((shape.nvars, N), dtype=np.int64)
    for k in range(shape.nvars):
      for a, r in enumerate(idx):
        s, t = partial_monomial(k + 1, r, shape)
        if s:
          deriv[k, pos[t], a] = s
          d_idx[k, a] = pos[t]
          d_sign[k, a] = s
    self.deriv = deriv
    # ∂_{k+1} x^(a) = d_sign[k, a] * x^(d_idx[k, a])
    self.d_idx = d_idx
    self.d_sign = d_sign

  def lmul_matrix(self, f: np.ndarray) -> np.ndarray:
    """Matrix of g ↦ f·g on coefficient column vectors."""
    N, p = self.shape.size, self.shape.p
    out = np.zeros((N, N), dtype=np.int64)
    cols = np.arange(N)
    for a in np.nonzero(f)[0]:
      np.add.at(out, (self.prod_idx[a], cols), f[a] * self.prod_coef[a])
    return out % p

  def rmul_matrix(self, f: np.ndarray) -> np.ndarray:
    """Matrix of g ↦ g·f on coefficient column vectors."""
    N, p = self.shape.size, self.shape.p
    out = np.zeros((N, N), dtype=np.int64)
    cols = np.arange(N)
    for a in np.nonzero(f)[0]:
      np.add.at(out, (self.prod_idx[:, a], cols), f[a] * self.prod_coef[:, a])
    return out % p


@lru_cache(maxsize=8)
def tables(shape: Shape) -> Tables:
  return Tables(shape)
