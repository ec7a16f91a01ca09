"""Prime field scalars and binomial coefficients modulo p."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


def is_prime(p: int) -> bool:
  if p < 2:
    return False
  d = 2
  while d * d <= p:
    if p % d == 0:
      return False
    d += 1
  return True


@dataclass(frozen=True)
class PrimeField:
  p: int

  def __post_init__(self):
    if not isinstance(self.p, int) or self.p < 5 or not is_prime(self.p):
      raise ValueError(f"p must be a prime >= 5, got {self.p!r}")

  def __call__(self, a: int) -> int:
    return a % self.p

  def inv(self, a: int) -> int:
    return fp_inv(a, self.p)


def check_prime(p: int) -> int:
  PrimeField(p)
  return p


def fp_inv(a: int, p: int) -> int:
  a %= p
  if a == 0:
    raise ZeroDivisionError(f"0 has no inverse mod {p}")
  return pow(a, p - 2, p)


def lucas_binom(a: int, b: int, p: int) -> int:
  """binomial(a, b) mod p via base-p digits."""
  if b < 0 or a < 0 or b > a:
    return 0
  out = 1
  while a or b:
    ad, bd = a % p, b % p
    if bd > ad:
      return 0
    c = 1
    for k in range(bd):
      c = c * (ad - k) // (k + 1)
    out = out * c % p
    a //= p
    b //= p
  return out


def tuple_binom(r: Sequence[int], s: Sequence[int], n: int, p: int) -> int:
  """Product of binomial(r_i + s_i, r_i) over the n even slots."""
  if len(r) != len(s):
    raise ValueError("multi-index length mismatch")
  out = 1
  for i in range(n):
    out = out * lucas_binom(r[i] + s[i], r[i], p) % p
    if not out:
      return 0
  return out
