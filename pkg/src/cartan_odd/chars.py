"""p-characters: characteristic matrices, rank, the nonsingular and singular
examples, Δ-invertibility, regular semisimplicity and seeded witness search."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .contact import _eps, element, triangular_split
from .dps import Shape
from .linalg import Subspace, inverse, mm, nullspace, rank, rref
from .lsa import LSA, GradingAut, coadjoint_apply
from .repn.modules import PChar, _values, height


# characteristic matrix

def _unit_index(g: LSA, r) -> int:
  v = element(g, {tuple(r): 1})
  nz = np.nonzero(v)[0]
  if len(nz) != 1 or v[nz[0]] != 1:
    raise ValueError("element is not a basis vector")
  return int(nz[0])


def negative_generators(g: LSA) -> tuple[list[int], int]:
  """Indices of M_{x_1},…,M_{x_2n} and of M_1."""
  n = g.meta["n"]
  s = Shape(n, n + 1, g.p)
  xs = [_unit_index(g, s.unit(i)) for i in range(1, 2 * n + 1)]
  return xs, _unit_index(g, (0,) * s.nvars)


@dataclass
class CharMatrix:
  A1: np.ndarray  # χ([f_a, M_{x_b}]), f_a ∈ g_[h], b = 1..2n
  A2: np.ndarray  # χ([g_c, M_1]), g_c ∈ g_[h+1], one column
  h: int
  rows1: list
  rows2: list
  rank: int

  def to_dict(self) -> dict:
    return {"h": self.h, "rank": self.rank, "A1": self.A1.tolist(), "A2": self.A2.tolist()}


def _pairing(g: LSA, chi_v: np.ndarray, rows, cols) -> np.ndarray:
  """Matrix χ([e_a, e_b]) for basis indices a ∈ rows, b ∈ cols."""
  if not len(rows) or not len(cols):
    return np.zeros((len(rows), len(cols)), dtype=np.int64)
  sub = g.sc[np.ix_(list(rows), list(cols))]
  return mm(sub.reshape(-1, g.dim), chi_v[:, None], g.p).reshape(len(rows), len(cols))


def char_matrix(g: LSA, chi) -> CharMatrix:
  chi_v = _values(chi, g)
  h = height(g, chi_v)
  if h < 2:
    raise ValueError(f"characteristic matrix needs ht(χ) ≥ 2, got {h}")
  F, G = g.piece(h), g.piece(h + 1)
  if not F or not G:
    raise ValueError(f"graded piece {h if not F else h + 1} is empty")
  xs, one = negative_generators(g)
  A1, A2 = _pairing(g, chi_v, F, xs), _pairing(g, chi_v, G, [one])
  return CharMatrix(A1, A2, h, F, G, rank(A1, g.p) + rank(A2, g.p))


def rank_chi(g: LSA, chi) -> int:
  return char_matrix(g, chi).rank


def is_nonsingular(g: LSA, chi) -> bool:
  return rank_chi(g, chi) == 2 * g.meta["n"] + 1


# examples

def _monomial(g: LSA, i: int):
  terms = g.basis_terms[i]
  return tuple(terms[0][0]) if len(terms) == 1 else None


def build_example_nonsingular(g: LSA, h: int) -> PChar:
  """χ on g_[h−1] with every set Σ_k nonempty, validated nonsingular."""
  n, p = g.meta["n"], g.p
  if not 2 <= h < p - 2:
    raise ValueError(f"the recipe needs 2 ≤ h < p−2, got h={h}, p={p}")
  for d in (h - 1, h, h + 1):
    if not g.piece(d):
      raise ValueError(f"graded piece {d} is empty")
  cand = [i for i in g.piece(h - 1) if g.parity[i] == 0 and _monomial(g, i) is not None]

  def covers(i, k):
    s = _monomial(g, i)
    if k <= 2 * n - 1:
      return all(s[j - 1] == 0 for j in range(n + 1, k + 1))
    return s[k - 1] == 0

  ks = list(range(n + 1, 2 * n + 2))
  for size in range(1, len(ks) + 1):
    for combo in itertools.combinations(cand, size):
      if all(any(covers(i, k) for i in combo) for k in ks):
        chi = PChar.from_dict(g, {i: 1 for i in combo})
        if height(g, chi) == h and is_nonsingular(g, chi):
          return chi
  raise ValueError(f"no support realizes every Σ_k at n={n}, p={p}, h={h}")


SINGULAR_READINGS = (
  ("literal: r_2n = p-1", lambda r, n, p: r[2 * n - 1] == p - 1),
  ("odd slot 2n set: r_2n = 1", lambda r, n, p: r[2 * n - 1] == 1),
  ("even slot n: r_n = p-1", lambda r, n, p: r[n - 1] == p - 1),
  # {f, x_n} = ±∂_2n f ± x_n ∂_2n+1 f: the first term clears slot 2n and the
  # second raises r_n, so this support kills the column of M_{x_n}
  ("r_2n = 1 and r_n = 0", lambda r, n, p: r[2 * n - 1] == 1 and r[n - 1] == 0),
)


def build_example_singular(g: LSA) -> PChar:
  """h = p−2; χ(M_{x^(r)}) = δ on ‖r‖ = h+1, zero elsewhere; validated singular.

  The literal condition r_2n = p−1 cannot hold because slot 2n carries an
  odd variable; the readings in SINGULAR_READINGS are tried in order and
  the one used is stored in `chi.reading`, the rejected ones in `chi.tried`.
  """
  n, p = g.meta["n"], g.p
  h = p - 2
  tried = []
  for name, cond in SINGULAR_READINGS:
    vals = {}
    for i in g.piece(h - 1):
      s = _monomial(g, i)
      if s is not None and g.parity[i] == 0 and cond(s, n, p):
        vals[i] = 1
    if not vals:
      tried.append(f"{name}: empty support")
      continue
    chi = PChar.from_dict(g, vals)
    if height(g, chi) != h:
      tried.append(f"{name}: height {height(g, chi)}")
      continue
    cm = char_matrix(g, chi)
    col_n = cm.A1[:, n - 1]
    if cm.rank == 2 * n + 1 or col_n.any():
      tried.append(f"{name}: rank {cm.rank}, column n zero: {not col_n.any()}")
      continue
    chi.reading = name
    chi.tried = tried
    return chi
  raise ValueError("singular example unrealizable: " + "; ".join(tried))


# Δ-invertibility

@dataclass
class DeltaResult:
  verdict: str  # "yes" | "no" | "inconclusive"
  witness: dict | None = None
  log: list = field(default_factory=list)

  def to_dict(self) -> dict:
    return {"verdict": self.verdict, "witness": self.witness, "log": self.log}


def delta_max(g: LSA, chi_v: np.ndarray, d: int) -> np.ndarray:
  """Largest g_[0]-submodule of g_[d] on which χ vanishes (rows in g-coordinates)."""
  p = g.p
  P = g.piece(d)
  Z = g.piece(0)
  # ad x restricted to g_[d], acting on coordinates over P
  ads = [g.sc[x][np.ix_(P, P)].T for x in Z]  # column v ↦ [x, v]
  start = chi_v[P][None, :]
  space = Subspace(len(P), p)
  frontier = space.extend(start)
  while frontier.shape[0]:
    frontier = space.extend(np.vstack([mm(frontier, A, p) for A in ads]))
  D = space.annihilator().basis
  out = np.zeros((D.shape[0], g.dim), dtype=np.int64)
  out[:, P] = D
  return out


def _homogeneous_basis(g: LSA, D: np.ndarray) -> np.ndarray | None:
  p = g.p
  parts = []
  for q in (0, 1):
    mask = (g.parity == q)
    # D ∩ (parity-q coordinates)
    other = np.nonzero(~mask)[0]
    if D.shape[0] == 0:
      continue
    c = nullspace(D[:, other].T, p) if len(other) else np.eye(D.shape[0], dtype=np.int64)
    if c.shape[0]:
      parts.append(mm(c, D, p))
  H = np.vstack(parts) if parts else np.zeros((0, g.dim), dtype=np.int64)
  return H if rank(H, p) == D.shape[0] and H.shape[0] == D.shape[0] else None


def _check_identity(g: LSA, chi_v: np.ndarray, log: list) -> dict | None:
  n, p = g.meta["n"], g.p
  cm = char_matrix(g, chi_v)
  h, r = cm.h, cm.rank - 1
  A1 = cm.A1
  xs, _ = negative_generators(g)
  nonzero_cols = [b for b in range(2 * n) if A1[:, b].any()]
  if rank(A1, p) != r or len(nonzero_cols) > r:
    log.append({"step": "partition", "rank_A1": rank(A1, p), "r": r,
                "nonzero_columns": nonzero_cols})
    return None
  rest = [b for b in range(2 * n) if b not in nonzero_cols]
  for extra in itertools.combinations(rest, r - len(nonzero_cols)):
    I = sorted(nonzero_cols + list(extra))
    J = [b for b in range(2 * n) if b not in I]
    if rank(A1[:, I], p) != r:
      continue
    D = delta_max(g, chi_v, h - 1)
    H = _homogeneous_basis(g, D)
    if H is None:
      log.append({"step": "delta", "I": I, "reason": "Δ not parity-graded"})
      continue
    Xj = [xs[j] for j in J]
    P = mm(mm(H, g.sc.reshape(g.dim, -1), p).reshape(H.shape[0], g.dim, g.dim)[:, Xj, :]
           .reshape(-1, g.dim), chi_v[:, None], p).reshape(H.shape[0], len(Xj))
    if rank(P, p) != len(J):
      log.append({"step": "pairing", "I": I, "J": J, "dim_delta": int(D.shape[0]),
                  "rank": rank(P, p)})
      continue
    _, piv = rref(P.T, p)
    E = H[piv]
    _, rows = rref(A1[:, I].T, p)
    return {"h": h, "r": r, "I": [i + 1 for i in I], "J": [j + 1 for j in J],
            "minor_rows": [int(cm.rows1[a]) for a in rows],
            "delta": D.tolist(), "e": E.tolist()}
  return None


def validate_delta_witness(g: LSA, chi, w: dict) -> bool:
  """Re-check all five conditions on a witness from scratch (Φ = id)."""
  chi_v = _values(chi, g)
  n, p = g.meta["n"], g.p
  h, r = height(g, chi_v), rank_chi(g, chi_v) - 1
  I, J = [i - 1 for i in w["I"]], [j - 1 for j in w["J"]]
  xs, _ = negative_generators(g)
  if sorted(I + J) != list(range(2 * n)) or len(I) != r or not J:
    return False
  F = g.piece(h)
  A1 = _pairing(g, chi_v, F, xs)
  rows = [F.index(a) for a in w["minor_rows"]]
  if len(rows) != r or rank(A1[np.ix_(rows, I)], p) != r:
    return False
  if A1[:, J].any():
    return False
  D = np.asarray(w["delta"], dtype=np.int64).reshape(-1, g.dim)
  S = Subspace(g.dim, p, D)
  if set(g.degree[np.nonzero(D.any(axis=0))[0]].tolist()) - {h - 1}:
    return False
  if D.shape[0] and (mm(D, chi_v[:, None], p).any()
                     or not all(S.contains(g.bracket(g.basis_vector(x), v))
                                for x in g.piece(0) for v in D)):
    return False
  E = np.asarray(w["e"], dtype=np.int64).reshape(-1, g.dim)
  if E.shape[0] != len(J) or not S.contains(E):
    return False
  if any(len(set(g.parity[np.nonzero(e)[0]].tolist())) != 1 for e in E):
    return False
  P = np.array([[int(np.dot(g.bracket(e, g.basis_vector(xs[j])), chi_v) % p) for j in J]
                for e in E], dtype=np.int64)
  return rank(P, p) == len(J)


def is_delta_invertible(g: LSA, chi, mode: str = "identity") -> DeltaResult:
  """Yes(witness) | No | Inconclusive; No only when a precondition fails."""
  if mode not in ("identity", "grading-orbit"):
    raise ValueError(f"unknown mode {mode!r}")
  chi_v = _values(chi, g)
  n = g.meta["n"]
  h = height(g, chi_v)
  log = [{"mode": mode, "h": h}]
  if h < 5:
    log.append({"decision": "no", "reason": "ht(χ) < 5"})
    return DeltaResult("no", None, log)
  try:
    rk = rank_chi(g, chi_v)
  except ValueError as e:
    log.append({"decision": "no", "reason": str(e)})
    return DeltaResult("no", None, log)
  if rk >= 2 * n + 1:
    log.append({"decision": "no", "reason": "rank(χ) = 2n+1"})
    return DeltaResult("no", None, log)
  cs = [1] if mode == "identity" else list(range(1, g.p))
  for c in cs:
    phi_chi = chi_v if c == 1 else coadjoint_apply(GradingAut(c, g.p), PChar(g, chi_v)).values
    w = _check_identity(g, phi_chi, log)
    if w is not None:
      w["phi"] = c
      if validate_delta_witness(g, phi_chi, w):
        log.append({"decision": "yes", "phi": c})
        return DeltaResult("yes", w, log)
      log.append({"decision": "witness failed validation", "phi": c})
  log.append({"decision": "inconclusive",
              "reason": "no witness for the automorphisms searched; Aut*(g) not exhausted"})
  return DeltaResult("inconclusive", None, log)


# regular semisimple characters

def h_elements(g: LSA) -> np.ndarray:
  """h_j = M_{x^(ε_j+ε_j')} − M_{x^(ε_{j+1}+ε_{(j+1)'})}, j = 1..n−1."""
  n = g.meta["n"]
  s = Shape(n, n + 1, g.p)
  rows = [element(g, {_eps(s, j, j + n): 1, _eps(s, j + 1, j + 1 + n): -1})
          for j in range(1, n)]
  return np.array(rows, dtype=np.int64).reshape(-1, g.dim)


def is_regular_semisimple(g: LSA, chi, mode: str = "identity") -> bool:
  chi_v = _values(chi, g)
  p, n = g.p, g.meta["n"]
  if height(g, chi_v) != 1:
    raise ValueError("regular semisimplicity is defined for ht(χ) = 1")
  lo, _, up = triangular_split(g)
  Hs = h_elements(g)
  if n == 1:
    warnings.warn("n = 1: the h_j family is empty, the nonvanishing conditions are vacuous")
  cs = [1] if mode == "identity" else list(range(1, p))
  for c in cs:
    v = chi_v if c == 1 else coadjoint_apply(GradingAut(c, p), PChar(g, chi_v)).values
    ev = lambda x: int(np.dot(x, v) % p)
    if any(ev(x) for x in np.vstack([lo, up])):
      continue
    if n == 1 or (all(ev(x) for x in Hs) and ev(Hs.sum(axis=0) % p)):
      return True
  return False


def functional_on_degree_zero(g: LSA, values: dict) -> PChar:
  """χ vanishing off g_[0] with χ(row k) = values[k] on the basis n^- ∪ cartan ∪ n^+."""
  lo, H, up = triangular_split(g)
  V = np.vstack([lo, H, up])
  P = g.piece(0)
  target = np.zeros(V.shape[0], dtype=np.int64)
  for k, c in values.items():
    target[k] = c
  chi = np.zeros(g.dim, dtype=np.int64)
  chi[P] = mm(inverse(V[:, P], g.p), target[:, None], g.p)[:, 0]
  return PChar(g, chi)


def regular_semisimple_example(g: LSA) -> PChar:
  """χ(n^±) = 0 and χ = (1, 0, …, 0) on the cartan basis, so χ(h_1) = 1 when n ≥ 2."""
  lo = triangular_split(g)[0]
  return functional_on_degree_zero(g, {lo.shape[0]: 1})


# search

@dataclass
class Found:
  chi: PChar
  log: list
  verdict: str = "found"


@dataclass
class Exhausted:
  log: list
  verdict: str = "exhausted"


def _even(g: LSA, d: int) -> list[int]:
  return [i for i in g.piece(d) if g.parity[i] == 0]


def search_char(g: LSA, target: str, seed: int = 0, budget: int = 1000):
  """Structured sparse supports first (single graded piece), then random functionals."""
  preds = {"nonsingular": _try_nonsingular, "delta-invertible": _try_delta,
           "regular-semisimple": _try_rss}
  if target not in preds:
    raise ValueError(f"unknown target {target!r}")
  rng = np.random.default_rng(seed)
  log = [{"target": target, "seed": seed, "budget": budget}]
  used = 0
  for cand, how in _candidates(g, target, rng):
    if used >= budget:
      break
    used += 1
    ok, info = preds[target](g, cand)
    if ok:
      log.append({"evaluations": used, "found": how, **info})
      return Found(PChar(g, cand), log)
  log.append({"evaluations": used, "exhausted": True})
  return Exhausted(log)


def _try_nonsingular(g, v):
  h = height(g, v)
  if h < 2 or not g.piece(h) or not g.piece(h + 1):
    return False, {}
  return is_nonsingular(g, v), {"h": h}


def _try_rss(g, v):
  if height(g, v) != 1:
    return False, {}
  with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    return is_regular_semisimple(g, v), {}


def _try_delta(g, v):
  h = height(g, v)
  if h < 5 or not g.piece(h) or not g.piece(h + 1):
    return False, {}
  res = is_delta_invertible(g, v)
  return res.verdict == "yes", {"witness": res.witness}


def _candidates(g: LSA, target: str, rng):
  p = g.p
  top = max(g.degrees())
  if target == "regular-semisimple":
    if g.meta.get("kind") in ("m", "sm"):
      yield regular_semisimple_example(g).values, "cartan support"
    E = _even(g, 0)
    while True:
      v = np.zeros(g.dim, dtype=np.int64)
      v[E] = rng.integers(0, p, size=len(E))
      yield v, "random on g_[0]"
  if target == "nonsingular":
    for h in range(2, top):
      try:
        yield build_example_nonsingular(g, h).values, f"example recipe h={h}"
      except ValueError:
        pass
    for h in range(2, top):
      E = _even(g, h - 1)
      for size in range(1, len(E) + 1):
        for combo in itertools.combinations(E, size):
          v = np.zeros(g.dim, dtype=np.int64)
          v[list(combo)] = 1
          yield v, f"support {list(combo)}"
    while True:
      h = int(rng.integers(2, top))
      v = np.zeros(g.dim, dtype=np.int64)
      E = _even(g, h - 1)
      v[E] = rng.integers(0, p, size=len(E))
      yield v, f"random on g_[{h - 1}]"
  if target == "delta-invertible":
    hs = [h for h in range(5, top) if g.piece(h + 1)]
    for h in hs:
      E1, E2 = _even(g, h - 1), _even(g, h - 2)
      for size in range(1, len(E1) + 1):
        for combo in itertools.combinations(E1, size):
          for e2 in E2:
            v = np.zeros(g.dim, dtype=np.int64)
            v[list(combo)] = 1
            v[e2] = 1
            yield v, f"support {list(combo)} + {e2}"
    while hs:
      h = hs[int(rng.integers(len(hs)))]
      v = np.zeros(g.dim, dtype=np.int64)
      for d in (h - 1, h - 2):
        E = _even(g, d)
        v[E] = rng.integers(0, p, size=len(E))
      yield v, f"random on g_[{h - 1}] + g_[{h - 2}]"
