"""Command-line frontend: algebras, verification suites, characters, Kac modules, theorems.

Exit status: 0 when every check passes, 1 on any failure, 2 when checks
are only inconclusive, 64 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import suites
from .arith import is_prime
from .chars import Found, search_char
from .contact import build
from .lsa import LSA, verify_grading
from .repn.modules import PChar

EXIT_USAGE = 64

COMMANDS = {
  "algebra": ("build", "dims", "export"),
  "verify": ("jacobi", "restricted", "homomorphism", "divclosure", "simplicity", "golden15"),
  "char": ("classify", "search", "examples"),
  "kac": ("build", "irreducible"),
  "theorem": ("nonsingular", "delta-invertible", "regular-semisimple", "socle"),
}


class UsageError(Exception):
  pass


class Parser(argparse.ArgumentParser):
  def error(self, message):
    raise UsageError(message)


# structure constants documents

def export_structure_constants(g: LSA) -> dict:
  """Deterministic document: basis, parity, degree, sc triples, pmap table, p, labels."""
  i, j, k = np.nonzero(g.sc)
  sc = [[int(a), int(b), int(c), int(g.sc[a, b, c])] for a, b, c in zip(i, j, k)]
  pm = {str(a): [[int(c), int(v[c])] for c in np.nonzero(v)[0]] for a, v in g.pmap.items()}
  basis = None
  if g.basis_terms is not None:
    basis = [[[[int(x) for x in r], int(c)] for r, c in terms] for terms in g.basis_terms]
  m = g.meta
  return {"name": g.name, "p": int(g.p), "basis": basis, "labels": list(g.labels),
          "parity": [int(a) for a in g.parity], "degree": [int(a) for a in g.degree],
          "sc": sc, "pmap": pm,
          "algebra": {"kind": m.get("kind"), "n": m.get("n"), "kappa": m.get("kappa")}}


def import_structure_constants(doc: dict) -> LSA:
  p, d = int(doc["p"]), len(doc["parity"])
  sc = np.zeros((d, d, d), dtype=np.int64)
  for a, b, c, v in doc["sc"]:
    sc[a, b, c] = v
  pm = {}
  for a, pairs in doc["pmap"].items():
    v = np.zeros(d, dtype=np.int64)
    for c, x in pairs:
      v[c] = x
    pm[int(a)] = v
  basis = None
  if doc.get("basis") is not None:
    basis = [[(tuple(r), c) for r, c in terms] for terms in doc["basis"]]
  alg = doc.get("algebra") or {}
  g = LSA(p, sc, doc["parity"], doc["degree"], doc["labels"], pm, name=doc.get("name", ""),
          basis_terms=basis, meta={"kind": alg.get("kind"), "n": alg.get("n"), "p": p,
                                   "kappa": alg.get("kappa")})
  rep = verify_grading(g)
  if not rep.ok:
    raise ValueError(f"imported structure constants violate the grading: {rep.violations[:3]}")
  return g


def dumps(obj) -> str:
  return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


# argument handling

def _parser() -> Parser:
  ap = Parser(prog="cartan-odd", description=__doc__.splitlines()[0])
  ap.add_argument("group", choices=sorted(COMMANDS))
  ap.add_argument("command")
  ap.add_argument("--algebra", choices=["m", "sm"], default="m")
  ap.add_argument("--n", type=int, default=1)
  ap.add_argument("--p", type=int, default=5)
  ap.add_argument("--kappa", type=int, default=None)
  ap.add_argument("--seed", type=int, default=0)
  ap.add_argument("--budget", type=int, default=1000)
  ap.add_argument("--format", choices=["json", "csv", "text"], default="json")
  ap.add_argument("--output", default=None, help="write the report or document here")
  ap.add_argument("--input", default=None, help="structure constants document to load")
  ap.add_argument("--chi", default=None, help="character as 'index:value,...'")
  ap.add_argument("--target", default="nonsingular",
                  choices=["nonsingular", "delta-invertible", "regular-semisimple"])
  ap.add_argument("--long", action="store_true")
  return ap


def parse(argv) -> argparse.Namespace:
  a = _parser().parse_args(argv)
  if a.command not in COMMANDS[a.group]:
    raise UsageError(f"{a.group}: unknown command {a.command!r}; "
                     f"choose from {', '.join(COMMANDS[a.group])}")
  if not is_prime(a.p) or a.p <= 3:
    raise UsageError("--p must be a prime > 3")
  if a.n < 1:
    raise UsageError("--n must be at least 1")
  if a.budget < 0:
    raise UsageError("--budget must be nonnegative")
  if a.algebra == "sm" and a.kappa is None:
    a.kappa = 0
  return a


def parse_chi(g: LSA, text: str) -> PChar:
  vals = {}
  try:
    for part in filter(None, text.split(",")):
      i, c = part.split(":")
      vals[int(i)] = int(c) % g.p
  except ValueError:
    raise UsageError(f"malformed --chi {text!r}") from None
  if any(i < 0 or i >= g.dim for i in vals):
    raise UsageError("--chi index out of range")
  try:
    return PChar.from_dict(g, vals)
  except ValueError as e:
    raise UsageError(str(e)) from None


def _algebra(a) -> LSA:
  if a.input:
    with open(a.input) as fh:
      return import_structure_constants(json.load(fh))
  return build(a.algebra, a.n, a.p, a.kappa)


def _chi(a, g: LSA) -> PChar:
  if a.chi is not None:
    return parse_chi(g, a.chi)
  res = search_char(g, a.target, a.seed, a.budget)
  if not isinstance(res, Found):
    raise LookupError(f"no {a.target} character found within budget {a.budget}")
  return res.chi


# dispatch

def run(a) -> dict:
  grp, cmd = a.group, a.command
  if grp == "algebra":
    g = _algebra(a)
    if cmd == "export":
      return export_structure_constants(g)
    rep = suites.dims(g)
    if cmd == "dims":
      return rep
    return suites.report("build", rep["params"],
                         rep["checks"] + [suites.from_report(verify_grading(g))])
  if grp == "verify":
    if cmd == "golden15":
      if (a.n, a.p) != (1, 5):
        raise UsageError("golden15 is defined for --n 1 --p 5")
      return suites.golden15(a.algebra, a.kappa)
    if cmd == "homomorphism":
      return suites.homomorphism(a.n, a.p)
    if cmd == "divclosure":
      return suites.divclosure(a.n, a.p, a.kappa or 0)
    g = _algebra(a)
    if cmd == "jacobi":
      return suites.jacobi(g)
    if cmd == "restricted":
      return suites.restricted(g)
    return suites.simplicity(g, a.long, a.seed)
  g = _algebra(a)
  if grp == "char":
    if cmd == "classify":
      if a.chi is None:
        raise UsageError("classify needs --chi")
      return suites.classify(g, parse_chi(g, a.chi))
    if cmd == "search":
      return suites.search(g, a.target, a.seed, a.budget)
    return suites.examples(g)
  if grp == "kac":
    chi = _chi(a, g)
    return suites.kac_build(g, chi, a.seed) if cmd == "build" else \
        suites.kac_irreducible(g, chi, a.seed)
  if cmd == "nonsingular":
    return suites.theorem_nonsingular(g, a.seed, a.budget)
  if cmd == "delta-invertible":
    return suites.theorem_delta(g, a.seed, a.budget)
  if cmd == "regular-semisimple":
    return suites.theorem_regular_semisimple(g, a.seed)
  return suites.theorem_socle(g, a.seed, a.budget)


def render(rep: dict, fmt: str) -> str:
  if fmt == "json" or "checks" not in rep:
    return dumps(rep)
  if fmt == "text":
    lines = [f"{rep['suite']}: {rep['status']}"]
    for c in rep["checks"]:
      extra = {k: v for k, v in c.items() if k not in ("check", "status", "log")}
      lines.append(f"  {c['status']:<12} {c['check']}  {dumps(extra)[:160]}")
    return "\n".join(lines)
  buf = io.StringIO()
  w = csv.writer(buf, lineterminator="\n")
  w.writerow(["suite", "check", "status", "data"])
  for c in rep["checks"]:
    extra = {k: v for k, v in c.items() if k not in ("check", "status")}
    w.writerow([rep["suite"], c["check"], c["status"], dumps(extra)])
  return buf.getvalue().rstrip("\n")


def execute(argv) -> tuple[dict, int, str]:
  """Run one command; returns the report, the exit status and the rendered text."""
  try:
    a = parse(argv)
    rep = run(a)
  except UsageError as e:
    rep = {"error": str(e), "status": "usage"}
    return rep, EXIT_USAGE, dumps(rep)
  except LookupError as e:
    rep = {"error": str(e), "status": "inconclusive"}
    return rep, 2, dumps(rep)
  except (OSError, ValueError) as e:
    rep = {"error": str(e), "status": "fail"}
    return rep, 1, dumps(rep)
  text = render(rep, a.format)
  if a.output:
    with open(a.output, "w") as fh:
      fh.write(text + "\n")
  return rep, suites.exit_status(rep) if "checks" in rep else 0, text


def main(argv=None) -> int:
  _, code, text = execute(sys.argv[1:] if argv is None else argv)
  print(text, file=sys.stderr if code == EXIT_USAGE else sys.stdout)
  return code


if __name__ == "__main__":
  sys.exit(main())
