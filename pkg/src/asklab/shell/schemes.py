"""Affine schemes given by integer polynomial equations, and their F_q-point counts."""

import json
from dataclasses import dataclass

import numpy as np

from asklab.errors import ShapeMismatch, check_budget
from asklab.exactcore import field_for

CHUNK = 1 << 15


@dataclass(frozen=True)
class AffineScheme:
    """Zero locus in A^vars of polys; each poly is a tuple of (coeff, exps) terms."""

    vars: int
    polys: tuple
    name: str = None

    def __post_init__(self):
        polys = []
        for p_idx, poly in enumerate(self.polys):
            terms = []
            for t_idx, (coeff, exps) in enumerate(poly):
                exps = tuple(int(x) for x in exps)
                if len(exps) != self.vars:
                    raise ShapeMismatch(
                        f"exponent tuple of length {len(exps)} in {self.vars} variables",
                        where=(p_idx, t_idx),
                    )
                if any(x < 0 for x in exps):
                    raise ShapeMismatch("negative exponent", where=(p_idx, t_idx))
                terms.append((int(coeff), exps))
            polys.append(tuple(terms))
        object.__setattr__(self, "polys", tuple(polys))

    def to_json(self):
        out = {
            "vars": self.vars,
            "polys": [[{"coeff": c, "exps": list(e)} for c, e in poly] for poly in self.polys],
        }
        if self.name:
            out["name"] = self.name
        return out


def load_scheme(raw):
    if isinstance(raw, str):
        raw = json.loads(raw)
    try:
        nvars = int(raw["vars"])
        polys = [[(t["coeff"], t["exps"]) for t in poly] for poly in raw.get("polys", [])]
    except (KeyError, TypeError):
        raise ShapeMismatch("scheme needs 'vars' and 'polys' of {coeff, exps} terms") from None
    return AffineScheme(nvars, tuple(polys), raw.get("name"))


def affine_space(n):
    return AffineScheme(n, (), f"A{n}")


def _points(F, start, stop, n):
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, n), dtype=np.int64)
    for t in range(n):
        out[:, t] = idx % F.q
        idx //= F.q
    return out


def affine_count(Y, q, budget=None):
    """Number of x in F_q^vars where every polynomial vanishes."""
    F = field_for(q)
    total = F.q**Y.vars
    check_budget(total, budget)
    # coefficients reduced into F_q once
    polys = [[(F.from_int(c), e) for c, e in poly if c % F.p] for poly in Y.polys]
    count = 0
    for start in range(0, total, CHUNK):
        X = _points(F, start, min(start + CHUNK, total), Y.vars)
        ok = np.ones(len(X), dtype=bool)
        for poly in polys:
            val = np.zeros(len(X), dtype=np.int64)
            for coeff, exps in poly:
                term = np.full(len(X), coeff, dtype=np.int64)
                for v, k in enumerate(exps):
                    if k:
                        term = F.mul(term, F.pow(X[:, v], k))
                val = F.add(val, term)
            ok &= val == 0
        count += int(ok.sum())
    return count


def product_scheme(Y1, Y2):
    """Y1 x Y2 on disjoint variable blocks."""
    n1, n2 = Y1.vars, Y2.vars
    polys = [tuple((c, e + (0,) * n2) for c, e in poly) for poly in Y1.polys]
    polys += [tuple((c, (0,) * n1 + e) for c, e in poly) for poly in Y2.polys]
    return AffineScheme(n1 + n2, tuple(polys))
