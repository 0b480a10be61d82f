"""
Laurent polynomials in q, the ring Z[X^{+-1}; (1 - X^n)^{-1}], truncated
q-adic expansions and exact congruences modulo q^n.

Everything is exact: integers and fractions.Fraction only.
"""

import csv
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from asklab.errors import BadDenominator, InsufficientSamples
from asklab.exactcore import PrimePower


def _qint(q):
    return q.q if isinstance(q, PrimePower) else int(q)


@dataclass(frozen=True)
class LaurentPoly:
    min_exp: int
    coeffs: tuple

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        lo = self.min_exp
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            lo += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            lo = 0
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "min_exp", lo)

    @classmethod
    def from_dict(cls, terms):
        terms = {int(k): int(v) for k, v in terms.items() if v}
        if not terms:
            return cls(0, ())
        lo, hi = min(terms), max(terms)
        return cls(lo, tuple(terms.get(k, 0) for k in range(lo, hi + 1)))

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls(exp, (coeff,))

    @classmethod
    def const(cls, c):
        return cls(0, (c,))

    def terms(self):
        return {self.min_exp + i: c for i, c in enumerate(self.coeffs) if c}

    @property
    def max_exp(self):
        return self.min_exp + len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        other = _as_laurent(other)
        t = Counter(self.terms())
        t.update(other.terms())
        return LaurentPoly.from_dict(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.min_exp, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        t = Counter()
        for a, x in self.terms().items():
            for b, y in other.terms().items():
                t[a + b] += x * y
        return LaurentPoly.from_dict(t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if len(self.coeffs) != 1 or abs(self.coeffs[0]) != 1:
                raise ValueError("only unit monomials have negative powers")
            return LaurentPoly(self.min_exp * k, (self.coeffs[0] ** -k,))
        out = LaurentPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, q):
        return eval_laurent(self, q)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in sorted(self.terms().items(), reverse=True):
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else ""
            else:
                coef = str(c)
            parts.append(coef + mono)
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def to_json(self):
        return {"min_exp": self.min_exp, "coeffs": list(self.coeffs)}


def _as_laurent(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot treat {x!r} as a Laurent polynomial")


X = LaurentPoly.monomial(1)


def eval_laurent(f, q):
    q = _qint(q)
    return sum((Fraction(q) ** k * c for k, c in f.terms().items()), Fraction(0))


@dataclass(frozen=True)
class SRingElem:
    """numerator(X) / prod_n (1 - X^n) over the multiset geom_factors."""

    numerator: LaurentPoly
    geom_factors: tuple = ()

    def __post_init__(self):
        factors = tuple(sorted(int(n) for n in self.geom_factors))
        if any(n < 1 for n in factors):
            raise ValueError("geometric factors must be >= 1")
        object.__setattr__(self, "geom_factors", factors)

    @classmethod
    def of(cls, value):
        if isinstance(value, SRingElem):
            return value
        return cls(_as_laurent(value))

    def __add__(self, other):
        other = SRingElem.of(other)
        # common denominator keeps the larger multiplicity of each factor
        mine, theirs = Counter(self.geom_factors), Counter(other.geom_factors)
        common = mine | theirs
        num = self.numerator * _denom_poly(common - mine) + other.numerator * _denom_poly(
            common - theirs
        )
        return SRingElem(num, tuple(common.elements()))

    __radd__ = __add__

    def __mul__(self, other):
        other = SRingElem.of(other)
        return SRingElem(self.numerator * other.numerator, self.geom_factors + other.geom_factors)

    __rmul__ = __mul__

    def __call__(self, q):
        return eval_sring(self, q)

    def __str__(self):
        if not self.geom_factors:
            return str(self.numerator)
        den = "".join(f"(1 - X^{n})" if n > 1 else "(1 - X)" for n in self.geom_factors)
        return f"({self.numerator}) / {den}"

    def to_json(self):
        return {"laurent": self.numerator.to_json(), "geom_factors": list(self.geom_factors)}


def _denom_poly(counter):
    out = LaurentPoly.const(1)
    for n, mult in counter.items():
        for _ in range(mult):
            out = out * LaurentPoly.from_dict({0: 1, n: -1})
    return out


def load_sring(raw):
    lp = raw["laurent"]
    return SRingElem(
        LaurentPoly(int(lp.get("min_exp", 0)), tuple(lp.get("coeffs", []))),
        tuple(raw.get("geom_factors", [])),
    )


def eval_sring(s, q):
    q = _qint(q)
    den = Fraction(1)
    for n in s.geom_factors:
        den *= 1 - q**n
    return eval_laurent(s.numerator, q) / den


@dataclass(frozen=True)
class QAdicTruncation:
    """sum_{k=min_exp}^{cutoff-1} coeffs[k - min_exp] q^k, known modulo q^cutoff."""

    min_exp: int
    coeffs: tuple
    cutoff: int

    def terms(self):
        return {self.min_exp + i: c for i, c in enumerate(self.coeffs) if c}

    def laurent(self):
        return LaurentPoly(self.min_exp, self.coeffs)

    def __call__(self, q):
        return eval_laurent(self.laurent(), q)

    def __add__(self, other):
        cutoff = min(self.cutoff, other.cutoff)
        t = Counter(self.terms())
        t.update(other.terms())
        return _truncate(t, cutoff)

    def __mul__(self, other):
        # precision of a product is limited by the lowest exponent present
        lo_a = min(self.terms(), default=self.cutoff)
        lo_b = min(other.terms(), default=other.cutoff)
        cutoff = min(self.cutoff + lo_b, other.cutoff + lo_a)
        t = Counter()
        for a, x in self.terms().items():
            for b, y in other.terms().items():
                if a + b < cutoff:
                    t[a + b] += x * y
        return _truncate(t, cutoff)

    def __str__(self):
        body = str(self.laurent())
        return f"{body} + O(q^{self.cutoff})"


def _truncate(terms, cutoff):
    terms = {k: v for k, v in terms.items() if v and k < cutoff}
    if not terms:
        return QAdicTruncation(0, (), cutoff)
    lo, hi = min(terms), max(terms)
    return QAdicTruncation(lo, tuple(terms.get(k, 0) for k in range(lo, hi + 1)), cutoff)


def geometric_series(n, cutoff):
    """(1 - q^n)^{-1} = sum_k q^{kn}, truncated below q^cutoff."""
    return _truncate({k: 1 for k in range(0, max(cutoff, 0), n)}, cutoff)


def expand_sring(s, cutoff):
    """q-adic expansion of an element of S modulo q^cutoff."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    out = _truncate(s.numerator.terms(), cutoff)
    for n in s.geom_factors:
        series = geometric_series(n, cutoff - min(out.terms(), default=0))
        t = Counter()
        for a, x in out.terms().items():
            for b, y in series.terms().items():
                if a + b < cutoff:
                    t[a + b] += x * y
        out = _truncate(t, cutoff)
    return out


def laurent_truncation(s, n):
    """A Laurent polynomial congruent to s modulo q^n at every prime power."""
    return expand_sring(s, n).laurent()


# -- valuations and congruences ---------------------------------------------


def _pval(x, p):
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k, x


def qadic_valuation(x, q, strict=True):
    """q-adic valuation of a rational, as a Fraction (v_p(x) / f).

    With strict=True the denominator must be a power of p; otherwise
    denominators coprime to p are allowed (units).  Returns None for zero.
    """
    pp = PrimePower.from_q(_qint(q))
    x = Fraction(x)
    if x == 0:
        return None
    vn, _ = _pval(x.numerator, pp.p)
    vd, rest = _pval(x.denominator, pp.p)
    if strict and rest != 1:
        raise BadDenominator(f"denominator of {x} is not a power of {pp.q}")
    return Fraction(vn - vd, pp.f)


def congruent_mod_qn(x, y, q, n, strict=True):
    """x == y (mod q^n): the q-adic valuation of x - y is at least n."""
    if strict:
        # both inputs must have q-power denominators, not only the difference
        for v in (x, y):
            qadic_valuation(v, q)
    v = qadic_valuation(Fraction(x) - Fraction(y), q, strict=strict)
    return v is None or v >= n


def congruence_exponent(x, y, q, strict=True):
    """Largest integer n with x == y (mod q^n); None if x == y."""
    v = qadic_valuation(Fraction(x) - Fraction(y), q, strict=strict)
    if v is None:
        return None
    return v.numerator // v.denominator


# -- exact interpolation ----------------------------------------------------


def _solve_exact(A, b):
    """Unique solution of a square system over Q, or None if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                t = M[r][c]
                M[r] = [a - t * b for a, b in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def laurent_fit(samples, exp_range):
    """Fit an integer Laurent polynomial with exponents in [lo, hi].

    The first hi - lo + 1 samples determine the coefficients; every
    remaining sample is a holdout that must match exactly.  Returns None if
    the coefficients are not integers or a holdout disagrees.
    """
    lo, hi = exp_range
    need = hi - lo + 1
    samples = [(_qint(q), Fraction(v)) for q, v in samples]
    qs = [q for q, _ in samples]
    if len(set(qs)) != len(qs):
        raise ValueError("samples must be at distinct q")
    if len(samples) < need + 1:
        raise InsufficientSamples(f"need {need + 1} samples, got {len(samples)}")
    fit, held = samples[:need], samples[need:]
    A = [[Fraction(q) ** k for k in range(lo, hi + 1)] for q, _ in fit]
    sol = _solve_exact(A, [v for _, v in fit])
    if sol is None or any(c.denominator != 1 for c in sol):
        return None
    f = LaurentPoly(lo, tuple(int(c) for c in sol))
    if all(eval_laurent(f, q) == v for q, v in held):
        return f
    return None


# -- sample tables ----------------------------------------------------------

SAMPLE_COLUMNS = ("q_p", "q_f", "num", "den_exp")


def read_samples(path):
    """Read (q, value) pairs from a CSV with columns q_p, q_f, num, den_exp."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            pp = PrimePower(int(row["q_p"]), int(row["q_f"]))
            out.append((pp.q, Fraction(int(row["num"]), pp.q ** int(row["den_exp"]))))
    return out


def write_samples(path, rows):
    """rows: iterable of (PrimePower or q, numerator, den_exp)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SAMPLE_COLUMNS)
        for q, num, den_exp in rows:
            pp = PrimePower.from_q(q)
            w.writerow([pp.p, pp.f, num, den_exp])
