"""
Prime powers and explicit finite fields F_q, q = p^f.

Elements of F_q are encoded as integers 0..q-1: the element
c_0 + c_1 x + ... + c_{f-1} x^{f-1} (mod the field modulus) has code
c_0 + c_1 p + ... + c_{f-1} p^{f-1}.  Under this encoding the integer n
maps to the code n % p, and iterating codes 0, 1, ..., q-1 is the fixed
enumeration order used everywhere else in the package.

All arithmetic is vectorised over numpy integer arrays.  Prime fields use
plain modular arithmetic; extension fields use precomputed q x q tables.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from asklab.errors import NotPrime, check_budget

# Largest field order we are willing to tabulate.
MAX_FIELD_ORDER = 2**12


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True, order=True)
class PrimePower:
    p: int
    f: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.f < 1:
            raise ValueError(f"exponent must be >= 1, got {self.f}")

    @property
    def q(self):
        return self.p**self.f

    @classmethod
    def from_q(cls, q):
        """Factor q = p^f; raise NotPrime if q is not a prime power."""
        if isinstance(q, PrimePower):
            return q
        q = int(q)
        if q < 2:
            raise NotPrime(f"{q} is not a prime power")
        p = 2
        while p * p <= q and q % p:
            p += 1
        if q % p:
            p = q
        f, r = 0, q
        while r % p == 0:
            r //= p
            f += 1
        if r != 1:
            raise NotPrime(f"{q} is not a prime power")
        return cls(p, f)

    def __int__(self):
        return self.q

    def __str__(self):
        return str(self.q)


def as_prime_power(q):
    return PrimePower.from_q(q)


# -- polynomials over F_p, coefficient lists low degree first ---------------


def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    """Remainder of a modulo b over F_p (b monic or with invertible lead)."""
    a = _poly_trim(x % p for x in a)
    b = _poly_trim(b)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _poly_trim(a)
    return a


def is_irreducible(modulus, p):
    """Brute-force irreducibility: no monic factor of degree <= deg/2."""
    f = len(modulus) - 1
    if f <= 0:
        return False
    if f == 1:
        return True
    for deg in range(1, f // 2 + 1):
        for low in product(range(p), repeat=deg):
            if not _poly_mod(modulus, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p, f):
    """Lexicographically smallest monic irreducible of degree f over F_p.

    Candidates are ordered by their coefficient tuple (c_0, ..., c_{f-1}),
    low degree first.
    """
    if f == 1:
        return (0, 1)
    for low in product(range(p), repeat=f):
        modulus = list(low) + [1]
        if is_irreducible(modulus, p):
            return tuple(modulus)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FiniteField:
    """The field F_q with a fixed modulus.  Values are immutable after init."""

    def __init__(self, pp, modulus):
        self.pp = pp
        self.p = pp.p
        self.f = pp.f
        self.q = pp.q
        self.modulus = tuple(modulus)
        if len(self.modulus) != self.f + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        if not is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")
        self.is_prime_field = self.f == 1
        self._build_tables()

    def _build_tables(self):
        p, f, q = self.p, self.f, self.q
        if self.is_prime_field:
            x = np.arange(q)
            self.neg_table = (-x) % p
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv[a] = pow(a, -1, p)
            self.inv_table = inv
            self.add_table = self.mul_table = None
            return
        digits = np.array(
            [[(a // p**t) % p for t in range(f)] for a in range(q)], dtype=np.int64
        )
        weights = p ** np.arange(f)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        # schoolbook product then reduce by the modulus
        mod = np.array(self.modulus, dtype=np.int64)
        prod = np.zeros((q, q, 2 * f - 1), dtype=np.int64)
        for s in range(f):
            for t in range(f):
                prod[:, :, s + t] += digits[:, None, s] * digits[None, :, t]
        prod %= p
        for top in range(2 * f - 2, f - 1, -1):
            c = prod[:, :, top].copy()
            prod[:, :, top - f : top + 1] -= c[:, :, None] * mod[None, None, :]
            prod %= p
        mul = prod[:, :, :f] @ weights
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            (b,) = np.nonzero(mul[a] == 1)[0]
            inv[a] = b
        self.add_table = add
        self.mul_table = mul
        self.neg_table = neg
        self.inv_table = inv
        self._digits = digits

    # -- vectorised arithmetic on integer codes -----------------------------

    def add(self, x, y):
        if self.is_prime_field:
            return (np.asarray(x) + np.asarray(y)) % self.p
        return self.add_table[x, y]

    def sub(self, x, y):
        if self.is_prime_field:
            return (np.asarray(x) - np.asarray(y)) % self.p
        return self.add_table[x, self.neg_table[y]]

    def neg(self, x):
        return self.neg_table[x]

    def mul(self, x, y):
        if self.is_prime_field:
            return (np.asarray(x) * np.asarray(y)) % self.p
        return self.mul_table[x, y]

    def inv(self, x):
        x = np.asarray(x)
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.inv_table[x]

    def from_int(self, n):
        """Image of integer(s) under Z -> F_p <= F_q."""
        if isinstance(n, (int, np.integer)):
            return int(n) % self.p
        return np.array([int(v) % self.p for v in np.ravel(n)], dtype=np.int64).reshape(
            np.shape(n)
        )

    def dot(self, x, y, axis=-1):
        """Sum over `axis` of x*y; x and y broadcast together."""
        return self.sum(self.mul(x, y), axis=axis)

    def sum(self, x, axis=0):
        x = np.asarray(x)
        if self.is_prime_field:
            return x.sum(axis=axis) % self.p
        x = np.moveaxis(x, axis, 0)
        if x.shape[0] == 0:
            return np.zeros(x.shape[1:], dtype=np.int64)
        acc = x[0]
        for t in range(1, x.shape[0]):
            acc = self.add_table[acc, x[t]]
        return acc

    def matmul(self, X, Y):
        """Batched matrix product over the field; shapes (..., r, s) @ (..., s, c)."""
        X = np.asarray(X)
        Y = np.asarray(Y)
        if self.is_prime_field:
            return (X @ Y) % self.p
        return self.dot(X[..., :, :, None], Y[..., None, :, :], axis=-2)

    def pow(self, x, e):
        x = np.asarray(x)
        result = np.ones_like(x)
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    def additive_basis(self):
        """Codes of 1, x, ..., x^{f-1}; an F_p-basis of F_q."""
        return [self.p**t for t in range(self.f)]

    def primitive_element(self):
        order = self.q - 1
        primes = [r for r in range(2, order + 1) if order % r == 0 and is_prime(r)]
        for g in range(2 if self.q > 2 else 1, self.q):
            if all(int(self.pow(g, order // r)) != 1 for r in primes):
                return g
        return 1

    def element_str(self, a):
        if self.is_prime_field:
            return str(int(a))
        digits = [(int(a) // self.p**t) % self.p for t in range(self.f)]
        terms = []
        for t, c in enumerate(digits):
            if c == 0:
                continue
            mono = "" if t == 0 else ("x" if t == 1 else f"x^{t}")
            coef = "" if (c == 1 and t > 0) else str(c)
            terms.append(coef + mono)
        return " + ".join(reversed(terms)) or "0"

    def metadata(self):
        return {"p": self.p, "f": self.f, "q": self.q, "modulus": list(self.modulus)}

    def __repr__(self):
        return f"FiniteField(q={self.q}, modulus={self.modulus})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and self.pp == other.pp
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.pp, self.modulus))

    def __reduce__(self):
        return (make_field, (self.p, self.f))


@lru_cache(maxsize=None)
def _make_field(p, f):
    pp = PrimePower(p, f)
    return FiniteField(pp, smallest_irreducible(p, f))


def make_field(p, f=1, max_order=MAX_FIELD_ORDER):
    """Return the field of order p^f with the canonical modulus.

    Raises NotPrime for composite p and BudgetExceeded above `max_order`.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if f < 1:
        raise ValueError(f"exponent must be >= 1, got {f}")
    check_budget(p**f, max_order, "field order")
    return _make_field(p, f)


def field_for(q, max_order=MAX_FIELD_ORDER):
    """Field of order q, where q is an int or a PrimePower."""
    if isinstance(q, FiniteField):
        return q
    pp = PrimePower.from_q(q)
    return make_field(pp.p, pp.f, max_order=max_order)
