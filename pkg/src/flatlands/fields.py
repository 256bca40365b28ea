"""Exact arithmetic in GF(q) via precomputed lookup tables.

Elements are integers 0..q-1.  For a prime power q = p^k with k > 1, the
integer i encodes the polynomial over GF(p) whose coefficient vector is
the base-p digit expansion of i (least significant digit = constant
term).  0 is the additive and 1 the multiplicative identity.
"""

from dataclasses import dataclass, field

MAX_ORDER = 32

# Fixed irreducible polynomials for the non-prime orders, written as
# coefficient tuples (constant term first), monic leading term omitted.
# Hard-coded so that element orderings are identical across runs.
_IRREDUCIBLE = {
    4: (1, 1),           # x^2 + x + 1        over GF(2)
    8: (1, 1, 0),        # x^3 + x + 1        over GF(2)
    9: (1, 0),           # x^2 + 1            over GF(3)
    16: (1, 1, 0, 0),    # x^4 + x + 1        over GF(2)
    25: (1, 1),          # x^2 + x + 1        over GF(5)
    27: (1, 2, 0),       # x^3 + 2x + 1       over GF(3)
    32: (1, 0, 1, 0, 0), # x^5 + x^2 + 1      over GF(2)
}


class NotPrimePower(ValueError):
    """q is not of the form p^k for a prime p."""


class OrderTooLarge(ValueError):
    """q exceeds the supported bound MAX_ORDER."""


def _factor_prime_power(q):
    """Return (p, k) with q = p^k, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return None


@dataclass(frozen=True)
class FiniteField:
    """GF(q) with full addition/multiplication/inverse tables."""

    q: int
    p: int
    k: int
    add_table: tuple = field(repr=False)
    mul_table: tuple = field(repr=False)
    inv_table: tuple = field(repr=False)

    def add(self, a, b):
        return self.add_table[a][b]

    def sub(self, a, b):
        return self.add_table[a][self.neg(b)]

    def neg(self, a):
        row = self.add_table[a]
        return row.index(0)

    def mul(self, a, b):
        return self.mul_table[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self.inv_table[a]


def _digits(i, p, k):
    out = []
    for _ in range(k):
        out.append(i % p)
        i //= p
    return out


def _undigits(ds, p):
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def _poly_mul_mod(a, b, p, k, modulus):
    # schoolbook product, then reduce by the monic modulus of degree k
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c == 0:
            continue
        prod[d] = 0
        for j, mj in enumerate(modulus):
            prod[d - k + j] = (prod[d - k + j] - c * mj) % p
    return prod[:k]


def field_make(q):
    """Build GF(q) for a prime power q with 2 <= q <= MAX_ORDER."""
    pk = _factor_prime_power(q)
    if pk is None:
        raise NotPrimePower(f"{q} is not a prime power")
    if q > MAX_ORDER:
        raise OrderTooLarge(f"field order {q} exceeds {MAX_ORDER}")
    p, k = pk
    if k == 1:
        add = tuple(tuple((a + b) % p for b in range(p)) for a in range(p))
        mul = tuple(tuple((a * b) % p for b in range(p)) for a in range(p))
    else:
        modulus = _IRREDUCIBLE[q]
        polys = [_digits(i, p, k) for i in range(q)]
        add = tuple(
            tuple(_undigits([(x + y) % p for x, y in zip(polys[a], polys[b])], p)
                  for b in range(q))
            for a in range(q)
        )
        mul = tuple(
            tuple(_undigits(_poly_mul_mod(polys[a], polys[b], p, k, modulus), p)
                  for b in range(q))
            for a in range(q)
        )
    inv = [0] * q
    for a in range(1, q):
        inv[a] = mul[a].index(1)
    return FiniteField(q=q, p=p, k=k, add_table=add, mul_table=mul,
                       inv_table=tuple(inv))
