"""Coefficient rings: binary extension fields GF(2^d) and exact integers.

Every algebraic structure in this package is generic over one of two
rings.  The randomized algorithms work in GF(2^d) (default d = 16),
where addition is XOR and every element squares compatibly with the
Frobenius map.  The deterministic algorithms work in plain
arbitrary-precision signed integers, for which Python's int suffices.

Field contexts validate their modulus with Rabin's irreducibility test
at construction instead of trusting a hard-coded constant.  For degrees
up to ``_TABLE_DEGREE`` a discrete-log table pair is built so that both
scalar and vectorized (numpy) multiplication are cheap.

Randomness is a keyed PRF over (seed, tag) rather than a stateful
generator: any value (an edge variable, a vertex code coordinate) is a
pure function of its tag, so values for objects first seen at query
time are reproducible without storing them.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapabilityError

_TABLE_DEGREE = 16


def _poly_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    res = 0
    while b:
        if b & 1:
            res ^= a
        a <<= 1
        b >>= 1
    return res


def _poly_mod(a: int, f: int) -> int:
    fl = f.bit_length()
    while a.bit_length() >= fl:
        a ^= f << (a.bit_length() - fl)
    return a


def _poly_mulmod(a: int, b: int, f: int) -> int:
    return _poly_mod(_poly_mul(a, b), f)


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _x_pow_2e(e: int, f: int) -> int:
    """x^(2^e) mod f, by e repeated squarings."""
    acc = 2  # the polynomial x
    for _ in range(e):
        acc = _poly_mulmod(acc, acc, f)
    return acc


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_irreducible(modulus: int, degree: int) -> bool:
    """Rabin's test for a degree-d polynomial over GF(2)."""
    if modulus.bit_length() != degree + 1:
        return False
    if not modulus & 1:  # divisible by x
        return False
    if _x_pow_2e(degree, modulus) != 2:
        return False
    for q in _prime_factors(degree):
        h = _x_pow_2e(degree // q, modulus) ^ 2
        if _poly_gcd(h, modulus) != 1:
            return False
    return True


def _default_modulus(degree: int) -> int:
    """Lexicographically least irreducible polynomial of the given degree."""
    base = 1 << degree
    for low in range(1, base, 2):
        cand = base | low
        if is_irreducible(cand, degree):
            return cand
    raise AssertionError("no irreducible polynomial found")  # unreachable


def prf_tag(*parts) -> bytes:
    """Canonical byte encoding of a structured PRF tag."""
    return b"\x1f".join(str(p).encode() for p in parts)


class IntegerRing:
    """Arbitrary-precision signed integers as a coefficient ring."""

    char = 0
    kind = "int"
    zero = 0
    one = 1

    @staticmethod
    def add(a: int, b: int) -> int:
        return a + b

    @staticmethod
    def sub(a: int, b: int) -> int:
        return a - b

    @staticmethod
    def mul(a: int, b: int) -> int:
        return a * b

    @staticmethod
    def neg(a: int) -> int:
        return -a

    def __repr__(self) -> str:
        return "IntegerRing()"


INTEGERS = IntegerRing()


class GF2m:
    """Field context for GF(2^d) with a verified irreducible modulus."""

    char = 2
    kind = "gf2"
    zero = 0
    one = 1

    def __init__(self, degree: int, modulus: int | None = None):
        if not 2 <= degree <= 63:
            raise CapabilityError(f"field degree must be in [2, 63], got {degree}")
        if modulus is None:
            modulus = _default_modulus(degree)
        elif not is_irreducible(modulus, degree):
            raise CapabilityError(
                f"modulus {modulus:#x} is not irreducible of degree {degree}"
            )
        self.degree = degree
        self.modulus = modulus
        self.order = 1 << degree
        self._mask = self.order - 1
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        if degree <= _TABLE_DEGREE:
            self._build_tables()

    # -- scalar arithmetic -------------------------------------------------

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    sub = add  # characteristic 2

    @staticmethod
    def neg(a: int) -> int:
        return a

    def mul(self, a: int, b: int) -> int:
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            n = self.order - 1
            return int(self._exp[(int(self._log[a]) + int(self._log[b])) % n])
        return _poly_mulmod(a, b, self.modulus)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("gf_inv(0) is undefined")
        if self._exp is not None:
            n = self.order - 1
            return int(self._exp[(n - int(self._log[a])) % n])
        return self.pow(a, self.order - 2)

    def pow(self, a: int, e: int) -> int:
        res, base = 1, a
        while e:
            if e & 1:
                res = self.mul(res, base)
            base = self.mul(base, base)
            e >>= 1
        return res

    # -- tables ------------------------------------------------------------

    def _find_generator(self) -> int:
        n = self.order - 1
        factors = _prime_factors(n)
        g = 2
        while True:
            if all(self._pow_notable(g, n // q) != 1 for q in factors):
                return g
            g += 1

    def _pow_notable(self, a: int, e: int) -> int:
        res, base = 1, a
        while e:
            if e & 1:
                res = _poly_mulmod(res, base, self.modulus)
            base = _poly_mulmod(base, base, self.modulus)
            e >>= 1
        return res

    def _build_tables(self) -> None:
        n = self.order - 1
        g = self._find_generator()
        exp = np.zeros(2 * n, dtype=np.uint32)
        log = np.zeros(self.order, dtype=np.int64)
        acc = 1
        for i in range(n):
            exp[i] = acc
            log[acc] = i
            acc = _poly_mulmod(acc, g, self.modulus)
        exp[n:] = exp[:n]
        self._exp, self._log = exp, log

    # -- vectorized arithmetic ---------------------------------------------

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise field product of two uint arrays (broadcasting)."""
        if self._exp is None:
            flat = np.broadcast(a, b)
            out = np.fromiter(
                (_poly_mulmod(int(x), int(y), self.modulus) for x, y in flat),
                dtype=np.uint32,
                count=flat.size,
            )
            return out.reshape(np.broadcast_shapes(a.shape, b.shape))
        out = self._exp[self._log[a] + self._log[b]]
        zero = (a == 0) | (b == 0)
        if zero.any():
            out = np.where(zero, 0, out)
        return out.astype(np.uint32, copy=False)

    def mul_scalar(self, a: np.ndarray, c: int) -> np.ndarray:
        """Field product of an array by one scalar."""
        if c == 0:
            return np.zeros_like(a)
        if c == 1:
            return a.copy()
        if self._exp is None:
            return self.mul_arrays(a, np.asarray(c, dtype=np.uint32))
        out = self._exp[self._log[a] + int(self._log[c])]
        zero = a == 0
        if zero.any():
            out = np.where(zero, 0, out)
        return out.astype(np.uint32, copy=False)

    # -- randomness ----------------------------------------------------------

    def sample(self, seed: int, tag: bytes) -> int:
        """Deterministic PRF draw, statistically uniform over the field."""
        digest = hashlib.blake2b(
            tag, key=(seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little"), digest_size=8
        ).digest()
        return int.from_bytes(digest, "little") & self._mask

    def embed(self, i: int) -> int:
        """Injective embedding of a nonnegative index into the field."""
        if not 0 <= i < self.order:
            raise CapabilityError(
                f"cannot embed index {i} into GF(2^{self.degree}); field too small"
            )
        return i

    def __repr__(self) -> str:
        return f"GF2m(degree={self.degree}, modulus={self.modulus:#x})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GF2m)
            and other.degree == self.degree
            and other.modulus == self.modulus
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.modulus))


@lru_cache(maxsize=32)
def field_new(degree: int, modulus: int | None = None) -> GF2m:
    """Build (and cache) a GF(2^d) context with a verified modulus."""
    return GF2m(degree, modulus)


@dataclass(frozen=True)
class RingConfig:
    """Declarative ring selection carried inside oracle states."""

    kind: str = "gf2"  # "gf2" | "int"
    degree: int = 16
    modulus: int | None = None
    seed: int = 0

    def build(self):
        if self.kind == "gf2":
            return field_new(self.degree, self.modulus)
        if self.kind == "int":
            return INTEGERS
        raise CapabilityError(f"unknown ring kind {self.kind!r}")


def sample_bit(seed: int, tag: bytes) -> int:
    """One PRF-derived bit; used for partitions and sign codes."""
    digest = hashlib.blake2b(
        tag, key=(seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little"), digest_size=1
    ).digest()
    return digest[0] & 1
