"""
Arithmetic in GF(2^m), the outer-code symbol alphabet.

Elements are integers in [0, 2^m). Addition is XOR; multiplication and
inversion go through discrete-log tables built from one canonical primitive
polynomial per degree.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import logging

import numpy as np

from src.config import settings
from src.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


# One primitive polynomial per degree, as bitmasks (bit i = coefficient of x^i).
PRIMITIVE_POLYNOMIALS = {
    2: 0x7,          # x^2 + x + 1
    3: 0xB,          # x^3 + x + 1
    4: 0x13,         # x^4 + x + 1
    5: 0x25,         # x^5 + x^2 + 1
    6: 0x43,         # x^6 + x + 1
    7: 0x89,         # x^7 + x^3 + 1
    8: 0x11D,        # x^8 + x^4 + x^3 + x^2 + 1
    9: 0x211,        # x^9 + x^4 + 1
    10: 0x409,       # x^10 + x^3 + 1
    11: 0x805,       # x^11 + x^2 + 1
    12: 0x1053,      # x^12 + x^6 + x^4 + x + 1
    13: 0x201B,      # x^13 + x^4 + x^3 + x + 1
    14: 0x4443,      # x^14 + x^10 + x^6 + x + 1
    15: 0x8003,      # x^15 + x + 1
    16: 0x1100B,     # x^16 + x^12 + x^3 + x + 1
    17: 0x20009,     # x^17 + x^3 + 1
    18: 0x40081,     # x^18 + x^7 + 1
    19: 0x80027,     # x^19 + x^5 + x^2 + x + 1
    20: 0x100009,    # x^20 + x^3 + 1
}


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(2^m) with exp/log tables. Immutable after construction."""
    m: int
    primitive_poly: int
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return 1 << self.m

    @property
    def order(self) -> int:
        """Order of the multiplicative group."""
        return (1 << self.m) - 1

    @property
    def alpha(self) -> int:
        return 2

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[int(self.log_table[a]) + int(self.log_table[b])])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^m)")
        return int(self.exp_table[self.order - int(self.log_table[a])])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by 0 in GF(2^m)")
        if a == 0:
            return 0
        return int(self.exp_table[int(self.log_table[a]) - int(self.log_table[b]) + self.order])

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return int(self.exp_table[(int(self.log_table[a]) * e) % self.order])

    def mul_array(self, a, b) -> np.ndarray:
        """Elementwise product of broadcastable integer arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        logs = self.log_table[a] + self.log_table[b]
        return np.where((a == 0) | (b == 0), 0, self.exp_table[logs])

    def matmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Matrix product over GF(2^m); x is (r, k), y is (k, c)."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        products = self.mul_array(x[:, :, None], y[None, :, :])
        return np.bitwise_xor.reduce(products, axis=1)

    def element_at(self, index: int) -> int:
        """Canonical enumeration 0, 1, alpha, alpha^2, ... of the field."""
        if index == 0:
            return 0
        return int(self.exp_table[index - 1])


def _carryless_mulmod(a: int, b: int, poly: int, m: int) -> int:
    """Shift-and-xor product modulo poly."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= poly
    return out


@lru_cache(maxsize=None)
def field_build(m: int) -> FieldSpec:
    """
    Build GF(2^m) tables for the canonical primitive polynomial.

    Args:
        m: Extension degree, 2 <= m <= field_max_degree

    Returns:
        FieldSpec with exp_table of length 2*(2^m - 1) (doubled to skip the
        modulo on log sums) and log_table of length 2^m
    """
    if not isinstance(m, (int, np.integer)) or not 2 <= m <= settings.field_max_degree:
        raise ConfigurationError(
            f"Field degree m={m} out of range [2, {settings.field_max_degree}]"
        )
    m = int(m)
    poly = PRIMITIVE_POLYNOMIALS[m]
    size = 1 << m
    order = size - 1

    exp_table = np.zeros(2 * order, dtype=np.int64)
    log_table = np.zeros(size, dtype=np.int64)
    x = 1
    for i in range(order):
        if i > 0 and x == 1:
            raise ConfigurationError(
                f"Polynomial {poly:#x} is not primitive: cycle length {i} != {order}"
            )
        exp_table[i] = x
        log_table[x] = i
        x <<= 1
        if x & size:
            x ^= poly
    if x != 1:
        raise ConfigurationError(f"Polynomial {poly:#x} does not generate GF(2^{m})")
    exp_table[order:] = exp_table[:order]

    logger.debug(f"Built GF(2^{m}) with primitive polynomial {poly:#x}")
    return FieldSpec(m=m, primitive_poly=poly, exp_table=exp_table, log_table=log_table)


def field_mul(f: FieldSpec, a: int, b: int) -> int:
    """Product of two field elements."""
    return f.mul(a, b)


def field_inv(f: FieldSpec, a: int) -> int:
    """Multiplicative inverse; raises ZeroDivisionError for 0."""
    return f.inv(a)


def field_mul_reference(f: FieldSpec, a: int, b: int) -> int:
    """Table-free product, used as a brute-force oracle."""
    return _carryless_mulmod(a, b, f.primitive_poly, f.m)
