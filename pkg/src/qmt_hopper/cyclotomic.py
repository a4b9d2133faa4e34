"""Exact arithmetic in Z[omega] for omega a primitive root of unity, with an
attached power of sqrt(n).

Numbers are dense integer coefficient vectors over Z[x]/(x^order - 1): the
coefficient at index p multiplies omega^p.  That representation is not unique,
so the zero test reduces modulo the order-th cyclotomic polynomial, which is
exact and decidable.  The extra field ``sqrt_n_exp = k`` scales the whole
number by n^(-k/2); additions require equal k by contract because sqrt(n) is
kept symbolic.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Quotient of num/den over Z; den monic, division known to be exact."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        out[i - dd] = c
        for j, d in enumerate(den):
            num[i - dd + j] -= c * d
    if any(num):
        raise ArithmeticError("polynomial division left a remainder")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(order: int) -> tuple[int, ...]:
    """Dense ascending coefficients of the order-th cyclotomic polynomial.

    Computed by dividing x^order - 1 by the product of the cyclotomic
    polynomials of all proper divisors; nothing is hard-coded.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    poly = [-1] + [0] * (order - 1) + [1]
    for d in range(1, order):
        if order % d == 0:
            poly = _poly_div_exact(poly, cyclotomic_poly(d))
    return tuple(poly)


def reduce_mod_cyclotomic(coeffs: tuple[int, ...], order: int) -> tuple[int, ...]:
    """Remainder of the coefficient polynomial mod Phi_order (length deg Phi)."""
    phi = cyclotomic_poly(order)
    deg = len(phi) - 1
    rem = list(coeffs)
    for i in range(len(rem) - 1, deg - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        for j, d in enumerate(phi):
            rem[i - deg + j] -= c * d
        # leading term cancels exactly since phi is monic
    return tuple(rem[:deg])


@dataclass(frozen=True, eq=False)
class CycNum:
    """An element coeffs(omega) * n^(-sqrt_n_exp/2) of the extended ring."""

    order: int
    coeffs: tuple[int, ...]
    sqrt_n_exp: int = 0

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if len(self.coeffs) != self.order:
            raise ValueError("coeffs must have exactly `order` entries")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    # -- construction ------------------------------------------------------

    @classmethod
    def from_int(cls, order: int, value: int, sqrt_n_exp: int = 0) -> CycNum:
        return cls(order, (int(value),) + (0,) * (order - 1), sqrt_n_exp)

    @classmethod
    def zero(cls, order: int, sqrt_n_exp: int = 0) -> CycNum:
        return cls.from_int(order, 0, sqrt_n_exp)

    # -- ring operations ---------------------------------------------------

    def _check_compatible(self, other: CycNum, add: bool) -> None:
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} != {other.order}")
        if add and self.sqrt_n_exp != other.sqrt_n_exp:
            raise ValueError(
                f"sqrt_n_exp mismatch on add: {self.sqrt_n_exp} != {other.sqrt_n_exp}"
            )

    def __add__(self, other: CycNum) -> CycNum:
        if not isinstance(other, CycNum):
            return NotImplemented
        self._check_compatible(other, add=True)
        return CycNum(
            self.order,
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            self.sqrt_n_exp,
        )

    def __sub__(self, other: CycNum) -> CycNum:
        return self + (-other)

    def __neg__(self) -> CycNum:
        return CycNum(self.order, tuple(-c for c in self.coeffs), self.sqrt_n_exp)

    def __mul__(self, other: int | CycNum) -> CycNum:
        if isinstance(other, int):
            return CycNum(
                self.order, tuple(c * other for c in self.coeffs), self.sqrt_n_exp
            )
        if not isinstance(other, CycNum):
            return NotImplemented
        self._check_compatible(other, add=False)
        m = self.order
        out = [0] * m
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[(i + j) % m] += a * b
        return CycNum(m, tuple(out), self.sqrt_n_exp + other.sqrt_n_exp)

    def __rmul__(self, other: int) -> CycNum:
        return self * other

    def conj(self) -> CycNum:
        """Complex conjugate: moves the coefficient of omega^p to omega^(-p)."""
        m = self.order
        out = [0] * m
        for p, c in enumerate(self.coeffs):
            out[(-p) % m] += c
        return CycNum(m, tuple(out), self.sqrt_n_exp)

    def abs_sq(self) -> CycNum:
        """|self|^2 = self * conj(self); fixed by conj and real as a complex number."""
        return self * self.conj()

    def shifted(self, p: int) -> CycNum:
        """Multiply by omega^p (cyclic shift of the coefficient vector)."""
        m = self.order
        out = [0] * m
        for q, c in enumerate(self.coeffs):
            out[(q + p) % m] += c
        return CycNum(m, tuple(out), self.sqrt_n_exp)

    def rescaled(self, sqrt_n_exp: int, n: int) -> CycNum:
        """Re-express with a larger sqrt_n_exp; the shift must be even and >= 0."""
        delta = sqrt_n_exp - self.sqrt_n_exp
        if delta < 0 or delta % 2:
            raise ValueError(f"cannot rescale exponent by {delta}")
        factor = n ** (delta // 2)
        return CycNum(
            self.order, tuple(c * factor for c in self.coeffs), sqrt_n_exp
        )

    # -- predicates and conversion -----------------------------------------

    def is_zero(self) -> bool:
        return not any(reduce_mod_cyclotomic(self.coeffs, self.order))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycNum):
            return NotImplemented
        if self.order != other.order:
            return False
        if self.sqrt_n_exp == other.sqrt_n_exp:
            return (self - other).is_zero()
        if self.is_zero() and other.is_zero():
            return True
        raise ValueError(
            "cannot compare nonzero values with different sqrt_n_exp; rescale first"
        )

    def to_complex(self, n: int) -> complex:
        """Floating-point value, using n as the base of the sqrt scale factor.

        Evaluates the canonical remainder mod the cyclotomic polynomial, so
        large cancelling representatives do not wreck the float precision.
        """
        reduced = reduce_mod_cyclotomic(self.coeffs, self.order)
        unit = 2j * cmath.pi / self.order
        total = sum(c * cmath.exp(unit * p) for p, c in enumerate(reduced) if c)
        return total * n ** (-self.sqrt_n_exp / 2)

    def __repr__(self) -> str:
        return f"CycNum(order={self.order}, coeffs={self.coeffs}, sqrt_n_exp={self.sqrt_n_exp})"

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [str(c) for c in self.coeffs],
            "sqrt_n_exp": self.sqrt_n_exp,
        }

    @classmethod
    def from_json(cls, obj: dict) -> CycNum:
        return cls(
            int(obj["order"]),
            tuple(int(c) for c in obj["coeffs"]),
            int(obj["sqrt_n_exp"]),
        )


def root_power(order: int, p: int) -> CycNum:
    """The exact root of unity omega^p for omega of the given order."""
    if order < 2:
        raise ValueError("order must be >= 2")
    coeffs = [0] * order
    coeffs[p % order] = 1
    return CycNum(order, tuple(coeffs))
