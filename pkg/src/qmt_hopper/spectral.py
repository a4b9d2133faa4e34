"""The transfer matrix as a circulant over the cyclotomic ring: exact powers,
exact periodicity, and the closed-form spectrum through quadratic Gauss sums.

n^(t/2) U^t has cyclotomic-integer entries and is circulant, so a power is
stored as its first row (one coefficient vector per displacement) and computed
by repeated squaring with cyclic convolution.  The eigenvectors are the DFT
basis; the eigenvalues are normalized Gauss sums with a closed four-case form.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclotomic import CycNum
from .errors import PreconditionError
from .hopper import Model


@dataclass(frozen=True)
class UnitaryPower:
    """n^(t/2) U^t, held as the first row of a circulant of coefficient vectors."""

    model: Model
    t: int
    row: tuple[tuple[int, ...], ...]  # row[d] = coeffs of the entry (0, d)

    def entry(self, i: int, f: int) -> CycNum:
        """Entry (i, f) of U^t as a CycNum with sqrt_n_exp = t."""
        return CycNum(self.model.n_prime, self.row[(f - i) % self.model.n], self.t)

    def matrix(self) -> list[list[CycNum]]:
        n = self.model.n
        return [[self.entry(i, f) for f in range(n)] for i in range(n)]

    def to_numpy(self) -> np.ndarray:
        n = self.model.n
        out = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for f in range(n):
                out[i, f] = self.entry(i, f).to_complex(self.model.n)
        return out


def _row_convolve(model: Model, row_a, row_b):
    """First row of the product of two circulants of coefficient vectors."""
    n, npr = model.n, model.n_prime
    out = [[0] * npr for _ in range(n)]
    for d, a in enumerate(row_a):
        if not any(a):
            continue
        for e, b in enumerate(row_b):
            if not any(b):
                continue
            dest = out[(d + e) % n]
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        if bj:
                            dest[(i + j) % npr] += ai * bj
    return tuple(tuple(r) for r in out)


def matrix_power_exact(model: Model, t: int) -> UnitaryPower:
    """Exact U^t by repeated squaring; entry (i,f) sums omega^phase over t-paths i->f."""
    if t < 0:
        raise PreconditionError("t must be >= 0")
    n, npr = model.n, model.n_prime
    identity = tuple(
        tuple(1 if (d == 0 and p == 0) else 0 for p in range(npr)) for d in range(n)
    )
    base = tuple(
        tuple(1 if p == (d * d) % npr else 0 for p in range(npr)) for d in range(n)
    )
    acc = identity
    sq = base
    k = t
    while k:
        if k & 1:
            acc = _row_convolve(model, acc, sq)
        k >>= 1
        if k:
            sq = _row_convolve(model, sq, sq)
    return UnitaryPower(model, t, acc)


def is_unitary_exact(power: UnitaryPower) -> bool:
    """Check (n^(t/2) U^t)(n^(t/2) U^t)^dagger = n^t I exactly."""
    model = power.model
    n, npr = model.n, model.n_prime
    adjoint = tuple(
        CycNum(npr, power.row[(-d) % n]).conj().coeffs for d in range(n)
    )
    prod = _row_convolve(model, power.row, adjoint)
    target = model.n**power.t
    for d in range(n):
        expected = target if d == 0 else 0
        if not (CycNum(npr, prod[d]) - CycNum.from_int(npr, expected)).is_zero():
            return False
    return True


def quadratic_gauss_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of sum_k omega_n^(k^2), which evaluates to sqrt(n) for
    n = 1 mod 4 and i*sqrt(n) for n = 3 mod 4."""
    out = [0] * n
    for k in range(n):
        out[(k * k) % n] += 1
    return tuple(out)


def _is_scalar_matrix(power: UnitaryPower, scalar: CycNum) -> bool:
    model = power.model
    n, npr = model.n, model.n_prime
    for d in range(1, n):
        if not CycNum(npr, power.row[d]).is_zero():
            return False
    return (CycNum(npr, power.row[0]) - scalar).is_zero()


def periodicity_class(model: Model) -> dict:
    """The exact period facts for U(n), verified entry by entry.

    Even n: U^(2n) is +1 (n = 0 mod 4) or -1 (n = 2 mod 4).  Odd n: U^n is
    +1 (n = 1 mod 4) or -i (n = 3 mod 4).  Always: U^(4n) = 1.
    """
    n, npr = model.n, model.n_prime
    facts: dict = {"n": n, "n_mod_4": model.n_mod4}
    checks = []
    if n % 2 == 0:
        sign = 1 if n % 4 == 0 else -1
        p2n = matrix_power_exact(model, 2 * n)
        scalar = CycNum.from_int(npr, sign * n**n)
        checks.append(_is_scalar_matrix(p2n, scalar))
        facts["power_2n"] = "+1" if sign == 1 else "-1"
    else:
        pn = matrix_power_exact(model, n)
        gauss = quadratic_gauss_coeffs(n)
        unit = n ** ((n - 1) // 2)
        if n % 4 == 1:
            # n^(n/2) = sqrt(n) * n^((n-1)/2) with sqrt(n) = the Gauss sum
            scalar = CycNum(npr, tuple(c * unit for c in gauss))
            facts["power_n"] = "+1"
        else:
            # -i n^(n/2) = -(i sqrt(n)) * n^((n-1)/2) with i sqrt(n) = the Gauss sum
            scalar = CycNum(npr, tuple(-c * unit for c in gauss))
            facts["power_n"] = "-i"
        checks.append(_is_scalar_matrix(pn, scalar))
    p4n = matrix_power_exact(model, 4 * n)
    checks.append(_is_scalar_matrix(p4n, CycNum.from_int(npr, n ** (2 * n))))
    facts["power_4n"] = "+1"
    facts["verified"] = all(checks)
    return facts


# -- numeric spectrum ---------------------------------------------------------


def _e(x: Fraction) -> complex:
    """e(x) = exp(2 pi i x), with the angle reduced exactly mod 1 first."""
    x = x - (x.numerator // x.denominator)
    return cmath.exp(2j * cmath.pi * float(x))


def transfer_matrix(model: Model) -> np.ndarray:
    n, npr = model.n, model.n_prime
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            out[j, k] = _e(Fraction(((j - k) ** 2) % npr, npr)) / np.sqrt(n)
    return out


def eigensystem(model: Model) -> list[tuple[complex, np.ndarray]]:
    """(eigenvalue, eigenvector) pairs of U(n) in the DFT basis, closed form."""
    n = model.n
    out = []
    for j in range(n):
        vec = np.array([_e(Fraction(j * k, n)) for k in range(n)]) / np.sqrt(n)
        if n % 2 == 0:
            lam = _e(Fraction(1, 8) - Fraction(j * j, 2 * n))
        else:
            lam = _e(-Fraction(j * j, 4 * n))
            if (n % 4 == 1 and j % 2 == 1) or (n % 4 == 3 and j % 2 == 0):
                lam *= 1j
        out.append((lam, vec))
    return out


def gauss_sum(a, b, m: int) -> complex:
    """G(a, b, m) = sum_{k=0}^{m-1} e((a k^2 + b k)/m) by direct summation."""
    if m < 1:
        raise PreconditionError("m must be >= 1")
    if isinstance(a, float) or isinstance(b, float):
        return sum(cmath.exp(2j * cmath.pi * (a * k * k + b * k) / m) for k in range(m))
    a, b = Fraction(a), Fraction(b)
    return sum(_e((a * k * k + b * k) / m) for k in range(m))
