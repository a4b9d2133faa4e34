"""The n-site hopper: a particle on a ring of n sites with one unitary hop per
time step.

A step from site j to site k carries amplitude omega^((j-k)^2) / sqrt(n),
where omega is a primitive root of unity of order n' = 2n (even n) or n
(odd n).  A t-path is a sequence of t+1 sites; its phase is the summed squared
displacement mod n', and its amplitude is the initial amplitude times the
product of step amplitudes, i.e. psi_i * omega^phase * n^(-t/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cyclotomic import CycNum
from .errors import PreconditionError

TPath = tuple[int, ...]


@dataclass(frozen=True)
class Model:
    """Ring size n plus the derived root-of-unity order n'."""

    n: int
    n_prime: int = field(init=False)

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError("the hopper needs at least 2 sites")
        object.__setattr__(self, "n_prime", 2 * self.n if self.n % 2 == 0 else self.n)

    @property
    def n_mod4(self) -> int:
        return self.n % 4

    def omega(self, p: int = 1) -> CycNum:
        """omega^p as an exact cyclotomic number."""
        coeffs = [0] * self.n_prime
        coeffs[p % self.n_prime] = 1
        return CycNum(self.n_prime, tuple(coeffs))

    def admissible_phases(self, i: int, f: int) -> tuple[int, ...]:
        """Phase powers a path from i to f can carry.

        For even n a path phase has the parity of i+f, so only every other
        power occurs; for odd n all of 0..n-1 occur.
        """
        if self.n % 2 == 0:
            start = (i - f) % 2
            return tuple(range(start, self.n_prime, 2))
        return tuple(range(self.n_prime))

    def check_site(self, j: int) -> None:
        if not 0 <= j < self.n:
            raise PreconditionError(f"site {j} out of range for n={self.n}")

    def to_json(self) -> dict:
        return {"n": self.n}

    @classmethod
    def from_json(cls, obj: dict) -> Model:
        return cls(int(obj["n"]))


def transfer_phase(model: Model, j: int, k: int) -> int:
    """Phase power of a single hop j -> k; the amplitude is omega^p / sqrt(n)."""
    model.check_site(j)
    model.check_site(k)
    return ((j - k) ** 2) % model.n_prime


def check_path(model: Model, path: TPath) -> None:
    if len(path) == 0:
        raise PreconditionError("a path must contain at least one site")
    for s in path:
        model.check_site(s)


def path_phase(model: Model, path: TPath) -> int:
    """Summed squared displacements mod n'; excludes the initial amplitude."""
    check_path(model, path)
    return sum((a - b) ** 2 for a, b in zip(path, path[1:])) % model.n_prime


@dataclass(frozen=True)
class InitialState:
    """Initial amplitudes psi_i, either exact (z_i * omega^(q_i), with a common
    constant c left implicit) or floating complex.
    """

    mode: str  # "exact" | "float"
    z: tuple[int, ...] | None = None
    q: tuple[int, ...] | None = None
    psi: tuple[complex, ...] | None = None

    @classmethod
    def exact(cls, z, q) -> InitialState:
        z = tuple(int(v) for v in z)
        q = tuple(int(v) for v in q)
        if len(z) != len(q):
            raise PreconditionError("z and q must have the same length")
        if not any(z):
            raise PreconditionError("an exact state needs at least one nonzero z_i")
        return cls("exact", z=z, q=q)

    @classmethod
    def from_amplitudes(cls, psi) -> InitialState:
        psi = tuple(complex(v) for v in psi)
        norm = sum(abs(v) ** 2 for v in psi)
        if abs(norm - 1.0) > 1e-9:
            raise PreconditionError(f"float state not normalized: sum |psi|^2 = {norm}")
        return cls("float", psi=psi)

    @property
    def n(self) -> int:
        return len(self.z) if self.mode == "exact" else len(self.psi)

    def amplitude_cyc(self, model: Model, i: int) -> CycNum:
        """psi_i / c as an exact number (exact mode only)."""
        if self.mode != "exact":
            raise PreconditionError("exact amplitude requested from a float state")
        return model.omega(self.q[i]) * self.z[i]

    def amplitude_complex(self, model: Model, i: int) -> complex:
        """psi_i as a complex number; exact states are normalized via c."""
        if self.mode == "float":
            return self.psi[i]
        c = 1.0 / math.sqrt(self.norm_sq_exact())
        return c * self.amplitude_cyc(model, i).to_complex(model.n)

    def norm_sq_exact(self) -> int:
        """Sum of z_i^2, i.e. 1/|c|^2 for a normalized exact state."""
        return sum(v * v for v in self.z)

    def check_model(self, model: Model) -> None:
        if self.n != model.n:
            raise PreconditionError(
                f"state has {self.n} amplitudes but the model has {model.n} sites"
            )

    def to_json(self) -> dict:
        if self.mode == "exact":
            return {"mode": "exact", "z": list(self.z), "q": list(self.q)}
        return {
            "mode": "float",
            "re": [v.real for v in self.psi],
            "im": [v.imag for v in self.psi],
        }

    @classmethod
    def from_json(cls, obj: dict) -> InitialState:
        if obj["mode"] == "exact":
            return cls.exact(obj["z"], obj["q"])
        if obj["mode"] == "float":
            return cls.from_amplitudes(
                [complex(r, i) for r, i in zip(obj["re"], obj["im"])]
            )
        raise PreconditionError(f"unknown state mode {obj['mode']!r}")


def path_amplitude(model: Model, path: TPath, psi: InitialState):
    """Amplitude of a t-path: exact CycNum (up to c) or a complex number.

    Exact mode: z_i * omega^(q_i + phase) with sqrt_n_exp = t.
    """
    check_path(model, path)
    psi.check_model(model)
    t = len(path) - 1
    p = path_phase(model, path)
    i = path[0]
    if psi.mode == "exact":
        amp = psi.amplitude_cyc(model, i).shifted(p)
        return CycNum(amp.order, amp.coeffs, t)
    unit = model.omega(p).to_complex(model.n)
    return psi.psi[i] * unit * model.n ** (-t / 2)
