"""Core value types for two cavity-coupled exciton modes.

Conventions used throughout the package: hbar = 1, couplings and rates are
angular frequencies, and the coherent-state inner product is

    <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) * b).

All types are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import InitVar, dataclass

import numpy as np

from .errors import RegimeError

#: Default tolerance for construction-time invariant checks (double-precision scale).
VALIDATION_TOL = 1e-12

#: Eigenvalue floor below which a density matrix is rejected as non-positive.
PSD_FLOOR = -1e-10


def coherent_overlap(a: complex, b: complex) -> complex:
    """Inner product <a|b> of two coherent states with amplitudes a and b."""
    a = complex(a)
    b = complex(b)
    return cmath.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + a.conjugate() * b)


class Parity(enum.Enum):
    """Symmetry class of a two-component coherent superposition."""

    ODD = "odd"
    EVEN = "even"
    GENERAL = "general"


class TimeUnit(enum.Enum):
    """How grid points are expressed: as g*t/pi or as absolute time."""

    GT_OVER_PI = "gt_over_pi"
    ABSOLUTE = "absolute"


@dataclass(frozen=True)
class SystemParams:
    """Physical constants of one scenario.

    g1, g2 : coupling of exciton mode one / two to the cavity (> 0)
    omega  : shared mode frequency; enters every amplitude only as a global
             phase and cancels in all observables
    gamma  : exciton decay rate into the radiation continuum (>= 0)
    """

    g1: float
    g2: float
    omega: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not (self.g1 > 0.0 and self.g2 > 0.0):
            raise ValueError(f"couplings must be positive, got g1={self.g1}, g2={self.g2}")
        if self.omega < 0.0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")

    @property
    def g(self) -> float:
        """Total coupling sqrt(g1^2 + g2^2), recomputed on every access."""
        return math.hypot(self.g1, self.g2)

    @property
    def symmetric(self) -> bool:
        """True when the two couplings are equal to within roundoff."""
        return abs(self.g1 - self.g2) <= VALIDATION_TOL * self.g

    @property
    def kappa(self) -> float:
        """Per-mode coupling g/sqrt(2); defined only for equal couplings."""
        self.require_symmetric("kappa")
        return self.g / math.sqrt(2.0)

    def require_symmetric(self, context: str):
        if not self.symmetric:
            raise RegimeError(
                f"{context} requires equal couplings, got g1={self.g1}, g2={self.g2}"
            )


@dataclass(frozen=True)
class CoherentSuperposition:
    """Normalized cavity state c|alpha1> + d|alpha2>."""

    alpha1: complex
    alpha2: complex
    c: complex
    d: complex
    parity: Parity = Parity.GENERAL

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        dev = abs(self.norm_squared() - 1.0)
        if dev > VALIDATION_TOL:
            raise ValueError(f"superposition is not normalized: |<psi|psi>-1| = {dev:.3e}")
        if self.parity is not Parity.GENERAL:
            if abs(self.alpha2 + self.alpha1) > VALIDATION_TOL * max(1.0, abs(self.alpha1)):
                raise ValueError(f"{self.parity.value} parity requires alpha2 = -alpha1")
            rel = self.d if self.parity is Parity.EVEN else -self.d
            if abs(self.c - rel) > VALIDATION_TOL:
                raise ValueError(f"coefficients inconsistent with {self.parity.value} parity")

    def norm_squared(self) -> float:
        cross = self.c.conjugate() * self.d * coherent_overlap(self.alpha1, self.alpha2)
        return abs(self.c) ** 2 + abs(self.d) ** 2 + 2.0 * cross.real

    @property
    def abs_alpha(self) -> float:
        """Modulus of the first component amplitude."""
        return abs(self.alpha1)


def make_odd_cat(alpha: complex) -> CoherentSuperposition:
    """Odd superposition of |alpha> and |-alpha>, populating odd photon numbers.

    Undefined at alpha = 0, where the two components cancel.
    """
    alpha = complex(alpha)
    if alpha == 0:
        raise ValueError("odd cat is undefined at alpha = 0 (the superposition vanishes)")
    n = (2.0 - 2.0 * math.exp(-2.0 * abs(alpha) ** 2)) ** -0.5
    return CoherentSuperposition(alpha, -alpha, n, -n, Parity.ODD)


def make_even_cat(alpha: complex) -> CoherentSuperposition:
    """Even superposition of |alpha> and |-alpha>; reduces to vacuum at alpha = 0."""
    alpha = complex(alpha)
    n = (2.0 + 2.0 * math.exp(-2.0 * abs(alpha) ** 2)) ** -0.5
    return CoherentSuperposition(alpha, -alpha, n, n, Parity.EVEN)


def normalized_superposition(
    c: complex, d: complex, alpha1: complex, alpha2: complex
) -> CoherentSuperposition:
    """General two-component superposition, rescaled to unit norm."""
    cross = complex(c).conjugate() * complex(d) * coherent_overlap(alpha1, alpha2)
    nsq = abs(c) ** 2 + abs(d) ** 2 + 2.0 * cross.real
    if nsq <= VALIDATION_TOL:
        raise ValueError("superposition has (numerically) zero norm")
    scale = math.sqrt(nsq)
    return CoherentSuperposition(alpha1, alpha2, c / scale, d / scale, Parity.GENERAL)


@dataclass(frozen=True)
class ModeAmplitudes:
    """Coefficient triple (u, v1, v2) of the coupled-mode solution at one
    instant, plus the total weight leaked to the radiation continuum.

    Closed under |u|^2 + |v1|^2 + |v2|^2 + leak = 1; leak is 0 without decay.
    """

    u: complex
    v1: complex
    v2: complex
    leak: float = 0.0
    check_tol: InitVar[float] = VALIDATION_TOL

    def __post_init__(self, check_tol):
        for name in ("u", "v1", "v2"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if not 0.0 <= self.leak <= 1.0:
            raise ValueError(f"leak must lie in [0, 1], got {self.leak}")
        dev = abs(self.mode_weight + self.leak - 1.0)
        if dev > check_tol:
            raise ValueError(f"amplitude weights sum to 1 {dev:.3e} away from 1")

    @property
    def mode_weight(self) -> float:
        """Weight retained by the cavity and the two exciton modes."""
        return abs(self.u) ** 2 + abs(self.v1) ** 2 + abs(self.v2) ** 2


@dataclass(frozen=True, eq=False)
class TwoQubitDensity:
    """4x4 density matrix in the product basis {|00>, |01>, |10>, |11>}.

    Construction enforces hermiticity, unit trace, and positivity up to a
    small numerical floor; the stored array is read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        herm_dev = float(np.abs(m - m.conj().T).max())
        if herm_dev > VALIDATION_TOL:
            raise ValueError(f"matrix is not Hermitian: max deviation {herm_dev:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > VALIDATION_TOL:
            raise ValueError(f"trace must be 1, got {tr}")
        lo = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
        if lo < PSD_FLOOR:
            raise ValueError(f"matrix is not positive semidefinite: min eigenvalue {lo:.3e}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing, nonnegative grid of evaluation times."""

    points: np.ndarray
    unit: TimeUnit = TimeUnit.GT_OVER_PI

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("grid must be a nonempty 1-D sequence")
        if pts[0] < 0.0:
            raise ValueError("grid points must be >= 0")
        if pts.size > 1 and not np.all(np.diff(pts) > 0.0):
            raise ValueError("grid points must be strictly increasing")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size

    def gt(self, g: float) -> np.ndarray:
        """Grid as dimensionless g*t values."""
        if self.unit is TimeUnit.GT_OVER_PI:
            return self.points * math.pi
        return self.points * g

    def gt_over_pi(self, g: float) -> np.ndarray:
        if self.unit is TimeUnit.GT_OVER_PI:
            return self.points.copy()
        return self.points * (g / math.pi)

    def absolute(self, g: float) -> np.ndarray:
        """Grid as absolute times for total coupling g."""
        if self.unit is TimeUnit.GT_OVER_PI:
            return self.points * (math.pi / g)
        return self.points.copy()

    @classmethod
    def linspace(
        cls, stop: float, num: int, unit: TimeUnit = TimeUnit.GT_OVER_PI, start: float = 0.0
    ) -> "TimeGrid":
        return cls(np.linspace(start, stop, num), unit)
