"""Analytic coefficient and entanglement formulas.

Without decay a single cavity excitation rotates coherently into the exciton
modes at the total coupling g, so every formula depends on time only through
gt. With radiative decay of the excitons (equal couplings), eliminating the
continuum leaves a damped oscillation at delta/4 = sqrt(32 kappa^2 - gamma^2)/4
under an exp(-gamma t / 4) envelope.

Concurrence outputs are clamped to [0, 1]; a pre-clamp excursion beyond
1e-9 raises, since that indicates a defect rather than roundoff.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalIntegrityError, RegimeError
from .model import ModeAmplitudes, SystemParams

#: Allowed excursion outside [0, 1] before clamping raises.
CLAMP_GUARD = 1e-9

#: Convergence tolerance (in gt) of the golden-section peak search.
PEAK_XTOL = 1e-10


def _clamp_unit(value, what: str):
    arr = np.asarray(value, dtype=float)
    lo = float(arr.min())
    hi = float(arr.max())
    if lo < -CLAMP_GUARD or hi > 1.0 + CLAMP_GUARD:
        raise NumericalIntegrityError(
            f"{what} left [0, 1] by more than {CLAMP_GUARD}: range [{lo:.3e}, {hi:.3e}]"
        )
    out = np.clip(arr, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _require_positive_alpha(abs_alpha: float):
    if not abs_alpha > 0.0:
        raise ValueError(f"abs_alpha must be > 0 for an odd preparation, got {abs_alpha}")


@dataclass(frozen=True)
class DissipativeConstants:
    """Underdamped decay constants: delta = sqrt(32 kappa^2 - gamma^2).

    Only the oscillatory regime 32 kappa^2 > gamma^2 is representable;
    overdamped parameters are rejected rather than analytically continued.
    """

    delta: float
    kappa: float
    gamma: float

    @classmethod
    def from_params(cls, params: SystemParams) -> "DissipativeConstants":
        kappa = params.kappa  # raises RegimeError for unequal couplings
        disc = 32.0 * kappa**2 - params.gamma**2
        if disc <= 0.0:
            raise RegimeError(
                f"overdamped regime: gamma={params.gamma} >= sqrt(32)*kappa="
                f"{math.sqrt(32.0) * kappa:.6g}; only 32*kappa^2 > gamma^2 is supported"
            )
        return cls(delta=math.sqrt(disc), kappa=kappa, gamma=params.gamma)


def ideal_amplitudes(params: SystemParams, t: float) -> ModeAmplitudes:
    """Lossless coefficients: u = cos(gt), v_m = -i (g_m/g) sin(gt), times the
    global phase exp(-i omega t)."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    g = params.g
    phase = cmath.exp(-1j * params.omega * t)
    s = math.sin(g * t)
    return ModeAmplitudes(
        u=math.cos(g * t) * phase,
        v1=-1j * (params.g1 / g) * s * phase,
        v2=-1j * (params.g2 / g) * s * phase,
        leak=0.0,
    )


def dissipative_amplitudes(params: SystemParams, t: float) -> ModeAmplitudes:
    """Coefficients with radiative exciton decay (equal couplings only).

    u  = exp(-gamma t/4) [cos(delta t/4) + (gamma/delta) sin(delta t/4)] e^(-i omega t)
    v1 = v2 = (4 kappa/delta) exp(-gamma t/4) sin(delta t/4) e^(-i omega t)

    The v expression is kept verbatim from its source convention, which drops
    a constant -i relative to the lossless v_m; observables use |v| only.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    consts = DissipativeConstants.from_params(params)
    gamma, delta, kappa = consts.gamma, consts.delta, consts.kappa
    envelope = math.exp(-0.25 * gamma * t)
    th = 0.25 * delta * t
    phase = cmath.exp(-1j * params.omega * t)
    u = envelope * (math.cos(th) + (gamma / delta) * math.sin(th)) * phase
    v = (4.0 * kappa / delta) * envelope * math.sin(th) * phase
    leak = min(1.0, max(0.0, 1.0 - (abs(u) ** 2 + 2.0 * abs(v) ** 2)))
    return ModeAmplitudes(u=u, v1=v, v2=v, leak=leak)


def concurrence_odd(abs_alpha: float, gt) -> float:
    """Exciton concurrence for an odd-cat cavity preparation, at dimensionless
    time gt. Reaches exactly 1 at gt = (n + 1/2) pi and 0 at gt = n pi."""
    _require_positive_alpha(abs_alpha)
    a2 = abs_alpha**2
    num = np.exp(-2.0 * np.cos(gt) ** 2 * a2) * (-np.expm1(-2.0 * np.sin(gt) ** 2 * a2))
    return _clamp_unit(num / (-math.expm1(-2.0 * a2)), "odd concurrence")


def concurrence_even(abs_alpha: float, gt) -> float:
    """Exciton concurrence for an even-cat preparation; bounded below 1 for
    finite amplitude and approaching 1 as the amplitude grows."""
    if abs_alpha < 0.0:
        raise ValueError(f"abs_alpha must be >= 0, got {abs_alpha}")
    a2 = abs_alpha**2
    num = np.exp(-2.0 * np.cos(gt) ** 2 * a2) * (-np.expm1(-2.0 * np.sin(gt) ** 2 * a2))
    return _clamp_unit(num / (1.0 + math.exp(-2.0 * a2)), "even concurrence")


def nbar_odd(abs_alpha: float, gt) -> float:
    """Mean cavity photon number for the odd-cat preparation."""
    _require_positive_alpha(abs_alpha)
    a2 = abs_alpha**2
    out = a2 * np.cos(gt) ** 2 * (1.0 + math.exp(-2.0 * a2)) / (-math.expm1(-2.0 * a2))
    return float(out) if np.ndim(out) == 0 else out


def nbar_even(abs_alpha: float, gt) -> float:
    """Mean cavity photon number for the even-cat preparation."""
    if abs_alpha < 0.0:
        raise ValueError(f"abs_alpha must be >= 0, got {abs_alpha}")
    a2 = abs_alpha**2
    out = a2 * np.cos(gt) ** 2 * (-math.expm1(-2.0 * a2)) / (1.0 + math.exp(-2.0 * a2))
    return float(out) if np.ndim(out) == 0 else out


def dissipative_which_path(abs_alpha: float, v1_mod: float) -> float:
    """Modulus of the branch overlap of all traced-out modes (cavity plus
    radiation continuum) when each exciton mode retains weight |v1|^2."""
    return math.exp(-2.0 * abs_alpha**2 * (1.0 - 2.0 * v1_mod**2))


def _odd_concurrence_from_transfer(a2: float, transfer: float) -> float:
    num = math.exp(-2.0 * a2 * (1.0 - 2.0 * transfer)) * (-math.expm1(-4.0 * a2 * transfer))
    return num / (-math.expm1(-2.0 * a2))


def concurrence_odd_dissipative(abs_alpha: float, params: SystemParams, t: float) -> float:
    """Odd-cat concurrence with radiative exciton decay.

    Equals concurrence_odd at every time when gamma = 0; with decay the
    oscillation peaks shrink monotonically.
    """
    _require_positive_alpha(abs_alpha)
    amps = dissipative_amplitudes(params, t)
    value = _odd_concurrence_from_transfer(abs_alpha**2, abs(amps.v1) ** 2)
    return _clamp_unit(value, "dissipative odd concurrence")


def _golden_section_max(f, lo: float, hi: float, xtol: float):
    """Locate the maximum of a unimodal f on [lo, hi] to within xtol."""
    inv = 0.5 * (math.sqrt(5.0) - 1.0)
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def dissipative_peaks(
    abs_alpha: float, params: SystemParams, count: int, xtol: float = PEAK_XTOL
) -> list[tuple[float, float]]:
    """First `count` local maxima of the lossy odd-cat concurrence.

    Peak n is bracketed inside gt in ((n + 1/4) pi, (n + 3/4) pi) and located
    by golden-section search; returns (gt, concurrence) pairs in time order.
    """
    _require_positive_alpha(abs_alpha)
    g = params.g
    peaks = []
    for n in range(count):
        lo = (n + 0.25) * math.pi
        hi = (n + 0.75) * math.pi
        gt_peak, value = _golden_section_max(
            lambda gt: concurrence_odd_dissipative(abs_alpha, params, gt / g), lo, hi, xtol
        )
        peaks.append((gt_peak, value))
    return peaks
