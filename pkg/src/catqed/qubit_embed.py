"""Two-qubit reduction of the exciton pair in a coherent-pair basis.

At time t each exciton mode m carries one of two coherent components,
alpha1*v_m or alpha2*v_m. Taking the first as the logical zero and
Gram-Schmidt-orthogonalizing the second against it embeds the pair of modes
into an ordinary two-qubit space, where entanglement is measured by the
Wootters concurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalIntegrityError
from .model import (
    CoherentSuperposition,
    ModeAmplitudes,
    Parity,
    TwoQubitDensity,
    coherent_overlap,
)

#: A mode basis is degenerate when 1 - P^2 falls below this.
DEGENERACY_EPS = 1e-12

#: Eigenvalues of the spin-flipped product below this are exact zeros of the
#: rank-deficient matrix; flooring them keeps sqrt from amplifying noise.
EIG_ZERO_FLOOR = 1e-12

#: Integrity bounds on eigenvalues of the spin-flipped product.
EIG_IMAG_TOL = 1e-8
EIG_NEG_TOL = 1e-8

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SIGMA_YY = np.kron(_SIGMA_Y, _SIGMA_Y)

_VACUUM_PROJECTOR = np.zeros((4, 4), dtype=complex)
_VACUUM_PROJECTOR[0, 0] = 1.0


@dataclass(frozen=True)
class ModeQubit:
    """Logical basis data of one exciton mode.

    beta0, beta1 : the two coherent amplitudes spanning the mode
    overlap      : P = |<beta0|beta1>|
    norm         : sqrt(1 - P^2), weight of the orthogonalized one-state
    degenerate   : the amplitudes coincide and no one-state exists
    """

    beta0: complex
    beta1: complex
    overlap: float
    norm: float
    degenerate: bool


@dataclass(frozen=True)
class QubitBasis:
    mode1: ModeQubit
    mode2: ModeQubit

    @property
    def degenerate(self) -> bool:
        return self.mode1.degenerate or self.mode2.degenerate


def _mode_qubit(beta0: complex, beta1: complex) -> ModeQubit:
    p = abs(coherent_overlap(beta0, beta1))
    nsq = max(0.0, 1.0 - p * p)
    return ModeQubit(beta0, beta1, p, math.sqrt(nsq), nsq < DEGENERACY_EPS)


def build_basis(sup: CoherentSuperposition, amps: ModeAmplitudes) -> QubitBasis:
    """Per-mode logical bases for superposition branches alpha1, alpha2 with
    mode coefficients v1, v2. Degeneracy is flagged, never raised."""
    return QubitBasis(
        _mode_qubit(sup.alpha1 * amps.v1, sup.alpha2 * amps.v1),
        _mode_qubit(sup.alpha1 * amps.v2, sup.alpha2 * amps.v2),
    )


def reduced_density(
    sup: CoherentSuperposition, amps: ModeAmplitudes, which_path: float
) -> tuple[TwoQubitDensity, bool]:
    """Two-exciton density matrix in the logical basis.

    `which_path` is the modulus of the overlap between the two branch states
    of everything traced out (cavity, and radiation continuum when present);
    it scales the cross terms between the branches. Returns the matrix and a
    degeneracy flag; a degenerate basis yields the bare |00><00| state, which
    carries zero concurrence, so sweeps cross those instants smoothly.

    The assembled matrix is normalized by its trace; for cat-state input the
    trace must already be 1 up to 1e-9, anything worse raises.
    """
    basis = build_basis(sup, amps)
    if basis.degenerate:
        return TwoQubitDensity(_VACUUM_PROJECTOR), True

    w1 = coherent_overlap(basis.mode1.beta0, basis.mode1.beta1)
    w2 = coherent_overlap(basis.mode2.beta0, basis.mode2.beta1)
    # branch alpha1 maps to |00>; branch alpha2 to (w1|0> + N1|1>) x (w2|0> + N2|1>)
    e00 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    chi = np.kron(
        np.array([w1, basis.mode1.norm], dtype=complex),
        np.array([w2, basis.mode2.norm], dtype=complex),
    )
    cross = sup.c.conjugate() * sup.d * which_path
    rho = (
        abs(sup.c) ** 2 * np.outer(e00, e00)
        + abs(sup.d) ** 2 * np.outer(chi, chi.conj())
        + cross * np.outer(chi, e00)
        + cross.conjugate() * np.outer(e00, chi.conj())
    )
    trace = float(np.trace(rho).real)
    if sup.parity is not Parity.GENERAL and abs(trace - 1.0) > 1e-9:
        raise NumericalIntegrityError(
            f"cat-state reduced density trace deviates from 1 by {abs(trace - 1.0):.3e}"
        )
    return TwoQubitDensity(rho / trace), False


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, TwoQubitDensity):
        return rho.matrix
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    return m


def sqrt_eigenvalues(rho) -> np.ndarray:
    """Square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy), in
    decreasing order.

    The product is similar to a positive-semidefinite matrix, so eigenvalues
    with imaginary part above 1e-8 or real part below -1e-8 raise; small
    negatives and sub-floor positives are treated as exact zeros.
    """
    m = _as_matrix(rho)
    product = m @ _SIGMA_YY @ m.conj() @ _SIGMA_YY
    ev = np.linalg.eigvals(product)
    worst_imag = float(np.abs(ev.imag).max())
    worst_neg = float(ev.real.min())
    if worst_imag > EIG_IMAG_TOL or worst_neg < -EIG_NEG_TOL:
        raise NumericalIntegrityError(
            f"spin-flip spectrum integrity violated: max |imag| {worst_imag:.3e}, "
            f"min real {worst_neg:.3e}"
        )
    re = ev.real.copy()
    re[re < EIG_ZERO_FLOOR] = 0.0
    lam = np.sqrt(re)
    lam[::-1].sort()
    return lam


def wootters_concurrence(rho) -> float:
    """Concurrence max(l1 - l2 - l3 - l4, 0) of a two-qubit density matrix."""
    lam = sqrt_eigenvalues(rho)
    value = float(lam[0] - lam[1] - lam[2] - lam[3])
    if value > 1.0 + 1e-9:
        raise NumericalIntegrityError(f"concurrence exceeded 1 by {value - 1.0:.3e}")
    return min(max(value, 0.0), 1.0)


def spectrum_check_odd(abs_alpha: float, gt: float) -> tuple[float, float, float, float]:
    """Closed-form square-root spectrum for the odd-cat reduced state:
    two nonzero roots and a doubly degenerate zero."""
    if not abs_alpha > 0.0:
        raise ValueError(f"abs_alpha must be > 0, got {abs_alpha}")
    a2 = abs_alpha**2
    shared = -math.expm1(-2.0 * math.sin(gt) ** 2 * a2)
    ec = math.exp(-2.0 * math.cos(gt) ** 2 * a2)
    den = 2.0 * (-math.expm1(-2.0 * a2))
    return (shared * (1.0 + ec) / den, shared * (1.0 - ec) / den, 0.0, 0.0)
