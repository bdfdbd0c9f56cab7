"""Brute-force verification in a truncated occupation-number space.

State vectors over (cavity, exciton 1, exciton 2) with a provable
occupation-tail bound per mode. The coupling conserves the total excitation
number, so the Hamiltonian is block diagonal over that number; each populated
block is diagonalized once and evolved by phase multiplication, which turns a
dense sweep over times into cheap vector work. Every closed-form result in
the package is required to agree with this module.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.special import gammainc

from .closed_form import dissipative_which_path, ideal_amplitudes
from .errors import BudgetError, NumericalIntegrityError, TruncationError
from .model import (
    CoherentSuperposition,
    ModeAmplitudes,
    SystemParams,
    TimeGrid,
    TimeUnit,
    TwoQubitDensity,
    make_odd_cat,
)
from .qubit_embed import (
    QubitBasis,
    _VACUUM_PROJECTOR,
    build_basis,
    reduced_density,
    wootters_concurrence,
)

#: Occupation tail weight a cutoff must push below.
TAIL_TOL = 1e-10

#: Blocks up to this dimension are exponentiated by dense eigendecomposition.
DENSE_BLOCK_LIMIT = 400

#: Local error target of the adaptive integrator fallback.
ODE_TOL = 1e-12

#: Allowed norm drift of an evolved state.
NORM_TOL = 1e-10


def poisson_tail(abs_alpha: float, cutoff: int) -> float:
    """Probability that a coherent state of modulus abs_alpha occupies level
    `cutoff` or higher."""
    if cutoff < 1:
        return 1.0
    return float(gammainc(cutoff, abs_alpha**2))


def min_cutoff(abs_alpha: float, tail_tol: float = TAIL_TOL) -> int:
    """Smallest per-mode cutoff whose occupation tail is below tail_tol."""
    n = 1
    while poisson_tail(abs_alpha, n) >= tail_tol:
        n += 1
    return n


@dataclass(frozen=True)
class FockSpace:
    """Truncated three-mode occupation basis, C-ordered as (cavity, x1, x2)."""

    cutoff_cavity: int
    cutoff_exciton: int

    def __post_init__(self):
        if self.cutoff_cavity < 1 or self.cutoff_exciton < 1:
            raise ValueError("cutoffs must be >= 1")

    @property
    def dim(self) -> int:
        return self.cutoff_cavity * self.cutoff_exciton**2

    def index(self, k: int, n1: int, n2: int) -> int:
        return (k * self.cutoff_exciton + n1) * self.cutoff_exciton + n2

    def total_excitations(self) -> np.ndarray:
        """Total excitation number k + n1 + n2 of every basis state."""
        return _total_excitations(self.cutoff_cavity, self.cutoff_exciton)

    def blocks(self) -> dict[int, np.ndarray]:
        """Basis indices grouped by conserved total excitation number."""
        return _blocks(self.cutoff_cavity, self.cutoff_exciton)

    @classmethod
    def for_state(
        cls,
        sup: CoherentSuperposition,
        tail_tol: float = TAIL_TOL,
        budget: int | None = None,
    ) -> "FockSpace":
        """Space sized by the occupation-tail rule; exciton cutoffs match the
        cavity cutoff because the excitation can transfer completely."""
        cutoff = min_cutoff(max(abs(sup.alpha1), abs(sup.alpha2)), tail_tol)
        dim = cutoff**3
        if budget is not None and dim > budget:
            raise BudgetError(
                f"required cutoff {cutoff} gives dimension {dim}, over budget {budget}",
                required_cutoff=cutoff,
                required_dim=dim,
                budget=budget,
            )
        return cls(cutoff, cutoff)


@lru_cache(maxsize=32)
def _total_excitations(cc: int, ce: int) -> np.ndarray:
    k, n1, n2 = np.meshgrid(np.arange(cc), np.arange(ce), np.arange(ce), indexing="ij")
    tot = (k + n1 + n2).ravel()
    tot.flags.writeable = False
    return tot


@lru_cache(maxsize=32)
def _blocks(cc: int, ce: int) -> dict[int, np.ndarray]:
    tot = _total_excitations(cc, ce)
    out = {}
    for n in range(int(tot.max()) + 1):
        idx = np.nonzero(tot == n)[0]
        if idx.size:
            idx.flags.writeable = False
            out[n] = idx
    return out


@dataclass(frozen=True, eq=False)
class FockState:
    """Complex amplitude vector over a FockSpace (unit norm)."""

    amplitudes: np.ndarray
    space: FockSpace

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.shape != (self.space.dim,):
            raise ValueError(f"expected {self.space.dim} amplitudes, got shape {amp.shape}")
        dev = abs(np.linalg.norm(amp) - 1.0)
        if dev > 1e-9:
            raise ValueError(f"state norm deviates from 1 by {dev:.3e}")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    def reshaped(self) -> np.ndarray:
        """View with axes (cavity, exciton 1, exciton 2)."""
        ce = self.space.cutoff_exciton
        return self.amplitudes.reshape(self.space.cutoff_cavity, ce, ce)


def build_hamiltonian(params: SystemParams, space: FockSpace) -> sp.csr_matrix:
    """Sparse coupling Hamiltonian (hbar = 1):

        omega (a'a + b1'b1 + b2'b2) + g1 (b1'a + a'b1) + g2 (b2'a + a'b2)

    Hermitian exactly by construction.
    """
    cc, ce = space.cutoff_cavity, space.cutoff_exciton
    a = sp.diags(np.sqrt(np.arange(1, cc)), 1, format="csr")
    b = sp.diags(np.sqrt(np.arange(1, ce)), 1, format="csr")
    ic = sp.identity(cc, format="csr")
    ie = sp.identity(ce, format="csr")
    cav = sp.kron(sp.kron(a, ie), ie, format="csr")
    ex1 = sp.kron(sp.kron(ic, b), ie, format="csr")
    ex2 = sp.kron(sp.kron(ic, ie), b, format="csr")
    lowering = params.g1 * (ex1.getH() @ cav) + params.g2 * (ex2.getH() @ cav)
    h = lowering + lowering.getH()
    if params.omega != 0.0:
        h = h + sp.diags(params.omega * space.total_excitations().astype(float))
    return sp.csr_matrix(h)


def coherent_fock_vector(alpha: complex, cutoff: int) -> np.ndarray:
    """Number-basis coefficients of |alpha>, truncated at `cutoff` levels."""
    alpha = complex(alpha)
    coeff = np.zeros(cutoff, dtype=complex)
    coeff[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff):
        coeff[n] = coeff[n - 1] * alpha / math.sqrt(n)
    return coeff


def prepare_initial(sup: CoherentSuperposition, space: FockSpace) -> FockState:
    """Cavity register in the truncated, renormalized superposition; exciton
    registers in vacuum. Raises TruncationError naming the smallest
    sufficient cutoff when the occupation tail exceeds the budget."""
    worst = max(abs(sup.alpha1), abs(sup.alpha2))
    if poisson_tail(worst, space.cutoff_cavity) >= TAIL_TOL:
        needed = min_cutoff(worst)
        raise TruncationError(
            f"cavity cutoff {space.cutoff_cavity} leaves occupation tail >= {TAIL_TOL}; "
            f"cutoff {needed} is required for |alpha| = {worst:.6g}",
            required_cutoff=needed,
        )
    cavity = sup.c * coherent_fock_vector(sup.alpha1, space.cutoff_cavity)
    cavity += sup.d * coherent_fock_vector(sup.alpha2, space.cutoff_cavity)
    cavity /= np.linalg.norm(cavity)
    amp = np.zeros(space.dim, dtype=complex)
    amp[np.arange(space.cutoff_cavity) * space.cutoff_exciton**2] = cavity
    return FockState(amp, space)


def _ode_evolve(h_block, segment: np.ndarray, t: float, ode_tol: float) -> np.ndarray:
    sol = solve_ivp(
        lambda _t, y: -1j * (h_block @ y),
        (0.0, t),
        segment,
        method="DOP853",
        rtol=ode_tol,
        atol=ode_tol * 1e-2,
        t_eval=[t],
    )
    if not sol.success:
        raise NumericalIntegrityError(f"propagation integrator failed: {sol.message}")
    return sol.y[:, -1]


class BlockPropagator:
    """Reusable evolution operator exp(-i H t).

    Populated excitation blocks up to `dense_limit` states are diagonalized
    once and cached, so sweeping a time grid costs one eigendecomposition per
    block plus a phase application per point. Larger blocks fall back to an
    adaptive high-order integrator. With use_blocks=False the full space is
    treated as a single block.
    """

    def __init__(
        self,
        hamiltonian,
        space: FockSpace,
        use_blocks: bool = True,
        dense_limit: int = DENSE_BLOCK_LIMIT,
        ode_tol: float = ODE_TOL,
    ):
        self._h = sp.csr_matrix(hamiltonian)
        if self._h.shape != (space.dim, space.dim):
            raise ValueError("Hamiltonian shape does not match the space")
        self.space = space
        self.dense_limit = dense_limit
        self.ode_tol = ode_tol
        if use_blocks:
            self._index_sets = space.blocks()
        else:
            self._index_sets = {0: np.arange(space.dim)}
        self._dense: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._sparse: dict[int, sp.csr_matrix] = {}

    def _ensure(self, key: int, idx: np.ndarray):
        if key in self._dense or key in self._sparse:
            return
        sub = self._h[idx][:, idx]
        if idx.size <= self.dense_limit:
            energies, vectors = np.linalg.eigh(sub.toarray())
            self._dense[key] = (energies, vectors)
        else:
            self._sparse[key] = sp.csr_matrix(sub)

    def evolve(self, state: FockState, t: float) -> FockState:
        if t < 0.0:
            raise ValueError(f"t must be >= 0, got {t}")
        psi = state.amplitudes
        out = np.zeros_like(psi)
        for key, idx in self._index_sets.items():
            segment = psi[idx]
            if np.linalg.norm(segment) == 0.0:
                continue  # empty blocks stay empty: the number is conserved
            self._ensure(key, idx)
            if key in self._dense:
                energies, vectors = self._dense[key]
                out[idx] = vectors @ (np.exp(-1j * energies * t) * (vectors.conj().T @ segment))
            elif t > 0.0:
                out[idx] = _ode_evolve(self._sparse[key], segment, t, self.ode_tol)
            else:
                out[idx] = segment
        drift = abs(np.linalg.norm(out) - np.linalg.norm(psi))
        if drift > NORM_TOL:
            raise NumericalIntegrityError(
                f"evolution drifted the norm by {drift:.3e} (required <= {NORM_TOL})"
            )
        return FockState(out, state.space)


def evolve(
    state: FockState,
    hamiltonian,
    t: float,
    use_blocks: bool = True,
    dense_limit: int = DENSE_BLOCK_LIMIT,
    ode_tol: float = ODE_TOL,
) -> FockState:
    """One-shot exp(-i H t)|state>. Build a BlockPropagator directly when
    evaluating many times for the same Hamiltonian."""
    prop = BlockPropagator(
        hamiltonian, state.space, use_blocks=use_blocks, dense_limit=dense_limit, ode_tol=ode_tol
    )
    return prop.evolve(state, t)


def exciton_reduced(state: FockState) -> np.ndarray:
    """Density matrix of the exciton pair after tracing out the cavity:
    rho[(n1, n2), (m1, m2)] = sum_k psi[k, n1, n2] conj(psi[k, m1, m2])."""
    ce = state.space.cutoff_exciton
    flat = state.amplitudes.reshape(state.space.cutoff_cavity, ce * ce)
    return flat.T @ flat.conj()


def cavity_nbar(state: FockState) -> float:
    """Mean cavity photon number of the state."""
    weights = np.sum(np.abs(state.reshaped()) ** 2, axis=(1, 2))
    return float(np.arange(state.space.cutoff_cavity) @ weights)


def _orthonormal_pair(beta0: complex, beta1: complex, cutoff: int):
    f0 = coherent_fock_vector(beta0, cutoff)
    q0 = f0 / np.linalg.norm(f0)
    f1 = coherent_fock_vector(beta1, cutoff)
    q1 = f1 - np.vdot(q0, f1) * q0
    q1 /= np.linalg.norm(q1)
    return q0, q1


def project_to_qubits(
    rho_ex: np.ndarray, basis: QubitBasis, space: FockSpace
) -> tuple[TwoQubitDensity, float]:
    """Project the exciton density matrix onto the span of the per-mode
    coherent pairs, orthonormalized inside the truncated space.

    Returns the renormalized 4x4 state and the leakage, i.e. the fraction of
    weight found outside the four-dimensional span. A degenerate basis yields
    the bare |00><00| state with zero leakage, mirroring reduced_density.
    """
    if basis.degenerate:
        return TwoQubitDensity(_VACUUM_PROJECTOR), 0.0
    ce = space.cutoff_exciton
    q0a, q1a = _orthonormal_pair(basis.mode1.beta0, basis.mode1.beta1, ce)
    q0b, q1b = _orthonormal_pair(basis.mode2.beta0, basis.mode2.beta1, ce)
    frame = np.kron(np.column_stack([q0a, q1a]), np.column_stack([q0b, q1b]))
    projected = frame.conj().T @ rho_ex @ frame
    total = float(np.trace(rho_ex).real)
    weight = float(np.trace(projected).real)
    leakage = max(0.0, 1.0 - weight / total)
    rho_q = projected / weight
    rho_q = 0.5 * (rho_q + rho_q.conj().T)  # scrub matmul roundoff
    return TwoQubitDensity(rho_q), leakage


@dataclass(frozen=True)
class OracleCurve:
    """Observables of one exact-evolution sweep over dimensionless times."""

    gts: np.ndarray
    concurrence: np.ndarray
    nbar: np.ndarray
    projection_leakage: np.ndarray


def ideal_oracle_curve(
    sup: CoherentSuperposition,
    params: SystemParams,
    gts,
    tail_tol: float = TAIL_TOL,
    budget: int | None = None,
    dense_limit: int = DENSE_BLOCK_LIMIT,
    workers: int | None = None,
) -> OracleCurve:
    """Concurrence, mean photon number and projection leakage of the exact
    lossless evolution on a grid of dimensionless times gt.

    Independent of every closed form: the state is propagated numerically,
    the cavity is traced out, and the result is projected onto the logical
    basis. Grid cells only read shared immutable data, so they are mapped
    onto a thread pool when `workers` is given.
    """
    gts = np.asarray(gts, dtype=float)
    space = FockSpace.for_state(sup, tail_tol, budget)
    hamiltonian = build_hamiltonian(params, space)
    propagator = BlockPropagator(hamiltonian, space, dense_limit=dense_limit)
    initial = prepare_initial(sup, space)
    g = params.g

    def cell(gt: float):
        state = propagator.evolve(initial, gt / g)
        nbar = cavity_nbar(state)
        basis = build_basis(sup, ideal_amplitudes(params, gt / g))
        if basis.degenerate:
            return 0.0, nbar, 0.0
        rho_q, leakage = project_to_qubits(exciton_reduced(state), basis, space)
        return wootters_concurrence(rho_q), nbar, leakage

    if workers and workers > 1:
        propagator.evolve(initial, 0.0)  # warm the block cache before sharing
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(cell, gts))
    else:
        results = [cell(gt) for gt in gts]
    conc, nbar, leak = (np.array(column) for column in zip(*results))
    return OracleCurve(gts, conc, nbar, leak)


def dissipative_amplitude_ode(params: SystemParams, t_grid: TimeGrid) -> list[ModeAmplitudes]:
    """Integrate the damped coefficient system on a time grid.

    In the frame rotating at the mode frequency:

        du/dt   = -i kappa (v1 + v2)
        dv_m/dt = -i kappa u - (gamma / 2) v_m

    with the frequency phase restored on output. The gamma/2 amplitude decay
    is the unique rate consistent with the closed-form envelope exp(-gamma t/4)
    and oscillation scale sqrt(32 kappa^2 - gamma^2).
    """
    kappa = params.kappa  # raises RegimeError for unequal couplings
    gamma = params.gamma
    times = np.asarray(t_grid.absolute(params.g), dtype=float)

    def assemble(t: float, u: complex, v1: complex, v2: complex) -> ModeAmplitudes:
        phase = cmath.exp(-1j * params.omega * t)
        weight = abs(u) ** 2 + abs(v1) ** 2 + abs(v2) ** 2
        leak = min(1.0, max(0.0, 1.0 - weight))
        return ModeAmplitudes(u * phase, v1 * phase, v2 * phase, leak, check_tol=1e-9)

    if times[-1] == 0.0:
        return [assemble(0.0, 1.0, 0.0, 0.0) for _ in times]

    def rhs(_t, y):
        u, v1, v2 = y
        return np.array(
            [
                -1j * kappa * (v1 + v2),
                -1j * kappa * u - 0.5 * gamma * v1,
                -1j * kappa * u - 0.5 * gamma * v2,
            ]
        )

    sol = solve_ivp(
        rhs,
        (0.0, float(times[-1])),
        np.array([1.0, 0.0, 0.0], dtype=complex),
        t_eval=times,
        method="DOP853",
        rtol=ODE_TOL,
        atol=ODE_TOL * 1e-1,
    )
    if not sol.success:
        raise NumericalIntegrityError(f"amplitude integrator failed: {sol.message}")
    return [assemble(t, *sol.y[:, j]) for j, t in enumerate(times)]


def dissipative_concurrence_oracle(abs_alpha: float, params: SystemParams, t: float) -> float:
    """Lossy odd-cat concurrence rebuilt from integrated amplitudes.

    Runs the coefficient integration instead of the closed-form coefficients,
    then assembles the reduced state and takes its Wootters concurrence.
    """
    if not abs_alpha > 0.0:
        raise ValueError(f"abs_alpha must be > 0, got {abs_alpha}")
    grid = TimeGrid(np.array([t], dtype=float), TimeUnit.ABSOLUTE)
    amps = dissipative_amplitude_ode(params, grid)[-1]
    sup = make_odd_cat(abs_alpha)
    rho, degenerate = reduced_density(
        sup, amps, dissipative_which_path(abs_alpha, abs(amps.v1))
    )
    if degenerate:
        return 0.0
    return wootters_concurrence(rho)
