"""Entanglement dynamics of two cavity-coupled exciton modes prepared from
cat-state cavity fields: closed forms, a nonorthogonal qubit embedding with
Wootters concurrence, and an independent truncated-space oracle."""

from .closed_form import (
    DissipativeConstants,
    concurrence_even,
    concurrence_odd,
    concurrence_odd_dissipative,
    dissipative_amplitudes,
    dissipative_peaks,
    dissipative_which_path,
    ideal_amplitudes,
    nbar_even,
    nbar_odd,
)
from .errors import (
    BudgetError,
    CatqedError,
    NumericalIntegrityError,
    RegimeError,
    ScenarioError,
    TruncationError,
)
from .fock_oracle import (
    BlockPropagator,
    FockSpace,
    FockState,
    build_hamiltonian,
    cavity_nbar,
    coherent_fock_vector,
    dissipative_amplitude_ode,
    dissipative_concurrence_oracle,
    evolve,
    exciton_reduced,
    ideal_oracle_curve,
    min_cutoff,
    poisson_tail,
    prepare_initial,
    project_to_qubits,
)
from .model import (
    CoherentSuperposition,
    ModeAmplitudes,
    Parity,
    SystemParams,
    TimeGrid,
    TimeUnit,
    TwoQubitDensity,
    coherent_overlap,
    make_even_cat,
    make_odd_cat,
    normalized_superposition,
)
from .qubit_embed import (
    QubitBasis,
    build_basis,
    reduced_density,
    spectrum_check_odd,
    sqrt_eigenvalues,
    wootters_concurrence,
)
from .scenario import (
    Scenario,
    SweepResult,
    VerifyReport,
    parse_scenario_file,
    run_sweep,
    run_verify,
    scenario_from_mapping,
)

__version__ = "0.1.0"
