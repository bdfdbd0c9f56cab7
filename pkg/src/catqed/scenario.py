"""Scenario configuration plus the sweep and verification engines.

A scenario couples one parameter set, one cavity preparation and one time
grid with the observables to evaluate. Sweeps produce deterministic CSV
tables (12 significant digits, no timestamps); verification runs the
truncated-space or amplitude-integration oracle next to every closed form
and reports the worst deviation per observable.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import closed_form, fock_oracle
from .errors import ScenarioError
from .model import (
    CoherentSuperposition,
    Parity,
    SystemParams,
    TimeGrid,
    coherent_overlap,
    make_even_cat,
    make_odd_cat,
)
from .qubit_embed import reduced_density, spectrum_check_odd, wootters_concurrence

#: Documented scenario-file keys, in header order.
SCENARIO_KEYS = (
    "parity",
    "alpha_re",
    "alpha_im",
    "g1",
    "g2",
    "omega",
    "gamma",
    "t_max_over_pi",
    "n_points",
    "oracle",
    "cutoff_budget",
)

DEFAULTS: dict = {
    "parity": "odd",
    "alpha_re": 1.0,
    "alpha_im": 0.0,
    "g1": 2**-0.5,
    "g2": 2**-0.5,
    "omega": 0.0,
    "gamma": 0.0,
    "t_max_over_pi": 2.0,
    "n_points": 401,
    "oracle": False,
    "cutoff_budget": 250_000,
}

KNOWN_OUTPUTS = ("concurrence", "nbar", "leakage", "spectrum")

DEFAULT_TOLERANCES = {
    "concurrence": 1e-6,
    "nbar": 1e-6,
    "projection_leakage": 1e-9,
    "amplitude_modulus": 1e-8,
    "concurrence_dissipative": 1e-8,
}

_WORKERS = max(1, min(8, os.cpu_count() or 1))


@dataclass(frozen=True, eq=False)
class Scenario:
    """One fully specified run: parameters, preparation, grid, observables."""

    params: SystemParams
    cat: CoherentSuperposition
    grid: TimeGrid
    outputs: tuple[str, ...] = ("concurrence", "nbar", "leakage")
    oracle: bool = False
    cutoff_budget: int = DEFAULTS["cutoff_budget"]
    tolerances: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.outputs:
            raise ScenarioError("observable set must not be empty")
        unknown = [name for name in self.outputs if name not in KNOWN_OUTPUTS]
        if unknown:
            raise ScenarioError(f"unknown outputs {unknown}; known: {KNOWN_OUTPUTS}")
        if len(self.grid) == 0:
            raise ScenarioError("time grid must not be empty")
        if self.dissipative:
            if self.cat.parity is not Parity.ODD:
                raise ScenarioError("decay (gamma > 0) is supported only for odd-cat input")
            bad = [name for name in self.outputs if name in ("nbar", "spectrum")]
            if bad:
                raise ScenarioError(f"outputs {bad} have no closed form with gamma > 0")
            try:
                closed_form.DissipativeConstants.from_params(self.params)
            except ValueError as exc:  # RegimeError included
                raise ScenarioError(str(exc)) from exc
        if "spectrum" in self.outputs and self.cat.parity is not Parity.ODD:
            raise ScenarioError("spectrum output is defined for odd-cat input only")
        if "nbar" in self.outputs and self.cat.parity is Parity.GENERAL:
            raise ScenarioError("nbar output requires a cat-state preparation")

    @property
    def dissipative(self) -> bool:
        return self.params.gamma > 0.0

    def tolerance(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def header_items(self) -> list[tuple[str, str]]:
        def fmt(x) -> str:
            return repr(float(x))

        items = [
            ("parity", self.cat.parity.value),
            ("alpha_re", fmt(self.cat.alpha1.real)),
            ("alpha_im", fmt(self.cat.alpha1.imag)),
        ]
        if self.cat.parity is Parity.GENERAL:
            items += [
                ("alpha2_re", fmt(self.cat.alpha2.real)),
                ("alpha2_im", fmt(self.cat.alpha2.imag)),
                ("c_re", fmt(self.cat.c.real)),
                ("c_im", fmt(self.cat.c.imag)),
                ("d_re", fmt(self.cat.d.real)),
                ("d_im", fmt(self.cat.d.imag)),
            ]
        items += [
            ("g1", fmt(self.params.g1)),
            ("g2", fmt(self.params.g2)),
            ("omega", fmt(self.params.omega)),
            ("gamma", fmt(self.params.gamma)),
            ("t_max_over_pi", fmt(self.grid.gt_over_pi(self.params.g)[-1])),
            ("n_points", str(len(self.grid))),
            ("oracle", "true" if self.oracle else "false"),
            ("cutoff_budget", str(self.cutoff_budget)),
            ("outputs", ",".join(self.outputs)),
        ]
        return items


def parse_scenario_file(path) -> dict[str, str]:
    """Flat key=value text; blank lines and '#' comments are ignored."""
    raw: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ScenarioError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
            key, _, value = stripped.partition("=")
            raw[key.strip()] = value.strip()
    return raw


def _coerce(key: str, value):
    if isinstance(value, str):
        text = value.strip()
        if key == "parity":
            return text.lower()
        if key in ("n_points", "cutoff_budget"):
            return int(text)
        if key == "oracle":
            lowered = text.lower()
            if lowered in ("true", "1", "yes", "on"):
                return True
            if lowered in ("false", "0", "no", "off"):
                return False
            raise ScenarioError(f"cannot parse boolean {key}={text!r}")
        return float(text)
    return value


def scenario_from_mapping(
    mapping: Mapping,
    outputs: tuple[str, ...] | None = None,
    tolerances: Mapping[str, float] | None = None,
) -> Scenario:
    """Build a scenario from scenario-file keys (strings or typed values);
    unknown keys are rejected. Values missing from the mapping fall back to
    the documented defaults."""
    unknown = [key for key in mapping if key not in SCENARIO_KEYS]
    if unknown:
        raise ScenarioError(f"unknown scenario keys {unknown}; known: {list(SCENARIO_KEYS)}")
    values = dict(DEFAULTS)
    for key, value in mapping.items():
        try:
            values[key] = _coerce(key, value)
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"bad value for {key}: {exc}") from exc

    try:
        params = SystemParams(
            g1=values["g1"], g2=values["g2"], omega=values["omega"], gamma=values["gamma"]
        )
        alpha = complex(values["alpha_re"], values["alpha_im"])
        if values["parity"] == "odd":
            cat = make_odd_cat(alpha)
        elif values["parity"] == "even":
            cat = make_even_cat(alpha)
        else:
            raise ScenarioError(f"parity must be odd or even, got {values['parity']!r}")
        if values["n_points"] < 1:
            raise ScenarioError("n_points must be >= 1")
        grid = TimeGrid.linspace(values["t_max_over_pi"], values["n_points"])
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc

    if outputs is None:
        if values["gamma"] > 0.0:
            outputs = ("concurrence", "leakage")
        else:
            outputs = ("concurrence", "nbar", "leakage")
    return Scenario(
        params=params,
        cat=cat,
        grid=grid,
        outputs=tuple(outputs),
        oracle=values["oracle"],
        cutoff_budget=values["cutoff_budget"],
        tolerances=dict(tolerances or {}),
    )


def _format_value(x: float) -> str:
    return format(float(x) + 0.0, ".12g")  # +0.0 normalizes negative zero


@dataclass(frozen=True)
class SweepResult:
    header_items: tuple[tuple[str, str], ...]
    columns: tuple[str, ...]
    rows: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def to_csv(self) -> str:
        lines = [f"# {key}={value}" for key, value in self.header_items]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(_format_value(x) for x in row))
        return "\n".join(lines) + "\n"


def _analytic_concurrence(scenario: Scenario, gts: np.ndarray) -> np.ndarray:
    cat, params = scenario.cat, scenario.params
    if scenario.dissipative:
        g = params.g
        return np.array(
            [
                closed_form.concurrence_odd_dissipative(cat.abs_alpha, params, gt / g)
                for gt in gts
            ]
        )
    if cat.parity is Parity.ODD:
        return np.asarray(closed_form.concurrence_odd(cat.abs_alpha, gts))
    if cat.parity is Parity.EVEN:
        return np.asarray(closed_form.concurrence_even(cat.abs_alpha, gts))
    # general superposition: no specialized formula, use the embedding machinery
    g = params.g
    out = np.empty_like(gts)
    for j, gt in enumerate(gts):
        amps = closed_form.ideal_amplitudes(params, gt / g)
        which_path = abs(coherent_overlap(cat.alpha2 * amps.u, cat.alpha1 * amps.u))
        rho, degenerate = reduced_density(cat, amps, which_path)
        out[j] = 0.0 if degenerate else wootters_concurrence(rho)
    return out


def _analytic_nbar(scenario: Scenario, gts: np.ndarray) -> np.ndarray:
    cat = scenario.cat
    if cat.parity is Parity.ODD:
        return np.asarray(closed_form.nbar_odd(cat.abs_alpha, gts))
    return np.asarray(closed_form.nbar_even(cat.abs_alpha, gts))


def _analytic_leakage(scenario: Scenario, gts: np.ndarray) -> np.ndarray:
    if not scenario.dissipative:
        return np.zeros_like(gts)
    g = scenario.params.g
    return np.array(
        [closed_form.dissipative_amplitudes(scenario.params, gt / g).leak for gt in gts]
    )


def _dissipative_oracle_concurrences(scenario: Scenario) -> np.ndarray:
    """Concurrence rebuilt from integrated (not closed-form) amplitudes."""
    cat, params = scenario.cat, scenario.params
    amps_list = fock_oracle.dissipative_amplitude_ode(params, scenario.grid)
    out = np.empty(len(amps_list))
    for j, amps in enumerate(amps_list):
        which_path = closed_form.dissipative_which_path(cat.abs_alpha, abs(amps.v1))
        rho, degenerate = reduced_density(cat, amps, which_path)
        out[j] = 0.0 if degenerate else wootters_concurrence(rho)
    return out


def run_sweep(scenario: Scenario) -> SweepResult:
    """Evaluate every requested observable on the grid; oracle columns sit
    next to their analytic counterparts when enabled."""
    params = scenario.params
    gts = scenario.grid.gt(params.g)
    gt_over_pi = scenario.grid.gt_over_pi(params.g)

    columns: list[str] = ["gt_over_pi"]
    data: list[np.ndarray] = [gt_over_pi]

    oracle_curve = None
    if scenario.oracle and not scenario.dissipative:
        oracle_curve = fock_oracle.ideal_oracle_curve(
            scenario.cat, params, gts, budget=scenario.cutoff_budget, workers=_WORKERS
        )

    if "concurrence" in scenario.outputs:
        columns.append("C_analytic")
        data.append(_analytic_concurrence(scenario, gts))
        if scenario.oracle:
            columns.append("C_oracle")
            if scenario.dissipative:
                data.append(_dissipative_oracle_concurrences(scenario))
            else:
                data.append(oracle_curve.concurrence)
    if "nbar" in scenario.outputs:
        columns.append("nbar")
        data.append(_analytic_nbar(scenario, gts))
        if scenario.oracle and oracle_curve is not None:
            columns.append("nbar_oracle")
            data.append(oracle_curve.nbar)
    if "leakage" in scenario.outputs:
        columns.append("leakage")
        data.append(_analytic_leakage(scenario, gts))
    if "spectrum" in scenario.outputs:
        lam = np.array(
            [spectrum_check_odd(scenario.cat.abs_alpha, gt)[:2] for gt in gts]
        )
        columns += ["lambda1", "lambda2"]
        data += [lam[:, 0], lam[:, 1]]

    return SweepResult(
        header_items=tuple(scenario.header_items()),
        columns=tuple(columns),
        rows=np.column_stack(data),
    )


@dataclass(frozen=True)
class VerifyCheck:
    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


@dataclass(frozen=True)
class VerifyReport:
    header_items: tuple[tuple[str, str], ...]
    checks: tuple[VerifyCheck, ...]
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_text(self) -> str:
        lines = ["# catqed verify"]
        lines += [f"# {key}={value}" for key, value in self.header_items]
        lines.append("check,max_deviation,tolerance,status")
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            lines.append(
                f"{check.name},{check.max_deviation:.6e},{check.tolerance:.6e},{status}"
            )
        for note in self.notes:
            lines.append(f"# note: {note}")
        lines.append(f"# result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def run_verify(scenario: Scenario) -> VerifyReport:
    """Compare closed forms against the independent oracle on the grid.

    Lossless scenarios run the truncated-space propagation (concurrence, mean
    photon number, projection leakage); lossy ones integrate the amplitude
    system and compare moduli and the rebuilt concurrence.
    """
    params = scenario.params
    gts = scenario.grid.gt(params.g)
    checks: list[VerifyCheck] = []

    if scenario.dissipative:
        g = params.g
        ode_amps = fock_oracle.dissipative_amplitude_ode(params, scenario.grid)
        closed_amps = [closed_form.dissipative_amplitudes(params, gt / g) for gt in gts]
        du = max(abs(abs(a.u) - abs(b.u)) for a, b in zip(ode_amps, closed_amps))
        dv = max(
            max(abs(abs(a.v1) - abs(b.v1)), abs(abs(a.v2) - abs(b.v2)))
            for a, b in zip(ode_amps, closed_amps)
        )
        tol_amp = scenario.tolerance("amplitude_modulus")
        checks.append(VerifyCheck("amplitude_u_modulus", du, tol_amp))
        checks.append(VerifyCheck("amplitude_v_modulus", dv, tol_amp))
        analytic = _analytic_concurrence(scenario, gts)
        oracle = _dissipative_oracle_concurrences(scenario)
        dc = float(np.abs(analytic - oracle).max())
        checks.append(
            VerifyCheck("concurrence", dc, scenario.tolerance("concurrence_dissipative"))
        )
    else:
        curve = fock_oracle.ideal_oracle_curve(
            scenario.cat, params, gts, budget=scenario.cutoff_budget, workers=_WORKERS
        )
        analytic = _analytic_concurrence(scenario, gts)
        dc = float(np.abs(analytic - curve.concurrence).max())
        checks.append(VerifyCheck("concurrence", dc, scenario.tolerance("concurrence")))
        if scenario.cat.parity is not Parity.GENERAL:
            dn = float(np.abs(_analytic_nbar(scenario, gts) - curve.nbar).max())
            checks.append(VerifyCheck("nbar", dn, scenario.tolerance("nbar")))
        leak = float(curve.projection_leakage.max())
        checks.append(
            VerifyCheck("projection_leakage", leak, scenario.tolerance("projection_leakage"))
        )

    return VerifyReport(header_items=tuple(scenario.header_items()), checks=tuple(checks))
