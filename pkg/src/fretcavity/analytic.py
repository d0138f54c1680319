"""Closed-form weak-pump energy-flow expressions.

Each expression is written out term by term as derived, without algebraic
simplification; the reductions between them are checked in the tests.
Incoherent-pump formulas return J/Gamma, coherent-drive formulas return
J (or J_A) in units of gamma.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from typing import Any

from .const import (
    ADIABATIC_RATIO,
    PUMP_ELIMINATION_RATIO,
    SINGULAR_DENOMINATOR,
    WEAK_PUMP_RATIO,
)
from .exceptions import ConfigError, SingularResonanceError, UnsupportedPumpError
from .models import FlowResult, FormulaId, PumpMode, SystemSpec
from .moments import adiabatic_cavity_rates

_LOGGER = logging.getLogger(__name__)


def j_free_space_full(
    Delta: float,
    Omega: float,
    gamma: float = 1.0,
    gamma_prime: float = 0.0,
    gamma_phi: float = 0.0,
    gamma_bar: float = 0.0,
) -> float:
    """J/Gamma with extra decay, dephasing and mutual decay.

    Returns NaN (with a warning) on the singular surface where the
    denominator vanishes, i.e. the deep subradiant limit at Delta = Omega = 0.
    """
    gamma_tot = gamma + gamma_prime
    ratio = (gamma + gamma_prime + 2.0 * gamma_phi) / (gamma + gamma_prime)
    numerator = (
        2.0 * Omega**2 * (ratio - gamma_bar**2 / gamma_tot**2)
        + gamma_bar * Delta * Omega / gamma_tot
    )
    denominator = (
        Delta**2
        + 4.0 * Omega**2 * ratio
        + (gamma + gamma_prime + 2.0 * gamma_phi) ** 2
        - gamma_bar**2 * (4.0 * Omega**2 / gamma_tot**2 + ratio)
    )
    if abs(denominator) <= SINGULAR_DENOMINATOR:
        _LOGGER.warning(
            "j_free_space_full is singular at Delta=%g Omega=%g gamma_bar=%g",
            Delta,
            Omega,
            gamma_bar,
        )
        return math.nan
    return numerator / denominator


def j_free_space_simple(Delta: float, Omega: float, gamma_tot: float = 1.0) -> float:
    """J/Gamma = 2 Omega^2 / (Delta^2 + 4 Omega^2 + gamma_tot^2)."""
    return 2.0 * Omega**2 / (Delta**2 + 4.0 * Omega**2 + gamma_tot**2)


def j_distinct_emitters(
    Delta: float, Omega: float, gamma_D: float = 1.0, gamma_A: float = 1.0
) -> float:
    """J/Gamma for donor and acceptor with different linewidths."""
    total = gamma_A + gamma_D
    return (4.0 * gamma_A * total * Omega**2) / (
        gamma_A * gamma_D * (4.0 * Delta**2 + total**2) + 4.0 * total**2 * Omega**2
    )


def j_coherent_free(
    Delta: float, Omega: float, gamma: float, eta: float, omega_L: float
) -> float:
    """J for a coherently driven donor in free space (no extra decay or dephasing)."""
    return (16.0 * gamma * eta**2 * Omega**2) / (
        (gamma**2 + 4.0 * omega_L**2)
        * (gamma**2 + 4.0 * ((Delta - omega_L) ** 2 + 2.0 * eta**2))
        + 8.0 * Omega**2 * (gamma**2 + 4.0 * omega_L * (Delta - omega_L))
        + 16.0 * Omega**4
    )


def j_cavity_cooperativity(
    Delta: float, Omega: float, gamma_eff: float, gamma_AD_eff: float
) -> float:
    """J/Gamma with Purcell-enhanced rate gamma_eff and cavity mutual decay gamma_AD_eff."""
    return (
        Omega
        * (2.0 * gamma_eff**2 * Omega - 2.0 * gamma_AD_eff**2 * Omega + gamma_eff * gamma_AD_eff * Delta)
    ) / (
        gamma_eff**4
        - 4.0 * gamma_AD_eff**2 * Omega**2
        + gamma_eff**2 * (Delta**2 + 4.0 * Omega**2 - gamma_AD_eff**2)
    )


def j_a_coherent_cavity(
    Delta: float,
    delta: float,
    g_D: float,
    g_A: float,
    gamma: float,
    eta: float,
    omega_L: float,
) -> float:
    """Cavity-to-acceptor flow J_A for a weakly driven donor, Omega = 0.

    Raises:
        SingularResonanceError: the laser sits on a polariton (bracket = 0)
    """
    bracket = g_A**2 * (Delta - omega_L) + omega_L * (
        -(g_D**2) + (delta - omega_L) * (Delta - omega_L)
    )
    scale = max(abs(Delta), abs(delta), abs(g_D), abs(g_A), abs(omega_L), 1.0)
    if abs(bracket) <= 1e-12 * scale**3:
        raise SingularResonanceError("j_a_coherent_cavity", bracket)
    return g_A**2 * g_D**2 * gamma * eta**2 / bracket**2


def j_intermediate_level(
    Omega: float, gamma_D: float, gamma_nr: float
) -> tuple[float, float]:
    """(J_i/Gamma, k_FS) for transfer into a fast non-radiative acceptor level."""
    flow = 4.0 * Omega**2 / (gamma_D * gamma_nr + 4.0 * Omega**2)
    k_fs = 4.0 * Omega**2 / gamma_nr
    return flow, k_fs


def effective_pump_rate(
    eta: float, gamma_ie: float, gamma_ig: float = 0.0, gamma_eg: float = 0.0
) -> tuple[float, float]:
    """(Gamma_eff, pump_dephasing) after eliminating the intermediate level.

    Gamma_eff = 4 eta^2 gamma_ie / (4 eta^2 + (gamma_ie + gamma_ig)^2) and the
    e-g coherence picks up an extra damping 2 eta^2/(gamma_ie + gamma_ig + gamma_eg).
    """
    if gamma_ie < PUMP_ELIMINATION_RATIO * max(gamma_eg, gamma_ig, abs(eta)):
        _LOGGER.warning(
            "Intermediate level is not fast: gamma_ie=%.4g vs max(gamma_eg, gamma_ig, eta)=%.4g",
            gamma_ie,
            max(gamma_eg, gamma_ig, abs(eta)),
        )
    gamma_eff = 4.0 * eta**2 * gamma_ie / (4.0 * eta**2 + (gamma_ie + gamma_ig) ** 2)
    dephasing = 2.0 * eta**2 / (gamma_ie + gamma_ig + gamma_eg)
    return gamma_eff, dephasing


def effective_pump_rate_limit(eta: float, gamma_ie: float) -> float:
    """Gamma = 4 eta^2 / gamma_ie."""
    return 4.0 * eta**2 / gamma_ie


def cooperativity(g: float, kappa: float, gamma: float = 1.0) -> float:
    """C = 4 g^2 / (kappa gamma)."""
    return 4.0 * g**2 / (kappa * gamma)


def cooperativity_window_issue(spec: SystemSpec) -> str | None:
    """Why the cavity cooperativity expression does not apply to ``spec``, or None.

    The expression needs a bad cavity, kappa >= ADIABATIC_RATIO times each of
    g_D, g_A, Omega and Delta, and a weak pump, gamma_tot - gamma_bar >=
    WEAK_PUMP_RATIO * Gamma. The second fails for close emitters, where the
    subradiant mode decays at gamma_tot - gamma_bar.
    """
    fastest = max(abs(spec.g_D), abs(spec.g_A), abs(spec.Omega), abs(spec.Delta))
    if spec.kappa < ADIABATIC_RATIO * fastest:
        return f"kappa={spec.kappa:.4g} is not >> {fastest:.4g}"
    subradiant = min(spec.rates.gamma_tot_D, spec.rates.gamma_tot_A) - spec.gamma_bar
    if subradiant < WEAK_PUMP_RATIO * spec.pump.Gamma:
        return f"gamma_tot - gamma_bar={subradiant:.3g} is not >> Gamma={spec.pump.Gamma:.3g}"
    return None


def _intermediate_value(**params: Any) -> tuple[float, dict[str, float]]:
    flow, k_fs = j_intermediate_level(**params)
    return flow, {"k_FS": k_fs}


_FORMULAS: dict[FormulaId, Callable[..., Any]] = {
    FormulaId.FREE_SPACE_FULL: j_free_space_full,
    FormulaId.FREE_SPACE_SIMPLE: j_free_space_simple,
    FormulaId.DISTINCT_EMITTERS: j_distinct_emitters,
    FormulaId.COHERENT_FREE: j_coherent_free,
    FormulaId.CAVITY_COOPERATIVITY: j_cavity_cooperativity,
    FormulaId.COHERENT_CAVITY: j_a_coherent_cavity,
    FormulaId.INTERMEDIATE_LEVEL: _intermediate_value,
}


def evaluate(formula_id: FormulaId | str, **params: float) -> FlowResult:
    """Evaluate one closed form by id, e.g. ``evaluate("free_space_simple", Delta=0, Omega=1)``.

    Raises:
        ConfigError: unknown formula id or wrong parameter names
        SingularResonanceError: propagated from j_a_coherent_cavity
    """
    try:
        formula_id = FormulaId(formula_id)
    except ValueError as err:
        raise ConfigError(f"Unknown formula '{formula_id}'", key="formula") from err
    func = _FORMULAS[formula_id]
    try:
        result = func(**params)
    except TypeError as err:
        raise ConfigError(str(err), key=formula_id.value) from err

    extras: dict[str, float] = {}
    if isinstance(result, tuple):
        result, extras = result
    value = float(result)
    return FlowResult(
        value=value,
        formula_id=formula_id,
        singular=not math.isfinite(value),
        extras=extras,
    )


def flow_for_spec(spec: SystemSpec) -> FlowResult:
    """Pick and evaluate the closed form that applies to ``spec``.

    Free space with an incoherent pump uses the full expression (or the
    distinct-emitter one when gamma_D != gamma_A); a cavity uses the
    cooperativity expression with gamma_eff = mean(gamma_A_eff, gamma_D_eff)
    + gamma_prime and mutual rate gamma_AD_eff + gamma_bar. A coherent drive
    gives J in free space and J_A in a cavity.

    Raises:
        UnsupportedPumpError: pump mode ``none``
    """
    rates = spec.rates
    in_cavity = spec.g_D != 0.0 or spec.g_A != 0.0
    mode = spec.pump.mode

    if mode is PumpMode.NONE:
        raise UnsupportedPumpError(mode.value, "flow_for_spec")
    if mode is PumpMode.COHERENT:
        if not in_cavity:
            return evaluate(
                FormulaId.COHERENT_FREE,
                Delta=spec.Delta,
                Omega=spec.Omega,
                gamma=rates.gamma_D,
                eta=spec.pump.eta,
                omega_L=spec.pump.omega_L,
            )
        if spec.Omega != 0.0:
            _LOGGER.debug("Coherent cavity formula ignores Omega=%g", spec.Omega)
        return evaluate(
            FormulaId.COHERENT_CAVITY,
            Delta=spec.Delta,
            delta=spec.delta,
            g_D=spec.g_D,
            g_A=spec.g_A,
            gamma=rates.gamma_A,
            eta=spec.pump.eta,
            omega_L=spec.pump.omega_L,
        )

    if in_cavity:
        effective = adiabatic_cavity_rates(spec)
        gamma_eff = 0.5 * (effective.gamma_A_eff + effective.gamma_D_eff) + rates.gamma_prime
        return evaluate(
            FormulaId.CAVITY_COOPERATIVITY,
            Delta=spec.Delta,
            Omega=spec.Omega,
            gamma_eff=gamma_eff,
            gamma_AD_eff=effective.gamma_AD_eff + spec.gamma_bar,
        )
    if rates.gamma_D != rates.gamma_A:
        return evaluate(
            FormulaId.DISTINCT_EMITTERS,
            Delta=spec.Delta,
            Omega=spec.Omega,
            gamma_D=rates.gamma_tot_D,
            gamma_A=rates.gamma_tot_A,
        )
    return evaluate(
        FormulaId.FREE_SPACE_FULL,
        Delta=spec.Delta,
        Omega=spec.Omega,
        gamma=rates.gamma_D,
        gamma_prime=rates.gamma_prime,
        gamma_phi=rates.gamma_phi,
        gamma_bar=spec.gamma_bar,
    )
