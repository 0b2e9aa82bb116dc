"""System parameters and derived coupling constants.

Raw experimental inputs (SystemParams) are converted by derive() into the
coupling quantities the solvers consume: the cavity frequency omega_c, the
radiation-pressure coupling chi = hbar*omega_c/L, the gate charge
Q_MR = C*U, the per-unit-charge Coulomb force eta = k*e*Q_MR/r0^2, the pump
amplitude eps_l = sqrt(2*P*kappa/(hbar*omega_c)), and the resolved
pump-cavity detuning Delta_c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .constants import CODATA, K_COULOMB_REFERENCE, PhysicalConstants
from .errors import DerivationError, ParameterError

# Detuning policies for Delta_c = omega_c - omega_l.
POLICY_RESONANT = "resonant_at_zero_charge"
POLICY_EXPLICIT = "explicit"

# Relative tolerance for the zero-charge working-point check in derive().
_POLICY_RTOL = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """Raw experimental inputs, SI units, angular frequencies.

    The `resonant_at_zero_charge` policy pins the effective detuning to
    Delta = omega_m at n = 0 (pump on the anti-Stokes sideband of the
    undisturbed resonator); `explicit` uses delta_c_explicit as given.
    Setting repulsive=True flips the sign of the Coulomb force (eta) for a
    like-charged body; spectra in that regime are not benchmarked.
    """

    lambda_c: float            # pump/cavity wavelength, m
    cavity_length: float       # m
    m_eff: float               # resonator effective mass, kg
    omega_m: float             # resonator frequency, rad/s
    gamma_m: float             # resonator damping, rad/s
    kappa: float               # cavity decay, rad/s
    r0: float                  # resonator-body equilibrium distance, m
    capacitance: float         # gate capacitance, F
    bias_voltage: float        # gate voltage, V
    pump_power: float          # W
    n_charge: int = 0          # charge number on the body
    delta_c_policy: str = POLICY_RESONANT
    delta_c_explicit: Optional[float] = None  # rad/s, required for "explicit"
    repulsive: bool = False


@dataclass(frozen=True)
class DerivedParams:
    """Derived coupling constants plus the inputs they came from.

    chi = hbar*omega_c/L and eta = k*e*Q_MR/r0^2 are exactly recomputable
    from `params` and `consts`; both are carried so downstream operations
    are self-contained.
    """

    omega_c: float   # rad/s
    chi: float       # N per intracavity photon
    q_mr: float      # C
    eta: float       # N per unit charge (negative when repulsive)
    eps_l: float     # pump amplitude, photon^(1/2)/s
    delta_c: float   # resolved pump-cavity detuning, rad/s
    params: SystemParams
    consts: PhysicalConstants


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def _check_positive(name: str, value: float, problems: list[str]) -> None:
    if not math.isfinite(value):
        problems.append(f"{name} is not finite")
    elif value <= 0:
        problems.append(f"{name} must be strictly positive, got {value!r}")


def _check_nonnegative(name: str, value: float, problems: list[str]) -> None:
    if not math.isfinite(value):
        problems.append(f"{name} is not finite")
    elif value < 0:
        problems.append(f"{name} must be non-negative, got {value!r}")


def _parameter_errors(params: SystemParams, consts: PhysicalConstants) -> list[str]:
    errs: list[str] = []
    _check_positive("lambda_c", params.lambda_c, errs)
    _check_positive("cavity_length", params.cavity_length, errs)
    _check_positive("m_eff", params.m_eff, errs)
    _check_positive("omega_m", params.omega_m, errs)
    _check_positive("gamma_m", params.gamma_m, errs)
    _check_positive("kappa", params.kappa, errs)
    _check_positive("r0", params.r0, errs)
    _check_positive("capacitance", params.capacitance, errs)
    _check_nonnegative("bias_voltage", params.bias_voltage, errs)
    _check_nonnegative("pump_power", params.pump_power, errs)
    if params.n_charge != int(params.n_charge) or params.n_charge < 0:
        errs.append(f"n_charge must be a non-negative integer, got {params.n_charge!r}")
    if params.delta_c_policy == POLICY_EXPLICIT:
        if params.delta_c_explicit is None or not math.isfinite(params.delta_c_explicit):
            errs.append("delta_c_policy 'explicit' requires a finite delta_c_explicit")
    elif params.delta_c_policy == POLICY_RESONANT:
        if params.delta_c_explicit is not None:
            errs.append("delta_c_explicit is only accepted with delta_c_policy 'explicit'")
    else:
        errs.append(f"unknown delta_c_policy {params.delta_c_policy!r}")
    for name in ("hbar", "e_charge", "k_coulomb", "c_light"):
        _check_positive(f"consts.{name}", getattr(consts, name), errs)
    return errs


def derive(params: SystemParams, consts: PhysicalConstants = CODATA) -> DerivedParams:
    """Compute DerivedParams, resolving Delta_c per the configured policy.

    Deterministic and idempotent. Raises ParameterError for non-physical
    inputs and DerivationError when the zero-charge working point cannot be
    established for the resonant policy.
    """
    errs = _parameter_errors(params, consts)
    if errs:
        raise ParameterError("; ".join(errs))

    omega_c = 2.0 * math.pi * consts.c_light / params.lambda_c
    chi = consts.hbar * omega_c / params.cavity_length
    q_mr = params.capacitance * params.bias_voltage
    eta = consts.k_coulomb * consts.e_charge * q_mr / params.r0**2
    if params.repulsive:
        eta = -eta
    eps_l = math.sqrt(2.0 * params.pump_power * params.kappa / (consts.hbar * omega_c))

    if params.delta_c_policy == POLICY_EXPLICIT:
        delta_c = float(params.delta_c_explicit)
        return DerivedParams(omega_c, chi, q_mr, eta, eps_l, delta_c, params, consts)

    # Resonant policy: with Delta pinned at omega_m the zero-charge photon
    # number and displacement are closed-form; Delta_c follows directly.
    n_photon0 = eps_l**2 / (params.kappa**2 + params.omega_m**2)
    q_s0 = chi * n_photon0 / (params.m_eff * params.omega_m**2)
    delta_c = params.omega_m + (chi / consts.hbar) * q_s0
    dp = DerivedParams(omega_c, chi, q_mr, eta, eps_l, delta_c, params, consts)

    # Confirm the steady-state solver lands on the same working point; a
    # mismatch means the zero-charge cubic picked a different branch.
    from . import steady_state  # local import: steady_state depends on this module

    try:
        ss = steady_state.solve_steady_state(dp, 0)
    except Exception as exc:
        raise DerivationError(
            f"zero-charge steady state failed while resolving Delta_c: {exc}"
        ) from exc
    if abs(ss.delta_eff - params.omega_m) > _POLICY_RTOL * params.omega_m:
        hint = (
            " (the zero-charge cubic is multistable and its lower branch is not "
            "the pinned working point; use an explicit delta_c)"
            if ss.multistable
            else ""
        )
        raise DerivationError(
            "resonant_at_zero_charge policy did not converge: solver returned "
            f"Delta = {ss.delta_eff!r} instead of omega_m = {params.omega_m!r}{hint}"
        )
    return dp


def validate(params: SystemParams, consts: PhysicalConstants = CODATA) -> ValidationReport:
    """Report non-physical values (errors) and model-validity issues (warnings).

    Warnings cover the sideband-resolution condition omega_m/kappa > 1 and
    the linearized-Coulomb condition q_s/r0 < 0.01 evaluated at n_charge.
    """
    errors = _parameter_errors(params, consts)
    warnings: list[str] = []

    if abs(consts.k_coulomb - K_COULOMB_REFERENCE) > 1e-3 * K_COULOMB_REFERENCE:
        warnings.append(
            f"k_coulomb = {consts.k_coulomb!r} deviates more than 0.1% from "
            f"{K_COULOMB_REFERENCE!r} N m^2/C^2"
        )

    if not errors:
        if params.omega_m / params.kappa <= 1.0:
            warnings.append(
                "sideband unresolved: omega_m/kappa = "
                f"{params.omega_m / params.kappa:.3g} <= 1"
            )
        from . import steady_state  # local import, see derive()

        try:
            dp = derive(params, consts)
            ss = steady_state.solve_steady_state(dp, params.n_charge)
        except Exception as exc:
            errors.append(f"steady state at n = {params.n_charge} failed: {exc}")
        else:
            ratio = ss.q_s / params.r0
            if ratio >= 0.01:
                warnings.append(
                    "linearized Coulomb coupling is marginal: q_s/r0 = "
                    f"{ratio:.3g} >= 0.01 at n = {params.n_charge}"
                )

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))


def with_charge(params: SystemParams, n: int) -> SystemParams:
    """Copy of params with a different charge number."""
    return replace(params, n_charge=n)
