"""Probe-field response: output quadrature, transmission, tuning points, sweeps.

The quadrature eps_T = 2*kappa*c_plus is the probe-frequency component of
the output field; Re[eps_T] is absorption, Im[eps_T] dispersion. The
detuning axis is x = delta - omega_m with delta = omega_p - omega_l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FormulaDomainError, ParameterError, SingularityError
from .params import DerivedParams
from .steady_state import SteadyState, solve_steady_state
from . import steady_state as _steady

_SINGULARITY_RTOL = 1e-30


@dataclass(frozen=True)
class TuningPoints:
    """Absorption flank maxima x_plus/x_minus around the dip at x_zero = 0."""

    x_plus: float   # rad/s
    x_minus: float  # rad/s, = -x_plus
    x_zero: float   # rad/s, always 0
    width: float    # rad/s, = 2 * x_plus


@dataclass(frozen=True)
class ProbeResponse:
    """Spectrum table on a strictly increasing x grid."""

    x: np.ndarray             # rad/s
    eps_t_exact: np.ndarray   # complex
    eps_t_approx: np.ndarray  # complex
    t_p: np.ndarray           # complex, 1 - eps_t_exact
    n: int
    steady: SteadyState


@dataclass(frozen=True)
class ChargePoint:
    """One row of a charge sweep."""

    n: int
    q_s: float
    n_photon: float
    beta: float
    x_plus: float
    width: float


def c_plus(dp: DerivedParams, ss: SteadyState, delta):
    """Probe-frequency sideband amplitude per unit probe drive (units s).

    Exact linearized solution; Delta and beta are taken from the supplied
    steady state. Accepts a scalar or array delta.
    """
    p = dp.params
    d = np.asarray(delta, dtype=float)
    delta_eff, beta = ss.delta_eff, ss.beta
    mech = d * d - p.omega_m**2 + 1j * p.gamma_m * d
    cav = delta_eff**2 + (p.kappa - 1j * d) ** 2
    num = mech * (p.kappa - 1j * (delta_eff + d)) - 2j * p.omega_m * beta
    den = cav * mech + 4.0 * delta_eff * p.omega_m * beta
    scale = np.abs(cav * mech) + abs(4.0 * delta_eff * p.omega_m * beta)
    if np.any(np.abs(den) < _SINGULARITY_RTOL * scale):
        raise SingularityError(
            "probe-response denominator vanished; damping rates kappa and "
            "gamma_m must be positive"
        )
    out = num / den
    return out if out.ndim else complex(out)


def epsilon_T_exact(dp: DerivedParams, ss: SteadyState, delta):
    """Exact output quadrature eps_T = 2*kappa*c_plus at probe beat delta."""
    return 2.0 * dp.params.kappa * c_plus(dp, ss, delta)


def epsilon_T_approx(kappa: float, gamma_m: float, beta: float, x):
    """Sideband-resolved approximation of the output quadrature.

    eps_T = 2*kappa / (kappa - i*x + beta/(gamma_m/2 - i*x)); valid near the
    anti-Stokes working point. Accepts a scalar or array x.
    """
    if kappa <= 0 or gamma_m < 0 or beta < 0:
        raise ParameterError(
            f"need kappa > 0, gamma_m >= 0, beta >= 0; got {kappa!r}, {gamma_m!r}, {beta!r}"
        )
    xv = np.asarray(x, dtype=float)
    out = 2.0 * kappa / (kappa - 1j * xv + beta / (gamma_m / 2.0 - 1j * xv))
    return out if out.ndim else complex(out)


def transmission(eps_t):
    """Probe transmission t_p = 1 - eps_T."""
    out = 1.0 - np.asarray(eps_t)
    return out if out.ndim else complex(out)


def tuning_points(kappa: float, gamma_m: float, beta: float) -> TuningPoints:
    """Locations of the absorption flank maxima of the approximate response.

    Closed form from d(Re eps_T)/dx = 0. For beta = 0 there is no window and
    no sidepeaks: all points collapse to zero. For 0 < beta below
    gamma_m^3/(8*(kappa+gamma_m)) the radicand is negative (the dip is too
    shallow to create flank maxima) and a FormulaDomainError is raised.
    """
    if kappa <= 0 or gamma_m < 0 or beta < 0:
        raise ParameterError(
            f"need kappa > 0, gamma_m >= 0, beta >= 0; got {kappa!r}, {gamma_m!r}, {beta!r}"
        )
    if beta == 0.0:
        return TuningPoints(x_plus=0.0, x_minus=0.0, x_zero=0.0, width=0.0)
    s = 2.0 * beta + kappa * gamma_m
    radicand = (math.sqrt(2.0) * (2.0 * kappa + gamma_m) * math.sqrt(beta * s)
                - gamma_m * s) / (4.0 * kappa)
    if radicand < 0.0:
        raise FormulaDomainError(
            f"tuning-point radicand negative ({radicand!r}): no flank maxima "
            f"for beta = {beta!r}, kappa = {kappa!r}, gamma_m = {gamma_m!r}",
            beta=beta,
            kappa=kappa,
            gamma_m=gamma_m,
        )
    x_plus = math.sqrt(radicand)
    return TuningPoints(x_plus=x_plus, x_minus=-x_plus, x_zero=0.0, width=2.0 * x_plus)


def sweep_spectrum(
    dp: DerivedParams,
    n: int,
    x_min: float | None = None,
    x_max: float | None = None,
    points: int = 2001,
    span_sqrt_beta: float = 4.0,
) -> ProbeResponse:
    """Exact and approximate spectra from a single steady-state solve.

    The default grid spans [-span_sqrt_beta*sqrt(beta), +...]; both formulas
    are fed the same exact steady state. t_p is 1 - eps_T_exact.
    """
    if points < 2:
        raise ParameterError(f"points must be >= 2, got {points!r}")
    ss = solve_steady_state(dp, n)
    if (x_min is None) != (x_max is None):
        raise ParameterError("x_min and x_max must be given together")
    if x_min is None:
        span = span_sqrt_beta * math.sqrt(ss.beta)
        if span == 0.0:
            span = 4.0 * dp.params.kappa  # undriven pump: bare-cavity window
        x_min, x_max = -span, span
    if not x_min < x_max:
        raise ParameterError(f"need x_min < x_max, got {x_min!r} >= {x_max!r}")
    x = np.linspace(x_min, x_max, points)
    exact = epsilon_T_exact(dp, ss, dp.params.omega_m + x)
    approx = epsilon_T_approx(dp.params.kappa, dp.params.gamma_m, ss.beta, x)
    return ProbeResponse(
        x=x,
        eps_t_exact=exact,
        eps_t_approx=approx,
        t_p=1.0 - exact,
        n=int(n),
        steady=ss,
    )


def sweep_charge(dp: DerivedParams, n_min: int, n_max: int) -> list[ChargePoint]:
    """Exact steady state, beta, and window width per integer n in [n_min, n_max]."""
    n_lo = int(_steady._check_charge_number(n_min))
    n_hi = int(_steady._check_charge_number(n_max))
    if n_lo > n_hi:
        raise ParameterError(f"need n_min <= n_max, got {n_min!r} > {n_max!r}")
    rows = []
    for n in range(n_lo, n_hi + 1):
        ss = solve_steady_state(dp, n)
        tp = tuning_points(dp.params.kappa, dp.params.gamma_m, ss.beta)
        rows.append(
            ChargePoint(
                n=n,
                q_s=ss.q_s,
                n_photon=ss.n_photon,
                beta=ss.beta,
                x_plus=tp.x_plus,
                width=tp.width,
            )
        )
    return rows
