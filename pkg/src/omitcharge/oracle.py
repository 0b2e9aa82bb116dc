"""Time-domain validation of the analytic sideband solution.

Integrates the classical mean-value equations

    d<q>/dt = <p>/m
    d<p>/dt = -m*omega_m^2*<q> + n*eta + chi*|<c>|^2 - gamma_m*<p>
    d<c>/dt = -[kappa + i*(Delta_c - chi*<q>/hbar)]*<c> + eps_l + eps_p*e^{-i*delta*t}

from the origin and extracts the probe sideband by lock-in demodulation at
the beat frequency delta. Integration runs in scaled variables (q in
hbar*kappa/chi, p in m*kappa*q_scale, c in the drive amplitude over kappa,
time in 1/kappa) so a uniform tolerance is meaningful across components.

Literal Fig.-2-style damping (gamma_m ~ 2pi*141 Hz) needs ~10^6 mechanical
periods to settle; scaled_oracle_params() raises gamma_m to 2pi*10 kHz and
the pump power tenfold so the standard checks run in seconds while keeping
omega_m >> kappa >> gamma_m and 2*beta >> kappa*gamma_m.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    ConvergenceError,
    DivergenceError,
    NotSettledError,
    ParameterError,
)
from .params import DerivedParams, SystemParams
from .response import c_plus
from .steady_state import solve_steady_state

_DRIFT_LIMIT = 1e-4       # relative drift of windowed averages allowed
_BLOWUP_SCALED = 1e6      # |state| beyond this (scaled components are O(1)) diverged
_DT_MAX_FACTOR = 0.05     # dt_max must be <= this fraction of 2pi/omega_m

SCALED_GAMMA_M = 2.0 * math.pi * 1.0e4  # rad/s
SCALED_PUMP_POWER = 1.0e-2              # W


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled SI trajectory of the mean values."""

    t: np.ndarray  # s
    q: np.ndarray  # m
    p: np.ndarray  # kg m/s
    c: np.ndarray  # complex photon amplitude

    def dump_text(self, path) -> None:
        """Columnar dump: t, q, p, Re c, Im c (one sample per row)."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("# t[s] q[m] p[kg_m_per_s] re_c im_c\n")
            for i in range(len(self.t)):
                cells = (self.t[i], self.q[i], self.p[i], self.c[i].real, self.c[i].imag)
                fh.write(" ".join(repr(float(v)) for v in cells) + "\n")


@dataclass(frozen=True)
class DemodResult:
    """Sideband decomposition c(t) ~ c_s + c_+ eps_p e^{-i d t} + c_- eps_p e^{+i d t}."""

    c_s_est: complex
    c_plus_est: complex
    c_minus_est: complex
    residual: float  # RMS misfit of the three-component model over the window


@dataclass(frozen=True)
class CplusComparison:
    delta: float
    analytic: complex
    demodulated: complex
    rel_error: float


class _Blowup(Exception):
    def __init__(self, t, y):
        self.t = t
        self.y = y


def scaled_oracle_params(params: SystemParams) -> SystemParams:
    """Fast-settling variant of params for time-domain checks."""
    return replace(params, gamma_m=SCALED_GAMMA_M, pump_power=SCALED_PUMP_POWER)


def mean_value_rhs(dp: DerivedParams, n: float, eps_p: float = 0.0, delta: float = 0.0):
    """SI right-hand side f(t, (q, p, re_c, im_c)) of the mean-value equations.

    Reference implementation used by the steady-state residual checks; the
    integrator itself runs a scaled transform of the same field.
    """
    p, consts = dp.params, dp.consts
    k_spring = p.m_eff * p.omega_m**2
    chi_hbar = dp.chi / consts.hbar
    ne = n * dp.eta

    def rhs(t, y):
        q, mom, cr, ci = y
        c = complex(cr, ci)
        dc = (-complex(p.kappa, dp.delta_c - chi_hbar * q) * c
              + dp.eps_l + eps_p * cmath.exp(-1j * delta * t))
        return [
            mom / p.m_eff,
            -k_spring * q + ne + dp.chi * (cr * cr + ci * ci) - p.gamma_m * mom,
            dc.real,
            dc.imag,
        ]

    return rhs


def integrate(
    dp: DerivedParams,
    n: float,
    eps_p: float,
    delta: float,
    t_end: float,
    dt_max: float,
    sample_dt: float | None = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    method: str = "DOP853",
) -> Trajectory:
    """Integrate the mean-value equations from (q, p, c) = (0, 0, 0).

    Adaptive explicit Runge-Kutta with steps bounded by dt_max; dt_max must
    resolve the mechanical period (<= 0.05 * 2pi/omega_m). The probe must be
    perturbative, eps_p <= 0.1*eps_l, unless the pump is off. Output is
    sampled at the fixed stride sample_dt (default dt_max).

    Raises DivergenceError with the last finite state if the state leaves
    the finite domain.
    """
    p, consts = dp.params, dp.consts
    if n < 0:
        raise ParameterError(f"charge number must be >= 0, got {n!r}")
    if eps_p < 0:
        raise ParameterError(f"eps_p must be >= 0 (drives are real), got {eps_p!r}")
    if dp.eps_l > 0 and eps_p > 0.1 * dp.eps_l:
        raise ParameterError(
            f"probe must be perturbative: eps_p = {eps_p!r} > 0.1*eps_l = {0.1 * dp.eps_l!r}"
        )
    if t_end <= 0:
        raise ParameterError(f"t_end must be positive, got {t_end!r}")
    limit = _DT_MAX_FACTOR * 2.0 * math.pi / p.omega_m
    if not 0 < dt_max <= limit:
        raise ParameterError(
            f"dt_max must be in (0, {limit!r}] to resolve the mechanical period, got {dt_max!r}"
        )
    if sample_dt is None:
        sample_dt = dt_max
    if sample_dt <= 0:
        raise ParameterError(f"sample_dt must be positive, got {sample_dt!r}")

    kappa = p.kappa
    s_q = consts.hbar * kappa / dp.chi
    s_c = max(dp.eps_l, eps_p) / kappa
    if s_c == 0.0:
        s_c = 1.0

    om = p.omega_m / kappa
    gm = p.gamma_m / kappa
    dc0 = dp.delta_c / kappa
    dpr = delta / kappa
    el = dp.eps_l / (kappa * s_c)
    ep = eps_p / (kappa * s_c)
    f_eta = n * dp.eta / (p.m_eff * kappa**2 * s_q)
    f_chi = dp.chi * s_c**2 / (p.m_eff * kappa**2 * s_q)

    last = {"t": 0.0, "y": (0.0, 0.0, 0.0, 0.0)}

    def rhs(t, y):
        q, mom, cr, ci = y
        if not (abs(q) < _BLOWUP_SCALED and abs(mom) < _BLOWUP_SCALED
                and abs(cr) < _BLOWUP_SCALED and abs(ci) < _BLOWUP_SCALED):
            raise _Blowup(t, y)
        last["t"], last["y"] = t, (q, mom, cr, ci)
        drive = ep * cmath.exp(-1j * dpr * t)
        det = dc0 - q  # chi*s_q/(hbar*kappa) = 1 by construction
        dcr = -cr + det * ci + el + drive.real
        dci = -ci - det * cr + drive.imag
        return (
            mom,
            -om * om * q + f_eta + f_chi * (cr * cr + ci * ci) - gm * mom,
            dcr,
            dci,
        )

    h = sample_dt * kappa
    tau_end = t_end * kappa
    nsamp = int(math.ceil(tau_end / h - 1e-9))
    t_eval = np.arange(nsamp + 1) * h

    try:
        sol = solve_ivp(
            rhs,
            (0.0, float(t_eval[-1])),
            [0.0, 0.0, 0.0, 0.0],
            method=method,
            rtol=rtol,
            atol=atol,
            max_step=dt_max * kappa,
            t_eval=t_eval,
        )
    except _Blowup as blow:
        tl = last["t"] / kappa
        q, mom, cr, ci = last["y"]
        raise DivergenceError(
            f"trajectory diverged near t = {tl!r} s",
            last_state=(tl, q * s_q, mom * s_q * p.m_eff * kappa, complex(cr, ci) * s_c),
        ) from None
    if not sol.success:
        raise ConvergenceError(f"integrator failed: {sol.message}")

    return Trajectory(
        t=sol.t / kappa,
        q=sol.y[0] * s_q,
        p=sol.y[1] * (p.m_eff * kappa * s_q),
        c=(sol.y[2] + 1j * sol.y[3]) * s_c,
    )


def _window_views(traj: Trajectory, delta: float, window_periods: int):
    """Last two aligned windows of whole beat periods; returns (t2, c2, w1, w2, spp)."""
    t = traj.t
    if len(t) < 3:
        raise ParameterError("trajectory too short to demodulate")
    h = t[1] - t[0]
    dt = np.diff(t)
    if not np.allclose(dt, h, rtol=1e-6, atol=0.0):
        raise ParameterError("demodulation requires a uniformly sampled trajectory")
    if delta == 0:
        raise ParameterError("demodulation frequency delta must be nonzero")
    period = 2.0 * math.pi / abs(delta)
    spp_f = period / h
    spp = int(round(spp_f))
    if spp < 4 or abs(spp_f - spp) > 1e-6 * spp:
        raise ParameterError(
            "sample stride must divide the beat period "
            f"(period/stride = {spp_f!r}); choose sample_dt = period/k, k >= 4"
        )
    w = window_periods * spp
    if len(t) < 2 * w:
        raise ParameterError(
            f"trajectory holds {len(t)} samples but 2 windows need {2 * w}"
        )
    c = traj.c
    return t[-w:], c[-w:], c[-2 * w:-w], c[-w:], spp


def demodulate(
    traj: Trajectory,
    delta: float,
    eps_p: float,
    window_periods: int = 40,
) -> DemodResult:
    """Lock-in extraction of c_s and the two probe sidebands.

    Averages over the trailing window_periods whole beat periods: c_s is the
    window mean, c_plus the projection of (c - c_s) on e^{+i*delta*t}, and
    c_minus on e^{-i*delta*t}, each normalized by eps_p. A drift check on
    the two trailing windows rejects unsettled trajectories.
    """
    if eps_p <= 0:
        raise ParameterError(f"eps_p must be positive to normalize sidebands, got {eps_p!r}")
    if window_periods < 1:
        raise ParameterError(f"window_periods must be >= 1, got {window_periods!r}")
    t2, c2, w1, w2, _ = _window_views(traj, delta, window_periods)

    i1 = traj.q[-2 * len(c2):-len(c2)]
    i2 = traj.q[-len(c2):]
    scale_c = max(float(np.sqrt(np.mean(np.abs(w1) ** 2))),
                  float(np.sqrt(np.mean(np.abs(w2) ** 2))), 1e-300)
    scale_q = max(float(np.sqrt(np.mean(i1**2))), float(np.sqrt(np.mean(i2**2))), 1e-300)
    drift = max(
        abs(complex(np.mean(w2)) - complex(np.mean(w1))) / scale_c,
        abs(float(np.mean(i2)) - float(np.mean(i1))) / scale_q,
    )
    if drift >= _DRIFT_LIMIT:
        raise NotSettledError(
            f"windowed averages drift by {drift:.3e} (limit {_DRIFT_LIMIT:g}); "
            "increase t_end or window_periods"
        )

    c_s = complex(np.mean(c2))
    phase = np.exp(1j * delta * t2)
    resid = c2 - c_s
    cp = complex(np.mean(resid * phase)) / eps_p
    cm = complex(np.mean(resid / phase)) / eps_p
    model = c_s + cp * eps_p / phase + cm * eps_p * phase
    residual = float(np.sqrt(np.mean(np.abs(c2 - model) ** 2)))
    return DemodResult(c_s_est=c_s, c_plus_est=cp, c_minus_est=cm, residual=residual)


def verify_cplus(
    dp: DerivedParams,
    n: int,
    delta_list,
    eps_p: float | None = None,
    settle_factor: float = 30.0,
    window_periods: int = 40,
    samples_per_period: int = 64,
    rtol: float = 1e-10,
) -> list[CplusComparison]:
    """Demodulated versus closed-form c_plus at each probe detuning.

    Rows come back in input order. The run integrates settle_factor/gamma_m
    seconds per detuning; with literal lab damping that is minutes per row,
    so pair this with scaled_oracle_params() unless running deliberately in
    literal mode. eps_p defaults to 0.005*eps_l: second-order probe
    contamination of the first-order sideband grows as eps_p^2 and already
    reaches ~1e-3 on the window flanks at eps_p = 0.01*eps_l.
    """
    ss = solve_steady_state(dp, n)
    p = dp.params
    if eps_p is None:
        if dp.eps_l == 0:
            raise ParameterError("eps_p must be given explicitly when the pump is off")
        eps_p = 0.005 * dp.eps_l
    dt_max = _DT_MAX_FACTOR * 2.0 * math.pi / p.omega_m
    t_end = settle_factor / p.gamma_m

    rows: list[CplusComparison] = []
    for delta in delta_list:
        if delta <= 0:
            raise ParameterError(f"probe beat delta must be positive, got {delta!r}")
        sample_dt = (2.0 * math.pi / delta) / samples_per_period
        traj = integrate(
            dp, n, eps_p, delta, t_end, dt_max, sample_dt=sample_dt, rtol=rtol
        )
        dem = demodulate(traj, delta, eps_p, window_periods=window_periods)
        ana = c_plus(dp, ss, delta)
        err = (abs(dem.c_plus_est - ana) / abs(ana)) if ana != 0 else abs(dem.c_plus_est)
        rows.append(
            CplusComparison(
                delta=float(delta),
                analytic=ana,
                demodulated=dem.c_plus_est,
                rel_error=float(err),
            )
        )
    return rows
