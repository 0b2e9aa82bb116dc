"""Self-consistent steady state of the cavity-resonator-charge system.

Eliminating the intracavity intensity from the force balance
m*omega_m^2*q = chi*|c|^2 + n*eta, with |c|^2 = eps_l^2/(kappa^2 + Delta^2)
and Delta = Delta_c - chi*q/hbar, gives a cubic in the mirror position q.
Raw SI coefficients span roughly forty orders of magnitude, so the cubic is
solved in the scaled variable y = q / (hbar*kappa/chi), where all
coefficients are O(1) for laboratory parameters: closed-form candidate
roots (trigonometric / Cardano) are polished with Newton iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, ParameterError, SteadyStateDomainError
from .params import DerivedParams

_NEWTON_STEPS = 60
_NEWTON_RTOL = 1e-15        # stop when the Newton step is below this, relative
_RESIDUAL_LIMIT = 1e-10     # normalized cubic residual allowed per root
_DISTINCT_RTOL = 1e-8       # closer scaled roots count as a single root
_SNAP_ZERO = 1e-13          # scaled roots below this are the exact q = 0 root


@dataclass(frozen=True)
class CubicCoefficients:
    """a*q^3 + b*q^2 + f*q + d = 0 in SI units; a > 0 for valid parameters."""

    a: float
    b: float
    f: float
    d: float


@dataclass(frozen=True)
class SteadyState:
    """Working point of the driven system.

    p_s is identically zero. all_real_roots lists every real cubic root in
    meters (sorted ascending, including unphysical ones); multistable flags
    three distinct real roots. The force-balance and photon-number
    self-consistency residuals of the selected branch are below 1e-10
    relative for the exact solver; approx_steady_state drops the
    radiation-pressure term for n >= 1 by construction.
    """

    q_s: float            # m
    p_s: float            # kg m/s, always 0
    c_s: complex          # photon amplitude
    n_photon: float       # |c_s|^2
    delta_eff: float      # rad/s
    beta: float           # (rad/s)^2, optomechanical interaction rate squared
    all_real_roots: tuple[float, ...]
    multistable: bool


def cubic_coefficients(dp: DerivedParams, n: float) -> CubicCoefficients:
    """Coefficients of the position cubic at charge number n (SI units)."""
    p, consts = dp.params, dp.consts
    k = p.m_eff * p.omega_m**2
    chi_hbar = dp.chi / consts.hbar
    ne = n * dp.eta
    dc = dp.delta_c
    a = k * chi_hbar**2
    b = -2.0 * k * chi_hbar * dc - ne * chi_hbar**2
    f = k * p.kappa**2 + k * dc**2 + 2.0 * ne * dc * chi_hbar
    d = -ne * p.kappa**2 - ne * dc**2 - dp.chi * dp.eps_l**2
    return CubicCoefficients(a=a, b=b, f=f, d=d)


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _monic_candidates(B: float, F: float, D: float) -> list[float]:
    """Closed-form real roots of y^3 + B y^2 + F y + D = 0 (Newton seeds)."""
    if D == 0.0:
        # y = 0 is exact; the remaining factor is a quadratic.
        roots = [0.0]
        disc = B * B - 4.0 * F
        if disc >= 0.0:
            s = math.sqrt(disc)
            roots.extend([(-B - s) / 2.0, (-B + s) / 2.0])
        return roots

    shift = -B / 3.0
    p = F - B * B / 3.0
    q = 2.0 * B**3 / 27.0 - B * F / 3.0 + D
    if p == 0.0 and q == 0.0:
        return [shift]

    disc = -4.0 * p**3 - 27.0 * q * q
    if disc > 0.0:
        # three real roots: trigonometric form (p < 0 here)
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (2.0 * p) * math.sqrt(-3.0 / p)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg)
        return [shift + m * math.cos((theta - 2.0 * math.pi * k) / 3.0) for k in range(3)]

    # one real root: Cardano, branch chosen to avoid cancellation
    r = math.sqrt(max(q * q / 4.0 + p**3 / 27.0, 0.0))
    half = -q / 2.0
    u = _cbrt(half + r) if half >= 0.0 else _cbrt(half - r)
    v = -p / (3.0 * u) if u != 0.0 else 0.0
    return [shift + u + v]


def _polish(y: float, B: float, F: float, D: float) -> float:
    """Newton refinement of a root of the monic scaled cubic."""
    for _ in range(_NEWTON_STEPS):
        val = ((y + B) * y + F) * y + D
        slope = (3.0 * y + 2.0 * B) * y + F
        if slope == 0.0:
            break
        step = val / slope
        y -= step
        if abs(step) <= _NEWTON_RTOL * max(1.0, abs(y)):
            break
    return y


def _distinct_sorted(roots: list[float]) -> list[float]:
    out: list[float] = []
    for y in sorted(roots):
        if not out or abs(y - out[-1]) > _DISTINCT_RTOL * max(1.0, abs(y), abs(out[-1])):
            out.append(y)
    return out


def _solve_real(dp: DerivedParams, n: float) -> SteadyState:
    """Exact steady state at (real-relaxed) charge number n.

    The public integer entry point is solve_steady_state(); the inversion
    module drives this one with continuous n.
    """
    p, consts = dp.params, dp.consts
    coeff = cubic_coefficients(dp, n)
    if not coeff.a > 0.0:
        raise ParameterError(f"cubic leading coefficient must be positive, got {coeff.a!r}")

    s_q = consts.hbar * p.kappa / dp.chi
    B = coeff.b / (coeff.a * s_q)
    F = coeff.f / (coeff.a * s_q**2)
    D = coeff.d / (coeff.a * s_q**3)

    ys = _distinct_sorted([_polish(y, B, F, D) for y in _monic_candidates(B, F, D)])
    ys = [0.0 if abs(y) < _SNAP_ZERO else y for y in ys]

    roots = tuple(y * s_q for y in ys)
    for q in roots:
        qbar = max(abs(q), s_q)
        num = abs(coeff.a * q**3 + coeff.b * q**2 + coeff.f * q + coeff.d)
        den = abs(coeff.a) * qbar**3 + abs(coeff.b) * qbar**2 + abs(coeff.f) * qbar + abs(coeff.d)
        if num > _RESIDUAL_LIMIT * den:
            raise ConvergenceError(
                f"cubic root {q!r} did not converge: normalized residual {num / den:.3e}"
            )

    chi_hbar = dp.chi / consts.hbar

    def n_photon_at(q: float) -> float:
        delta = dp.delta_c - chi_hbar * q
        return dp.eps_l**2 / (p.kappa**2 + delta**2)

    in_range = [q for q in roots if 0.0 <= q < p.r0]
    if not in_range:
        raise SteadyStateDomainError(
            f"no steady-state root in [0, r0 = {p.r0!r}) at n = {n!r}; "
            "the linearized Coulomb model does not apply",
            roots=roots,
        )
    # Lower branch: smallest photon number, the root continuously connected
    # to the undriven state.
    q_s = min(in_range, key=lambda q: (n_photon_at(q), q))

    delta_eff = dp.delta_c - chi_hbar * q_s
    n_photon = n_photon_at(q_s)
    c_s = dp.eps_l / complex(p.kappa, delta_eff)
    beta = dp.chi**2 * n_photon / (2.0 * p.m_eff * consts.hbar * p.omega_m)
    return SteadyState(
        q_s=q_s,
        p_s=0.0,
        c_s=c_s,
        n_photon=n_photon,
        delta_eff=delta_eff,
        beta=beta,
        all_real_roots=roots,
        multistable=len(ys) == 3,
    )


def _check_charge_number(n) -> float:
    if isinstance(n, bool) or n != int(n) or n < 0:
        raise ParameterError(f"charge number must be a non-negative integer, got {n!r}")
    return float(n)


def solve_steady_state(dp: DerivedParams, n: int) -> SteadyState:
    """Exact steady state at integer charge number n (all cubic roots found,
    physical branch selected)."""
    return _solve_real(dp, _check_charge_number(n))


def approx_steady_state(dp: DerivedParams, n: int) -> SteadyState:
    """Large-Coulomb approximation: q_s = n*eta/(m*omega_m^2) for n >= 1.

    For n = 0 this reproduces the exact zero-charge state by construction.
    Valid when n*eta >> chi*|c_s|^2; the returned state intentionally omits
    the radiation-pressure contribution to q_s for n >= 1.
    """
    nf = _check_charge_number(n)
    p, consts = dp.params, dp.consts
    if nf == 0.0:
        exact = _solve_real(dp, 0.0)
        return SteadyState(
            q_s=exact.q_s,
            p_s=0.0,
            c_s=exact.c_s,
            n_photon=exact.n_photon,
            delta_eff=exact.delta_eff,
            beta=exact.beta,
            all_real_roots=(exact.q_s,),
            multistable=False,
        )
    q_s = nf * dp.eta / (p.m_eff * p.omega_m**2)
    delta_eff = dp.delta_c - (dp.chi / consts.hbar) * q_s
    n_photon = dp.eps_l**2 / (p.kappa**2 + delta_eff**2)
    c_s = dp.eps_l / complex(p.kappa, delta_eff)
    beta = dp.chi**2 * n_photon / (2.0 * p.m_eff * consts.hbar * p.omega_m)
    return SteadyState(
        q_s=q_s,
        p_s=0.0,
        c_s=c_s,
        n_photon=n_photon,
        delta_eff=delta_eff,
        beta=beta,
        all_real_roots=(q_s,),
        multistable=False,
    )
