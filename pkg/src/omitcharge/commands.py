"""Command layer shared by the HTTP service and the CLI.

Each command consumes a validated RunConfigModel and returns a ResultTable
whose cells are plain Python scalars. Identical configs produce identical
tables; all grid and sweep defaults are fixed here.
"""

from __future__ import annotations

import math

import numpy as np

from . import inversion, oracle, response
from .config import OracleModel, RunConfigModel, SpectrumModel, SweepModel
from .errors import ConfigError
from .params import derive
from .steady_state import approx_steady_state, solve_steady_state
from .tables import ResultTable, make_provenance

FIG3_SWEEP = SweepModel(n_min=0, n_max=40)
FIG4_SWEEP = SweepModel(n_min=0, n_max=40)


def _table(command: str, cfg: RunConfigModel, columns, rows) -> ResultTable:
    return ResultTable(
        columns=tuple(columns),
        rows=tuple(tuple(r) for r in rows),
        provenance=make_provenance(command, cfg.resolved_document()),
    )


def _cmd_derive(cfg: RunConfigModel) -> ResultTable:
    dp = derive(cfg.params.to_system_params())
    return _table(
        "derive",
        cfg,
        (
            "omega_c[rad_s]",
            "chi[N]",
            "q_mr[C]",
            "eta[N]",
            "eps_l[sqrt_photon_per_s]",
            "delta_c[rad_s]",
        ),
        [(dp.omega_c, dp.chi, dp.q_mr, dp.eta, dp.eps_l, dp.delta_c)],
    )


def _cmd_steady(cfg: RunConfigModel) -> ResultTable:
    params = cfg.params.to_system_params()
    dp = derive(params)
    ss = solve_steady_state(dp, params.n_charge)
    roots = ";".join(repr(r) for r in ss.all_real_roots)
    return _table(
        "steady",
        cfg,
        (
            "n",
            "q_s[m]",
            "p_s[kg_m_per_s]",
            "re_c_s",
            "im_c_s",
            "n_photon",
            "delta_eff[rad_s]",
            "beta[rad_s2]",
            "multistable",
            "all_real_roots[m]",
        ),
        [
            (
                params.n_charge,
                ss.q_s,
                ss.p_s,
                ss.c_s.real,
                ss.c_s.imag,
                ss.n_photon,
                ss.delta_eff,
                ss.beta,
                ss.multistable,
                roots,
            )
        ],
    )


def _spectrum_rows(dp, n, spectrum: SpectrumModel):
    resp = response.sweep_spectrum(
        dp,
        n,
        x_min=spectrum.x_min_rad_s,
        x_max=spectrum.x_max_rad_s,
        points=spectrum.points,
        span_sqrt_beta=spectrum.x_span_sqrt_beta,
    )
    for i in range(len(resp.x)):
        yield (
            n,
            float(resp.x[i]),
            float(resp.eps_t_exact[i].real),
            float(resp.eps_t_exact[i].imag),
            float(resp.eps_t_approx[i].real),
            float(resp.eps_t_approx[i].imag),
            float(resp.t_p[i].real),
            float(resp.t_p[i].imag),
        )


def _cmd_spectrum(cfg: RunConfigModel) -> ResultTable:
    params = cfg.params.to_system_params()
    dp = derive(params)
    spectrum = cfg.spectrum or SpectrumModel()
    return _table(
        "spectrum",
        cfg,
        (
            "n",
            "x[rad_s]",
            "re_eps_T_exact",
            "im_eps_T_exact",
            "re_eps_T_approx",
            "im_eps_T_approx",
            "re_t_p",
            "im_t_p",
        ),
        _spectrum_rows(dp, params.n_charge, spectrum),
    )


def _cmd_sweep_n(cfg: RunConfigModel) -> ResultTable:
    dp = derive(cfg.params.to_system_params())
    sweep = cfg.sweep or SweepModel()
    points = response.sweep_charge(dp, sweep.n_min, sweep.n_max)
    return _table(
        "sweep-n",
        cfg,
        ("n", "q_s[m]", "n_photon", "beta[rad_s2]", "x_plus[rad_s]", "width[rad_s]"),
        [(pt.n, pt.q_s, pt.n_photon, pt.beta, pt.x_plus, pt.width) for pt in points],
    )


def _cmd_tuning(cfg: RunConfigModel) -> ResultTable:
    params = cfg.params.to_system_params()
    dp = derive(params)
    ss = solve_steady_state(dp, params.n_charge)
    tp = response.tuning_points(params.kappa, params.gamma_m, ss.beta)
    return _table(
        "tuning",
        cfg,
        ("n", "beta[rad_s2]", "x_plus[rad_s]", "x_minus[rad_s]", "x_zero[rad_s]", "width[rad_s]"),
        [(params.n_charge, ss.beta, tp.x_plus, tp.x_minus, tp.x_zero, tp.width)],
    )


def _cmd_invert(cfg: RunConfigModel) -> ResultTable:
    if cfg.invert is None:
        raise ConfigError("the 'invert' command needs an 'invert' config block")
    dp = derive(cfg.params.to_system_params())
    est = inversion.estimate_charge(
        dp, cfg.invert.width_rad_s, cfg.invert.n_min, cfg.invert.n_max
    )
    return _table(
        "invert",
        cfg,
        (
            "n_hat",
            "n_int",
            "residual[rad_s]",
            "n_lo",
            "n_hi",
            "ambiguous",
            "candidates",
        ),
        [
            (
                est.n_hat,
                est.n_int,
                est.residual,
                est.bracket[0],
                est.bracket[1],
                est.ambiguous,
                ";".join(str(c) for c in est.candidates),
            )
        ],
    )


def _cmd_oracle(cfg: RunConfigModel) -> ResultTable:
    params = cfg.params.to_system_params()
    ocfg = cfg.oracle or OracleModel()
    if ocfg.mode == "scaled":
        params = oracle.scaled_oracle_params(params)
    dp = derive(params)
    ss = solve_steady_state(dp, params.n_charge)
    span = ocfg.x_span_sqrt_beta * math.sqrt(ss.beta)
    if ocfg.n_deltas == 1:
        xs = np.array([0.0])
    else:
        xs = np.linspace(-span, span, ocfg.n_deltas)
    rows = oracle.verify_cplus(
        dp,
        params.n_charge,
        [params.omega_m + float(x) for x in xs],
        eps_p=ocfg.eps_p_ratio * dp.eps_l,
        settle_factor=ocfg.settle_gamma_m,
        window_periods=ocfg.window_periods,
        samples_per_period=ocfg.samples_per_period,
    )
    return _table(
        "oracle",
        cfg,
        (
            "delta[rad_s]",
            "x[rad_s]",
            "re_c_plus_analytic",
            "im_c_plus_analytic",
            "re_c_plus_demod",
            "im_c_plus_demod",
            "rel_error",
        ),
        [
            (
                r.delta,
                r.delta - params.omega_m,
                r.analytic.real,
                r.analytic.imag,
                r.demodulated.real,
                r.demodulated.imag,
                r.rel_error,
            )
            for r in rows
        ],
    )


def _cmd_metrics(cfg: RunConfigModel) -> ResultTable:
    dp = derive(cfg.params.to_system_params())
    met = inversion.detection_metrics(dp)
    return _table(
        "metrics",
        cfg,
        ("min_force[N]", "surface_density_sensitivity[cm-2]"),
        [(met.min_force, met.surface_density_sensitivity)],
    )


def _cmd_fig2(cfg: RunConfigModel) -> ResultTable:
    dp = derive(cfg.params.to_system_params())
    sweep = cfg.sweep or SweepModel()
    rows = []
    for n in range(sweep.n_min, sweep.n_max + 1):
        exact = solve_steady_state(dp, n)
        approx = approx_steady_state(dp, n)
        rows.append((n, exact.q_s, approx.q_s, exact.n_photon, approx.n_photon))
    return _table(
        "fig2",
        cfg,
        ("n", "q_s_exact[m]", "q_s_approx[m]", "n_photon_exact", "n_photon_approx"),
        rows,
    )


def _cmd_fig3(cfg: RunConfigModel) -> ResultTable:
    params = cfg.params.to_system_params()
    dp = derive(params)
    sweep = cfg.sweep or FIG3_SWEEP
    spectrum = cfg.spectrum or SpectrumModel()
    states = {
        n: solve_steady_state(dp, n) for n in range(sweep.n_min, sweep.n_max + 1)
    }
    if spectrum.x_min_rad_s is not None:
        x = np.linspace(spectrum.x_min_rad_s, spectrum.x_max_rad_s, spectrum.points)
    else:
        # common grid across all n, spanning the widest window in the sweep
        beta_max = max(ss.beta for ss in states.values())
        span = spectrum.x_span_sqrt_beta * math.sqrt(beta_max)
        if span == 0.0:
            span = 4.0 * params.kappa
        x = np.linspace(-span, span, spectrum.points)
    rows = []
    for n, ss in states.items():
        exact = response.epsilon_T_exact(dp, ss, params.omega_m + x)
        approx = response.epsilon_T_approx(params.kappa, params.gamma_m, ss.beta, x)
        for i in range(len(x)):
            rows.append((n, float(x[i]), float(exact[i].real), float(approx[i].real)))
    return _table(
        "fig3",
        cfg,
        ("n", "x[rad_s]", "re_eps_T_exact", "re_eps_T_approx"),
        rows,
    )


def _cmd_fig4(cfg: RunConfigModel) -> ResultTable:
    dp = derive(cfg.params.to_system_params())
    sweep = cfg.sweep or FIG4_SWEEP
    points = response.sweep_charge(dp, sweep.n_min, sweep.n_max)
    return _table(
        "fig4",
        cfg,
        ("n", "x_plus[rad_s]", "width[rad_s]"),
        [(pt.n, pt.x_plus, pt.width) for pt in points],
    )


COMMANDS = {
    "derive": _cmd_derive,
    "steady": _cmd_steady,
    "spectrum": _cmd_spectrum,
    "sweep-n": _cmd_sweep_n,
    "tuning": _cmd_tuning,
    "invert": _cmd_invert,
    "oracle": _cmd_oracle,
    "metrics": _cmd_metrics,
    "fig2": _cmd_fig2,
    "fig3": _cmd_fig3,
    "fig4": _cmd_fig4,
}


def run_command(name: str, cfg: RunConfigModel) -> ResultTable:
    """Execute a named command against a validated configuration."""
    try:
        handler = COMMANDS[name]
    except KeyError:
        raise ConfigError(
            f"unknown command {name!r}; expected one of {', '.join(sorted(COMMANDS))}"
        ) from None
    return handler(cfg)
