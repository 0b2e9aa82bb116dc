"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see every line. Each
criterion is asserted at its stated tolerance; the printed detail carries
the measured numbers either way.
"""

import math

import numpy as np
from scipy.optimize import minimize_scalar

from omitcharge import (
    approx_steady_state,
    derive,
    detection_metrics,
    epsilon_T_approx,
    epsilon_T_exact,
    estimate_charge,
    solve_steady_state,
    width_of_n,
)
from omitcharge.cli import main as cli_main
from omitcharge.oracle import mean_value_rhs, verify_cplus
from omitcharge.response import tuning_points

from conftest import make_fig2_system


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} {name}: {status} ({detail})")
    assert ok, f"criterion {num} {name}: {detail}"


def test_criterion_01_coulomb_force_metric():
    dp = derive(make_fig2_system(bias_voltage=0.1))
    force = detection_metrics(dp).min_force
    ok = abs(force - 0.88e-9) <= 0.01 * 0.88e-9
    _report(1, "coulomb-force-metric", ok, f"min_force = {force:.6e} N, target 0.88 nN +/- 1%")


def test_criterion_02_surface_density_metric():
    dp = derive(make_fig2_system(bias_voltage=0.1))
    density = detection_metrics(dp).surface_density_sensitivity
    ok = abs(density - 2.2e6) <= 0.05 * 2.2e6
    _report(2, "surface-density-metric", ok,
            f"sensitivity = {density:.5e} cm^-2, target 2.2e6 +/- 5%")


def _numeric_flank_maximum(kappa: float, gamma_m: float, beta: float) -> float:
    hi = 10.0 * (math.sqrt(beta) + math.sqrt(kappa * gamma_m))

    def absorption(x: float) -> float:
        return epsilon_T_approx(kappa, gamma_m, beta, x).real

    res = minimize_scalar(
        lambda x: -absorption(x), bounds=(0.0, hi), method="bounded",
        options={"xatol": hi * 1e-12},
    )
    x0 = res.x
    h = max(1e-6 * x0, 1e-10 * hi)
    f_minus, f_mid, f_plus = absorption(x0 - h), absorption(x0), absorption(x0 + h)
    curvature = f_minus - 2.0 * f_mid + f_plus
    if curvature != 0.0:
        x0 += 0.5 * h * (f_minus - f_plus) / curvature
    return x0


def test_criterion_03_tuning_point_identity(fig2_system):
    kappa, gamma_m = fig2_system.kappa, fig2_system.gamma_m
    betas = np.geomspace(1e-2 * kappa * gamma_m, 1e6 * kappa * gamma_m, 50)
    worst = 0.0
    for beta in betas:
        predicted = tuning_points(kappa, gamma_m, float(beta)).x_plus
        located = _numeric_flank_maximum(kappa, gamma_m, float(beta))
        worst = max(worst, abs(located - predicted) / predicted)
    undamped_worst = 0.0
    for beta in (1e7, 1.19e11, 1e15):
        x_plus = tuning_points(kappa, 0.0, beta).x_plus
        undamped_worst = max(undamped_worst, abs(x_plus / math.sqrt(beta) - 1.0))
    ok = worst < 1e-6 and undamped_worst < 5e-15
    _report(3, "tuning-point-identity", ok,
            f"worst rel error vs numeric extremum = {worst:.3e} (limit 1e-6); "
            f"gamma_m=0 deviation from sqrt(beta) = {undamped_worst:.2e}")


def test_criterion_04_exact_vs_approximate_spectrum(fig2):
    p = fig2.params
    failures = []
    details = []
    for n in (0, 10, 20, 30, 40):
        ss = solve_steady_state(fig2, n)
        sb = math.sqrt(ss.beta)
        x = np.linspace(-3 * sb, 3 * sb, 4001)
        exact = epsilon_T_exact(fig2, ss, p.omega_m + x).real
        approx = epsilon_T_approx(p.kappa, p.gamma_m, ss.beta, x).real
        deviation = float(np.max(np.abs(exact - approx)))
        bound = 0.05 * float(np.max(np.abs(exact)))
        details.append(f"n={n}: max|dRe|={deviation:.3f} vs bound {bound:.3f}")
        if not deviation < bound:
            failures.append(n)
    _report(4, "exact-vs-approximate-spectrum", not failures, "; ".join(details))


def test_criterion_05_transparency_dip(fig2):
    p = fig2.params
    dips = [epsilon_T_exact(fig2, solve_steady_state(fig2, n), p.omega_m).real
            for n in range(41)]
    worst = max(dips)
    ss0 = solve_steady_state(fig2, 0)
    formula = 2 * p.kappa / (p.kappa + 2 * ss0.beta / p.gamma_m)
    dip0 = dips[0]
    ok = (worst < 0.05
          and abs(dip0 - formula) <= 0.2 * formula
          and abs(dip0 - 0.01) <= 0.2 * 0.01)
    _report(5, "transparency-dip", ok,
            f"max Re eps_T(0) over n<=40 = {worst:.4f} (limit 0.05); "
            f"n=0 dip {dip0:.5f} vs closed form {formula:.5f} and 0.01 +/- 20%")


def test_criterion_06_steady_state_structure(fig2):
    states = [solve_steady_state(fig2, n) for n in range(81)]
    qs = np.array([s.q_s for s in states])
    photons = np.array([s.n_photon for s in states])
    increasing = bool(np.all(np.diff(qs) > 0))

    peak = int(np.argmax(photons))
    diffs = np.diff(photons)
    single_peaked = bool(np.all(diffs[:peak] > 0) and np.all(diffs[peak:] < 0))
    peak_in_window = 45 <= peak <= 55

    gaps = np.array(
        [abs(states[n].q_s - approx_steady_state(fig2, n).q_s) for n in range(81)]
    )
    gap_at = int(np.argmax(gaps))
    gap_in_window = 30 <= gap_at <= 55

    ok = increasing and single_peaked and peak_in_window and gap_in_window
    _report(6, "steady-state-structure", ok,
            f"q_s strictly increasing: {increasing}; photon peak single: {single_peaked} "
            f"at n={peak} (required 45..55); max |q_s gap| at n={gap_at} (required 30..55)")


def test_criterion_07_ode_oracle_equivalence(scaled):
    p = scaled.params
    ss = solve_steady_state(scaled, 0)

    rhs = mean_value_rhs(scaled, 0)
    dq, dp_, dcr, dci = rhs(0.0, [ss.q_s, ss.p_s, ss.c_s.real, ss.c_s.imag])
    force_scale = abs(p.m_eff * p.omega_m**2 * ss.q_s) + abs(scaled.chi * ss.n_photon)
    cavity_scale = abs(complex(p.kappa, ss.delta_eff) * ss.c_s) + scaled.eps_l
    rhs_residual = max(abs(dq), abs(dp_) / force_scale,
                       abs(complex(dcr, dci)) / cavity_scale)

    sb = math.sqrt(ss.beta)
    deltas = [p.omega_m + float(x) for x in np.linspace(-2 * sb, 2 * sb, 11)]
    rows = verify_cplus(scaled, 0, deltas)
    worst = max(r.rel_error for r in rows)
    ok = worst < 1e-3 and rhs_residual < 1e-10
    _report(7, "ode-oracle-equivalence", ok,
            f"worst demod-vs-analytic rel error over 11 detunings = {worst:.3e} "
            f"(limit 1e-3); steady-state RHS residual = {rhs_residual:.2e} (limit 1e-10)")


def test_criterion_08_round_trip_electrometry(fig2):
    bad = []
    for n in range(1, 41):
        est = estimate_charge(fig2, width_of_n(fig2, float(n)), 0, 40)
        if est.n_int != n or est.ambiguous:
            bad.append((n, est.n_int, est.ambiguous))
    _report(8, "round-trip-electrometry", not bad,
            "all n in 1..40 recovered exactly" if not bad else f"mismatches: {bad}")


def test_criterion_09_monotone_window_growth(fig2):
    widths = [width_of_n(fig2, float(n)) for n in range(41)]
    increasing = all(b > a for a, b in zip(widths, widths[1:]))
    _report(9, "monotone-window-growth", increasing,
            f"width(0) = {widths[0]:.4e} rad/s rising to width(40) = {widths[-1]:.4e} rad/s"
            if increasing else "width(n) not strictly increasing on [0, 40]")


def test_criterion_10_determinism(tmp_path, capsys):
    paths = [tmp_path / "fig3_a.csv", tmp_path / "fig3_b.csv"]
    for path in paths:
        code = cli_main(["fig3", "--config", "fig2.config", "--out", str(path)])
        assert code == 0
    capsys.readouterr()
    first, second = (path.read_bytes() for path in paths)
    rows = sum(1 for line in first.decode().splitlines()
               if line and not line.startswith("#")) - 1
    ok = first == second and rows == 41 * 2001
    _report(10, "determinism", ok,
            f"two fig3 runs byte-identical: {first == second}; rows = {rows} (41 x 2001)")
