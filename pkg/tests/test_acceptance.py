"""The ten acceptance criteria, each at its stated tolerance."""

import math
import time

import numpy as np

from qbattery import analytic, entangle, model, optimize, oracle, smallmat, thermo, verify
from qbattery.model import BlochState, JointState, QubitState, SystemParams

THETA_GRID = [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi]
GAMMA_GRID = [0.0, 0.1, 0.4]
T_MAX = 4 * math.pi
N_SAMPLES = 400


def test_criterion_01_constants(acceptance_report):
    best = math.inf
    for _ in range(20):
        start = time.perf_counter()
        c = optimize.solve_constants()
        best = min(best, time.perf_counter() - start)
    printed = {"A": 1.165, "B": 0.724, "C": 1.399, "D": 0.673, "K": 0.306, "L": 0.262}
    # printed values are truncated to three decimals
    digits_dev = max(abs(math.floor(getattr(c, k) * 1000) / 1000 - v) for k, v in printed.items())
    residual = max(c.residuals().values())
    ok = digits_dev == 0.0 and residual <= 1e-12 and best < 1e-3
    acceptance_report(1, "constants A-D, K, L", residual, 1e-12, ok, f"digits dev {digits_dev:g}, {best * 1e6:.0f} us")
    assert digits_dev == 0.0
    assert residual <= 1e-12
    assert best < 1e-3


def test_criterion_02_closed_form_vs_oracle(acceptance_report):
    start = time.perf_counter()
    worst = 0.0
    for g in GAMMA_GRID:
        p = SystemParams(1.0, 1.0, g)
        for th in THETA_GRID:
            b = BlochState(th, 0.9)
            traj = oracle.integrate_liouvillian(b, p, T_MAX, N_SAMPLES)
            for t, rho in zip(traj.times, traj.states):
                rep = thermo.report(oracle.reduced_battery_state(rho), p.omega_b)
                inv, coh = analytic.inversion_coherence(b, p, t)
                pairs = [
                    (rep.energy, analytic.energy(b, p, t)),
                    (rep.ergotropy, analytic.ergotropy_closed(b, p, t)),
                    (rep.capacity, analytic.capacity_closed(b, p, t)),
                    (rep.coherence, coh),
                    (rep.inversion, inv),
                    (rep.variance, analytic.variance(b, p, t)),
                ]
                worst = max(worst, max(abs(x - y) for x, y in pairs))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 60.0
    acceptance_report(2, "closed form vs GKSL oracle", worst, 1e-8, ok, f"{elapsed:.1f} s")
    assert worst <= 1e-8
    assert elapsed < 60.0


def test_criterion_03_optimal_identities(acceptance_report):
    p = SystemParams()
    worst = 0.0
    for th in np.linspace(0.0, math.pi, 33):
        target = p.omega_b * math.sin(th / 2) ** 2
        if th == 0.0:
            e = optimize.optimal_theta_zero_limit("energy", p)
            w = optimize.optimal_theta_zero_limit("ergotropy", p)
        else:
            e = optimize.optimal("energy", BlochState(th), p)
            w = optimize.optimal("ergotropy", BlochState(th), p)
        worst = max(
            worst,
            abs(e.t_star - math.pi / (2 * p.J)),
            abs(w.t_star - math.pi / (2 * p.J)),
            abs(e.value - target),
            abs(w.value - target),
        )
    acceptance_report(3, "t_E = t_erg = pi/2J, E = erg", worst, 1e-9, worst <= 1e-9)
    assert worst <= 1e-9


def test_criterion_04_ergotropy_plateau(acceptance_report):
    b, p = BlochState(math.pi), SystemParams()
    t = np.linspace(0.0, math.pi / 4, 4001)
    worst = float(np.max(analytic.ergotropy_closed(b, p, t)))
    acceptance_report(4, "ergotropy plateau theta = pi", worst, 1e-12, worst <= 1e-12)
    assert worst <= 1e-12


def test_criterion_05_concurrence(acceptance_report):
    p = SystemParams()
    route_dev = 0.0
    product = 0.0
    for th in THETA_GRID:
        b = BlochState(th)
        for t in np.arange(N_SAMPLES) * T_MAX / (N_SAMPLES - 1):
            j = JointState(analytic.joint_state_matrix(b, p, t))
            route_dev = max(
                route_dev,
                abs(entangle.concurrence_spectral(j).value - entangle.concurrence_closed(b, p, t).value),
            )
        j = JointState(analytic.joint_state_matrix(b, p, math.pi / 2))
        product = max(product, entangle.concurrence_spectral(j).value)
    bell_j = JointState(analytic.joint_state_matrix(BlochState(math.pi), p, math.pi / 4))
    bell = abs(entangle.concurrence_spectral(bell_j).value - 1.0)
    ok = route_dev <= 1e-8 and bell <= 1e-9 and product <= 1e-8
    acceptance_report(5, "concurrence routes, Bell, product", route_dev, 1e-8, ok, f"bell {bell:.1e}, product {product:.1e}")
    assert route_dev <= 1e-8
    assert bell <= 1e-9
    assert product <= 1e-8


def test_criterion_06_dissipative_peak_time(acceptance_report):
    worst = 0.0
    for g in (0.05, 0.2, 0.4):
        p = SystemParams(1.0, 1.0, g)
        t_num = optimize.optimal("energy", BlochState(math.pi), p).t_star
        exact = math.atan(4 * p.G / g) / p.G
        worst = max(worst, abs(t_num - exact) / exact)
    acceptance_report(6, "dissipative t_E (relative)", worst, 1e-9, worst <= 1e-9)
    assert worst <= 1e-9


def test_criterion_07_perturbative_consistency(acceptance_report):
    g = 0.01
    p = SystemParams(1.0, 1.0, g)
    b = BlochState(math.pi)
    # natural units: 1/J for times, omega_b for energy, omega_b J for power
    diffs = {
        "t_E": abs(optimize.t_energy_exact(p) - optimize.t_energy_first_order(p)) * p.J,
        "E": abs(optimize.peak_energy_exact(b, p) - optimize.peak_energy_first_order(b, p)) / p.omega_b,
        "t_P": abs(optimize.t_power_exact(p) - optimize.t_power_first_order(p)) * p.J,
        "P": abs(optimize.peak_power_exact(b, p) - optimize.peak_power_first_order(b, p)) / (p.omega_b * p.J),
    }
    # the exact optima themselves agree with direct maximization of the closed forms
    t_p_num = optimize.optimal("power", b, p).t_star
    assert abs(t_p_num - optimize.t_power_exact(p)) <= 1e-9
    bound = 5 * (g / p.J) ** 2
    worst = max(diffs.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in diffs.items())
    acceptance_report(7, "first-order remainders", worst, bound, worst <= bound, detail)
    assert worst <= bound


def test_criterion_08_approximant_endpoints(acceptance_report):
    t = optimize.approx_t_ergotropic_power
    v = optimize.approx_peak_ergotropic_power
    checks = [
        (t(0.0), 7 / 6),
        (t(math.pi), 7 / 5),
        (v(0.0), 0.0),
        (v(math.pi / 2), 1 / 3),
        (v(math.pi), 2 / 3),
    ]
    worst = max(abs(a - e) for a, e in checks)
    errs = optimize.approximant_errors(np.linspace(0.0, math.pi, 33))
    extra = f"mid-range max err t {errs['t_star']:.2e}, value {errs['value']:.2e} (reported only)"
    acceptance_report(8, "approximant endpoints exact", worst, 0.0, worst == 0.0, extra)
    assert all(a == e for a, e in checks)


def test_criterion_09_conservation_and_normalization(acceptance_report):
    conservation = 0.0
    trace_dev = herm_dev = 0.0
    min_eig = math.inf
    for g in GAMMA_GRID:
        p = SystemParams(1.0, 1.0, g)
        for th in (math.pi / 3, math.pi):
            b = BlochState(th, 0.7)
            times = np.arange(201) * T_MAX / 200
            vecs, _ = oracle.integrate_linear(
                model.liouvillian(p), model.vec(model.initial_joint_state(b).rho), times, oracle.default_step(p, T_MAX, 201)
            )
            for v in vecs:
                rho = model.unvec(v)
                trace_dev = max(trace_dev, abs(np.trace(rho) - 1.0))
                herm_dev = max(herm_dev, smallmat.hermiticity_defect(rho))
                min_eig = min(min_eig, float(smallmat.eig_hermitian(0.5 * (rho + rho.conj().T), vectors=False).eigenvalues[0]))
                if g == 0.0:
                    conservation = max(conservation, abs(np.trace(model.NUMBER @ rho).real - b.excited_weight))
            if g == 0.0:
                m = analytic.moments(b, p, times)
                conservation = max(conservation, float(np.max(np.abs(m.n_a + m.n_b - b.excited_weight))))
    phi_dev = verify.phi_invariance(61)
    ok = (
        conservation <= 1e-12
        and trace_dev <= JointState.TRACE_TOL
        and herm_dev <= JointState.HERMITIAN_TOL
        and min_eig >= -JointState.POSITIVITY_TOL
        and phi_dev <= 1e-10
    )
    extra = f"trace {trace_dev:.1e}, herm {herm_dev:.1e}, min eig {min_eig:.1e}, phi {phi_dev:.1e}"
    acceptance_report(9, "conservation and normalization", conservation, 1e-12, ok, extra)
    assert conservation <= 1e-12
    assert trace_dev <= JointState.TRACE_TOL
    assert herm_dev <= JointState.HERMITIAN_TOL
    assert min_eig >= -JointState.POSITIVITY_TOL
    assert phi_dev <= 1e-10


def test_criterion_10_thermo_identities(acceptance_report):
    rng = np.random.default_rng(10_000)
    worst = 0.0
    count = 0
    while count < 10_000:
        n = rng.uniform(0.0, 1.0)
        mag = math.sqrt(n * (1.0 - n)) * math.sqrt(rng.uniform(0.0, 1.0))
        q = QubitState(n, mag * np.exp(1j * rng.uniform(0.0, 2 * math.pi)))
        w = float(rng.uniform(0.1, 5.0))
        r = thermo.report(q, w)
        worst = max(
            worst,
            abs(r.ergotropy - r.antiergotropy - r.capacity),
            abs(r.ergotropy - (r.energy - r.passive_energy)),
            abs(r.capacity - 2 * w * math.hypot(r.inversion, r.coherence)),
        )
        count += 1
    acceptance_report(10, "thermo identities on 1e4 states", worst, 1e-12, worst <= 1e-12)
    assert worst <= 1e-12
