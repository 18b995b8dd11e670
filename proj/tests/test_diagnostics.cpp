#include <doctest.h>

#include <cmath>
#include <vector>

#include "rotns/diagnostics.hpp"
#include "rotns/initial_data.hpp"
#include "rotns/norms.hpp"
#include "rotns/timestepper.hpp"

using namespace rotns;

namespace {

SpectralField single_shell(const Grid& g, double chi) {
    SpectralField f(g);
    f.set_mode_pair(1, 0, 0, {0.0, Complex(chi / 2.0, 0.0), 0.0});
    return f;
}

Trajectory linear_run(const SpectralField& u0, double nu, double omega, double dt, double T,
                      int stride) {
    SolverConfig cfg;
    cfg.nu = nu;
    cfg.omega = omega;
    cfg.dt = dt;
    cfg.T = T;
    cfg.nonlinear = false;
    cfg.scheme = Scheme::ExactLinearRk4;
    cfg.observer_stride = stride;
    return integrate(u0, cfg);
}

}  // namespace

TEST_CASE("a priori ledger on an exact exponential decay") {
    Grid g(8);
    const double nu = 1.0;
    Trajectory traj = linear_run(single_shell(g, 0.5), nu, 0.0, 1e-3, 1.0, 10);
    REQUIRE(!traj.blew_up);

    AprioriLedger led = apriori_ledger(traj, nu, 1e-6);
    CHECK(led.in_hypothesis);
    CHECK(led.pass);
    CHECK(led.chi_m1_initial == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(led.threshold == 1.0);
    CHECK(led.threshold_margin == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(led.sup_chi_m1 == doctest::Approx(0.5).epsilon(1e-12));

    // chi(t) = 0.5 e^{-t}: lhs = chi + (nu - 0.5) I with I = 0.5 (1 - e^{-t})
    for (std::size_t j = 0; j < led.times.size(); ++j) {
        const double t = led.times[j];
        const double chi = 0.5 * std::exp(-t);
        const double integral = 0.5 * (1.0 - std::exp(-t));
        CHECK(led.chi_m1[j] == doctest::Approx(chi).epsilon(1e-8));
        CHECK(led.integral_chi1[j] == doctest::Approx(integral).epsilon(1e-4));
        CHECK(led.lhs[j] == doctest::Approx(chi + 0.5 * integral).epsilon(1e-5));
        CHECK(led.margin[j] >= -1e-6 * 0.5);
        CHECK(led.ap1_margin[j] >= -1e-6);
    }
    CHECK(led.min_margin >= 0.0);
    CHECK(led.integral_chi_m1 ==
          doctest::Approx(0.5 * (1.0 - std::exp(-1.0))).epsilon(1e-4));
}

TEST_CASE("a priori ledger labels out-of-hypothesis data without claiming") {
    Grid g(8);
    Trajectory traj = linear_run(single_shell(g, 1.5), 1.0, 0.0, 1e-3, 0.1, 20);
    AprioriLedger led = apriori_ledger(traj, 1.0, 1e-6);
    CHECK(!led.in_hypothesis);
    CHECK(led.threshold_margin == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(led.times.size() == traj.times.size());
    for (double v : led.lhs) CHECK(std::isfinite(v));
}

TEST_CASE("a priori ledger on an empty trajectory") {
    Trajectory traj;
    AprioriLedger led = apriori_ledger(traj, 1.0, 1e-6);
    CHECK(led.times.empty());
    CHECK(!led.pass);
}

TEST_CASE("monotonicity counter uses a relative tolerance") {
    Trajectory traj;
    traj.times = {0.0, 1.0, 2.0, 3.0};
    for (double chi : {1.0, 0.9, 0.95, 0.8}) {
        NormReport r;
        r.chi_m1 = chi;
        traj.reports.push_back(r);
    }
    CHECK(chi_m1_monotonicity_violations(traj) == 1);

    Trajectory flat;
    flat.times = {0.0, 1.0, 2.0};
    for (double chi : {1.0, 1.0 + 1e-12, 0.9}) {
        NormReport r;
        r.chi_m1 = chi;
        flat.reports.push_back(r);
    }
    CHECK(chi_m1_monotonicity_violations(flat) == 0);
    CHECK(chi_m1_monotonicity_violations(flat, 1e-14) == 1);
}

TEST_CASE("energy balance residual matches the trapezoid defect exactly") {
    Grid g(8);
    const double a = 0.3, nu = 1.0, dt = 1e-3;
    SpectralField f(g);
    f.set_mode_pair(1, 0, 0, {0.0, Complex(a, 0.0), 0.0});
    Trajectory traj = linear_run(f, nu, 0.0, dt, 0.02, 1);

    EnergyBalanceReport rep = energy_balance(traj, nu);
    REQUIRE(rep.residuals.size() == 20);
    const double vol = std::pow(two_pi(), 3.0);
    const double x = std::exp(-2.0 * dt);
    for (std::size_t j = 0; j < rep.residuals.size(); ++j) {
        const double base = vol * 2.0 * a * a * std::exp(-2.0 * traj.step_times[j]);
        const double want = base * ((x - 1.0) + dt * (1.0 + x));
        // the defect is ~dt^3 below the energies it is computed from, so
        // cancellation noise caps the achievable agreement
        CHECK(rep.residuals[j] == doctest::Approx(want).epsilon(1e-4));
    }
    // leading order (2/3) dt^3 relative to ||u0||^2
    CHECK(rep.max_rel_residual == doctest::Approx((2.0 / 3.0) * dt * dt * dt).epsilon(1e-2));
}

TEST_CASE("energy residual is third order: halving dt shrinks it 8x") {
    Grid g(8);
    SpectralField u0 = scale_to_chi(taylor_green(g, 1.0), 0.5);

    SUBCASE("linear flow") {
        Trajectory t1 = linear_run(u0, 1.0, 3.0, 2e-3, 0.2, 10);
        Trajectory t2 = linear_run(u0, 1.0, 3.0, 1e-3, 0.2, 20);
        const double r1 = energy_balance(t1, 1.0).max_rel_residual;
        const double r2 = energy_balance(t2, 1.0).max_rel_residual;
        REQUIRE(r2 > 0.0);
        CHECK(r1 / r2 == doctest::Approx(8.0).epsilon(0.15));
    }

    SUBCASE("nonlinear flow") {
        SolverConfig cfg;
        cfg.nu = 1.0;
        cfg.omega = 3.0;
        cfg.dt = 2e-3;
        cfg.T = 0.2;
        cfg.observer_stride = 100;
        Trajectory t1 = integrate(u0, cfg);
        cfg.dt = 1e-3;
        Trajectory t2 = integrate(u0, cfg);
        const double r1 = energy_balance(t1, 1.0).max_rel_residual;
        const double r2 = energy_balance(t2, 1.0).max_rel_residual;
        REQUIRE(r2 > 0.0);
        CHECK(r1 / r2 >= 3.5);
    }
}

TEST_CASE("rotation leaves the linear energy history unchanged") {
    Grid g(8);
    SpectralField u0 = scale_to_chi(random_solenoidal(g, 2.4, 2.0, 17), 0.4);
    Trajectory a = linear_run(u0, 1.0, 0.0, 1e-3, 0.1, 10);
    Trajectory b = linear_run(u0, 1.0, 100.0, 1e-3, 0.1, 10);
    REQUIRE(a.step_energy.size() == b.step_energy.size());
    for (std::size_t j = 0; j < a.step_energy.size(); ++j) {
        CHECK(std::abs(a.step_energy[j] - b.step_energy[j]) <= 1e-10 * a.step_energy[0]);
    }
}

TEST_CASE("gronwall exponent is zero for monotone decay and stable under refinement") {
    Grid g(8);
    SpectralField u0 = scale_to_chi(taylor_green(g, 1.0), 0.4);
    Trajectory lin = linear_run(u0, 1.0, 5.0, 1e-3, 0.3, 30);
    CHECK(hs_gronwall(lin, 2.0) == 0.0);

    SolverConfig cfg;
    cfg.nu = 0.05;
    cfg.omega = 1.0;
    cfg.dt = 2e-3;
    cfg.T = 0.5;
    cfg.observer_stride = 25;
    SpectralField big = scale_to_chi(taylor_green(g, 1.0), 0.3);
    Trajectory t1 = integrate(big, cfg);
    cfg.dt = 1e-3;
    cfg.observer_stride = 50;
    Trajectory t2 = integrate(big, cfg);
    const double c1 = hs_gronwall(t1, 2.0);
    const double c2 = hs_gronwall(t2, 2.0);
    CHECK(c1 >= 0.0);
    CHECK(c2 >= 0.0);
    CHECK(std::abs(c1 - c2) <= 0.2 * std::max({c1, c2, 1e-6}));
}

TEST_CASE("stability gap of identical runs is identically zero") {
    Grid g(8);
    SpectralField u0 = scale_to_chi(taylor_green(g, 1.0), 0.3);
    Trajectory a = linear_run(u0, 1.0, 2.0, 1e-3, 0.1, 20);
    StabilityReport rep = stability_gap(a, a, 1.0);
    CHECK(rep.initial_gap == 0.0);
    CHECK(rep.max_ratio == 0.0);
    CHECK(rep.in_hypothesis);
    CHECK(rep.bound[0] == rep.initial_gap);
}

TEST_CASE("stability gap stays inside the Gronwall envelope for truncated data") {
    Grid g(16);
    SolverConfig cfg;
    cfg.nu = 1.0;
    cfg.omega = 10.0;
    cfg.dt = 1e-3;
    cfg.T = 0.3;
    cfg.observer_stride = 30;

    SpectralField u0 = scale_to_chi(random_solenoidal(g, 5.0, 2.0, 7), 0.5);
    SpectralField v0 = truncate_R(u0, 4.0);
    REQUIRE(chi_norm(u0 - v0, -1) > 0.0);

    Trajectory a = integrate(u0, cfg);
    Trajectory b = integrate(v0, cfg);
    REQUIRE(!a.blew_up);
    REQUIRE(!b.blew_up);

    StabilityReport rep = stability_gap(a, b, cfg.nu);
    CHECK(rep.in_hypothesis);
    CHECK(rep.initial_gap == doctest::Approx(chi_norm(u0 - v0, -1)).epsilon(1e-12));
    CHECK(rep.max_ratio <= 1.0 + 1e-6);
    for (double r : rep.ratio) CHECK(r >= 0.0);
}

TEST_CASE("stability gap rejects mismatched trajectories") {
    Grid g(8);
    SpectralField u0 = scale_to_chi(taylor_green(g, 1.0), 0.3);
    Trajectory a = linear_run(u0, 1.0, 0.0, 1e-3, 0.1, 10);
    Trajectory b = linear_run(u0, 1.0, 0.0, 1e-3, 0.1, 25);
    CHECK_THROWS_AS(stability_gap(a, b, 1.0), std::invalid_argument);
}

TEST_CASE("decay report: linear single shell tracks its own envelope") {
    Grid g(8);
    Trajectory traj = linear_run(single_shell(g, 0.5), 1.0, 0.0, 1e-3, 1.0, 10);
    DecayReport rep = decay_report(traj, 1.0);
    CHECK(!rep.empty);
    CHECK(rep.kmin == doctest::Approx(1.0));
    CHECK(rep.chi_start == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rep.chi_end == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-8));
    for (double r : rep.ratio_to_linear) CHECK(r == doctest::Approx(1.0).epsilon(1e-8));
    REQUIRE(rep.half_life_times.size() == 1);
    CHECK(rep.half_life_times[0] == doctest::Approx(std::log(2.0)).epsilon(0.02));
    CHECK(rep.monotonicity_violations == 0);

    Trajectory tg = linear_run(taylor_green(g, 0.2), 1.0, 0.0, 1e-3, 0.1, 100);
    CHECK(decay_report(tg, 1.0).kmin == doctest::Approx(std::sqrt(3.0)));

    Trajectory zero = linear_run(SpectralField(g), 1.0, 0.0, 1e-2, 0.05, 5);
    CHECK(decay_report(zero, 1.0).empty);
}

TEST_CASE("heat semigroup L1 identity") {
    Grid g(16);

    SUBCASE("single mode, tight tolerance") {
        SpectralField f(g);
        f.set_mode_pair(1, 1, 0, {Complex(0.2, 0.1), Complex(-0.2, 0.1), 0.0});
        HeatL1Report rep = heat_l1_identity(f, 0.7, 4.0);
        CHECK(rep.chi_m1 == doctest::Approx(chi_norm(f, -1)).epsilon(1e-14));
        CHECK(rep.rel_error <= 1e-10);
        CHECK(rep.evaluations > 0);
        CHECK(rep.total == doctest::Approx(rep.quadrature + rep.tail));
    }

    SUBCASE("seeded field over a long window") {
        SpectralField f = random_solenoidal(g, 6.0, 2.0, 11);
        HeatL1Report rep = heat_l1_identity(f, 1.0, 10.0);
        CHECK(rep.rel_error <= 1e-8);
        CHECK(rep.tail < rep.quadrature);
    }

    SUBCASE("short window leans on the exact tail") {
        SpectralField f = random_solenoidal(g, 4.0, 2.0, 13);
        HeatL1Report rep = heat_l1_identity(f, 1.0, 0.01);
        CHECK(rep.rel_error <= 1e-10);
        CHECK(rep.tail > rep.quadrature);
    }

    SUBCASE("degenerate inputs") {
        CHECK(heat_l1_identity(SpectralField(g), 1.0, 1.0).rel_error == 0.0);
        SpectralField f = taylor_green(g, 1.0);
        CHECK_THROWS_AS(heat_l1_identity(f, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(heat_l1_identity(f, 1.0, 0.0), std::invalid_argument);
    }
}
