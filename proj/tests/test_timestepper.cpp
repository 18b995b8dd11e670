#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

#include "oracles.hpp"
#include "rotns/initial_data.hpp"
#include "rotns/norms.hpp"
#include "rotns/timestepper.hpp"

using namespace rotns;

namespace {

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.grid().size(); ++i)
            worst = std::max(worst, std::abs(a.at(c, i) - b.at(c, i)));
    return worst;
}

// chi^{-1} of the linear (rotation + heat) flow started from u0: rotation
// preserves each |uhat_k|, so only the heat factor remains.
double linear_chi_m1(const SpectralField& u0, double nu, double t) {
    long double acc = 0.0L;
    for_each_mode(u0.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        const double q = static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2];
        if (q == 0.0) return;
        const double kk = u0.grid().k_scale() * std::sqrt(q);
        acc += static_cast<long double>(u0.modulus(idx) / kk *
                                        std::exp(-nu * kk * kk * t));
    });
    return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    SolverConfig bad = cfg;
    bad.nu = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.dt = -1e-3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.dt = 2.0;
    bad.T = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.observer_stride = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    cfg.omega = 600.0;
    cfg.dt = 1e-3;
    CHECK(cfg.coriolis_underresolved());
    cfg.omega = 100.0;
    CHECK(!cfg.coriolis_underresolved());
}

TEST_CASE("pure heat step is the exact scalar factor") {
    Grid g(8);
    SpectralField f(g);
    f.set_mode_pair(2, 1, 0, {0.0, Complex(0.4, -0.8), Complex(0.3, 0.0)});

    SolverConfig cfg;
    cfg.nu = 0.7;
    cfg.omega = 0.0;
    cfg.dt = 0.01;
    cfg.nonlinear = false;

    cfg.scheme = Scheme::IfRk4;
    SpectralField a = step(f, cfg);
    const double fac = std::exp(-0.7 * 5.0 * 0.01);
    CHECK(a.mode(1, 2, 1, 0) == fac * f.mode(1, 2, 1, 0));

    cfg.scheme = Scheme::ExactLinearRk4;
    SpectralField b = step(f, cfg);
    CHECK(std::abs(b.mode(1, 2, 1, 0) - fac * f.mode(1, 2, 1, 0)) <=
          1e-15 * std::abs(f.mode(1, 2, 1, 0)));
}

TEST_CASE("rotation preserves per-mode modulus under the linear flow") {
    Grid g(16);
    SpectralField f = random_solenoidal(g, 5.0, 2.0, 4);

    SolverConfig cfg;
    cfg.nu = 1.0;
    cfg.dt = 1e-3;
    cfg.nonlinear = false;

    cfg.scheme = Scheme::ExactLinearRk4;
    cfg.omega = 50.0;
    SpectralField a = step(f, cfg);
    cfg.scheme = Scheme::IfRk4;
    cfg.omega = 10.0;
    SpectralField b = step(f, cfg);

    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t idx) {
        const double m0 = f.modulus(idx);
        if (m0 == 0.0) return;
        const double q = static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2];
        const double heat = std::exp(-q * 1e-3);
        CHECK(a.modulus(idx) == doctest::Approx(heat * m0).epsilon(1e-13));
        CHECK(b.modulus(idx) == doctest::Approx(heat * m0).epsilon(1e-12));
    });
}

TEST_CASE("exact linear propagator matches the high-precision exponential") {
    Grid g(16);
    SolverConfig cfg;
    cfg.nu = 1.0;
    cfg.omega = 100.0;
    cfg.dt = 1e-3;
    cfg.scheme = Scheme::ExactLinearRk4;
    cfg.nonlinear = false;
    Stepper stepper(g, cfg);

    // Basis fields with component c = 1 at every mode recover the three
    // columns of every per-mode propagator in three steps.
    std::array<SpectralField, 3> cols{SpectralField(g), SpectralField(g), SpectralField(g)};
    for (int c = 0; c < 3; ++c) {
        SpectralField basis(g);
        for (std::size_t i = 0; i < g.size(); ++i) basis.at(c, i) = Complex(1.0, 0.0);
        cols[c] = stepper.step(basis);
    }

    double worst = 0.0, worst_imag = 0.0;
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t idx) {
        std::array<double, 9> a = oracle::generator_reference(k, g.k_scale(), cfg.nu, cfg.omega);
        for (double& v : a) v *= cfg.dt;
        const std::array<double, 9> want = oracle::expm_reference(a);
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 3; ++c) {
                worst = std::max(worst, std::abs(cols[c].at(i, idx).real() - want[3 * i + c]));
                worst_imag = std::max(worst_imag, std::abs(cols[c].at(i, idx).imag()));
            }
    });
    CHECK(worst <= 1e-12);
    CHECK(worst_imag == 0.0);
}

TEST_CASE("linear integration reproduces the closed-form decay") {
    Grid g(8);
    SpectralField u0 = scale_to_chi(random_solenoidal(g, 2.4, 2.0, 99), 0.5);

    SolverConfig cfg;
    cfg.nu = 1.0;
    cfg.omega = 7.0;
    cfg.dt = 1e-3;
    cfg.T = 1.0;
    cfg.scheme = Scheme::ExactLinearRk4;
    cfg.nonlinear = false;
    cfg.observer_stride = 250;

    Trajectory traj = integrate(u0, cfg);
    REQUIRE(!traj.blew_up);
    REQUIRE(traj.times.size() == 5);
    CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(traj.step_times.size() == 1001);

    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const double want = linear_chi_m1(u0, cfg.nu, traj.times[j]);
        CHECK(traj.reports[j].chi_m1 == doctest::Approx(want).epsilon(1e-8));
    }

    // per-mode modulus at the final time
    const SpectralField& uT = traj.snapshots.back();
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t idx) {
        const double m0 = u0.modulus(idx);
        if (m0 == 0.0) return;
        const double q = static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2];
        CHECK(uT.modulus(idx) == doctest::Approx(m0 * std::exp(-q)).epsilon(1e-8));
    });
}

TEST_CASE("integration with T = 0 records only the initial state") {
    Grid g(8);
    SolverConfig cfg;
    cfg.T = 0.0;
    Trajectory traj = integrate(taylor_green(g, 0.5), cfg);
    CHECK(traj.times.size() == 1);
    CHECK(traj.step_times.size() == 1);
    CHECK(traj.reports.size() == 1);
    CHECK(!traj.blew_up);
}

TEST_CASE("nonlinear convergence is fourth order under step halving") {
    Grid g(8);
    SpectralField u0 = scale_to_chi(taylor_green(g, 1.0), 0.8);

    SolverConfig cfg;
    cfg.nu = 0.2;
    cfg.omega = 3.0;
    cfg.T = 0.5;
    cfg.scheme = Scheme::ExactLinearRk4;
    cfg.observer_stride = 1 << 20;  // endpoints only

    const auto final_state = [&](double dt) {
        SolverConfig c = cfg;
        c.dt = dt;
        Trajectory traj = integrate(u0, c);
        REQUIRE(!traj.blew_up);
        return traj.snapshots.back();
    };
    const SpectralField ref = final_state(0.05 / 8.0);
    const double e1 = chi_norm(final_state(0.05) - ref, -1);
    const double e2 = chi_norm(final_state(0.025) - ref, -1);
    REQUIRE(e2 > 1e-13);
    const double ratio = e1 / e2;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("both schemes agree on a resolved nonlinear run") {
    Grid g(8);
    SpectralField u0 = scale_to_chi(taylor_green(g, 1.0), 0.5);

    SolverConfig cfg;
    cfg.nu = 1.0;
    cfg.omega = 5.0;
    cfg.dt = 1e-3;
    cfg.T = 0.1;
    cfg.observer_stride = 100;

    cfg.scheme = Scheme::ExactLinearRk4;
    Trajectory a = integrate(u0, cfg);
    cfg.scheme = Scheme::IfRk4;
    Trajectory b = integrate(u0, cfg);
    REQUIRE(!a.blew_up);
    REQUIRE(!b.blew_up);
    CHECK(max_coeff_diff(a.snapshots.back(), b.snapshots.back()) <= 1e-7);
}

TEST_CASE("integration is bitwise deterministic") {
    Grid g(8);
    SpectralField u0 = scale_to_chi(taylor_green(g, 1.0), 0.4);
    SolverConfig cfg;
    cfg.nu = 0.5;
    cfg.omega = 2.0;
    cfg.dt = 5e-3;
    cfg.T = 0.2;

    Trajectory a = integrate(u0, cfg);
    Trajectory b = integrate(u0, cfg);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t s = 0; s < a.snapshots.size(); ++s)
        for (int c = 0; c < 3; ++c) {
            const auto& xa = a.snapshots[s].component(c);
            const auto& xb = b.snapshots[s].component(c);
            CHECK(std::memcmp(xa.data(), xb.data(), xa.size() * sizeof(Complex)) == 0);
        }
    CHECK(a.step_energy == b.step_energy);
}

TEST_CASE("blow-up is reported, not fatal") {
    Grid g(8);
    SpectralField u0 = taylor_green(g, 1e6);
    SolverConfig cfg;
    cfg.nu = 1e-6;
    cfg.dt = 0.5;
    cfg.T = 10.0;

    Trajectory traj = integrate(u0, cfg);
    CHECK(traj.blew_up);
    CHECK(traj.blowup_time > 0.0);
    CHECK(traj.blowup_time <= 10.0);
    CHECK(traj.times.size() == traj.reports.size());
    CHECK(!traj.snapshots.empty());
}

TEST_CASE("advisory step size bounds") {
    Grid g(16);
    FftEngine fft(g);
    SolverConfig cfg;
    cfg.T = 2.5;

    SpectralField zero(g);
    cfg.omega = 5.0;
    CHECK(cfl_suggest(zero, cfg, fft) == doctest::Approx(0.1));
    cfg.omega = 0.0;
    CHECK(cfl_suggest(zero, cfg, fft) == doctest::Approx(2.5));

    SpectralField tg = taylor_green(g, 2.0);
    cfg.omega = 4.0;
    const double got = cfl_suggest(tg, cfg, fft);
    const double h = g.period() / g.n();
    const double expect = std::min({0.5 / 4.0, 0.5 * h / linf_velocity(tg, fft),
                                    0.5 / chi_norm(tg, 1)});
    CHECK(got == doctest::Approx(expect).epsilon(1e-13));
}
