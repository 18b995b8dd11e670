#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "oracles.hpp"
#include "rotns/dynamics.hpp"
#include "rotns/initial_data.hpp"
#include "rotns/norms.hpp"
#include "rotns/timestepper.hpp"
#include "rotns/transform.hpp"

using namespace rotns;

namespace {

double sum_sq(const SpectralField& f) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < f.grid().size(); ++i) s += std::norm(f.at(c, i));
    return s;
}

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.grid().size(); ++i)
            worst = std::max(worst, std::abs(a.at(c, i) - b.at(c, i)));
    return worst;
}

}  // namespace

TEST_CASE("coriolis term: pinned single-mode example") {
    Grid g(8);
    SpectralField f(g);
    f.set_mode_pair(0, 0, 1, {Complex(1.0, 0.0), Complex(0.0, 1.0), 0.0});

    SpectralField out = coriolis_rhs(f, 1.0);
    // k = e3, uhat perp to k: projection leaves e3 x uhat = (-i, 1, 0) alone,
    // and the rhs sign gives -(e3 x uhat).
    CHECK(out.mode(0, 0, 0, 1) == Complex(0.0, 1.0));
    CHECK(out.mode(1, 0, 0, 1) == Complex(-1.0, 0.0));
    CHECK(out.mode(2, 0, 0, 1) == Complex(0.0, 0.0));
    CHECK(out.hermitian_residual() < 1e-14);

    CHECK(sum_sq(coriolis_rhs(f, 0.0)) == 0.0);
}

TEST_CASE("coriolis term drops out of modes with k3 = 0") {
    Grid g(8);
    SpectralField f(g);
    f.set_mode_pair(1, 0, 0, {0.0, Complex(0.7, -0.2), Complex(0.1, 0.4)});
    SpectralField out = coriolis_rhs(f, 10.0);
    CHECK(out.max_abs() < 1e-15);
}

TEST_CASE("rotation does no work: residual vanishes identically") {
    Grid g(16);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SpectralField f = random_solenoidal(g, 5.0, 2.0, 1000 + seed);
        const double res = coriolis_neutrality_residual(f, 100.0);
        CHECK(res <= 1e-12 * 100.0 * sum_sq(f));
        CHECK(res == 0.0);
    }
}

TEST_CASE("viscous term scales each mode by -nu |k|^2") {
    Grid g(8);
    SpectralField f(g);
    f.set_mode_pair(2, 0, 0, {0.0, Complex(1.0, -3.0), 0.0});
    SpectralField out = viscous_rhs(f, 0.25);
    CHECK(out.mode(1, 2, 0, 0) == Complex(-1.0, 3.0));
    CHECK(out.mode(1, -2, 0, 0) == Complex(-1.0, -3.0));
}

TEST_CASE("advection of a single Hermitian pair vanishes") {
    Grid g(8);
    FftEngine fft(g);
    SpectralField f(g);
    f.set_mode_pair(1, 0, 0, {0.0, Complex(0.4, 0.2), Complex(-0.3, 0.6)});
    SpectralField out = nonlinear_rhs(f, fft);
    CHECK(out.max_abs() <= 1e-15);
}

TEST_CASE("divergence-form advection matches the dense convolution") {
    Grid g(8);
    FftEngine fft(g);

    SpectralField tg = taylor_green(g, 0.9);
    SpectralField got = divergence_uu(tg, fft);
    SpectralField want = oracle::divergence_uu_reference(tg);
    CHECK(max_coeff_diff(got, want) <= 1e-10 * std::max(want.max_abs(), 1e-30));

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SpectralField f = random_solenoidal(g, 2.4, 2.0, seed);
        SpectralField a = divergence_uu(f, fft);
        SpectralField b = oracle::divergence_uu_reference(f);
        CHECK(max_coeff_diff(a, b) <= 1e-10 * std::max(b.max_abs(), 1e-30));
    }
}

TEST_CASE("projected advection term is solenoidal, mean-free, energy-neutral") {
    Grid g(16);
    FftEngine fft(g);
    SpectralField f = random_solenoidal(g, 5.0, 2.0, 12);
    SpectralField nl = nonlinear_rhs(f, fft);

    CHECK(nl.mean_mode_abs() == 0.0);
    CHECK(nl.divergence_residual() < 1e-12);
    CHECK(nl.hermitian_residual() < 1e-12);

    double inner = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            inner += std::real(nl.at(c, i) * std::conj(f.at(c, i)));
    CHECK(std::abs(inner) <= 1e-11 * std::sqrt(sum_sq(nl) * sum_sq(f)));
}

TEST_CASE("full_rhs assembles the requested terms") {
    Grid g(8);
    FftEngine fft(g);
    SolverConfig cfg;
    cfg.nu = 0.5;
    cfg.omega = 3.0;
    SpectralField f = taylor_green(g, 0.4);

    RhsTerms lin = full_rhs(f, cfg, /*linear_only=*/true, fft);
    CHECK(lin.nonlinear.max_abs() == 0.0);
    CHECK(max_coeff_diff(lin.total, lin.viscous + lin.coriolis) < 1e-15);

    RhsTerms all = full_rhs(f, cfg, /*linear_only=*/false, fft);
    CHECK(all.nonlinear.max_abs() > 0.0);
    CHECK(max_coeff_diff(all.total, all.viscous + all.coriolis + all.nonlinear) < 1e-15);

    cfg.nonlinear = false;
    RhsTerms off = full_rhs(f, cfg, /*linear_only=*/false, fft);
    CHECK(off.nonlinear.max_abs() == 0.0);
}

TEST_CASE("pressure gradient balances the non-solenoidal forcing part") {
    Grid g(16);
    FftEngine fft(g);
    SpectralField f = random_solenoidal(g, 5.0, 2.0, 21);
    const double omega = 7.0;

    ScalarSpectralField p = recover_pressure(f, omega, fft);
    CHECK(std::abs(p.coeffs[g.mode_index(0, 0, 0)]) == 0.0);

    SpectralField gfield = divergence_uu(f, fft);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        gfield.at(0, idx) += -omega * f.at(1, idx);
        gfield.at(1, idx) += omega * f.at(0, idx);
    }
    SpectralField resid = gfield - project_leray(gfield);  // the gradient part
    // grad p = -(I - P) g: the pressure cancels the non-solenoidal part,
    // so g + grad p is exactly the projected forcing.
    double worst = 0.0;
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t idx) {
        for (int c = 0; c < 3; ++c) {
            const Complex grad_p = Complex(0.0, g.k_scale() * k[c]) * p.coeffs[idx];
            worst = std::max(worst, std::abs(grad_p + resid.at(c, idx)));
        }
    });
    CHECK(worst <= 1e-12 * std::max(1.0, gfield.max_abs()));
}

TEST_CASE("pressure support of two crossed shear modes") {
    Grid g(8);
    FftEngine fft(g);
    SpectralField f(g);
    f.set_mode_pair(1, 0, 0, {0.0, Complex(1.0, 0.0), 0.0});
    f.set_mode_pair(0, 1, 0, {Complex(1.0, 0.0), 0.0, 0.0});

    ScalarSpectralField p = recover_pressure(f, 0.0, fft);
    double outside = 0.0;
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t idx) {
        const bool allowed = (std::abs(k[0]) == 1 && std::abs(k[1]) == 1 && k[2] == 0) ||
                             (std::abs(k[0]) == 2 && k[1] == 0 && k[2] == 0) ||
                             (k[0] == 0 && std::abs(k[1]) == 2 && k[2] == 0);
        if (!allowed) outside = std::max(outside, std::abs(p.coeffs[idx]));
    });
    CHECK(outside <= 1e-15);
    CHECK(std::abs(p.coeffs[g.mode_index(1, 1, 0)]) > 1e-3);
}

TEST_CASE("non-finite input raises BlowupError") {
    Grid g(8);
    FftEngine fft(g);
    SpectralField f(g);
    f.set_mode_pair(1, 0, 0, {Complex(std::numeric_limits<double>::infinity(), 0.0), 0.0, 0.0});
    CHECK(!f.finite());
    CHECK_THROWS_AS(nonlinear_rhs(f, fft), BlowupError);
}
