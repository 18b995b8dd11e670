#include "rotns/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rotns {

namespace {

// Row-major 3x3 real matrices; the per-mode linear propagators are real
// and identical at k and -k, which preserves Hermitian symmetry.
using Mat3 = std::array<double, 9>;

constexpr Mat3 kIdentity = {1, 0, 0, 0, 1, 0, 0, 0, 1};

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            c[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
        }
    }
    return c;
}

double mat_norm_inf(const Mat3& a) {
    double best = 0.0;
    for (int i = 0; i < 3; ++i) {
        best = std::max(best,
                        std::abs(a[3 * i]) + std::abs(a[3 * i + 1]) + std::abs(a[3 * i + 2]));
    }
    return best;
}

// Scaling-and-squaring with a Horner-form Taylor kernel; after scaling
// the norm is <= 0.5, so 17 terms leave a remainder below 1e-20.
Mat3 mat_exp(Mat3 a) {
    int squarings = 0;
    double nrm = mat_norm_inf(a);
    while (nrm > 0.5) {
        nrm *= 0.5;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    for (double& v : a) v *= scale;

    Mat3 e = kIdentity;
    for (int j = 17; j >= 1; --j) {
        Mat3 t = mat_mul(a, e);
        for (int p = 0; p < 9; ++p) e[p] = kIdentity[p] + t[p] / j;
    }
    for (int i = 0; i < squarings; ++i) e = mat_mul(e, e);
    return e;
}

// -nu |k|^2 I - Omega P S P for one mode, with S the matrix of e3 x .
Mat3 mode_generator(const std::array<int, 3>& k, double kscale, double nu, double omega) {
    const double kk = static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2];
    Mat3 a{};
    const double diag = -nu * kscale * kscale * kk;
    a[0] = a[4] = a[8] = diag;
    if (kk > 0.0 && omega != 0.0) {
        Mat3 p = kIdentity;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                p[3 * i + j] -= static_cast<double>(k[i]) * k[j] / kk;
            }
        }
        const Mat3 s = {0, -1, 0, 1, 0, 0, 0, 0, 0};
        const Mat3 m = mat_mul(p, mat_mul(s, p));
        for (int q = 0; q < 9; ++q) a[q] -= omega * m[q];
    }
    return a;
}

void axpy(SpectralField& y, double a, const SpectralField& x) {
    for (int c = 0; c < 3; ++c) {
        auto& yc = y.component(c);
        const auto& xc = x.component(c);
        for (std::size_t i = 0; i < yc.size(); ++i) yc[i] += a * xc[i];
    }
}

}  // namespace

void SolverConfig::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("SolverConfig: nu must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be > 0");
    if (T < 0.0) throw std::invalid_argument("SolverConfig: T must be >= 0");
    if (T > 0.0 && dt > T * (1.0 + 1e-12)) {
        throw std::invalid_argument("SolverConfig: dt must not exceed T");
    }
    if (observer_stride < 1) throw std::invalid_argument("SolverConfig: observer_stride >= 1");
    if (s < 0.0) throw std::invalid_argument("SolverConfig: s must be >= 0");
}

bool SolverConfig::coriolis_underresolved() const { return std::abs(omega) * dt > 0.5; }

struct Stepper::Impl {
    FftEngine fft;
    // Propagators for dt (full) and dt/2 (half); scalar heat factors for
    // IF-RK4, per-mode matrices for the exact linear scheme. The full
    // matrix is the square of the half matrix (exact semigroup identity).
    std::vector<double> heat_full, heat_half;
    std::vector<Mat3> mat_full, mat_half;

    Impl(const Grid& grid, const SolverConfig& cfg) : fft(grid) {
        const std::size_t size = grid.size();
        if (cfg.scheme == Scheme::IfRk4) {
            heat_full.resize(size);
            heat_half.resize(size);
            for_each_mode(grid, [&](const std::array<int, 3>& k, std::size_t idx) {
                const double kk = grid.k_scale() * grid.k_scale() *
                                  (static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2]);
                heat_full[idx] = std::exp(-cfg.nu * kk * cfg.dt);
                heat_half[idx] = std::exp(-cfg.nu * kk * cfg.dt * 0.5);
            });
        } else {
            mat_full.resize(size);
            mat_half.resize(size);
            for_each_mode(grid, [&](const std::array<int, 3>& k, std::size_t idx) {
                Mat3 a = mode_generator(k, grid.k_scale(), cfg.nu, cfg.omega);
                for (double& v : a) v *= 0.5 * cfg.dt;
                mat_half[idx] = mat_exp(a);
                mat_full[idx] = mat_mul(mat_half[idx], mat_half[idx]);
            });
        }
    }

    void apply(bool full, const SpectralField& in, SpectralField& out) const {
        const std::size_t size = in.grid().size();
        if (!heat_full.empty()) {
            const std::vector<double>& fac = full ? heat_full : heat_half;
            for (int c = 0; c < 3; ++c) {
                const auto& src = in.component(c);
                auto& dst = out.component(c);
                for (std::size_t i = 0; i < size; ++i) dst[i] = fac[i] * src[i];
            }
            return;
        }
        const std::vector<Mat3>& prop = full ? mat_full : mat_half;
        const auto& s0 = in.component(0);
        const auto& s1 = in.component(1);
        const auto& s2 = in.component(2);
        auto& d0 = out.component(0);
        auto& d1 = out.component(1);
        auto& d2 = out.component(2);
        for (std::size_t i = 0; i < size; ++i) {
            const Mat3& m = prop[i];
            const Complex a = s0[i], b = s1[i], c = s2[i];
            d0[i] = m[0] * a + m[1] * b + m[2] * c;
            d1[i] = m[3] * a + m[4] * b + m[5] * c;
            d2[i] = m[6] * a + m[7] * b + m[8] * c;
        }
    }
};

Stepper::Stepper(const Grid& grid, const SolverConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    impl_ = std::make_unique<Impl>(grid, cfg_);
}

Stepper::~Stepper() = default;

FftEngine& Stepper::fft() { return impl_->fft; }

SpectralField Stepper::step(const SpectralField& f) {
    Impl& im = *impl_;
    const double h = cfg_.dt;
    const bool exact_linear = cfg_.scheme == Scheme::ExactLinearRk4;

    // Non-integrated part of the right-hand side for the Lawson stages.
    const auto n_part = [&](const SpectralField& v) {
        if (exact_linear) {
            return cfg_.nonlinear ? nonlinear_rhs(v, im.fft) : SpectralField(v.grid());
        }
        SpectralField r = coriolis_rhs(v, cfg_.omega);
        if (cfg_.nonlinear) r += nonlinear_rhs(v, im.fft);
        return r;
    };
    const bool n_empty = !cfg_.nonlinear && (exact_linear || cfg_.omega == 0.0);

    SpectralField out(f.grid());
    if (n_empty) {
        im.apply(true, f, out);
    } else {
        SpectralField e2u(f.grid()), tmp(f.grid());
        const SpectralField k1 = n_part(f);
        im.apply(false, f, e2u);
        im.apply(false, k1, tmp);
        SpectralField stage = e2u;
        axpy(stage, 0.5 * h, tmp);
        SpectralField k2 = n_part(stage);
        stage = e2u;
        axpy(stage, 0.5 * h, k2);
        const SpectralField k3 = n_part(stage);
        im.apply(true, f, out);
        im.apply(false, k3, tmp);
        stage = out;
        axpy(stage, h, tmp);
        const SpectralField k4 = n_part(stage);

        im.apply(true, k1, tmp);
        axpy(out, h / 6.0, tmp);
        k2 += k3;
        im.apply(false, k2, tmp);
        axpy(out, h / 3.0, tmp);
        axpy(out, h / 6.0, k4);
    }
    if (!out.finite()) throw BlowupError("step: state became non-finite");
    return out;
}

SpectralField step(const SpectralField& f, const SolverConfig& cfg) {
    Stepper stepper(f.grid(), cfg);
    return stepper.step(f);
}

Trajectory integrate(const SpectralField& u0, const SolverConfig& cfg) {
    cfg.validate();
    Trajectory traj;
    traj.grid = u0.grid();
    Stepper stepper(u0.grid(), cfg);

    std::vector<double> k2(u0.grid().size());
    for_each_mode(u0.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        const double ks = u0.grid().k_scale();
        k2[idx] = ks * ks * (static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2]);
    });
    const double vol = std::pow(u0.grid().period(), 3.0);

    const auto record_dense = [&](const SpectralField& v, double t) {
        double e = 0.0, ens = 0.0;
        for (std::size_t idx = 0; idx < v.grid().size(); ++idx) {
            const double mag2 = std::norm(v.at(0, idx)) + std::norm(v.at(1, idx)) +
                                std::norm(v.at(2, idx));
            e += mag2;
            ens += k2[idx] * mag2;
        }
        traj.step_times.push_back(t);
        traj.step_energy.push_back(0.5 * vol * e);
        traj.step_enstrophy.push_back(vol * ens);
    };
    const auto record_snapshot = [&](const SpectralField& v, double t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(v);
        traj.reports.push_back(norm_report(v, cfg.s, stepper.fft()));
    };

    long long n_steps = cfg.T > 0.0 ? std::llround(cfg.T / cfg.dt) : 0;
    if (cfg.T > 0.0 && n_steps < 1) n_steps = 1;

    SpectralField u = u0;
    record_dense(u, 0.0);
    record_snapshot(u, 0.0);
    for (long long j = 1; j <= n_steps; ++j) {
        const double t = static_cast<double>(j) * cfg.dt;
        try {
            u = stepper.step(u);
        } catch (const BlowupError&) {
            traj.blew_up = true;
            traj.blowup_time = t;
            return traj;
        }
        record_dense(u, t);
        if (j % cfg.observer_stride == 0 || j == n_steps) record_snapshot(u, t);
    }
    return traj;
}

double cfl_suggest(const SpectralField& f, const SolverConfig& cfg, FftEngine& fft) {
    double bound = std::numeric_limits<double>::infinity();
    if (std::abs(cfg.omega) > 0.0) bound = std::min(bound, 0.5 / std::abs(cfg.omega));
    const double uinf = linf_velocity(f, fft);
    if (uinf > 0.0) {
        const double h = f.grid().period() / f.grid().n();
        bound = std::min(bound, 0.5 * h / uinf);
    }
    const double c1 = chi_norm(f, 1);
    if (c1 > 0.0) bound = std::min(bound, 0.5 / c1);
    return std::isfinite(bound) ? bound : cfg.T;
}

}  // namespace rotns
