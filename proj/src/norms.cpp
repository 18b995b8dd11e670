#include "rotns/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace rotns {

namespace {

// Kahan compensated sum; together with the fixed mode order this makes
// every norm bit-reproducible.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

void require_mean_free(const SpectralField& f, const char* where) {
    if (f.mean_mode_abs() > 1e-13 * std::max(f.max_abs(), 1e-300)) {
        throw std::invalid_argument(std::string(where) + ": field has a nonzero mean mode");
    }
}

double shell_radius(const Grid& grid, const std::array<int, 3>& k) {
    return grid.k_scale() *
           std::sqrt(static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2]);
}

}  // namespace

double chi_norm(const SpectralField& f, int m) {
    if (m < -1 || m > 1) throw std::invalid_argument("chi_norm: m must be in {-1, 0, 1}");
    if (m == -1) require_mean_free(f, "chi_norm(m = -1)");
    KahanSum acc;
    for_each_mode(f.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        if (k[0] == 0 && k[1] == 0 && k[2] == 0) return;
        const double mag = f.modulus(idx);
        if (mag == 0.0) return;
        const double kk = shell_radius(f.grid(), k);
        const double w = m == 0 ? 1.0 : (m == 1 ? kk : 1.0 / kk);
        acc.add(w * mag);
    });
    return acc.sum;
}

SobolevNorms sobolev_norms(const SpectralField& f, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_norms: s must be >= 0");
    KahanSum s_l2, s_hom, s_full;
    for_each_mode(f.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        const double mag2 = std::norm(f.at(0, idx)) + std::norm(f.at(1, idx)) +
                            std::norm(f.at(2, idx));
        if (mag2 == 0.0) return;
        const double kk = shell_radius(f.grid(), k);
        const double k2 = kk * kk;
        s_l2.add(mag2);
        s_hom.add(std::pow(k2, s) * mag2);
        s_full.add(std::pow(1.0 + k2, s) * mag2);
    });
    const double vol = std::pow(f.grid().period(), 1.5);
    SobolevNorms out;
    out.l2 = vol * std::sqrt(s_l2.sum);
    out.hs_hom = vol * std::sqrt(s_hom.sum);
    out.hs_full = vol * std::sqrt(s_full.sum);
    return out;
}

double grad_inf(const SpectralField& f, FftEngine& fft) {
    const Grid& grid = f.grid();
    const std::size_t size = grid.size();
    std::vector<double> sumsq(size, 0.0);
    std::vector<Complex> deriv(size);
    std::vector<double> phys;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for_each_mode(grid, [&](const std::array<int, 3>& k, std::size_t idx) {
                deriv[idx] = Complex(0.0, grid.k_scale() * k[j]) * f.at(i, idx);
            });
            fft.to_physical(deriv, phys);
            for (std::size_t p = 0; p < size; ++p) sumsq[p] += phys[p] * phys[p];
        }
    }
    double best = 0.0;
    for (double v : sumsq) best = std::max(best, v);
    return std::sqrt(best);
}

double linf_velocity(const SpectralField& f, FftEngine& fft) {
    std::array<std::vector<double>, 3> u;
    fft.velocity_to_physical(f, u);
    double best = 0.0;
    for (std::size_t p = 0; p < f.grid().size(); ++p) {
        best = std::max(best, u[0][p] * u[0][p] + u[1][p] * u[1][p] + u[2][p] * u[2][p]);
    }
    return std::sqrt(best);
}

NormReport norm_report(const SpectralField& f, double s, FftEngine& fft) {
    require_mean_free(f, "norm_report");
    NormReport r;
    r.s = s;
    KahanSum cm1, c0, c1, s_l2, s_hom, s_full, s_h1;
    for_each_mode(f.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        const double mag2 = std::norm(f.at(0, idx)) + std::norm(f.at(1, idx)) +
                            std::norm(f.at(2, idx));
        if (mag2 == 0.0) return;
        const double mag = std::sqrt(mag2);
        const double kk = shell_radius(f.grid(), k);
        const double k2 = kk * kk;
        if (kk > 0.0) {
            cm1.add(mag / kk);
            c0.add(mag);
            c1.add(mag * kk);
        }
        s_l2.add(mag2);
        s_hom.add(std::pow(k2, s) * mag2);
        s_full.add(std::pow(1.0 + k2, s) * mag2);
        s_h1.add(k2 * mag2);
    });
    const double vol = std::pow(f.grid().period(), 1.5);
    r.chi_m1 = cm1.sum;
    r.chi_0 = c0.sum;
    r.chi_1 = c1.sum;
    r.l2 = vol * std::sqrt(s_l2.sum);
    r.hs_hom = vol * std::sqrt(s_hom.sum);
    r.hs_full = vol * std::sqrt(s_full.sum);
    r.h1_hom = vol * std::sqrt(s_h1.sum);
    r.energy = 0.5 * r.l2 * r.l2;
    r.grad_inf = grad_inf(f, fft);
    return r;
}

Lemma1Report lemma1_check(const SpectralField& f, double s, FftEngine& fft) {
    if (s <= 0.5) throw std::invalid_argument("lemma1_check: s must be > 1/2");
    require_mean_free(f, "lemma1_check");
    const Grid& grid = f.grid();

    Lemma1Report rep;
    rep.chi_m1 = chi_norm(f, -1);
    rep.chi_0 = chi_norm(f, 0);
    rep.chi_1 = chi_norm(f, 1);

    // Shell-indexed lattice sums: mode counts drive S2/T (pure geometry),
    // coefficient sums drive E and H_s.
    std::map<long long, long long> counts;
    KahanSum e2, hs2;
    for_each_mode(grid, [&](const std::array<int, 3>& k, std::size_t idx) {
        const long long q = static_cast<long long>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2];
        if (q > 0) ++counts[q];
        const double mag2 = std::norm(f.at(0, idx)) + std::norm(f.at(1, idx)) +
                            std::norm(f.at(2, idx));
        if (mag2 == 0.0 || q == 0) return;
        const double kk = grid.k_scale() * std::sqrt(static_cast<double>(q));
        e2.add(mag2);
        hs2.add(std::pow(kk * kk, s) * mag2);
    });
    rep.e_l2 = std::sqrt(e2.sum);
    rep.h_s = std::sqrt(hs2.sum);

    std::vector<double> radii, s2_prefix, t_suffix;
    {
        std::vector<double> t_terms;
        for (const auto& [q, c] : counts) {
            const double kk = grid.k_scale() * std::sqrt(static_cast<double>(q));
            radii.push_back(kk);
            s2_prefix.push_back(static_cast<double>(c) / (kk * kk));
            t_terms.push_back(static_cast<double>(c) * std::pow(kk, -2.0 - 2.0 * s));
        }
        for (std::size_t i = 1; i < s2_prefix.size(); ++i) s2_prefix[i] += s2_prefix[i - 1];
        t_suffix.assign(radii.size(), 0.0);
        double run = 0.0;
        for (std::size_t i = radii.size(); i-- > 1;) {
            run += t_terms[i];
            t_suffix[i - 1] = run;
        }
    }

    rep.bound_1 = std::numeric_limits<double>::infinity();
    double t_at_best = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double cand = std::sqrt(s2_prefix[i]) * rep.e_l2 + std::sqrt(t_suffix[i]) * rep.h_s;
        if (cand < rep.bound_1) {
            rep.bound_1 = cand;
            rep.best_radius = radii[i];
            t_at_best = t_suffix[i];
        }
    }

    // Continuum estimate of the T-tail outside the lattice cube: lattice
    // density 1 in integer space, omitted modes start at |k_int| >= n/2,
    // so tail ~ 4 pi / (2s - 1) k_scale^{-2-2s} (n/2)^{1-2s}.
    const double tail_outside = 2.0 * two_pi() / (2.0 * s - 1.0) *
                                std::pow(grid.k_scale(), -2.0 - 2.0 * s) *
                                std::pow(grid.n() / 2.0, 1.0 - 2.0 * s);
    rep.tail_flagged = rep.h_s > 0.0 && tail_outside > 1e-6 * t_at_best;

    rep.interp_rhs = std::sqrt(rep.chi_m1 * rep.chi_1);
    rep.grad_inf = grad_inf(f, fft);

    rep.violated_1 = rep.chi_m1 > rep.bound_1 * (1.0 + kNormCheckTol);
    rep.violated_2 = rep.chi_0 > rep.interp_rhs * (1.0 + kNormCheckTol);
    rep.violated_3 = rep.grad_inf > rep.chi_1 * (1.0 + kNormCheckTol);
    return rep;
}

}  // namespace rotns
