#include "rotns/transform.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace rotns {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution of a
// finished plan on its own buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

FftEngine::FftEngine(const Grid& grid) : grid_(grid) {
    const int n = grid_.n();
    const std::size_t size = grid_.size();
    buf_in_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * size));
    buf_out_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * size));
    if (buf_in_ == nullptr || buf_out_ == nullptr) {
        fftw_free(buf_in_);
        fftw_free(buf_out_);
        throw std::bad_alloc();
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    // Storage is x-fastest, so the FFTW dimensions are (z, y, x); the
    // transform is axis-symmetric, only the layout matters. BACKWARD
    // (+i phases) realizes u(x) = sum uhat e^{ik.x}. FFTW_ESTIMATE keeps
    // plans deterministic across runs.
    plan_bwd_ = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(buf_in_),
                                 reinterpret_cast<fftw_complex*>(buf_out_), FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
    plan_fwd_ = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(buf_in_),
                                 reinterpret_cast<fftw_complex*>(buf_out_), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    if (plan_bwd_ == nullptr || plan_fwd_ == nullptr) {
        throw std::runtime_error("FftEngine: plan creation failed");
    }
}

FftEngine::~FftEngine() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_in_);
    fftw_free(buf_out_);
}

void FftEngine::to_physical(const std::vector<Complex>& spec, std::vector<double>& phys) {
    const std::size_t size = grid_.size();
    if (spec.size() != size) throw std::invalid_argument("to_physical: size mismatch");
    phys.resize(size);
    for (std::size_t i = 0; i < size; ++i) buf_in_[i] = spec[i];
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    for (std::size_t i = 0; i < size; ++i) phys[i] = buf_out_[i].real();
}

void FftEngine::to_spectral(const std::vector<double>& phys, std::vector<Complex>& spec) {
    const std::size_t size = grid_.size();
    if (phys.size() != size) throw std::invalid_argument("to_spectral: size mismatch");
    spec.resize(size);
    for (std::size_t i = 0; i < size; ++i) buf_in_[i] = Complex(phys[i], 0.0);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double scale = 1.0 / static_cast<double>(size);
    for (std::size_t i = 0; i < size; ++i) spec[i] = buf_out_[i] * scale;
}

void FftEngine::velocity_to_physical(const SpectralField& f, std::array<std::vector<double>, 3>& u) {
    for (int c = 0; c < 3; ++c) to_physical(f.component(c), u[c]);
}

}  // namespace rotns
