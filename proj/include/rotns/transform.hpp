#pragma once

#include <array>
#include <vector>

#include "rotns/field.hpp"
#include "rotns/grid.hpp"

namespace rotns {

/// FFT provider for one grid, backed by FFTW (c2c, FFTW_ESTIMATE plans so
/// results are reproducible run to run). Physical-space data is real; the
/// spectral convention is u(x) = sum_k uhat_k e^{i k.x}, so the forward
/// transform carries the 1/n^3 factor.
///
/// An engine owns its workspace and is not reentrant: use one engine per
/// worker thread. Plan creation is internally serialized.
class FftEngine {
  public:
    explicit FftEngine(const Grid& grid);
    ~FftEngine();

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    const Grid& grid() const { return grid_; }

    /// Spectral coefficients -> real grid values (imaginary residue of a
    /// Hermitian input is dropped).
    void to_physical(const std::vector<Complex>& spec, std::vector<double>& phys);

    /// Real grid values -> spectral coefficients (includes 1/n^3).
    void to_spectral(const std::vector<double>& phys, std::vector<Complex>& spec);

    void velocity_to_physical(const SpectralField& f, std::array<std::vector<double>, 3>& u);

  private:
    Grid grid_;
    void* plan_fwd_ = nullptr;  // fftw_plan
    void* plan_bwd_ = nullptr;
    Complex* buf_in_ = nullptr;
    Complex* buf_out_ = nullptr;
};

}  // namespace rotns
