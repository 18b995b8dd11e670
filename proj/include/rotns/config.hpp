#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rotns/field.hpp"
#include "rotns/mild.hpp"
#include "rotns/timestepper.hpp"

namespace rotns {

enum class DataKind { TaylorGreen, Random, Zero };

/// Everything needed to reproduce a run: grid, solver knobs, and a
/// recipe for the initial data.
struct ExperimentConfig {
    int n = 32;
    double period = two_pi();
    double dealias_fraction = 2.0 / 3.0;

    SolverConfig solver;

    DataKind data = DataKind::TaylorGreen;
    double amplitude = 1.0;    // Taylor-Green prefactor
    double chi_target = -1.0;  // rescale chi^{-1}(u0) to this if > 0
    int kmax = 5;              // random data: largest populated shell
    double spectral_exponent = 2.0;
    std::uint64_t seed = 1;

    double tol_ledger = 1e-6;

    PicardOptions picard;

    std::string label;  // optional run tag, used in output names

    Grid grid() const { return Grid(n, period, dealias_fraction); }
    void validate() const;  // throws ConfigError
};

/// Parse failure with position information. Lines are 1-based; column 0
/// means the whole line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0, int col = 0)
        : std::runtime_error(what), line_(line), col_(col) {}
    int line() const { return line_; }
    int column() const { return col_; }

private:
    int line_;
    int col_;
};

/// Parse "key = value" text, one pair per line; '#' starts a comment.
/// Unknown keys and malformed values raise ConfigError with location.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

/// Apply a single "key = value" assignment (command-line override). Does
/// not re-validate; call validate() after the last override.
void apply_config_assignment(ExperimentConfig& cfg, const std::string& assignment);

/// Rebuild a config from a run manifest (JSON produced by write_manifest).
ExperimentConfig config_from_manifest(const std::string& json_text);

/// Construct the initial field the config describes.
SpectralField materialize_initial_data(const ExperimentConfig& cfg);

const char* data_kind_name(DataKind kind);
const char* scheme_name(Scheme scheme);
DataKind data_kind_from_name(const std::string& name);  // throws ConfigError
Scheme scheme_from_name(const std::string& name);       // throws ConfigError

}  // namespace rotns
