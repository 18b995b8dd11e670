#include "rotns/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rotns/initial_data.hpp"

namespace rotns {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& v, int line, int col) {
    const std::string t = trim(v);
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw ConfigError("malformed number '" + t + "'", line, col);
    }
    return x;
}

long long to_int(const std::string& v, int line, int col) {
    const double x = to_double(v, line, col);
    const long long i = static_cast<long long>(x);
    if (static_cast<double>(i) != x) {
        throw ConfigError("expected an integer, got '" + trim(v) + "'", line, col);
    }
    return i;
}

std::uint64_t to_uint64(const std::string& v, int line, int col) {
    const std::string t = trim(v);
    char* end = nullptr;
    const unsigned long long x = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw ConfigError("expected an unsigned integer, got '" + t + "'", line, col);
    }
    return static_cast<std::uint64_t>(x);
}

bool to_bool(const std::string& v, int line, int col) {
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "on") return true;
    if (t == "false" || t == "0" || t == "off") return false;
    throw ConfigError("expected a boolean, got '" + t + "'", line, col);
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value,
               int line, int col) {
    if (key == "n") {
        cfg.n = static_cast<int>(to_int(value, line, col));
    } else if (key == "period") {
        cfg.period = to_double(value, line, col);
    } else if (key == "dealias_fraction") {
        cfg.dealias_fraction = to_double(value, line, col);
    } else if (key == "nu") {
        cfg.solver.nu = to_double(value, line, col);
    } else if (key == "omega") {
        cfg.solver.omega = to_double(value, line, col);
    } else if (key == "dt") {
        cfg.solver.dt = to_double(value, line, col);
    } else if (key == "T") {
        cfg.solver.T = to_double(value, line, col);
    } else if (key == "scheme") {
        cfg.solver.scheme = scheme_from_name(trim(value));
    } else if (key == "s") {
        cfg.solver.s = to_double(value, line, col);
    } else if (key == "observer_stride") {
        cfg.solver.observer_stride = static_cast<int>(to_int(value, line, col));
    } else if (key == "c0") {
        cfg.solver.c0 = to_double(value, line, col);
    } else if (key == "c1") {
        cfg.solver.c1 = to_double(value, line, col);
    } else if (key == "nonlinear") {
        cfg.solver.nonlinear = to_bool(value, line, col);
    } else if (key == "data") {
        cfg.data = data_kind_from_name(trim(value));
    } else if (key == "amplitude") {
        cfg.amplitude = to_double(value, line, col);
    } else if (key == "chi_target") {
        cfg.chi_target = to_double(value, line, col);
    } else if (key == "kmax") {
        cfg.kmax = static_cast<int>(to_int(value, line, col));
    } else if (key == "spectral_exponent") {
        cfg.spectral_exponent = to_double(value, line, col);
    } else if (key == "seed") {
        cfg.seed = to_uint64(value, line, col);
    } else if (key == "tol_ledger") {
        cfg.tol_ledger = to_double(value, line, col);
    } else if (key == "picard_T") {
        cfg.picard.T = to_double(value, line, col);
    } else if (key == "picard_nodes") {
        cfg.picard.n_nodes = static_cast<int>(to_int(value, line, col));
    } else if (key == "picard_tol") {
        cfg.picard.tol = to_double(value, line, col);
    } else if (key == "picard_max_iter") {
        cfg.picard.max_iter = static_cast<int>(to_int(value, line, col));
    } else if (key == "label") {
        cfg.label = trim(value);
    } else {
        throw ConfigError("unknown key '" + key + "'", line, 1);
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    try {
        (void)grid();
        solver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (kmax < 1) throw ConfigError("kmax must be >= 1");
    if (!(tol_ledger > 0.0)) throw ConfigError("tol_ledger must be > 0");
    if (!(picard.T > 0.0)) throw ConfigError("picard_T must be > 0");
    if (picard.n_nodes < 2) throw ConfigError("picard_nodes must be >= 2");
    if (!(picard.tol > 0.0)) throw ConfigError("picard_tol must be > 0");
    if (picard.max_iter < 1) throw ConfigError("picard_max_iter must be >= 1");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        if (trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value'", line_no, 1);
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("empty key", line_no, 1);
        const int value_col = static_cast<int>(eq) + 2;
        apply_key(cfg, key, line.substr(eq + 1), line_no, value_col);
    }
    cfg.validate();
    return cfg;
}

void apply_config_assignment(ExperimentConfig& cfg, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override must look like key=value, got '" + assignment + "'");
    }
    const std::string key = trim(assignment.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key in override '" + assignment + "'");
    apply_key(cfg, key, assignment.substr(eq + 1), 0, 0);
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ExperimentConfig config_from_manifest(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest parse failure: ") + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) {
        throw ConfigError("manifest has no config object");
    }
    ExperimentConfig cfg;
    for (const auto& [key, value] : j["config"].items()) {
        std::string text;
        if (value.is_string()) {
            text = value.get<std::string>();
        } else {
            text = value.dump();
        }
        apply_key(cfg, key, text, 0, 0);
    }
    cfg.validate();
    return cfg;
}

SpectralField materialize_initial_data(const ExperimentConfig& cfg) {
    const Grid grid = cfg.grid();
    SpectralField f(grid);
    switch (cfg.data) {
        case DataKind::TaylorGreen:
            f = taylor_green(grid, cfg.amplitude);
            break;
        case DataKind::Random:
            f = random_solenoidal(grid, cfg.kmax, cfg.spectral_exponent, cfg.seed);
            if (cfg.amplitude != 1.0) f *= cfg.amplitude;
            break;
        case DataKind::Zero:
            break;
    }
    if (cfg.chi_target > 0.0 && cfg.data != DataKind::Zero) {
        f = scale_to_chi(std::move(f), cfg.chi_target);
    }
    return f;
}

const char* data_kind_name(DataKind kind) {
    switch (kind) {
        case DataKind::TaylorGreen:
            return "taylor_green";
        case DataKind::Random:
            return "random";
        case DataKind::Zero:
            return "zero";
    }
    return "unknown";
}

const char* scheme_name(Scheme scheme) {
    return scheme == Scheme::IfRk4 ? "if_rk4" : "exact_linear_rk4";
}

DataKind data_kind_from_name(const std::string& name) {
    if (name == "taylor_green") return DataKind::TaylorGreen;
    if (name == "random") return DataKind::Random;
    if (name == "zero") return DataKind::Zero;
    throw ConfigError("unknown data kind '" + name + "'");
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "if_rk4") return Scheme::IfRk4;
    if (name == "exact_linear_rk4") return Scheme::ExactLinearRk4;
    throw ConfigError("unknown scheme '" + name + "'");
}

}  // namespace rotns
