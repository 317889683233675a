#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fockspectra/model.hpp"

namespace fockspectra {

struct GridConfig {
    int n = 16;
    int graded_gamma = 3;
    bool operator==(const GridConfig&) const = default;
};

struct ModelConfig {
    Preset preset = Preset::remark27;
    bool tuned = false;   // c := critical coupling before any dependent stage
    double c = 0.0;       // ignored when tuned
    double l1 = 2.0;
    double l2 = 1.0;
    ChannelFn v = ChannelFn::constant_one;
    double u0 = 1.0;
    bool operator==(const ModelConfig&) const = default;

    /// Model with the literal coupling (tuning happens in the pipeline).
    ModelParams to_params() const;
};

struct BsConfig {
    int nystrom_n = 10;
    std::vector<double> z_list{-1e-1, -1e-2, -1e-3};
    int oracle_n = 2;  // direct-diagonalization grid; kept tiny on purpose
    bool operator==(const BsConfig&) const = default;
};

struct EfimovConfig {
    int ell_max = 8;
    double y_max = 10.0;
    int legendre_points = 64;
    std::vector<double> sr_r_list{50.0, 100.0};
    bool operator==(const EfimovConfig&) const = default;
};

struct ToleranceConfig {
    std::optional<double> classify_tol;  // model-dependent default when unset
    double root_tol = 1e-10;
    bool operator==(const ToleranceConfig&) const = default;
};

struct RunConfig {
    ModelConfig model;
    GridConfig grid;
    BsConfig bs;
    EfimovConfig efimov;
    ToleranceConfig tolerances;
    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a JSON run configuration. Unknown keys are rejected
/// with a nearest-match suggestion; constraint violations (positive z values,
/// odd grid sizes, ...) throw ConfigError.
RunConfig parse_config(const std::string& text);

/// Inverse of parse_config: parse_config(serialize_config(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

} // namespace fockspectra
