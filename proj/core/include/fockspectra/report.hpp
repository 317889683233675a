#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fockspectra/config.hpp"
#include "fockspectra/efimov.hpp"
#include "fockspectra/friedrichs.hpp"

namespace fockspectra {

struct NTableRow {
    double z = 0.0;
    double log_abs_z = 0.0;
    int N = 0;
    bool ambiguous = false;
};

struct SrRow {
    double r = 0.0;
    int count = 0;
    double half_count_over_r = 0.0;
    double u0_reference = 0.0;
};

struct BoundStateRow {
    std::array<double, 3> p{};
    double z = 0.0;
};

struct OracleComparison {
    int n = 0;
    double z = 0.0;
    int count_direct = 0;
    int count_bs = 0;
    bool equal = false;
};

struct EfimovSection {
    double s = 0.0;
    double l = 0.0;
    double u0 = 0.0;
    std::vector<std::vector<Interval>> per_degree_thresholds;
    std::vector<SrRow> sr;
    std::optional<SqrtSingularityFit> sqrt_singularity;
};

struct StageTiming {
    std::string stage;
    double milliseconds = 0.0;
};

/// Machine-readable result of one pipeline run. Every numeric value traces to
/// one operation's output; warnings are data and never dropped.
struct Report {
    RunConfig config;
    std::string subcommand;
    std::optional<double> resolved_coupling;  // set when model.c was "tuned"
    std::optional<ClassificationReport> classification;
    std::optional<SpectralBands> bands;
    std::vector<NTableRow> n_table;
    std::optional<EfimovSection> efimov;
    std::vector<BoundStateRow> bound_states;
    std::optional<OracleComparison> oracle;
    std::vector<std::string> warnings;
    std::vector<StageTiming> timing;
};

/// Runs the stages required by one subcommand: classify, ess-spectrum,
/// bound-states, count, fock-oracle, efimov-coef, sr-convergence or report
/// (which runs everything). Deterministic for a fixed config.
Report run_pipeline(const RunConfig& cfg, const std::string& subcommand);

std::string report_to_json(const Report& rep, bool include_timing);

/// CSV rendering of the tabular sections. Only the `count` and
/// `sr-convergence` subcommands produce tables.
std::string report_to_csv(const Report& rep);

/// Writes atomically (temp file + rename). Empty path means stdout.
void write_report(const Report& rep, const std::string& format,
                  const std::string& out_path, bool deterministic);

} // namespace fockspectra
