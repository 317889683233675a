#include "fockspectra/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "fockspectra/errors.hpp"

namespace fockspectra {

using nlohmann::json;

namespace {

class StageClock {
public:
    StageClock(Report& rep, std::string name)
        : rep_(rep), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~StageClock() {
        const auto end = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(end - start_).count();
        rep_.timing.push_back({name_, ms});
    }

private:
    Report& rep_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

struct PipelineContext {
    ModelParams model;
    bool tuned = false;
    Grid quad_grid;    // graded rule for singular integrands (tuning, counts)
    Grid band_grid;    // uniform rule for the band sweeps (smooth integrands)
};

PipelineContext make_context(const RunConfig& cfg, Report& rep) {
    PipelineContext ctx;
    ctx.quad_grid = make_graded_grid(cfg.grid.n, cfg.grid.graded_gamma);
    ctx.band_grid = make_grid(cfg.grid.n);
    ctx.model = cfg.model.to_params();
    ctx.tuned = cfg.model.tuned;
    if (cfg.model.tuned) {
        StageClock clock(rep, "tune_coupling");
        ctx.model.c = tune_coupling(ctx.model, ctx.quad_grid);
        rep.resolved_coupling = ctx.model.c;
    }
    return ctx;
}

// Criticality is a property of the quadrature rule in use: a coupling tuned
// on one grid sits off-critical on another, which breaks the positivity the
// counting kernel needs. Stages that change grids re-solve the coupling.
ModelParams model_on_grid(const PipelineContext& ctx, const Grid& grid) {
    if (!ctx.tuned) return ctx.model;
    ModelParams m = ctx.model;
    m.c = 0.0;
    m.c = tune_coupling(m, grid);
    return m;
}

double classify_tol_for(const RunConfig& cfg, const ModelParams& m) {
    return cfg.tolerances.classify_tol ? *cfg.tolerances.classify_tol
                                       : default_classify_tol(m);
}

void stage_classify(const RunConfig& cfg, PipelineContext& ctx, Report& rep) {
    StageClock clock(rep, "classify");
    rep.classification = classify(ctx.model, ctx.quad_grid, classify_tol_for(cfg, ctx.model));
}

void stage_bands(const RunConfig&, PipelineContext& ctx, Report& rep) {
    StageClock clock(rep, "ess_spectrum");
    rep.bands = essential_spectrum(ctx.model, ctx.band_grid);
    if (!rep.bands->hypothesis_ok)
        rep.warnings.push_back(
            "ess-spectrum: delta(p, M) <= 0 failed at some nodes; upper-edge "
            "eigenvalues are not excluded");
}

void stage_bound_states(const RunConfig& cfg, PipelineContext& ctx, Report& rep) {
    StageClock clock(rep, "bound_states");
    const Grid& g = ctx.band_grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto z = bound_state(ctx.model, g.nodes[i], g, cfg.tolerances.root_tol);
        if (z) rep.bound_states.push_back({{g.nodes[i][0], g.nodes[i][1], g.nodes[i][2]}, *z});
    }
}

void stage_count(const RunConfig& cfg, PipelineContext& ctx, Report& rep) {
    StageClock clock(rep, "count");
    Grid grid = make_graded_grid(cfg.bs.nystrom_n, cfg.grid.graded_gamma);
    ModelParams model = model_on_grid(ctx, grid);
    for (double z : cfg.bs.z_list) {
        EigenCount ec = N_of_z(model, z, grid);
        NTableRow row{z, std::abs(std::log(std::abs(z))), ec.count, ec.ambiguous};
        if (ec.ambiguous)
            rep.warnings.push_back("count: eigenvalue within 1e-9 of the counting threshold at z = " +
                                   std::to_string(z));
        rep.n_table.push_back(row);
    }
}

void stage_oracle(const RunConfig& cfg, PipelineContext& ctx, Report& rep) {
    StageClock clock(rep, "fock_oracle");
    Grid grid = make_grid(cfg.bs.oracle_n);
    ModelParams model = model_on_grid(ctx, grid);
    const double z = cfg.bs.z_list.front();
    DiscreteFock fock = assemble_discrete_H(model, grid);
    const int direct = count_H_below(fock, z).count;
    const int bs = N_of_z(model, z, grid).count;
    rep.oracle = OracleComparison{cfg.bs.oracle_n, z, direct, bs, direct == bs};
    if (direct != bs)
        rep.warnings.push_back("fock-oracle: direct and Birman-Schwinger counts disagree");
}

EfimovParams efimov_params_for(const RunConfig& cfg, const ModelParams& m) {
    EfimovParams ep = EfimovParams::from_model(m);
    ep.ell_max = std::max(cfg.efimov.ell_max, ep.ell_max);
    ep.y_max = cfg.efimov.y_max;
    ep.legendre_points = cfg.efimov.legendre_points;
    ep.validate();
    return ep;
}

void stage_efimov(const RunConfig& cfg, PipelineContext& ctx, Report& rep) {
    StageClock clock(rep, "efimov_coef");
    EfimovParams ep = efimov_params_for(cfg, ctx.model);
    EfimovResult res = U_of_mu(ep, 1.0);
    EfimovSection sec;
    sec.s = ep.s;
    sec.l = ep.l;
    sec.u0 = res.u0_coefficient;
    sec.per_degree_thresholds = std::move(res.per_degree_thresholds);
    rep.efimov = std::move(sec);
}

void stage_sr(const RunConfig& cfg, PipelineContext& ctx, Report& rep) {
    StageClock clock(rep, "sr_convergence");
    if (!rep.efimov) stage_efimov(cfg, ctx, rep);
    EfimovParams ep = efimov_params_for(cfg, ctx.model);
    for (double r : cfg.efimov.sr_r_list) {
        const int count = sr_count(ep, 1.0, r, 16, ep.ell_max);
        rep.efimov->sr.push_back({r, count, 0.5 * count / r, rep.efimov->u0});
    }
}

void stage_sqrt_fit(const RunConfig& cfg, PipelineContext& ctx, Report& rep) {
    if (!rep.efimov) return;
    if (!rep.classification) return;
    const auto v = rep.classification->verdict;
    if (v != Verdict::resonance && v != Verdict::zero_eigenvalue) return;
    StageClock clock(rep, "sqrt_singularity");
    try {
        rep.efimov->sqrt_singularity = sqrt_coefficient_measure(ctx.model, ctx.quad_grid);
    } catch (const NumericalError& e) {
        // Auxiliary diagnostic: an unresolved fit on a coarse grid should not
        // sink the whole report.
        rep.warnings.push_back(std::string("sqrt_singularity: ") + e.what());
    }
    (void)cfg;
}

json intervals_to_json(const std::vector<std::vector<Interval>>& all) {
    json out = json::array();
    for (const auto& per_ell : all) {
        json row = json::array();
        for (const auto& iv : per_ell) row.push_back({iv[0], iv[1]});
        out.push_back(row);
    }
    return out;
}

} // namespace

Report run_pipeline(const RunConfig& cfg, const std::string& subcommand) {
    static const std::set<std::string> known{
        "classify", "ess-spectrum", "bound-states", "count",
        "fock-oracle", "efimov-coef", "sr-convergence", "report"};
    if (!known.count(subcommand))
        throw ConfigError("unknown subcommand: " + subcommand);

    Report rep;
    rep.config = cfg;
    rep.subcommand = subcommand;
    PipelineContext ctx = make_context(cfg, rep);

    const bool all = subcommand == "report";
    if (all || subcommand == "classify") stage_classify(cfg, ctx, rep);
    if (all || subcommand == "ess-spectrum") stage_bands(cfg, ctx, rep);
    if (subcommand == "bound-states") stage_bound_states(cfg, ctx, rep);
    if (all || subcommand == "count") stage_count(cfg, ctx, rep);
    if (all || subcommand == "fock-oracle") stage_oracle(cfg, ctx, rep);
    if (all || subcommand == "efimov-coef") stage_efimov(cfg, ctx, rep);
    if (all || subcommand == "sr-convergence") stage_sr(cfg, ctx, rep);
    if (all) stage_sqrt_fit(cfg, ctx, rep);
    return rep;
}

std::string report_to_json(const Report& rep, bool include_timing) {
    json root;
    root["config"] = json::parse(serialize_config(rep.config));
    if (rep.resolved_coupling) root["resolved_coupling"] = *rep.resolved_coupling;

    if (rep.classification) {
        const auto& c = *rep.classification;
        root["classification"] = {{"delta00", c.delta00},
                                  {"v_at_zero", c.v_at_zero},
                                  {"verdict", to_string(c.verdict)},
                                  {"tolerance", c.tolerance}};
    }
    if (rep.bands) {
        const auto& b = *rep.bands;
        root["bands"] = {{"case", to_string(b.case_tag)},
                         {"a", b.a},
                         {"b", b.b},
                         {"M", b.M},
                         {"hypothesis_ok", b.hypothesis_ok}};
    }
    if (!rep.n_table.empty()) {
        json rows = json::array();
        for (const auto& r : rep.n_table)
            rows.push_back({{"z", r.z}, {"log_abs_z", r.log_abs_z}, {"N", r.N},
                            {"ambiguous", r.ambiguous}});
        root["n_table"] = rows;
    }
    if (!rep.bound_states.empty()) {
        json rows = json::array();
        for (const auto& r : rep.bound_states)
            rows.push_back({{"p", {r.p[0], r.p[1], r.p[2]}}, {"z", r.z}});
        root["bound_states"] = rows;
    }
    if (rep.efimov) {
        const auto& e = *rep.efimov;
        json ef = {{"s", e.s}, {"l", e.l}, {"u0", e.u0},
                   {"per_degree_thresholds", intervals_to_json(e.per_degree_thresholds)}};
        if (!e.sr.empty()) {
            json rows = json::array();
            for (const auto& r : e.sr)
                rows.push_back({{"r", r.r}, {"count", r.count},
                                {"half_count_over_r", r.half_count_over_r},
                                {"u0_reference", r.u0_reference}});
            ef["sr"] = rows;
        }
        if (e.sqrt_singularity) {
            const auto& f = *e.sqrt_singularity;
            ef["sqrt_singularity"] = {{"exponent", f.exponent},
                                      {"coefficient", f.coefficient},
                                      {"expansion_prediction", f.expansion_prediction},
                                      {"scaling_prediction", f.scaling_prediction},
                                      {"gaussian_direct", f.gaussian_direct},
                                      {"ratio_expansion", f.expansion_prediction == 0.0 ? 0.0 : f.coefficient / f.expansion_prediction},
                                      {"ratio_scaling", f.scaling_prediction == 0.0 ? 0.0 : f.coefficient / f.scaling_prediction}};
        }
        root["efimov"] = ef;
    }
    if (rep.oracle) {
        const auto& o = *rep.oracle;
        root["oracle"] = {{"n", o.n}, {"z", o.z}, {"count_direct", o.count_direct},
                          {"count_bs", o.count_bs}, {"equal", o.equal}};
    }
    root["warnings"] = rep.warnings;
    if (include_timing) {
        json t = json::object();
        for (const auto& s : rep.timing) t[s.stage] = s.milliseconds;
        root["timing"] = t;
    }
    return root.dump(2) + "\n";
}

namespace {

// Shortest round-trip decimal form, so tables stay readable and re-parse to
// the same doubles.
std::string csv_num(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

} // namespace

std::string report_to_csv(const Report& rep) {
    if (!rep.n_table.empty()) {
        std::string out = "z,log_abs_z,N\n";
        for (const auto& r : rep.n_table)
            out += csv_num(r.z) + "," + csv_num(r.log_abs_z) + "," + std::to_string(r.N) + "\n";
        return out;
    }
    if (rep.efimov && !rep.efimov->sr.empty()) {
        std::string out = "r,count,half_count_over_r,u0_reference\n";
        for (const auto& r : rep.efimov->sr)
            out += csv_num(r.r) + "," + std::to_string(r.count) + "," +
                   csv_num(r.half_count_over_r) + "," + csv_num(r.u0_reference) + "\n";
        return out;
    }
    throw ConfigError("csv format is only available for the count and sr-convergence tables");
}

void write_report(const Report& rep, const std::string& format,
                  const std::string& out_path, bool deterministic) {
    std::string payload;
    if (format == "json") payload = report_to_json(rep, !deterministic);
    else if (format == "csv") payload = report_to_csv(rep);
    else throw ConfigError("format must be json or csv");

    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    const std::filesystem::path target(out_path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
        os << payload;
        if (!os.flush()) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw IoError("cannot move report into place at " + out_path + ": " + ec.message());
}

} // namespace fockspectra
