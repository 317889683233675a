#include "fockspectra/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "fockspectra/errors.hpp"

namespace fockspectra {

using nlohmann::json;

namespace {

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

void reject_unknown_keys(const json& obj, const std::string& section,
                         const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (known.count(it.key())) continue;
        std::string best;
        int best_d = 3;
        for (const auto& k : known) {
            const int d = edit_distance(it.key(), k);
            if (d < best_d) { best_d = d; best = k; }
        }
        std::string msg = "config: unknown key \"" + section + "." + it.key() + "\"";
        if (!best.empty()) msg += " (did you mean \"" + best + "\"?)";
        throw ConfigError(msg);
    }
}

double finite_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config: " + key + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("config: " + key + " must be finite");
    return x;
}

int integer_field(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("config: " + key + " must be an integer");
    return v.get<int>();
}

} // namespace

ModelParams ModelConfig::to_params() const {
    if (preset == Preset::remark24) return ModelParams::remark24(tuned ? 0.0 : c, u0);
    return ModelParams::remark27(l1, l2, v, tuned ? 0.0 : c, u0);
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown_keys(root, "", {"model", "grid", "bs", "efimov", "tolerances"});

    RunConfig cfg;

    if (root.contains("model")) {
        const json& m = root["model"];
        reject_unknown_keys(m, "model", {"preset", "c", "l1", "l2", "v", "u0"});
        if (!m.contains("preset")) throw ConfigError("config: model.preset is required");
        const std::string preset = m["preset"].get<std::string>();
        if (preset == "remark24") cfg.model.preset = Preset::remark24;
        else if (preset == "remark27") cfg.model.preset = Preset::remark27;
        else throw ConfigError("config: model.preset must be remark24 or remark27");

        if (cfg.model.preset == Preset::remark24) {
            if (m.contains("l1") || m.contains("l2"))
                throw ConfigError("config: remark24 pins the hopping weights; drop model.l1/l2");
            cfg.model.l1 = cfg.model.l2 = 1.0;
            cfg.model.v = ChannelFn::epsilon;
            if (m.contains("v") && m["v"].get<std::string>() != "epsilon")
                throw ConfigError("config: remark24 pins the channel to epsilon");
        } else {
            if (m.contains("l1")) cfg.model.l1 = finite_number(m["l1"], "model.l1");
            if (m.contains("l2")) cfg.model.l2 = finite_number(m["l2"], "model.l2");
            if (!(cfg.model.l1 > 0.0) || !(cfg.model.l2 > 0.0))
                throw ConfigError("config: model.l1 and model.l2 must be positive");
            if (cfg.model.l1 == cfg.model.l2)
                throw ConfigError("config: remark27 requires l1 != l2");
            if (m.contains("v")) {
                const std::string v = m["v"].get<std::string>();
                if (v == "epsilon") cfg.model.v = ChannelFn::epsilon;
                else if (v == "constant_one") cfg.model.v = ChannelFn::constant_one;
                else if (v == "zero_test") cfg.model.v = ChannelFn::zero_test;
                else throw ConfigError("config: model.v must be epsilon, constant_one or zero_test");
            }
        }
        if (m.contains("c")) {
            if (m["c"].is_string()) {
                if (m["c"].get<std::string>() != "tuned")
                    throw ConfigError("config: model.c must be a number or \"tuned\"");
                cfg.model.tuned = true;
            } else {
                cfg.model.c = finite_number(m["c"], "model.c");
            }
        }
        if (m.contains("u0")) cfg.model.u0 = finite_number(m["u0"], "model.u0");
    } else {
        throw ConfigError("config: model section is required");
    }

    if (root.contains("grid")) {
        const json& g = root["grid"];
        reject_unknown_keys(g, "grid", {"n", "graded_gamma"});
        if (g.contains("n")) cfg.grid.n = integer_field(g["n"], "grid.n");
        if (g.contains("graded_gamma"))
            cfg.grid.graded_gamma = integer_field(g["graded_gamma"], "grid.graded_gamma");
        if (cfg.grid.n < 2 || cfg.grid.n % 2 != 0)
            throw ConfigError("config: grid.n must be an even integer >= 2");
        if (cfg.grid.graded_gamma < 1 || cfg.grid.graded_gamma % 2 == 0)
            throw ConfigError("config: grid.graded_gamma must be an odd positive integer");
    }

    if (root.contains("bs")) {
        const json& b = root["bs"];
        reject_unknown_keys(b, "bs", {"nystrom_n", "z_list", "oracle_n"});
        if (b.contains("nystrom_n")) cfg.bs.nystrom_n = integer_field(b["nystrom_n"], "bs.nystrom_n");
        if (cfg.bs.nystrom_n < 2 || cfg.bs.nystrom_n % 2 != 0)
            throw ConfigError("config: bs.nystrom_n must be an even integer >= 2");
        if (b.contains("oracle_n")) cfg.bs.oracle_n = integer_field(b["oracle_n"], "bs.oracle_n");
        if (cfg.bs.oracle_n < 2 || cfg.bs.oracle_n % 2 != 0 || cfg.bs.oracle_n > 6)
            throw ConfigError("config: bs.oracle_n must be an even integer in [2, 6]");
        if (b.contains("z_list")) {
            if (!b["z_list"].is_array() || b["z_list"].empty())
                throw ConfigError("config: bs.z_list must be a non-empty array");
            cfg.bs.z_list.clear();
            for (const auto& z : b["z_list"]) {
                const double zz = finite_number(z, "bs.z_list[]");
                if (!(zz < 0.0))
                    throw ConfigError("config: bs.z_list entries must be strictly negative");
                cfg.bs.z_list.push_back(zz);
            }
        }
    }

    if (root.contains("efimov")) {
        const json& e = root["efimov"];
        reject_unknown_keys(e, "efimov", {"ell_max", "y_max", "legendre_points", "sr_r_list"});
        if (e.contains("ell_max")) cfg.efimov.ell_max = integer_field(e["ell_max"], "efimov.ell_max");
        if (cfg.efimov.ell_max < 2) throw ConfigError("config: efimov.ell_max must be >= 2");
        if (e.contains("y_max")) cfg.efimov.y_max = finite_number(e["y_max"], "efimov.y_max");
        if (!(cfg.efimov.y_max > 0.0)) throw ConfigError("config: efimov.y_max must be positive");
        if (e.contains("legendre_points"))
            cfg.efimov.legendre_points = integer_field(e["legendre_points"], "efimov.legendre_points");
        if (cfg.efimov.legendre_points < 8)
            throw ConfigError("config: efimov.legendre_points must be >= 8");
        if (e.contains("sr_r_list")) {
            if (!e["sr_r_list"].is_array() || e["sr_r_list"].empty())
                throw ConfigError("config: efimov.sr_r_list must be a non-empty array");
            cfg.efimov.sr_r_list.clear();
            for (const auto& r : e["sr_r_list"]) {
                const double rr = finite_number(r, "efimov.sr_r_list[]");
                if (!(rr > 0.0)) throw ConfigError("config: efimov.sr_r_list entries must be positive");
                cfg.efimov.sr_r_list.push_back(rr);
            }
        }
    }

    if (root.contains("tolerances")) {
        const json& t = root["tolerances"];
        reject_unknown_keys(t, "tolerances", {"classify_tol", "root_tol"});
        if (t.contains("classify_tol")) {
            const double v = finite_number(t["classify_tol"], "tolerances.classify_tol");
            if (!(v > 0.0)) throw ConfigError("config: tolerances.classify_tol must be positive");
            cfg.tolerances.classify_tol = v;
        }
        if (t.contains("root_tol")) {
            cfg.tolerances.root_tol = finite_number(t["root_tol"], "tolerances.root_tol");
            if (!(cfg.tolerances.root_tol > 0.0))
                throw ConfigError("config: tolerances.root_tol must be positive");
        }
    }

    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json m;
    m["preset"] = to_string(cfg.model.preset);
    if (cfg.model.tuned) m["c"] = "tuned";
    else m["c"] = cfg.model.c;
    if (cfg.model.preset == Preset::remark27) {
        m["l1"] = cfg.model.l1;
        m["l2"] = cfg.model.l2;
        m["v"] = to_string(cfg.model.v);
    }
    m["u0"] = cfg.model.u0;

    json root;
    root["model"] = m;
    root["grid"] = {{"n", cfg.grid.n}, {"graded_gamma", cfg.grid.graded_gamma}};
    root["bs"] = {{"nystrom_n", cfg.bs.nystrom_n},
                  {"z_list", cfg.bs.z_list},
                  {"oracle_n", cfg.bs.oracle_n}};
    root["efimov"] = {{"ell_max", cfg.efimov.ell_max},
                      {"y_max", cfg.efimov.y_max},
                      {"legendre_points", cfg.efimov.legendre_points},
                      {"sr_r_list", cfg.efimov.sr_r_list}};
    json t;
    if (cfg.tolerances.classify_tol) t["classify_tol"] = *cfg.tolerances.classify_tol;
    t["root_tol"] = cfg.tolerances.root_tol;
    root["tolerances"] = t;
    return root.dump(2);
}

} // namespace fockspectra
