// End-to-end checks of the command-line tool: exit-code discipline, output
// schemas and determinism. Run as: cli_integration <binary> <schema.json>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

#define EXPECT(cond, what)                                                   \
    do {                                                                     \
        if (cond) {                                                          \
            std::cout << "[ok] " << what << "\n";                            \
        } else {                                                             \
            std::cout << "[FAIL] " << what << " (" << __FILE__ << ":"        \
                      << __LINE__ << ")\n";                                  \
            ++g_failures;                                                    \
        }                                                                    \
    } while (0)

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    os << text;
}

// Minimal structural validator for the subset of JSON Schema the report
// schema uses: type, enum, properties, required, additionalProperties, items.
bool validates(const json& value, const json& schema, std::string& why) {
    if (schema.contains("enum")) {
        for (const auto& v : schema["enum"])
            if (v == value) return true;
        why = "value not in enum";
        return false;
    }
    if (schema.contains("type")) {
        const std::string t = schema["type"];
        const bool ok = (t == "object" && value.is_object()) ||
                        (t == "array" && value.is_array()) ||
                        (t == "string" && value.is_string()) ||
                        (t == "boolean" && value.is_boolean()) ||
                        (t == "integer" && value.is_number_integer()) ||
                        (t == "number" && value.is_number());
        if (!ok) {
            why = "expected type " + t;
            return false;
        }
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& k : schema["required"])
                if (!value.contains(k.get<std::string>())) {
                    why = "missing required key " + k.get<std::string>();
                    return false;
                }
        const json props = schema.value("properties", json::object());
        const bool closed = schema.value("additionalProperties", json(true)) == json(false);
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (props.contains(it.key())) {
                if (!validates(it.value(), props[it.key()], why)) {
                    why = it.key() + ": " + why;
                    return false;
                }
            } else if (closed) {
                why = "unexpected key " + it.key();
                return false;
            }
        }
    }
    if (value.is_array() && schema.contains("items")) {
        for (const auto& el : value)
            if (!validates(el, schema["items"], why)) {
                why = "array item: " + why;
                return false;
            }
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: cli_integration <fock-spectra binary> <report schema>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const std::string schema_path = argv[2];

    char tmpl[] = "/tmp/fock-spectra-cli-XXXXXX";
    const fs::path dir = mkdtemp(tmpl);

    const fs::path small = dir / "small.json";
    write_file(small, R"({
      "model": {"preset": "remark27", "l1": 2, "l2": 1, "v": "constant_one",
                "c": "tuned", "u0": 1},
      "grid": {"n": 8, "graded_gamma": 3},
      "bs": {"nystrom_n": 6, "z_list": [-0.5, -0.1], "oracle_n": 2},
      "efimov": {"sr_r_list": [20, 40]}
    })");

    // classification output
    {
        RunResult r = run(bin + " classify --config " + small.string() + " --deterministic");
        EXPECT(r.exit_code == 0, "classify exits 0");
        json rep = json::parse(r.out, nullptr, false);
        EXPECT(!rep.is_discarded(), "classify emits JSON");
        EXPECT(rep["classification"]["verdict"] == "resonance", "tuned model classifies as resonance");
        EXPECT(rep.contains("resolved_coupling"), "tuned coupling is echoed");
    }

    // full report: determinism, schema, timing toggle
    {
        RunResult a = run(bin + " report --config " + small.string() + " --deterministic");
        RunResult b = run(bin + " report --config " + small.string() + " --deterministic");
        EXPECT(a.exit_code == 0, "report exits 0");
        EXPECT(a.out == b.out, "deterministic report is byte-identical across runs");

        json rep = json::parse(a.out);
        EXPECT(!rep.contains("timing"), "--deterministic omits the timing block");
        for (const char* key : {"config", "classification", "bands", "n_table",
                                "efimov", "oracle", "warnings"})
            EXPECT(rep.contains(key), std::string("report contains ") + key);
        EXPECT(rep["oracle"]["equal"] == true, "direct and Birman-Schwinger counts agree");

        std::ifstream sf(schema_path);
        json schema = json::parse(sf);
        std::string why;
        const bool ok = validates(rep, schema, why);
        EXPECT(ok, "report validates against the shipped schema" + (ok ? "" : ": " + why));

        RunResult timed = run(bin + " report --config " + small.string());
        json trep = json::parse(timed.out);
        EXPECT(trep.contains("timing"), "timing block present without --deterministic");
    }

    // CSV tables
    {
        RunResult r = run(bin + " count --config " + small.string());
        EXPECT(r.exit_code == 0, "count exits 0");
        EXPECT(r.out.rfind("z,log_abs_z,N\n", 0) == 0, "count emits CSV by default");
        RunResult rj = run(bin + " count --config " + small.string() + " --format json");
        EXPECT(json::parse(rj.out, nullptr, false).contains("n_table"),
               "count --format json emits the table as JSON");

        RunResult o = run(bin + " count --config " + small.string() +
                          " --format csv --z=-0.2 --z=-0.02");
        std::istringstream lines(o.out);
        std::string line;
        std::getline(lines, line);
        std::getline(lines, line);
        EXPECT(line.rfind("-0.2,", 0) == 0, "--z overrides the configured list");

        RunResult sr = run(bin + " sr-convergence --config " + small.string());
        EXPECT(sr.exit_code == 0, "sr-convergence exits 0");
        EXPECT(sr.out.rfind("r,count,half_count_over_r,u0_reference\n", 0) == 0,
               "sr-convergence CSV header is exact");

        RunResult bad = run(bin + " classify --config " + small.string() + " --format csv");
        EXPECT(bad.exit_code == 2, "csv for a non-tabular subcommand exits 2");
    }

    // fock-oracle single-point output
    {
        RunResult r = run(bin + " fock-oracle --config " + small.string() + " --z -0.5");
        EXPECT(r.exit_code == 0, "fock-oracle exits 0");
        json rep = json::parse(r.out);
        EXPECT(rep["oracle"]["n"] == 2, "oracle grid size echoed");
        EXPECT(rep["oracle"]["equal"] == true, "oracle counts equal");
    }

    // exit-code discipline
    {
        const fs::path bad_key = dir / "bad_key.json";
        write_file(bad_key, R"({"modle": {"preset": "remark24"}})");
        EXPECT(run(bin + " classify --config " + bad_key.string()).exit_code == 2,
               "unknown config key exits 2");

        const fs::path bad_sign = dir / "bad_sign.json";
        write_file(bad_sign, R"({"model": {"preset": "remark24"},
                                 "bs": {"z_list": [0.1]}})");
        EXPECT(run(bin + " count --config " + bad_sign.string()).exit_code == 2,
               "positive z in the config exits 2");

        const fs::path malformed = dir / "malformed.json";
        write_file(malformed, "{");
        EXPECT(run(bin + " classify --config " + malformed.string()).exit_code == 2,
               "malformed config exits 2");

        // coupling far below critical: the counting kernel loses positivity
        const fs::path subcrit = dir / "subcrit.json";
        write_file(subcrit, R"({
          "model": {"preset": "remark27", "l1": 2, "l2": 1, "v": "constant_one",
                    "c": 1.0, "u0": 1},
          "grid": {"n": 8, "graded_gamma": 3},
          "bs": {"nystrom_n": 6, "z_list": [-0.1]}
        })");
        EXPECT(run(bin + " count --config " + subcrit.string()).exit_code == 3,
               "numerical failure in a stage exits 3");

        EXPECT(run(bin + " count --config " + small.string() +
                   " --out /nonexistent-dir/report.json").exit_code == 4,
               "unwritable output path exits 4");

        EXPECT(run(bin + " classify --config " + (dir / "missing.json").string()).exit_code == 4,
               "missing config file exits 4");

        EXPECT(run(bin + " classify").exit_code == 2, "missing --config exits 2");
    }

    // results are independent of the worker-thread count
    {
        RunResult one = run("FOCK_SPECTRA_THREADS=1 " + bin + " report --config " +
                            small.string() + " --deterministic");
        RunResult many = run("FOCK_SPECTRA_THREADS=8 " + bin + " report --config " +
                             small.string() + " --deterministic");
        EXPECT(one.exit_code == 0 && many.exit_code == 0, "thread-capped runs exit 0");
        EXPECT(one.out == many.out, "report is byte-identical across thread counts");
    }

    // --out writes atomically and the file parses
    {
        const fs::path out = dir / "report.json";
        RunResult r = run(bin + " classify --config " + small.string() +
                          " --deterministic --out " + out.string());
        EXPECT(r.exit_code == 0, "--out run exits 0");
        EXPECT(fs::exists(out), "--out file exists");
        EXPECT(!fs::exists(out.string() + ".tmp"), "no temp file left behind");
        std::ifstream is(out);
        json rep = json::parse(is, nullptr, false);
        EXPECT(!rep.is_discarded(), "--out file parses as JSON");
    }

    std::error_code ec;
    fs::remove_all(dir, ec);

    if (g_failures == 0) {
        std::cout << "all cli checks passed\n";
        return 0;
    }
    std::cout << g_failures << " cli check(s) failed\n";
    return 1;
}
