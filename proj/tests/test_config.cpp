#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fockspectra/config.hpp"
#include "fockspectra/report.hpp"

using namespace fockspectra;

TEST_CASE("minimal config gets defaults") {
    RunConfig cfg = parse_config(R"({"model": {"preset": "remark27", "l1": 2, "l2": 1,
                                     "v": "constant_one", "c": "tuned", "u0": 1}})");
    CHECK(cfg.model.tuned);
    CHECK(cfg.grid.n == 16);
    CHECK(cfg.grid.graded_gamma == 3);
    CHECK(cfg.bs.nystrom_n == 10);
    CHECK(cfg.efimov.ell_max == 8);
    CHECK(cfg.tolerances.root_tol == 1e-10);
    CHECK_FALSE(cfg.tolerances.classify_tol.has_value());
}

TEST_CASE("constraint violations are rejected") {
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"preset": "remark26"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"preset": "remark27", "l1": 2, "l2": 2}})"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"model": {"preset": "remark24"}, "bs": {"z_list": [0.1]}})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"model": {"preset": "remark24"}, "grid": {"n": 7}})"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"model": {"preset": "remark24"}, "grid": {"graded_gamma": 2}})"),
        ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"preset": "remark24", "l1": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"preset": "remark24", "c": "auto"}})"),
                    ConfigError);
}

TEST_CASE("unknown keys are rejected with a suggestion") {
    try {
        parse_config(R"({"modle": {"preset": "remark24"}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("modle") != std::string::npos);
        CHECK(msg.find("model") != std::string::npos);
    }
    CHECK_THROWS_AS(
        parse_config(R"({"model": {"preset": "remark24", "coupling": 1}})"), ConfigError);
}

TEST_CASE("serialization round-trips") {
    for (const char* text :
         {R"({"model": {"preset": "remark27", "l1": 2, "l2": 1, "v": "constant_one",
              "c": "tuned", "u0": 1}})",
          R"({"model": {"preset": "remark24", "c": 186.0, "u0": 0},
              "grid": {"n": 8, "graded_gamma": 5},
              "bs": {"nystrom_n": 6, "z_list": [-0.5], "oracle_n": 4},
              "efimov": {"ell_max": 10, "y_max": 8.0, "legendre_points": 96,
                         "sr_r_list": [25, 50]},
              "tolerances": {"classify_tol": 1e-7, "root_tol": 1e-9}})"}) {
        RunConfig cfg = parse_config(text);
        RunConfig echo = parse_config(serialize_config(cfg));
        CHECK(echo == cfg);
    }
}

TEST_CASE("pipeline is deterministic for a fixed config") {
    RunConfig cfg = parse_config(R"({"model": {"preset": "remark27", "l1": 2, "l2": 1,
                                     "v": "constant_one", "c": "tuned", "u0": 1},
                                     "grid": {"n": 8, "graded_gamma": 3},
                                     "bs": {"nystrom_n": 6, "z_list": [-0.5, -0.1]}})");
    Report a = run_pipeline(cfg, "classify");
    Report b = run_pipeline(cfg, "classify");
    CHECK(report_to_json(a, false) == report_to_json(b, false));

    Report c1 = run_pipeline(cfg, "count");
    Report c2 = run_pipeline(cfg, "count");
    CHECK(report_to_csv(c1) == report_to_csv(c2));
    CHECK(report_to_csv(c1).rfind("z,log_abs_z,N\n", 0) == 0);
}

TEST_CASE("csv is only defined for the tabular subcommands") {
    RunConfig cfg = parse_config(R"({"model": {"preset": "remark27", "l1": 2, "l2": 1,
                                     "v": "constant_one", "c": "tuned", "u0": 1},
                                     "grid": {"n": 8, "graded_gamma": 3}})");
    Report rep = run_pipeline(cfg, "classify");
    CHECK_THROWS_AS(report_to_csv(rep), ConfigError);
}

TEST_CASE("unknown subcommand is a configuration error") {
    RunConfig cfg = parse_config(R"({"model": {"preset": "remark24"}})");
    CHECK_THROWS_AS(run_pipeline(cfg, "clasify"), ConfigError);
}
