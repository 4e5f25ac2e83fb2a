// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "icc_cta/scenario.hpp"

using namespace icc_cta;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("scenario names cover the documented set") {
    const auto names = scenario_names();
    CHECK(names.size() == 7);
    for (const std::string expect : {"erd_roc", "delta_f_grid", "nmse_cdf", "tradeoff_curve",
                                     "iep_surface", "rate_curve", "nmse_vs_snr"})
        CHECK(std::find(names.begin(), names.end(), expect) != names.end());
}

TEST_CASE("config file parsing and overrides") {
    const std::string path = temp_path("icc_cta_cfg_test.ini");
    {
        std::ofstream out(path);
        out << "# comment\n"
            << "[scenario]\n"
            << "trials = 5\n"
            << "seed = 9\n"
            << "[grid]\n"
            << "n_t = 64\n"
            << "n_t_list = 32,64\n"
            << "[attack]\n"
            << "mode = pts\n";
    }
    const auto kv = parse_config_file(path);
    ScenarioConfig cfg = default_config("erd_roc");
    apply_overrides(cfg, kv);
    CHECK(cfg.trials == 5);
    CHECK(cfg.seed == 9);
    CHECK(cfg.n_t == 64);
    CHECK(cfg.n_t_list == std::vector<int>{32, 64});
    CHECK(cfg.attack_mode == "pts");
    std::remove(path.c_str());

    SUBCASE("unknown keys are rejected") {
        ScenarioConfig c2 = default_config("erd_roc");
        CHECK_THROWS_AS(apply_overrides(c2, {{"grid.bogus", "1"}}), ConfigError);
    }
    SUBCASE("invalid values are rejected") {
        ScenarioConfig c2 = default_config("erd_roc");
        CHECK_THROWS_AS(apply_overrides(c2, {{"grid.n_t", "abc"}}), ConfigError);
        CHECK_THROWS_AS(apply_overrides(c2, {{"detect.target_pf", "2.0"}}), ConfigError);
        CHECK_THROWS_AS(apply_overrides(c2, {{"attack.mode", "nonsense"}}), ConfigError);
    }
}

TEST_CASE("CSV writer quoting and round trip") {
    ResultTable t;
    t.header = {"a", "b", "c"};
    t.rows = {{"1", "with,comma", "with\"quote"}, {"2", "plain", "x"}};
    const std::string path = temp_path("icc_cta_csv_test.csv");
    write_csv(t, path);
    const std::string bytes = slurp(path);
    CHECK(bytes == "a,b,c\n1,\"with,comma\",\"with\"\"quote\"\n2,plain,x\n");
    const ResultTable back = read_csv(path);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    std::remove(path.c_str());
}

TEST_CASE("float formatting is canonical") {
    CHECK(format_double(0.1328125) == "0.1328125");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("analytic scenarios emit the documented schemas") {
    SUBCASE("tradeoff_curve") {
        ScenarioConfig cfg = default_config("tradeoff_curve");
        const ResultTable t = run_scenario(cfg);
        CHECK(t.header ==
              std::vector<std::string>{"n_fft", "l_taps", "n_b", "s_star", "w", "s", "rate",
                                       "p_i", "p_i_over_k", "p_s", "s_t", "p_i_x100",
                                       "p_s_quarter"});
        CHECK(t.rows.size() == 7); // w = 13..7 at n_b = s* = 13
        CHECK(t.rows.front()[4] == "13");
        CHECK(t.rows.front()[9] == "1"); // all-ones word is stable
        CHECK(t.rows[1][9] == "0");
    }
    SUBCASE("iep_surface schema and round trip") {
        ScenarioConfig cfg = default_config("iep_surface");
        cfg.k_max = 4;
        const ResultTable t = run_scenario(cfg);
        CHECK(t.header == std::vector<std::string>{"n_b", "s_star", "p_i_closed", "p_i_over_k",
                                                   "p_i_empirical"});
        CHECK(!t.rows.empty());
        const std::string path = temp_path("icc_cta_surface.csv");
        write_csv(t, path);
        const ResultTable back = read_csv(path);
        CHECK(back.header == t.header);
        CHECK(back.rows.size() == t.rows.size());
        // every analytic cell parses as a float
        for (const auto& row : back.rows) {
            CHECK(std::stod(row[2]) >= 0.0);
            CHECK(std::stod(row[3]) >= 0.0);
        }
        std::remove(path.c_str());
    }
    SUBCASE("rate_curve includes the reference design point") {
        ScenarioConfig cfg = default_config("rate_curve");
        const ResultTable t = run_scenario(cfg);
        bool found = false;
        for (const auto& row : t.rows) {
            if (row[0] == "7" && row[1] == "21") {
                found = true;
                CHECK(row[2] == "167");
                CHECK(std::stod(row[5]) == doctest::Approx(0.5083).epsilon(2e-3));
            }
        }
        CHECK(found);
    }
}

TEST_CASE("zero trials produce a header-only table") {
    for (const std::string name : {"erd_roc", "delta_f_grid", "nmse_cdf", "nmse_vs_snr"}) {
        ScenarioConfig cfg = default_config(name);
        cfg.trials = 0;
        const ResultTable t = run_scenario(cfg);
        CHECK(!t.header.empty());
        CHECK(t.rows.empty());
    }
}

TEST_CASE("reruns are byte-identical and worker-count independent") {
    ScenarioConfig cfg = default_config("nmse_cdf");
    cfg.runs = 4;
    cfg.averages = 10;
    cfg.n_t = 4;
    cfg.seed = 123;
    const std::string p1 = temp_path("icc_det_1.csv");
    const std::string p2 = temp_path("icc_det_2.csv");
    const std::string p3 = temp_path("icc_det_3.csv");
    cfg.workers = 1;
    write_csv(run_scenario(cfg), p1);
    write_csv(run_scenario(cfg), p2);
    cfg.workers = 4;
    write_csv(run_scenario(cfg), p3);
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp(p1) == slurp(p3));
    CHECK(!slurp(p1).empty());
    std::remove(p1.c_str());
    std::remove(p2.c_str());
    std::remove(p3.c_str());
}

TEST_CASE("erd_roc rows carry monotone false-alarm estimates") {
    ScenarioConfig cfg = default_config("erd_roc");
    cfg.trials = 4000;
    cfg.n_t_list = {32};
    cfg.workers = 2;
    const ResultTable t = run_scenario(cfg);
    REQUIRE(!t.rows.empty());
    double prev = 1.0;
    for (const auto& row : t.rows) {
        const double pf = std::stod(row[4]);
        CHECK(pf <= prev + 1e-12);
        prev = pf;
    }
    CHECK(std::stod(t.rows.front()[4]) > 0.5); // gamma = 1 flags nearly everything
}

TEST_CASE("nmse_cdf separates the ideal and random variants") {
    ScenarioConfig cfg = default_config("nmse_cdf");
    cfg.runs = 10;
    cfg.averages = 40;
    cfg.n_t = 4;
    cfg.workers = 2;
    const ResultTable t = run_scenario(cfg);
    double ideal_p10 = 0, ideal_p90 = 0, rand_p10 = 0, rand_p90 = 0;
    for (const auto& row : t.rows) {
        if (row[1] == "agg_p10" && row[0] == "ideal")
            ideal_p10 = std::stod(row[3]);
        if (row[1] == "agg_p90" && row[0] == "ideal")
            ideal_p90 = std::stod(row[3]);
        if (row[1] == "agg_p10" && row[0] == "random")
            rand_p10 = std::stod(row[3]);
        if (row[1] == "agg_p90" && row[0] == "random")
            rand_p90 = std::stod(row[3]);
    }
    CHECK(ideal_p90 > 0.0);
    // the ideal spread is strictly tighter and its worst decile better
    CHECK(ideal_p90 - ideal_p10 < rand_p90 - rand_p10);
    CHECK(ideal_p90 < rand_p90);
}

TEST_CASE("identification experiment composes code and angular domains") {
    ScenarioConfig cfg = default_config("erd_roc");
    cfg.scenario = "erd_roc"; // reuse the threshold plumbing
    cfg.n_t = 128;
    cfg.n_b = 7;
    cfg.l_taps = 2;
    cfg.snr_db = 30.0;
    cfg.k_support = 5;
    cfg.workers = 2;
    cfg.attack_mode = "random_sap";
    cfg.pip_freq = "same";
    cfg.pip_time = "random";
    const auto res = identification_experiment(cfg, 1500, 99);
    CHECK(res.trials == 1500);
    CHECK(res.deltaf_tol > 0.0);
    const double p_i = iep_closed_form(7, 1);
    const double expect = p_i / 5.0;
    const double sigma = std::sqrt(expect * (1 - expect) / 1500.0);
    CHECK(std::abs(res.error_rate - expect) <= 4 * sigma);
    // confusions happen at the code-domain rate
    const double conf_expect = 34.0 / 128.0;
    const double conf_sigma = std::sqrt(conf_expect * (1 - conf_expect) / 1500.0);
    CHECK(std::abs(static_cast<double>(res.confusions) / 1500.0 - conf_expect) <=
          4 * conf_sigma);
}
