// SPDX-License-Identifier: Apache-2.0
//
// icc-cta command-line front end: scenario runs, threshold calibration, and
// analytic table emission.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icc_cta/csv.hpp"
#include "icc_cta/detect.hpp"
#include "icc_cta/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string resolve_out_path(const std::string& out) {
    std::filesystem::path p(out);
    if (p.is_absolute())
        return out;
    if (const char* dir = std::getenv("ICC_CTA_OUT_DIR"))
        return (std::filesystem::path(dir) / p).string();
    return out;
}

std::map<std::string, std::string> parse_sets(const std::vector<std::string>& sets) {
    std::map<std::string, std::string> kv;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw icc_cta::ConfigError("--set expects key=value, got '" + s + "'");
        kv[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return kv;
}

void write_table(const icc_cta::ResultTable& table, const std::string& out,
                 const std::string& format) {
    const std::string path = resolve_out_path(out);
    if (format == "csv")
        icc_cta::write_csv(table, path);
    else if (format == "dat")
        icc_cta::write_dat(table, path);
    else
        throw icc_cta::ConfigError("unknown output format '" + format + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"icc-cta: secure OFDM channel-training simulation"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run a Monte Carlo or analytic scenario");
    std::string scenario, config_path, out = "results.csv", format = "csv";
    std::vector<std::string> sets;
    uint64_t seed = 1;
    bool seed_given = false;
    int workers = 0;
    run->add_option("--scenario", scenario, "Scenario name (see list-scenarios)")->required();
    run->add_option("--config", config_path, "Config file (key = value with [sections])");
    run->add_option("--set", sets, "Override config entries, e.g. --set grid.n_t=64");
    run->add_option("--out", out, "Output file path");
    run->add_option("--format", format, "Output format: csv or dat");
    run->add_option("--seed", seed, "Master seed")->each([&](const std::string&) {
        seed_given = true;
    });
    run->add_option("--workers", workers, "Worker threads (0 = auto)");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Calibrate detection thresholds into a cache");
    std::string cal_cache = "erd_cache.txt";
    int cal_nt = 256;
    double cal_pf = 1e-3, cal_snr = 20.0;
    uint64_t cal_seed = 1;
    int cal_workers = 0;
    cal->add_option("--cache", cal_cache, "Cache file path");
    cal->add_option("--n-t", cal_nt, "Antenna count");
    cal->add_option("--target-pf", cal_pf, "False-alarm target");
    cal->add_option("--snr-db", cal_snr, "Single-source SNR for the dual threshold");
    cal->add_option("--seed", cal_seed, "Calibration seed");
    cal->add_option("--workers", cal_workers, "Worker threads (0 = auto)");

    // tabulate
    auto* tab = app.add_subcommand("tabulate", "Emit analytic tables (no Monte Carlo)");
    std::string table_name, tab_out = "table.csv", tab_format = "csv";
    std::vector<std::string> tab_sets;
    tab->add_option("--table", table_name, "tradeoff | iep | rate")->required();
    tab->add_option("--set", tab_sets, "Override config entries");
    tab->add_option("--out", tab_out, "Output file path");
    tab->add_option("--format", tab_format, "Output format: csv or dat");

    // list-scenarios
    auto* list = app.add_subcommand("list-scenarios", "Print scenario names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& name : icc_cta::scenario_names())
                std::cout << name << '\n';
            return kExitOk;
        }
        if (cal->parsed()) {
            icc_cta::ScenarioConfig cfg = icc_cta::default_config("erd_roc");
            cfg.n_t = cal_nt;
            cfg.target_pf = cal_pf;
            cfg.snr_db = cal_snr;
            cfg.seed = cal_seed;
            cfg.workers = cal_workers;
            cfg.cache_path = resolve_out_path(cal_cache);
            const icc_cta::ErdThresholds thr = icc_cta::scenario_thresholds(cfg);
            std::cout << "gamma_presence " << thr.gamma_presence << "\ngamma_dual "
                      << thr.gamma_dual << '\n';
            return kExitOk;
        }
        if (tab->parsed()) {
            std::string name;
            if (table_name == "tradeoff")
                name = "tradeoff_curve";
            else if (table_name == "iep")
                name = "iep_surface";
            else if (table_name == "rate")
                name = "rate_curve";
            else
                throw icc_cta::ConfigError("unknown table '" + table_name + "'");
            icc_cta::ScenarioConfig cfg = icc_cta::default_config(name);
            icc_cta::apply_overrides(cfg, parse_sets(tab_sets));
            write_table(icc_cta::run_scenario(cfg), tab_out, tab_format);
            return kExitOk;
        }
        // run
        icc_cta::ScenarioConfig cfg = icc_cta::default_config(scenario);
        if (!config_path.empty())
            icc_cta::apply_overrides(cfg, icc_cta::parse_config_file(config_path));
        icc_cta::apply_overrides(cfg, parse_sets(sets));
        if (seed_given)
            cfg.seed = seed;
        if (workers > 0)
            cfg.workers = workers;
        cfg.scenario = scenario;
        cfg.validate();
        try {
            write_table(icc_cta::run_scenario(cfg), out, format);
        } catch (const icc_cta::NumericalError& e) {
            // flush whatever schema we have so downstream tooling sees the failure
            icc_cta::ResultTable partial;
            partial.header = {"error"};
            partial.rows = {{e.what()}};
            write_table(partial, out + ".partial", format);
            std::cerr << "numerical failure: " << e.what() << '\n';
            return kExitNumerical;
        }
        return kExitOk;
    } catch (const icc_cta::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const icc_cta::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
