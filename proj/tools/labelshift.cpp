#include "labelshift/error.hpp"
#include "labelshift/experiment.hpp"
#include "labelshift/log.hpp"
#include "labelshift/simd/kernels.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace labelshift;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

fs::path summary_path(const fs::path& out) {
    return out.parent_path() / (out.stem().string() + "_summary" + out.extension().string());
}

void write_file(const fs::path& path, const auto& writer) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    writer(f);
    if (!f) throw ConfigError("error while writing '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Label-shift importance weight estimation experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string seeds;
    bool quiet = false;
    bool timing = false;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "Path to a key = value config file")->required();
    run->add_option("--out", out_path, "Output CSV (overrides the config's output key)");
    run->add_option("--seeds", seeds, "Seed list, e.g. 1,2,3 or 0..19 (overrides the config)");
    run->add_flag("--quiet", quiet, "Suppress progress output");
    run->add_flag("--timing", timing, "Record per-run wall time in the wall_ms column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    log::set_level(quiet ? log::Level::Error : log::Level::Warning);
    try {
        ExperimentConfig cfg = load_config(config_path);
        if (!seeds.empty()) cfg.seeds = parse_seed_list(seeds);
        if (!out_path.empty()) cfg.output = out_path;
        if (timing) cfg.timing = true;
        validate(cfg);

        if (!quiet) {
            std::cerr << "labelshift: " << to_string(cfg.scenario) << " / " << to_string(cfg.estimator)
                      << " (" << simd::isa_name(simd::active().isa) << " kernels)\n";
        }
        const auto rows = run_experiment(cfg, [&](const ResultRow& r) {
            if (quiet) return;
            std::cerr << "  k_or_bandwidth=" << format_number(r.k_or_bandwidth) << " n=" << r.n
                      << " m=" << r.m << " seed=" << r.seed
                      << " relative_error=" << format_number(r.relative_error) << '\n';
        });

        const fs::path out(cfg.output);
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        const std::string stamp = "labelshift run " + utc_timestamp();
        write_file(out, [&](std::ostream& f) { write_csv(f, rows, stamp); });
        write_file(summary_path(out), [&](std::ostream& f) { write_summary(f, rows, stamp); });
        if (!quiet) std::cerr << "wrote " << out.string() << " and " << summary_path(out).string() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "labelshift: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "labelshift: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "labelshift: " << e.what() << '\n';
        return kExitConfig;
    }
}
