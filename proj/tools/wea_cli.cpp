// wea: batch runner for weighted ergodic average experiments.
//
//   wea run <config.json>        run and persist outputs under $WEA_OUTPUT_ROOT
//   wea validate <config.json>   print diagnostics, write nothing
//   wea presets                  list the preset catalog
//
// Exit codes: 0 ok, 2 invalid config, 3 runtime failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "wea/error.hpp"
#include "wea/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kRuntime = 3;

nlohmann::json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw wea::ValidationError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw wea::ValidationError(path + ": malformed JSON (" + std::string(e.what()) + ")");
    }
}

void apply_thread_override() {
    const char* env = std::getenv(wea::experiment::kThreadsEnv);
    if (!env || !*env) return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw wea::ValidationError(std::string(wea::experiment::kThreadsEnv) + " must be a positive integer");
    omp_set_num_threads(static_cast<int>(n));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted ergodic averages: envelope scans, fits and orbit runs"};
    app.require_subcommand(1);
    std::string run_path, validate_path;
    auto* run = app.add_subcommand("run", "run a config and write its outputs");
    run->add_option("config", run_path, "config JSON")->required();
    auto* val = app.add_subcommand("validate", "check a config without running it");
    val->add_option("config", validate_path, "config JSON")->required();
    auto* presets = app.add_subcommand("presets", "list the preset catalog");
    bool as_json = false;
    presets->add_flag("--json", as_json, "print the catalog as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        apply_thread_override();
        if (*presets) {
            const auto catalog = wea::experiment::list_presets();
            if (as_json) {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& p : catalog)
                    j.push_back({{"name", p.name}, {"theorems", p.theorems}, {"description", p.description},
                                 {"stochastic", p.stochastic}, {"exploratory", p.exploratory}});
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& p : catalog) {
                    std::cout << p.name << "\t" << p.theorems << "\t" << p.description
                              << (p.exploratory ? " [exploratory]" : "") << "\n";
                }
            }
            return kOk;
        }
        if (*val) {
            const auto diags = wea::experiment::validate(load(validate_path));
            for (const auto& d : diags) std::cout << wea::experiment::format(d) << "\n";
            if (!diags.empty()) return kInvalid;
            std::cout << "ok\n";
            return kOk;
        }
        const auto result = wea::experiment::run(load(run_path));
        std::cout << "wrote " << result.directory.string() << "\n";
        for (const auto& f : result.manifest["files"]) {
            std::cout << "  " << f["path"].get<std::string>() << "  " << f["sha256"].get<std::string>() << "\n";
        }
        return kOk;
    } catch (const wea::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}
