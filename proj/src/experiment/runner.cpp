#include <chrono>
#include <cstdlib>
#include <fstream>
#include <system_error>

#include "wea/error.hpp"
#include "wea/experiment.hpp"

namespace wea::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path output_root() {
    const char* env = std::getenv(kOutputRootEnv);
    return env && *env ? fs::path(env) : fs::path("results");
}

namespace {

void write_file(const fs::path& p, const std::string& bytes) {
    fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error("io", "cannot write " + p.string());
}

} // namespace

RunResult run(const json& doc, std::optional<fs::path> root) {
    std::vector<Diagnostic> diags;
    const ExperimentConfig cfg = parse_config(doc, diags);
    if (!diags.empty()) {
        std::string msg = "invalid config:";
        for (const auto& d : diags) msg += "\n  " + format(d);
        throw ValidationError(msg);
    }
    const fs::path base = root ? *root : output_root();
    const fs::path dir = base / cfg.output;
    const fs::path staging = base / (cfg.output + ".partial");

    RunResult result;
    result.directory = dir;
    std::error_code ec;
    fs::remove_all(staging, ec);
    try {
        const auto t0 = std::chrono::steady_clock::now();
        result.outputs = execute(cfg);
        const double total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

        json files = json::array();
        for (const auto& [name, bytes] : result.outputs.files) {
            write_file(staging / name, bytes);
            files.push_back({{"path", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
        }
        json wall = result.outputs.wall_ms;
        wall["total"] = total_ms;
        result.manifest = {{"name", cfg.name},
                           {"kind", to_string(cfg.kind)},
                           {"tool_version", kToolVersion},
                           {"config", cfg.canonical},
                           {"files", files},
                           {"wall_time_ms", wall},
                           {"seeds", cfg.seeds}};
        write_file(staging / "manifest.json", result.manifest.dump(2) + "\n");
        fs::remove_all(dir);
        fs::rename(staging, dir);
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }
    return result;
}

} // namespace wea::experiment
