#pragma once

// Declarative experiments: JSON configs, presets, pipelines and persisted,
// digest-checked outputs.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wea/averages.hpp"
#include "wea/dynamics.hpp"
#include "wea/indices.hpp"
#include "wea/trigsum.hpp"
#include "wea/weights.hpp"

namespace wea::experiment {

inline constexpr const char* kToolVersion = "wea 1.0.0";
inline constexpr const char* kOutputRootEnv = "WEA_OUTPUT_ROOT";
inline constexpr const char* kThreadsEnv = "WEA_THREADS";

enum class Kind { envelope_scan, condition_fit, average_run, hilbert_run, oscillation_run, preset };
std::string to_string(Kind k);

struct Diagnostic {
    std::string field;    // JSON path, e.g. "indices.degree"
    std::string message;
};
std::string format(const Diagnostic& d);

struct SystemConfig {
    SystemModel model;
    std::string angle_name;              // "sqrt2_minus_1", "golden_mean" or "" for a plain double
    std::vector<double> x0;              // rotation / spectral starting points
    std::size_t points = 1;              // doubling: seeded points per seed
    std::size_t bits = 0;                // doubling: bit length (0 = automatic)
    std::size_t resolution = 0;          // spectral quadrature points (0 = automatic)
};

/// Parsed and validated form of a config document.
struct ExperimentConfig {
    std::string name;
    Kind kind = Kind::envelope_scan;
    std::string preset;  // preset name for kind == preset

    WeightSpec weights;
    IndexSpec indices;
    SystemConfig system;
    Observable observable = Observable::fourier_mode(1);
    NormalizerSpec normalizer = NormalizerSpec::theorem3();
    BlockLadder ladder = BlockLadder::dyadic();

    std::vector<Index> N;                              // N ladder
    std::vector<double> window_fractions{0.0};         // M = floor(f N) for condition fits
    std::optional<ThetaGrid> grid;
    std::vector<std::uint64_t> seeds;
    std::string output;
    std::vector<std::string> templates;
    bool harmonic = false;
    bool svg = true;
    bool record_wall_time = false;
    std::vector<double> moments;
    std::vector<Index> checkpoints;   // N values reported by average runs
    std::vector<double> h_values;     // example3
    std::vector<double> betas;        // prime_question / example6
    Index N_max = 0;                  // average / hilbert / oscillation runs

    nlohmann::json canonical;         // expanded, key-sorted document

    bool stochastic() const { return weights.stochastic() || indices.stochastic(); }
};

/// Parses `doc` (expanding presets). Diagnostics are appended, never thrown.
ExperimentConfig parse_config(const nlohmann::json& doc, std::vector<Diagnostic>& diags);
/// Pure check of a config document; an empty list means it is runnable.
std::vector<Diagnostic> validate(const nlohmann::json& doc);

struct PresetInfo {
    std::string name;
    std::string theorems;     // theorems whose hypotheses or conclusions the preset tests
    std::string description;
    bool stochastic = false;
    bool exploratory = false;
};
std::vector<PresetInfo> list_presets();
/// Full config document for a preset; fields of `overrides` replace the defaults.
nlohmann::json preset_document(const std::string& name, const nlohmann::json& overrides = nlohmann::json::object());

/// In-memory result of a pipeline: file name -> bytes, plus the summary
/// record also written as report.json.
struct Outputs {
    std::map<std::string, std::string> files;
    nlohmann::json report;
    std::map<std::string, double> wall_ms;
};

/// Runs the pipeline without touching the file system.
Outputs execute(const ExperimentConfig& cfg);

struct RunResult {
    std::filesystem::path directory;
    nlohmann::json manifest;
    Outputs outputs;
};

/// Validates, executes and persists a config under `root` (the output root
/// override variable or "results" when empty). Throws ValidationError listing
/// every diagnostic; on any failure no partial output directory remains.
RunResult run(const nlohmann::json& doc, std::optional<std::filesystem::path> root = std::nullopt);

std::filesystem::path output_root();

// ---- output helpers

/// Shortest round-trip decimal.
std::string fmt_double(double x);
std::string sha256_hex(const std::string& bytes);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    CsvWriter& row();
    CsvWriter& cell(double x);
    CsvWriter& cell(std::uint64_t x);
    CsvWriter& cell(std::int64_t x);
    CsvWriter& cell(int x) { return cell(static_cast<std::int64_t>(x)); }
    CsvWriter& cell(const std::string& s);
    std::string str() const;

private:
    std::string buf_;
    bool first_ = true;
};

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // already in plot coordinates (e.g. log-log)
};
/// A plain line chart with axes and a legend; fixed-precision coordinates.
std::string svg_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series);

} // namespace wea::experiment
