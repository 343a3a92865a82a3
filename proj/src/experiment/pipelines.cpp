#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "wea/analytic_bounds.hpp"
#include "wea/error.hpp"
#include "wea/experiment.hpp"
#include "wea/random.hpp"
#include "wea/scaling_fit.hpp"

namespace wea::experiment {

using nlohmann::json;

namespace {

using clock_type = std::chrono::steady_clock;

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::uint64_t> seed_list(const ExperimentConfig& cfg) {
    if (cfg.stochastic()) return cfg.seeds;
    return {0};
}

/// First label k of every sum: sums start at k = 1 unless the
/// weight or index family needs a later start.
Index base_label(const ExperimentConfig& cfg) {
    return std::max<Index>({1, cfg.weights.first_index(), cfg.indices.first_index()});
}

struct Terms {
    std::vector<cplx> w;
    std::vector<Index> u;
};

Terms make_terms(const ExperimentConfig& cfg, std::uint64_t seed, Index first, Index count, bool harmonic) {
    WeightSpec ws = cfg.weights;
    IndexSpec is = cfg.indices;
    ws.seed = seed;
    is.seed = seed;
    Terms t;
    t.w = gen_weights(ws, first, first + count);
    t.u = gen_indices(is, first, first + count);
    if (harmonic) t.w = harmonic_weights(t.w, first);
    return t;
}

double elapsed_ms(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

// ---------------------------------------------------------------- envelopes

std::vector<std::string> envelope_header() {
    return {"label", "seed", "M", "N", "lower", "upper", "global_upper", "argmax_theta", "grid_points", "used_fft",
            "vacuous", "wall_ns"};
}

struct EnvelopeRows {
    std::uint64_t seed = 0;
    std::vector<EnvelopeSample> samples;
};

std::vector<EnvelopeRows> scan_envelopes(const ExperimentConfig& cfg, const std::string& label, CsvWriter& csv) {
    std::vector<EnvelopeRows> out;
    const Index base = base_label(cfg);
    for (std::uint64_t seed : seed_list(cfg)) {
        EnvelopeRows rows;
        rows.seed = seed;
        for (Index N : cfg.N) {
            std::set<Index> Ms;
            for (double f : cfg.window_fractions) Ms.insert(static_cast<Index>(std::floor(f * static_cast<double>(N))));
            for (Index M : Ms) {
                if (M >= N) continue;
                // V_{M,N}: the N - M terms with labels base + M, ..., base + N - 1
                const auto t0 = clock_type::now();
                Terms t = make_terms(cfg, seed, base + M, N - M, cfg.harmonic);
                SupOptions opts;
                opts.grid = cfg.grid;
                opts.monomial = cfg.indices.kind == IndexKind::monomial && cfg.indices.degree > 1;
                const SupEstimate est = sup_V(t.w, t.u, opts);
                const auto ns = cfg.record_wall_time
                                    ? std::chrono::duration_cast<std::chrono::nanoseconds>(clock_type::now() - t0).count()
                                    : 0;
                csv.row()
                    .cell(label)
                    .cell(seed)
                    .cell(M)
                    .cell(N)
                    .cell(est.lower)
                    .cell(est.upper)
                    .cell(est.global_upper)
                    .cell(est.argmax_theta)
                    .cell(static_cast<std::uint64_t>(est.grid_points))
                    .cell(est.used_fft ? 1 : 0)
                    .cell(est.vacuous ? 1 : 0)
                    .cell(static_cast<std::int64_t>(ns));
                rows.samples.push_back({M, N, est.lower, est.upper, cfg.harmonic});
            }
        }
        out.push_back(std::move(rows));
    }
    return out;
}

json fit_block(const ExperimentConfig& cfg, const std::vector<EnvelopeSample>& samples) {
    json fits = json::array();
    for (const auto& name : cfg.templates) fits.push_back(to_json(fit_template(samples, template_from_string(name))));
    return fits;
}

json envelope_section(const ExperimentConfig& cfg, const std::string& label, CsvWriter& csv,
                      std::vector<SvgSeries>& svg, std::vector<EnvelopeRows>* keep = nullptr) {
    auto runs = scan_envelopes(cfg, label, csv);
    json per_seed = json::array();
    for (const auto& r : runs) {
        json entry = {{"seed", r.seed}, {"fits", fit_block(cfg, r.samples)}};
        if (cfg.kind == Kind::condition_fit || std::count(cfg.templates.begin(), cfg.templates.end(), "H1")) {
            const auto cmp = compare_H1_H2(r.samples);
            entry["comparison"] = {{"aic_H1", cmp.aic_h1}, {"aic_H2", cmp.aic_h2}, {"preferred", cmp.preferred}};
        }
        double max_upper = 0.0;
        for (const auto& s : r.samples) max_upper = std::max(max_upper, s.upper);
        entry["max_upper"] = max_upper;
        per_seed.push_back(entry);
        if (svg.size() < 6) {
            SvgSeries s{label.empty() ? "seed " + std::to_string(r.seed) : label + " seed " + std::to_string(r.seed), {}};
            for (const auto& e : r.samples)
                if (e.M == 0) s.points.emplace_back(std::log(static_cast<double>(e.N)), std::log(e.upper));
            svg.push_back(std::move(s));
        }
    }
    if (keep) *keep = std::move(runs);
    return {{"label", label}, {"per_seed", per_seed}};
}

const json* find_fit(const json& section, std::size_t seed_index, const std::string& tmpl) {
    const auto& fits = section["per_seed"][seed_index]["fits"];
    for (const auto& f : fits)
        if (f["template"] == tmpl) return &f;
    return nullptr;
}

void add_envelope_files(const ExperimentConfig& cfg, Outputs& out, CsvWriter& csv, const std::vector<SvgSeries>& svg,
                        const std::string& y_label) {
    out.files["envelope.csv"] = csv.str();
    if (cfg.svg) out.files["envelope.svg"] = svg_chart(cfg.name + ": envelope", "log N", y_label, svg);
}

// ---------------------------------------------------------------- orbits

std::vector<OrbitPoint> orbit_points(const ExperimentConfig& cfg, std::uint64_t seed, Index u_max) {
    std::vector<OrbitPoint> pts;
    if (cfg.system.model.kind == SystemModel::Kind::doubling) {
        const std::size_t L = cfg.system.bits != 0 ? cfg.system.bits : static_cast<std::size_t>(u_max) + 64;
        for (std::size_t p = 0; p < cfg.system.points; ++p) {
            pts.push_back(OrbitPoint::doubling(rng::bits64(seed, rng::Stream::doubling_bits, ~std::uint64_t{0} - p), L));
        }
    } else {
        for (double x : cfg.system.x0) pts.push_back(OrbitPoint::at(x));
    }
    return pts;
}

/// Stored N values written to the series CSV: dense up to 100, then a
/// 2% geometric thinning, plus the forced points.
std::vector<std::size_t> thinned(const std::vector<Index>& N, const std::set<Index>& forced) {
    std::vector<std::size_t> keep;
    double last = 0.0;
    for (std::size_t i = 0; i < N.size(); ++i) {
        const double n = static_cast<double>(N[i]);
        if (N[i] <= 100 || n >= last * 1.02 || forced.count(N[i]) || i + 1 == N.size()) {
            keep.push_back(i);
            last = n;
        }
    }
    return keep;
}

struct OrbitFiles {
    CsvWriter series{{"label", "seed", "point", "N", "abs_S", "A", "ratio"}};
    CsvWriter osc{{"label", "seed", "point", "j", "N_lo", "N_hi", "anchor", "osc", "stored", "sum_osc2"}};
    std::vector<SvgSeries> svg;
};

json average_section(const ExperimentConfig& cfg, const NormalizerSpec& norm, const std::string& label, OrbitFiles& files,
                     std::map<std::string, double>& wall) {
    const Index base = std::max(base_label(cfg), Index{1});
    const Index count = cfg.N_max;
    norm.check_monotone(count);
    std::set<Index> forced(cfg.checkpoints.begin(), cfg.checkpoints.end());
    for (const auto& [j, Nj] : cfg.ladder.points(count)) forced.insert(Nj);
    for (Index c : cfg.checkpoints) forced.insert(std::max<Index>(c / 2, 1));
    StorageOptions storage;
    storage.forced.assign(forced.begin(), forced.end());

    json runs = json::array();
    std::map<Index, std::vector<double>> window_by_checkpoint, point_by_checkpoint;
    std::vector<double> slopes, tails;
    std::size_t violations_total = 0;
    const auto t0 = clock_type::now();
    for (std::uint64_t seed : seed_list(cfg)) {
        // sums S_N run over the first N terms, labels base, base + 1, ...
        Terms t = make_terms(cfg, seed, base, count, cfg.harmonic);
        const Index u_max = t.u.empty() ? 0 : *std::max_element(t.u.begin(), t.u.end());
        const auto points = orbit_points(cfg, seed, u_max);
        json seed_runs = json::array();
        std::map<Index, double> seed_window, seed_point;
        double seed_tail = 0.0, seed_slope = -std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < points.size(); ++p) {
            const auto orbit = orbit_eval(cfg.system.model, cfg.observable, points[p], t.u);
            SeriesRun run = weighted_sums(orbit, t.w, storage);
            run.first_label = base;
            run.seeds = {seed};
            const auto ns = normalized_series(run, norm);
            const auto osc = oscillation_report(run, norm, cfg.ladder, cfg.moments);
            const std::size_t viol = decomposition_violations(run, norm, osc);
            violations_total += viol;
            json cps = json::array();
            for (Index c : cfg.checkpoints) {
                const double at = normalized_at(run, norm, c);
                const double wmax = window_max(ns, std::max<Index>(c / 2, norm.offset()), c);
                cps.push_back({{"N", c}, {"ratio", at}, {"window_max", wmax}});
                seed_window[c] = std::max(seed_window[c], wmax);
                seed_point[c] = std::max(seed_point[c], at);
            }
            json blocks = json::array();
            for (std::size_t b = 0; b < osc.blocks.size(); ++b) {
                const auto& blk = osc.blocks[b];
                blocks.push_back({{"j", blk.j}, {"N_lo", blk.N_lo}, {"N_hi", blk.N_hi}, {"anchor", blk.anchor},
                                  {"osc", blk.osc}, {"stored", blk.stored}, {"sum_osc2", osc.sum_osc2[b]}});
                files.osc.row()
                    .cell(label)
                    .cell(seed)
                    .cell(static_cast<std::uint64_t>(p))
                    .cell(static_cast<std::uint64_t>(blk.j))
                    .cell(blk.N_lo)
                    .cell(blk.N_hi)
                    .cell(blk.anchor)
                    .cell(blk.osc)
                    .cell(static_cast<std::uint64_t>(blk.stored))
                    .cell(osc.sum_osc2[b]);
            }
            json moments = json::array();
            for (const auto& [l, partial] : osc.moments) moments.push_back({{"l", l}, {"partial_sums", partial}});
            double plateau = 0.0;
            if (osc.sum_osc2.size() >= 2) {
                // share of the final sum accumulated in the last half of the blocks
                const double total = osc.sum_osc2.back();
                const double half = osc.sum_osc2[osc.sum_osc2.size() / 2 - 1];
                plateau = total > 0.0 ? (total - half) / total : 0.0;
            }
            seed_runs.push_back({{"point", p},
                                 {"x0", points[p].x0},
                                 {"tail_max", ns.tail_max},
                                 {"N_tail", ns.N_tail},
                                 {"slope", ns.slope},
                                 {"slope_coordinate", ns.loglog_slope ? "log log N" : "log N"},
                                 {"checkpoints", cps},
                                 {"oscillation", {{"blocks", blocks},
                                                  {"moments", moments},
                                                  {"late_share_of_sum_osc2", plateau},
                                                  {"grid_points", osc.grid_points},
                                                  {"full_grid", osc.full_grid}}},
                                 {"decomposition_violations", viol}});
            seed_tail = std::max(seed_tail, ns.tail_max);
            seed_slope = std::max(seed_slope, ns.slope);
            if (p == 0) {
                for (std::size_t i : thinned(run.N, forced)) {
                    if (run.N[i] < norm.offset()) continue;
                    const double A = norm(static_cast<double>(run.N[i]));
                    files.series.row()
                        .cell(label)
                        .cell(seed)
                        .cell(std::uint64_t{0})
                        .cell(run.N[i])
                        .cell(std::abs(run.S[i]))
                        .cell(A)
                        .cell(std::abs(run.S[i]) / A);
                }
                if (files.svg.size() < 6) {
                    SvgSeries s{label + " seed " + std::to_string(seed), {}};
                    for (std::size_t i : thinned(ns.N, {}))
                        if (ns.ratio[i] > 0.0) s.points.emplace_back(std::log(static_cast<double>(ns.N[i])), std::log(ns.ratio[i]));
                    files.svg.push_back(std::move(s));
                }
            }
        }
        for (const auto& [c, v] : seed_window) window_by_checkpoint[c].push_back(v);
        for (const auto& [c, v] : seed_point) point_by_checkpoint[c].push_back(v);
        tails.push_back(seed_tail);
        slopes.push_back(seed_slope);
        runs.push_back({{"seed", seed}, {"points", seed_runs}});
    }
    wall[label.empty() ? "average" : "average " + label] = elapsed_ms(t0);
    json med = json::array();
    for (const auto& [c, v] : window_by_checkpoint) {
        med.push_back({{"N", c}, {"median_window_max", median(v)}, {"median_ratio", median(point_by_checkpoint[c])}});
    }
    return {{"label", label},
            {"normalizer", {{"gamma", norm.gamma}, {"a", norm.a}, {"b", norm.b}, {"k0", norm.offset()}}},
            {"N_max", count},
            {"runs", runs},
            {"summary", {{"median_tail_max", median(tails)},
                         {"median_slope", median(slopes)},
                         {"checkpoints", med},
                         {"decomposition_violations", violations_total},
                         {"a.e. sampling", "max over orbit points, median over seeds"}}}};
}

void add_orbit_files(const ExperimentConfig& cfg, Outputs& out, const OrbitFiles& f, const std::string& y) {
    out.files["series.csv"] = f.series.str();
    out.files["oscillation.csv"] = f.osc.str();
    if (cfg.svg) out.files["series.svg"] = svg_chart(cfg.name + ": normalized series", "log N", y, f.svg);
}

json hilbert_section(const ExperimentConfig& cfg, const std::string& label, CsvWriter& csv,
                     std::map<std::string, double>& wall) {
    const Index first = std::max(base_label(cfg), cfg.normalizer.offset());
    const Index count = cfg.N_max;
    const auto t0 = clock_type::now();
    json runs = json::array();
    for (std::uint64_t seed : seed_list(cfg)) {
        Terms t = make_terms(cfg, seed, first, count, false);
        const Index u_max = t.u.empty() ? 0 : *std::max_element(t.u.begin(), t.u.end());
        const auto points = orbit_points(cfg, seed, u_max);
        json per_point = json::array();
        for (std::size_t p = 0; p < points.size(); ++p) {
            const auto orbit = orbit_eval(cfg.system.model, cfg.observable, points[p], t.u);
            StorageOptions storage;
            const auto rep = hilbert_partial(t.w, orbit, cfg.normalizer, first, storage);
            double max_abs = 0.0;
            for (const auto& v : rep.partial) max_abs = std::max(max_abs, std::abs(v));
            // summation-by-parts cross-check at the last label
            const Index last = first + count - 1;
            const cplx abel = abel_decompose(t.w, orbit, cfg.normalizer, first, last);
            const double rel = std::abs(abel - rep.final_value) / std::max(std::abs(rep.final_value), 1e-300);
            json tails = json::array();
            for (std::size_t i = 0; i < rep.N0.size(); ++i) tails.push_back({{"N0", rep.N0[i]}, {"diameter", rep.tail_diameter[i]}});
            per_point.push_back({{"point", p},
                                 {"final_partial", {{"re", rep.final_value.real()}, {"im", rep.final_value.imag()}}},
                                 {"max_abs_partial", max_abs},
                                 {"abel_relative_error", rel},
                                 {"cauchy_tail", tails}});
            if (p == 0) {
                for (std::size_t i : thinned(rep.N, {})) {
                    csv.row()
                        .cell(label)
                        .cell(seed)
                        .cell(rep.N[i])
                        .cell(rep.partial[i].real())
                        .cell(rep.partial[i].imag())
                        .cell(std::abs(rep.partial[i]));
                }
            }
        }
        runs.push_back({{"seed", seed}, {"points", per_point}});
    }
    wall[label.empty() ? "hilbert" : "hilbert " + label] = elapsed_ms(t0);
    return {{"label", label}, {"first_label", first}, {"N_max", first + count - 1}, {"runs", runs}};
}

CsvWriter hilbert_csv() { return CsvWriter({"label", "seed", "N", "re", "im", "abs"}); }

std::string fmt_label(const char* key, double v) { return std::string(key) + "=" + fmt_double(v); }

// ---------------------------------------------------------------- presets

void exponent_check(json& report, const json& section, double limit, const std::string& what) {
    const json* fit = find_fit(section, 0, "H2");
    if (!fit) return;
    const double alpha = (*fit)["parameters"]["alpha"].get<double>();
    const double se = (*fit)["stderr"]["alpha"].get<double>();
    report["exponent_check"] = {{"reference", what},
                                {"reference_alpha", limit},
                                {"fitted_alpha", alpha},
                                {"stderr", se},
                                {"within_2se", alpha - 2.0 * se <= limit}};
}

Outputs run_example1(const ExperimentConfig& cfg) {
    Outputs out;
    CsvWriter csv(envelope_header());
    std::vector<SvgSeries> svg;
    const auto t0 = clock_type::now();
    json env = envelope_section(cfg, "", csv, svg);
    out.wall_ms["envelope"] = elapsed_ms(t0);
    out.report["envelope"] = env;
    exponent_check(out.report, env, example1_exponent(cfg.weights.delta), "1 - ||delta|| 2 / (3 (K - 2))");
    add_envelope_files(cfg, out, csv, svg, "log upper");
    return out;
}

Outputs run_example2(const ExperimentConfig& cfg) {
    Outputs out;
    CsvWriter csv(envelope_header());
    std::vector<SvgSeries> svg;
    const auto t0 = clock_type::now();
    json env = envelope_section(cfg, "", csv, svg);
    out.wall_ms["envelope"] = elapsed_ms(t0);
    out.report["envelope"] = env;
    exponent_check(out.report, env, example2_exponent(cfg.weights.delta), "1 - delta / 2");
    add_envelope_files(cfg, out, csv, svg, "log upper");
    OrbitFiles files;
    out.report["average"] = average_section(cfg, cfg.normalizer, "", files, out.wall_ms);
    add_orbit_files(cfg, out, files, "log |S_N| / A(N)");
    return out;
}

Outputs run_example3(const ExperimentConfig& cfg) {
    Outputs out;
    CsvWriter csv(envelope_header());
    CsvWriter hcsv = hilbert_csv();
    std::vector<SvgSeries> svg;
    json sections = json::array(), bounds = json::array(), hilberts = json::array();
    std::vector<double> hs = cfg.h_values.empty() ? std::vector<double>{cfg.weights.h} : cfg.h_values;
    for (double h : hs) {
        ExperimentConfig c = cfg;
        c.weights = WeightSpec::log_phase(h);
        const std::string label = fmt_label("h", h);
        const auto t0 = clock_type::now();
        std::vector<EnvelopeRows> rows;
        json env = envelope_section(c, label, csv, svg, &rows);
        out.wall_ms["envelope " + label] = elapsed_ms(t0);
        sections.push_back(env);
        double max_upper = 0.0;
        for (const auto& s : rows.front().samples) max_upper = std::max(max_upper, s.upper);
        const double bound = hlawka_bound(h);
        bounds.push_back({{"h", h},
                          {"bound", bound},
                          {"max_upper", max_upper},
                          {"slack", 1.0 - max_upper / bound},
                          {"holds", max_upper <= bound}});
        if (c.N_max > 0) {
            // partial sums of (w_k / k) T^k f
            c.harmonic = false;
            json hs_section = hilbert_section(c, label, hcsv, out.wall_ms);
            hs_section["bound"] = bound;
            hilberts.push_back(hs_section);
        }
    }
    out.report["envelopes"] = sections;
    out.report["bound_checks"] = bounds;
    if (!hilberts.empty()) {
        out.report["hilbert"] = hilberts;
        out.files["hilbert.csv"] = hcsv.str();
    }
    add_envelope_files(cfg, out, csv, svg, "log upper (harmonic)");
    return out;
}

Outputs run_random_weights(const ExperimentConfig& cfg, bool harmonic) {
    Outputs out;
    CsvWriter csv(envelope_header());
    std::vector<SvgSeries> svg;
    const auto t0 = clock_type::now();
    std::vector<EnvelopeRows> rows;
    json env = envelope_section(cfg, "", csv, svg, &rows);
    out.wall_ms["envelope"] = elapsed_ms(t0);
    out.report["envelope"] = env;
    if (!harmonic) {
        // the almost-sure bound C(omega) sqrt(N - M) sqrt(log N) with C = 3
        json shape = json::array();
        for (const auto& r : rows) {
            double worst = 0.0;
            for (const auto& s : r.samples) {
                const double ref = std::sqrt(static_cast<double>(s.N - s.M)) * std::sqrt(std::log(static_cast<double>(s.N)));
                worst = std::max(worst, s.upper / ref);
            }
            shape.push_back({{"seed", r.seed}, {"max_upper_over_sqrt_window_log_N", worst}, {"within_3", worst <= 3.0}});
        }
        out.report["shape_check"] = shape;
    }
    add_envelope_files(cfg, out, csv, svg, harmonic ? "log upper (harmonic)" : "log upper");
    if (cfg.N_max > 0) {
        OrbitFiles files;
        out.report["average"] = average_section(cfg, cfg.normalizer, "", files, out.wall_ms);
        add_orbit_files(cfg, out, files, "log |S_N| / A(N)");
    }
    return out;
}

Outputs run_beta_averages(const ExperimentConfig& cfg, bool cramer_table) {
    Outputs out;
    if (cramer_table) {
        CsvWriter pi({"seed", "N", "Pi", "Pi_log_N_over_N"});
        const auto t0 = clock_type::now();
        json table = json::array();
        std::map<Index, std::vector<double>> by_N;
        for (std::uint64_t seed : cfg.seeds) {
            for (Index N : cfg.N) {
                const auto count = cramer_count(seed, N);
                const double ratio = static_cast<double>(count) * std::log(static_cast<double>(N)) / static_cast<double>(N);
                pi.row().cell(seed).cell(N).cell(static_cast<std::uint64_t>(count)).cell(ratio);
                by_N[N].push_back(ratio);
            }
        }
        for (const auto& [N, v] : by_N) table.push_back({{"N", N}, {"median", median(v)}, {"seeds", v.size()}});
        out.wall_ms["cramer table"] = elapsed_ms(t0);
        out.report["pi_table"] = table;
        out.files["pi_table.csv"] = pi.str();
    }
    OrbitFiles files;
    json sections = json::array();
    const std::vector<double> betas = cfg.betas.empty() ? std::vector<double>{cfg.normalizer.gamma} : cfg.betas;
    for (double beta : betas) {
        sections.push_back(average_section(cfg, NormalizerSpec::power(beta), fmt_label("beta", beta), files, out.wall_ms));
    }
    out.report["averages"] = sections;
    add_orbit_files(cfg, out, files, "log |S_N| / N^beta");
    return out;
}

Outputs run_preset(const ExperimentConfig& cfg) {
    if (cfg.preset == "example1") return run_example1(cfg);
    if (cfg.preset == "example2") return run_example2(cfg);
    if (cfg.preset == "example3") return run_example3(cfg);
    if (cfg.preset == "example4") return run_random_weights(cfg, false);
    if (cfg.preset == "example5") return run_random_weights(cfg, true);
    if (cfg.preset == "example6") return run_beta_averages(cfg, true);
    if (cfg.preset == "prime_question") {
        Outputs out = run_beta_averages(cfg, false);
        out.report["status"] = "exploratory";
        out.report["note"] =
            "open problem: whether N^-beta sum T^{p_k} f -> 0 follows from the same property along k; slopes are "
            "descriptive, not a verdict";
        return out;
    }
    throw ValidationError("unknown preset '" + cfg.preset + "'");
}

} // namespace

Outputs execute(const ExperimentConfig& cfg) {
    Outputs out;
    switch (cfg.kind) {
    case Kind::envelope_scan:
    case Kind::condition_fit: {
        CsvWriter csv(envelope_header());
        std::vector<SvgSeries> svg;
        const auto t0 = clock_type::now();
        out.report["envelope"] = envelope_section(cfg, "", csv, svg);
        out.wall_ms["envelope"] = elapsed_ms(t0);
        add_envelope_files(cfg, out, csv, svg, cfg.harmonic ? "log upper (harmonic)" : "log upper");
        break;
    }
    case Kind::average_run:
    case Kind::oscillation_run: {
        OrbitFiles files;
        out.report["average"] = average_section(cfg, cfg.normalizer, "", files, out.wall_ms);
        add_orbit_files(cfg, out, files, "log |S_N| / A(N)");
        if (cfg.kind == Kind::oscillation_run) out.files.erase("series.csv");
        break;
    }
    case Kind::hilbert_run: {
        CsvWriter csv = hilbert_csv();
        out.report["hilbert"] = hilbert_section(cfg, "", csv, out.wall_ms);
        out.files["hilbert.csv"] = csv.str();
        break;
    }
    case Kind::preset: out = run_preset(cfg); break;
    }
    out.report["name"] = cfg.name;
    out.report["kind"] = to_string(cfg.kind);
    if (!cfg.preset.empty()) {
        out.report["preset"] = cfg.preset;
        for (const auto& p : list_presets())
            if (p.name == cfg.preset) out.report["theorems"] = p.theorems;
    }
    out.files["report.json"] = out.report.dump(2) + "\n";
    return out;
}

} // namespace wea::experiment
