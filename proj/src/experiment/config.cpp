#include <algorithm>
#include <cmath>
#include <set>

#include "wea/error.hpp"
#include "wea/experiment.hpp"
#include "wea/scaling_fit.hpp"

namespace wea::experiment {

using nlohmann::json;

std::string to_string(Kind k) {
    switch (k) {
    case Kind::envelope_scan: return "envelope_scan";
    case Kind::condition_fit: return "condition_fit";
    case Kind::average_run: return "average_run";
    case Kind::hilbert_run: return "hilbert_run";
    case Kind::oscillation_run: return "oscillation_run";
    case Kind::preset: return "preset";
    }
    return "?";
}

std::string format(const Diagnostic& d) { return d.field.empty() ? d.message : d.field + ": " + d.message; }

namespace {

constexpr Index kMaxTerms = 50000000;

class Reader {
public:
    explicit Reader(std::vector<Diagnostic>& diags) : diags_(diags) {}

    void error(const std::string& field, const std::string& msg) { diags_.push_back({field, msg}); }

    void known_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
        if (!obj.is_object()) return;
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : obj.items()) {
            if (!allowed.count(k)) error(join(path, k), "unknown field");
        }
    }

    template <class T>
    T get(const json& obj, const std::string& path, const char* key, T fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw json::type_error::create(302, "expected a boolean", &v);
            } else if constexpr (std::is_arithmetic_v<T>) {
                if (!v.is_number()) throw json::type_error::create(302, "expected a number", &v);
                if constexpr (std::is_integral_v<T>) {
                    const double d = v.get<double>();
                    if (d != std::floor(d)) throw json::type_error::create(302, "expected an integer", &v);
                    if constexpr (std::is_unsigned_v<T>) {
                        if (d < 0) throw json::type_error::create(302, "expected a nonnegative integer", &v);
                    }
                }
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw json::type_error::create(302, "expected a string", &v);
            }
            return v.get<T>();
        } catch (const json::exception& e) {
            error(join(path, key), type_message(e));
            return fallback;
        }
    }

    template <class T>
    std::vector<T> list(const json& obj, const std::string& path, const char* key) {
        std::vector<T> out;
        if (!obj.is_object() || !obj.contains(key)) return out;
        const json& v = obj.at(key);
        if (!v.is_array()) {
            error(join(path, key), "expected a list");
            return out;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            json wrap = {{"v", v[i]}};
            const auto before = diags_.size();
            T x = get<T>(wrap, join(path, key) + "[" + std::to_string(i) + "]", "v", T{});
            if (diags_.size() == before) out.push_back(x);
        }
        // rename the synthetic ".v" suffix
        for (auto& d : diags_)
            if (d.field.size() > 2 && d.field.compare(d.field.size() - 2, 2, ".v") == 0) d.field.resize(d.field.size() - 2);
        return out;
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

private:
    static std::string type_message(const json::exception& e) {
        std::string m = e.what();
        const auto pos = m.find("] ");
        return pos == std::string::npos ? m : m.substr(pos + 2);
    }
    std::vector<Diagnostic>& diags_;
};

// Runs a library constructor or check and turns its error into a diagnostic.
template <class F>
void guard(Reader& r, const std::string& field, F&& f) {
    try {
        f();
    } catch (const wea::Error& e) {
        r.error(field, e.what());
    }
}

WeightSpec parse_weights(Reader& r, const json& j) {
    WeightSpec w;
    r.known_keys(j, "weights", {"kind", "coeffs", "delta", "h", "offset"});
    if (!j.is_object()) {
        r.error("weights", "expected an object");
        return w;
    }
    const auto kind = r.get<std::string>(j, "weights", "kind", "");
    if (kind.empty()) {
        r.error("weights.kind", "missing");
        return w;
    }
    guard(r, "weights.kind", [&] { w.kind = weight_kind_from_string(kind); });
    w.coeffs = r.list<double>(j, "weights", "coeffs");
    w.delta = r.get<double>(j, "weights", "delta", 0.0);
    w.h = r.get<double>(j, "weights", "h", 0.0);
    w.offset = r.get<Index>(j, "weights", "offset", 0);
    switch (w.kind) {
    case WeightKind::polynomial_phase:
        if (w.coeffs.empty()) r.error("weights.coeffs", "polynomial_phase needs coefficients");
        break;
    case WeightKind::power_phase:
    case WeightKind::logpower_phase:
        if (!(w.delta > 0.0)) r.error("weights.delta", "must be > 0");
        break;
    case WeightKind::log_phase:
        if (w.h == 0.0) r.error("weights.h", "must be nonzero");
        break;
    default: break;
    }
    return w;
}

IndexSpec parse_indices(Reader& r, const json& j) {
    IndexSpec s;
    r.known_keys(j, "indices", {"kind", "degree", "coeffs", "values", "offset"});
    if (!j.is_object()) {
        r.error("indices", "expected an object");
        return s;
    }
    const auto kind = r.get<std::string>(j, "indices", "kind", "");
    if (kind.empty()) {
        r.error("indices.kind", "missing");
        return s;
    }
    guard(r, "indices.kind", [&] { s.kind = index_kind_from_string(kind); });
    const auto degree = r.get<std::int64_t>(j, "indices", "degree", 1);
    if (s.kind == IndexKind::monomial && degree < 1) r.error("indices.degree", "monomial degree must be >= 1");
    s.degree = static_cast<unsigned>(std::max<std::int64_t>(degree, 0));
    s.coeffs = r.list<std::int64_t>(j, "indices", "coeffs");
    s.values = r.list<Index>(j, "indices", "values");
    s.offset = r.get<Index>(j, "indices", "offset", 0);
    if (s.kind == IndexKind::polynomial && s.coeffs.empty()) r.error("indices.coeffs", "polynomial needs coefficients");
    if (s.kind == IndexKind::explicit_list && s.values.empty()) r.error("indices.values", "explicit list is empty");
    if (s.kind == IndexKind::monomial && s.degree >= 1) {
        guard(r, "indices", [&] { gen_indices(s, s.first_index(), s.first_index() + 1); });
    }
    return s;
}

SystemConfig parse_system(Reader& r, const json& j) {
    SystemConfig sc;
    r.known_keys(j, "system", {"kind", "theta0", "x0", "points", "bits", "atoms", "density_cells", "resolution"});
    if (!j.is_object()) {
        r.error("system", "expected an object");
        return sc;
    }
    const auto kind = r.get<std::string>(j, "system", "kind", "");
    sc.points = r.get<std::size_t>(j, "system", "points", 32);
    sc.bits = r.get<std::size_t>(j, "system", "bits", 0);
    sc.resolution = r.get<std::size_t>(j, "system", "resolution", 0);
    if (j.contains("x0")) {
        if (j.at("x0").is_number()) sc.x0 = {r.get<double>(j, "system", "x0", 0.0)};
        else sc.x0 = r.list<double>(j, "system", "x0");
    }
    if (sc.x0.empty()) sc.x0 = {0.0};
    for (double x : sc.x0)
        if (!(x >= 0.0 && x < 1.0)) r.error("system.x0", "points must lie in [0,1)");

    if (kind == "rotation") {
        if (!j.contains("theta0")) {
            r.error("system.theta0", "missing");
        } else if (j.at("theta0").is_string()) {
            sc.angle_name = j.at("theta0").get<std::string>();
            if (sc.angle_name == "sqrt2_minus_1") sc.model = SystemModel::rotation(sqrt2_minus_1());
            else if (sc.angle_name == "golden_mean") sc.model = SystemModel::rotation(golden_mean());
            else r.error("system.theta0", "unknown named angle '" + sc.angle_name + "'");
        } else {
            const double t = r.get<double>(j, "system", "theta0", 0.0);
            guard(r, "system.theta0", [&] { sc.model = SystemModel::rotation(t); });
        }
    } else if (kind == "doubling") {
        sc.model = SystemModel::doubling();
        if (sc.points < 1) r.error("system.points", "must be >= 1");
        if (sc.bits != 0 && sc.bits < 64) r.error("system.bits", "must be >= 64");
    } else if (kind == "spectral") {
        SpectralMeasure m;
        if (j.contains("atoms")) {
            const json& a = j.at("atoms");
            if (!a.is_array()) r.error("system.atoms", "expected a list of [position, mass] pairs");
            else
                for (const auto& p : a) {
                    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                        r.error("system.atoms", "expected [position, mass] pairs");
                        break;
                    }
                    m.atoms.emplace_back(p[0].get<double>(), p[1].get<double>());
                }
        }
        const auto cells = r.get<std::size_t>(j, "system", "density_cells", 0);
        if (cells > 0) m.density.assign(cells, 1.0);
        guard(r, "system", [&] { sc.model = SystemModel::spectral(m); });
    } else if (kind.empty()) {
        r.error("system.kind", "missing");
    } else {
        r.error("system.kind", "unknown system '" + kind + "'");
    }
    return sc;
}

Observable parse_observable(Reader& r, const json& j) {
    Observable f = Observable::fourier_mode(1);
    r.known_keys(j, "observable", {"kind", "mode", "a", "b", "terms"});
    if (!j.is_object()) {
        r.error("observable", "expected an object");
        return f;
    }
    const auto kind = r.get<std::string>(j, "observable", "kind", "");
    if (kind == "fourier_mode") {
        f = Observable::fourier_mode(r.get<std::int64_t>(j, "observable", "mode", 1));
    } else if (kind == "indicator") {
        const double a = r.get<double>(j, "observable", "a", 0.0), b = r.get<double>(j, "observable", "b", 0.5);
        guard(r, "observable", [&] { f = Observable::indicator(a, b); });
    } else if (kind == "finite_fourier") {
        std::vector<std::pair<std::int64_t, cplx>> terms;
        const json t = j.value("terms", json::array());
        for (const auto& e : t) {
            if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number() || !e[2].is_number()) {
                r.error("observable.terms", "expected [mode, re, im] triples");
                return f;
            }
            terms.emplace_back(e[0].get<std::int64_t>(), cplx(e[1].get<double>(), e[2].get<double>()));
        }
        guard(r, "observable.terms", [&] { f = Observable::finite_fourier(terms); });
    } else if (kind.empty()) {
        r.error("observable.kind", "missing");
    } else {
        r.error("observable.kind", "unknown observable '" + kind + "'");
    }
    return f;
}

NormalizerSpec parse_normalizer(Reader& r, const json& j) {
    NormalizerSpec n;
    r.known_keys(j, "normalizer", {"gamma", "a", "b", "k0"});
    if (!j.is_object()) {
        r.error("normalizer", "expected an object");
        return n;
    }
    n.gamma = r.get<double>(j, "normalizer", "gamma", 1.0);
    n.a = r.get<double>(j, "normalizer", "a", 0.0);
    n.b = r.get<double>(j, "normalizer", "b", 0.0);
    n.k0 = r.get<Index>(j, "normalizer", "k0", 0);
    guard(r, "normalizer", [&] { n.validate(); });
    return n;
}

BlockLadder parse_ladder(Reader& r, const json& j) {
    BlockLadder l;
    r.known_keys(j, "ladder", {"kind", "rho", "epsilon", "j_min", "j_max"});
    if (!j.is_object()) {
        r.error("ladder", "expected an object");
        return l;
    }
    const auto kind = r.get<std::string>(j, "ladder", "kind", "dyadic");
    guard(r, "ladder.kind", [&] { l.kind = ladder_kind_from_string(kind); });
    switch (l.kind) {
    case BlockLadder::Kind::dyadic: l = BlockLadder::dyadic(); break;
    case BlockLadder::Kind::doubly_exponential: l = BlockLadder::doubly_exponential(); break;
    case BlockLadder::Kind::rho: l = BlockLadder::rho_ladder(2.0, 0.5); break;
    case BlockLadder::Kind::rho_rho: l = BlockLadder::rho_rho_ladder(2.0, 0.5); break;
    }
    l.rho = r.get<double>(j, "ladder", "rho", l.rho);
    l.epsilon = r.get<double>(j, "ladder", "epsilon", l.epsilon);
    l.j_min = r.get<unsigned>(j, "ladder", "j_min", l.j_min);
    l.j_max = r.get<unsigned>(j, "ladder", "j_max", l.j_max);
    guard(r, "ladder", [&] { l.validate(); });
    return l;
}

std::vector<Index> parse_N(Reader& r, const json& doc) {
    if (!doc.contains("N")) return {};
    const json& v = doc.at("N");
    std::vector<Index> out;
    if (v.is_object()) {
        r.known_keys(v, "N", {"powers_of_two"});
        const auto range = r.list<unsigned>(v, "N", "powers_of_two");
        if (range.size() != 2 || range[0] > range[1] || range[1] > 40) {
            r.error("N.powers_of_two", "expected [lo, hi] with lo <= hi <= 40");
            return {};
        }
        for (unsigned e = range[0]; e <= range[1]; ++e) out.push_back(Index{1} << e);
    } else {
        out = r.list<Index>(doc, "", "N");
    }
    for (Index n : out)
        if (n < 1 || n > kMaxTerms) r.error("N", "values must lie in [1, " + std::to_string(kMaxTerms) + "]");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Kind kind_from_string(Reader& r, const std::string& s) {
    for (auto k : {Kind::envelope_scan, Kind::condition_fit, Kind::average_run, Kind::hilbert_run,
                   Kind::oscillation_run, Kind::preset}) {
        if (to_string(k) == s) return k;
    }
    r.error("kind", s.empty() ? "missing" : "unknown experiment kind '" + s + "'");
    return Kind::envelope_scan;
}

} // namespace

ExperimentConfig parse_config(const json& input, std::vector<Diagnostic>& diags) {
    Reader r(diags);
    ExperimentConfig cfg;
    if (!input.is_object()) {
        r.error("", "config must be a JSON object");
        return cfg;
    }
    json doc = input;
    const auto kind_name = r.get<std::string>(doc, "", "kind", "");
    cfg.kind = kind_from_string(r, kind_name);
    if (cfg.kind == Kind::preset) {
        const auto preset = r.get<std::string>(doc, "", "preset", "");
        const auto catalog = list_presets();
        const bool known = std::any_of(catalog.begin(), catalog.end(), [&](const auto& p) { return p.name == preset; });
        if (!known) {
            r.error("preset", preset.empty() ? "missing" : "unknown preset '" + preset + "'");
            return cfg;
        }
        doc = preset_document(preset, input);
        cfg.preset = preset;
    }
    r.known_keys(doc, "", {"name", "kind", "preset", "weights", "indices", "system", "observable", "normalizer",
                           "ladder", "N", "window_fractions", "grid", "seeds", "output", "templates", "harmonic",
                           "svg", "record_wall_time", "moments", "checkpoints", "h_values", "betas", "N_max"});
    cfg.name = r.get<std::string>(doc, "", "name", "");
    if (cfg.name.empty()) r.error("name", "missing");
    cfg.output = r.get<std::string>(doc, "", "output", cfg.name);
    if (cfg.output.find("..") != std::string::npos || (!cfg.output.empty() && cfg.output.front() == '/')) {
        r.error("output", "must be a relative path inside the output root");
    }

    const bool needs_envelope = cfg.kind == Kind::envelope_scan || cfg.kind == Kind::condition_fit;
    const bool needs_orbit = cfg.kind == Kind::average_run || cfg.kind == Kind::hilbert_run ||
                             cfg.kind == Kind::oscillation_run;

    if (doc.contains("weights")) cfg.weights = parse_weights(r, doc["weights"]);
    else if (needs_envelope || needs_orbit) r.error("weights", "missing");
    if (doc.contains("indices")) cfg.indices = parse_indices(r, doc["indices"]);
    else if (needs_envelope || needs_orbit) r.error("indices", "missing");
    if (doc.contains("system")) cfg.system = parse_system(r, doc["system"]);
    else if (needs_orbit) r.error("system", "missing");
    if (doc.contains("observable")) cfg.observable = parse_observable(r, doc["observable"]);
    else if (needs_orbit) r.error("observable", "missing");
    if (doc.contains("normalizer")) cfg.normalizer = parse_normalizer(r, doc["normalizer"]);
    else if (needs_orbit) r.error("normalizer", "missing");
    if (doc.contains("ladder")) cfg.ladder = parse_ladder(r, doc["ladder"]);

    cfg.N = parse_N(r, doc);
    if (needs_envelope && cfg.N.empty()) r.error("N", "envelope experiments need a nonempty N ladder");
    if (doc.contains("window_fractions")) cfg.window_fractions = r.list<double>(doc, "", "window_fractions");
    for (double f : cfg.window_fractions)
        if (!(f >= 0.0 && f < 1.0)) r.error("window_fractions", "fractions must lie in [0,1)");
    if (cfg.window_fractions.empty()) r.error("window_fractions", "must not be empty");

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        r.known_keys(g, "grid", {"points", "lo", "hi"});
        const auto pts = r.get<std::size_t>(g, "grid", "points", 0);
        const double lo = r.get<double>(g, "grid", "lo", 0.0), hi = r.get<double>(g, "grid", "hi", 1.0);
        guard(r, "grid", [&] { cfg.grid = make_grid(pts, lo, hi); });
    }

    cfg.seeds = r.list<std::uint64_t>(doc, "", "seeds");
    cfg.templates = r.list<std::string>(doc, "", "templates");
    for (const auto& t : cfg.templates) guard(r, "templates", [&] { template_from_string(t); });
    if (cfg.kind == Kind::condition_fit && cfg.templates.empty()) cfg.templates = {"H1", "H2"};
    cfg.harmonic = r.get<bool>(doc, "", "harmonic", false);
    cfg.svg = r.get<bool>(doc, "", "svg", true);
    cfg.record_wall_time = r.get<bool>(doc, "", "record_wall_time", false);
    cfg.moments = r.list<double>(doc, "", "moments");
    cfg.checkpoints = r.list<Index>(doc, "", "checkpoints");
    cfg.h_values = r.list<double>(doc, "", "h_values");
    for (double h : cfg.h_values)
        if (h == 0.0) r.error("h_values", "h must be nonzero");
    cfg.betas = r.list<double>(doc, "", "betas");
    for (double b : cfg.betas)
        if (!(b > 0.5 && b <= 1.0)) r.error("betas", "beta must lie in (1/2, 1]");
    cfg.N_max = r.get<Index>(doc, "", "N_max", 0);
    if (needs_orbit && cfg.N_max < 2) r.error("N_max", "orbit experiments need N_max >= 2");
    if (cfg.N_max > kMaxTerms) r.error("N_max", "must be <= " + std::to_string(kMaxTerms));
    for (Index c : cfg.checkpoints)
        if (cfg.N_max > 0 && c > cfg.N_max) r.error("checkpoints", "checkpoint " + std::to_string(c) + " exceeds N_max");

    if (cfg.stochastic() && cfg.seeds.empty()) {
        r.error("seeds", cfg.kind == Kind::preset ? "stochastic preset needs seeds" : "stochastic config needs seeds");
    }
    if (cfg.harmonic && needs_orbit && cfg.kind == Kind::hilbert_run) {
        r.error("harmonic", "hilbert runs take the 1/k factor from the normalizer");
    }
    if (needs_orbit || (cfg.kind == Kind::preset && cfg.N_max > 0)) {
        const Index first = std::max({cfg.weights.first_index(), cfg.indices.first_index(), cfg.normalizer.offset()});
        guard(r, "normalizer", [&] { cfg.normalizer.check_monotone(first + std::max<Index>(cfg.N_max, 2)); });
    }
    cfg.canonical = doc;
    return cfg;
}

std::vector<Diagnostic> validate(const json& doc) {
    std::vector<Diagnostic> diags;
    try {
        parse_config(doc, diags);
    } catch (const std::exception& e) {
        diags.push_back({"", e.what()});
    }
    return diags;
}

} // namespace wea::experiment
