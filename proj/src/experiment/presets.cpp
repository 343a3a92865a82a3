#include "wea/error.hpp"
#include "wea/experiment.hpp"

namespace wea::experiment {

using nlohmann::json;

std::vector<PresetInfo> list_presets() {
    return {
        {"example1", "Theorem 2, Corollary 2",
         "envelope of e^{2i pi k^delta} along u = k^d (delta = 1.5, d = 1) against the van der Corput exponent", false,
         false},
        {"example2", "Theorem 2, Corollary 2",
         "envelope of e^{2i pi sqrt k} with u = k, then normalized averages along an irrational rotation", false,
         false},
        {"example3", "Theorem 5, Remark 7",
         "harmonic envelope of e^{2i pi h log k} / k against 30(|h| + 1/|h|), with Hilbert partial sums", false,
         false},
        {"example4", "Theorem 1, Theorem 3",
         "i.i.d. uniform phases: windowed envelopes fitted to the (M, N) template, averages normalized by N", true,
         false},
        {"example5", "Theorem 6", "harmonic i.i.d. uniform phases: log N envelope fits and averages normalized by log N",
         true, false},
        {"example6", "Theorem 1",
         "Cramer random primes: Pi(N) log N / N table and averages along u_k normalized by N^beta", true, false},
        {"prime_question", "open question (exploratory)",
         "averages along the true primes normalized by N^beta for beta in (1/2, 1]", false, true},
    };
}

namespace {

json rotation_system() { return {{"kind", "rotation"}, {"theta0", "sqrt2_minus_1"}, {"x0", json::array({0.0})}}; }
json mode1() { return {{"kind", "fourier_mode"}, {"mode", 1}}; }

json defaults_for(const std::string& name) {
    if (name == "example1") {
        return {{"weights", {{"kind", "power_phase"}, {"delta", 1.5}}},
                {"indices", {{"kind", "monomial"}, {"degree", 1}}},
                {"N", {{"powers_of_two", {8, 15}}}},
                {"templates", {"H2"}}};
    }
    if (name == "example2") {
        return {{"weights", {{"kind", "power_phase"}, {"delta", 0.5}}},
                {"indices", {{"kind", "identity"}}},
                {"N", {{"powers_of_two", {10, 17}}}},
                {"templates", {"H2"}},
                {"system", rotation_system()},
                {"observable", mode1()},
                {"normalizer", {{"gamma", 0.875}, {"a", 2.0}, {"b", 0.0}}},
                {"ladder", {{"kind", "dyadic"}}},
                {"N_max", 1000000},
                {"checkpoints", {1000, 1000000}}};
    }
    if (name == "example3") {
        return {{"weights", {{"kind", "log_phase"}, {"h", 1.0}}},
                {"indices", {{"kind", "identity"}}},
                {"harmonic", true},
                {"h_values", {0.5, 1.0, 2.0}},
                {"N", {64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384, 32768, 65536, 100000}},
                {"templates", {"harmonic_H2"}},
                {"system", rotation_system()},
                {"observable", mode1()},
                {"normalizer", {{"gamma", 1.0}, {"a", 0.0}, {"b", 0.0}}},
                {"N_max", 100000}};
    }
    if (name == "example4") {
        return {{"weights", {{"kind", "iid_uniform_phase"}}},
                {"indices", {{"kind", "identity"}}},
                {"seeds", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
                {"N", {{"powers_of_two", {8, 16}}}},
                {"window_fractions", {0.0, 0.25, 0.5, 0.75}},
                {"templates", {"H1", "H2"}},
                {"system", rotation_system()},
                {"observable", mode1()},
                {"normalizer", {{"gamma", 1.0}, {"a", 0.0}, {"b", 0.0}}},
                {"N_max", 100000},
                {"checkpoints", {1000, 100000}}};
    }
    if (name == "example5") {
        return {{"weights", {{"kind", "iid_uniform_phase"}}},
                {"indices", {{"kind", "identity"}}},
                {"harmonic", true},
                {"seeds", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
                {"N", {{"powers_of_two", {6, 16}}}},
                {"templates", {"harmonic_H2", "harmonic_log_decay"}},
                {"system", rotation_system()},
                {"observable", mode1()},
                {"normalizer", {{"gamma", 0.0}, {"a", 1.0}, {"b", 0.0}}},
                {"N_max", 100000},
                {"checkpoints", {1000, 100000}}};
    }
    if (name == "example6") {
        json seeds = json::array();
        for (int s = 1; s <= 20; ++s) seeds.push_back(s);
        return {{"weights", {{"kind", "constant"}}},
                {"indices", {{"kind", "cramer_primes"}}},
                {"seeds", seeds},
                {"system", rotation_system()},
                {"observable", mode1()},
                {"normalizer", {{"gamma", 0.75}, {"a", 0.0}, {"b", 0.0}}},
                {"betas", {0.75}},
                {"N", {1000, 10000, 100000, 1000000}},
                {"N_max", 1000000},
                {"checkpoints", {10000, 1000000}}};
    }
    if (name == "prime_question") {
        return {{"weights", {{"kind", "constant"}}},
                {"indices", {{"kind", "primes"}}},
                {"system", rotation_system()},
                {"observable", mode1()},
                {"normalizer", {{"gamma", 0.75}, {"a", 0.0}, {"b", 0.0}}},
                {"betas", {0.6, 0.75, 1.0}},
                {"N_max", 1000000},
                {"checkpoints", {10000, 1000000}}};
    }
    throw ValidationError("unknown preset '" + name + "'");
}

} // namespace

json preset_document(const std::string& name, const json& overrides) {
    json doc = defaults_for(name);
    doc["name"] = name;
    doc["kind"] = "preset";
    doc["preset"] = name;
    doc["output"] = name;
    if (overrides.is_object()) doc.merge_patch(overrides);
    return doc;
}

} // namespace wea::experiment
