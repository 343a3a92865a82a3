#pragma once

// Least-squares fits of the envelope templates
//   H1                 C N^delta (N-M)^alpha log^beta N
//   H2                 C N^alpha log^beta N
//   log_decay          C N / log^beta N
//   harmonic_H1        C (log N - log M)^alpha
//   harmonic_H2        C log^alpha N
//   harmonic_log_decay C log N / (log log N)^beta
// in log coordinates, with statistical verdicts (2 standard errors of slack).

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "wea/types.hpp"

namespace wea {

struct EnvelopeSample {
    Index M = 0;
    Index N = 0;
    double lower = 0.0;
    double upper = 0.0;
    bool harmonic = false;
};

enum class Template { H1, H2, log_decay, harmonic_H1, harmonic_H2, harmonic_log_decay };
enum class Verdict { satisfied, violated, inconclusive };

std::string to_string(Template t);
std::string to_string(Verdict v);
Template template_from_string(const std::string& name);

struct EnvelopeFit {
    Template tmpl = Template::H2;
    double C = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double se_logC = 0.0;
    double se_delta = 0.0;
    double se_alpha = 0.0;
    double se_beta = 0.0;
    double se_delta_plus_alpha = 0.0;  // H1 only
    double rms_residual = 0.0;         // log space
    Verdict verdict = Verdict::inconclusive;
    std::string classification;        // e.g. "theorem3_part1"
    std::vector<std::string> checks;   // inequalities tested, with their slack
    std::vector<std::string> notes;
    std::size_t samples = 0;
    std::size_t rejected = 0;          // samples dropped at ingestion (N < 3)
    Index N_min = 0;
    Index N_max = 0;
    bool collinear = false;            // log N vs log log N too close to separate
    bool restricted = false;           // beta pinned to 0 (see `full`)
    double aic = 0.0;

    /// H1/H2 only: the beta = 0 fit (when the primary fit is unrestricted)
    /// or the unrestricted fit (when the primary one is restricted).
    std::vector<EnvelopeFit> alternatives;
};

struct FitOptions {
    bool use_lower = false;  // fit SupEstimate.lower instead of .upper
};

EnvelopeFit fit_H2(const std::vector<EnvelopeSample>& samples, const FitOptions& opts = {});
EnvelopeFit fit_H1(const std::vector<EnvelopeSample>& samples, const FitOptions& opts = {});
EnvelopeFit fit_log_decay(const std::vector<EnvelopeSample>& samples, const FitOptions& opts = {});
/// tmpl is one of harmonic_H1, harmonic_H2, harmonic_log_decay.
EnvelopeFit fit_harmonic(const std::vector<EnvelopeSample>& samples, Template tmpl,
                         const FitOptions& opts = {});
EnvelopeFit fit_template(const std::vector<EnvelopeSample>& samples, Template tmpl,
                         const FitOptions& opts = {});

/// Both explanations of one data set, with AIC-penalized residuals. H1 with
/// delta = 0 implies H2, so ties are reported rather than resolved silently.
struct ConditionComparison {
    EnvelopeFit h1;
    EnvelopeFit h2;
    double aic_h1 = 0.0;
    double aic_h2 = 0.0;
    std::string preferred;
};
ConditionComparison compare_H1_H2(const std::vector<EnvelopeSample>& samples,
                                  const FitOptions& opts = {});

nlohmann::json to_json(const EnvelopeFit& fit);

/// Ordinary least squares with an intercept column supplied by the caller.
struct LinearFit {
    std::vector<double> coef;
    std::vector<std::vector<double>> cov;
    double rss = 0.0;
    double rms = 0.0;
    std::size_t rank = 0;
};
LinearFit least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y);

/// Largest variance inflation factor over the non-intercept columns.
double max_vif(const std::vector<std::vector<double>>& rows);

} // namespace wea
