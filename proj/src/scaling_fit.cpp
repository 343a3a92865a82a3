#include "wea/scaling_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "wea/error.hpp"

namespace wea {

std::string to_string(Template t) {
    switch (t) {
    case Template::H1: return "H1";
    case Template::H2: return "H2";
    case Template::log_decay: return "log_decay";
    case Template::harmonic_H1: return "harmonic_H1";
    case Template::harmonic_H2: return "harmonic_H2";
    case Template::harmonic_log_decay: return "harmonic_log_decay";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

Template template_from_string(const std::string& name) {
    for (auto t : {Template::H1, Template::H2, Template::log_decay, Template::harmonic_H1,
                   Template::harmonic_H2, Template::harmonic_log_decay}) {
        if (to_string(t) == name) return t;
    }
    throw ValidationError("unknown fit template '" + name + "'");
}

LinearFit least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
    if (rows.empty() || rows.size() != y.size()) throw ShapeError("least_squares: bad design");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd Y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        Y(i) = y[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    LinearFit out;
    out.rank = static_cast<std::size_t>(qr.rank());
    const Eigen::VectorXd beta = qr.solve(Y);
    const Eigen::VectorXd resid = Y - X * beta;
    out.rss = resid.squaredNorm();
    out.rms = std::sqrt(out.rss / static_cast<double>(n));
    out.coef.assign(beta.data(), beta.data() + p);
    out.cov.assign(static_cast<std::size_t>(p), std::vector<double>(static_cast<std::size_t>(p), 0.0));
    if (out.rank == static_cast<std::size_t>(p)) {
        const double sigma2 = n > p ? out.rss / static_cast<double>(n - p) : 0.0;
        const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < p; ++j)
                out.cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sigma2 * xtx_inv(i, j);
    }
    return out;
}

double max_vif(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().size() < 3) return 1.0;
    const std::size_t p = rows.front().size() - 1;  // skip the intercept
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd Z(n, static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) Z(i, static_cast<Eigen::Index>(j)) = rows[static_cast<std::size_t>(i)][j + 1];
    const Eigen::RowVectorXd mean = Z.colwise().mean();
    Z.rowwise() -= mean;
    Eigen::VectorXd sd = (Z.colwise().squaredNorm()).cwiseSqrt();
    for (Eigen::Index j = 0; j < sd.size(); ++j) {
        if (sd(j) == 0.0) return std::numeric_limits<double>::infinity();
        Z.col(j) /= sd(j);
    }
    const Eigen::MatrixXd R = Z.transpose() * Z;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
    if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
    return lu.inverse().diagonal().maxCoeff();
}

namespace {

constexpr double kVifLimit = 100.0;

struct Point {
    double logN, logNM, loglogN, value;
    Index M, N;
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

std::string interval_check(const std::string& name, double est, double se, const std::string& set) {
    return name + " in " + set + ": " + fmt(est) + " +/- 2*" + fmt(se);
}

// The fitted value is admissible when its 2-stderr interval meets [lo, hi]
// (open ends excluded).
bool admissible(double est, double se, double lo, bool lo_open, double hi, bool hi_open) {
    const double a = est - 2.0 * se, b = est + 2.0 * se;
    const bool above = lo_open ? b > lo : b >= lo;
    const bool below = hi_open ? a < hi : a <= hi;
    return above && below;
}

std::vector<Point> ingest(const std::vector<EnvelopeSample>& samples, const FitOptions& opts,
                          EnvelopeFit& fit) {
    std::vector<Point> pts;
    for (const auto& s : samples) {
        const double v = opts.use_lower ? s.lower : s.upper;
        if (s.N < 3 || s.N <= s.M || !(v > 0.0)) {
            ++fit.rejected;
            continue;
        }
        const double logN = std::log(static_cast<double>(s.N));
        pts.push_back({logN, std::log(static_cast<double>(s.N - s.M)), std::log(logN), std::log(v), s.M, s.N});
    }
    fit.samples = pts.size();
    if (!pts.empty()) {
        fit.N_min = std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.N < b.N; })->N;
        fit.N_max = std::max_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.N < b.N; })->N;
    }
    if (fit.rejected > 0) fit.notes.push_back(std::to_string(fit.rejected) + " samples rejected (N < 3, N <= M or nonpositive sup)");
    return pts;
}

double octaves(double log_lo, double log_hi) { return (log_hi - log_lo) / std::log(2.0); }

double aic(double rss, std::size_t n, std::size_t p) {
    const double r = std::max(rss, 1e-300);
    return static_cast<double>(n) * std::log(r / static_cast<double>(n)) + 2.0 * static_cast<double>(p);
}

double se_of(const LinearFit& f, std::size_t i) { return std::sqrt(std::max(0.0, f.cov[i][i])); }

// Fits log sup on [1, log N, (log log N)] for H2-type models.
EnvelopeFit h2_core(const std::vector<Point>& pts, bool with_beta, EnvelopeFit base) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (const auto& p : pts) {
        rows.push_back(with_beta ? std::vector<double>{1.0, p.logN, p.loglogN} : std::vector<double>{1.0, p.logN});
        y.push_back(p.value);
    }
    const auto lf = least_squares(rows, y);
    EnvelopeFit f = std::move(base);
    f.C = std::exp(lf.coef[0]);
    f.se_logC = se_of(lf, 0);
    f.alpha = lf.coef[1];
    f.se_alpha = se_of(lf, 1);
    f.beta = with_beta ? lf.coef[2] : 0.0;
    f.se_beta = with_beta ? se_of(lf, 2) : 0.0;
    f.rms_residual = lf.rms;
    f.restricted = !with_beta;
    f.aic = aic(lf.rss, pts.size(), rows.front().size());
    if (lf.rank < rows.front().size()) f.notes.push_back("rank-deficient design");
    return f;
}

EnvelopeFit h1_core(const std::vector<Point>& pts, bool with_beta, EnvelopeFit base, std::size_t& rank_out,
                    std::size_t& cols_out) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (const auto& p : pts) {
        if (with_beta) rows.push_back({1.0, p.logN, p.logNM, p.loglogN});
        else rows.push_back({1.0, p.logN, p.logNM});
        y.push_back(p.value);
    }
    const auto lf = least_squares(rows, y);
    rank_out = lf.rank;
    cols_out = rows.front().size();
    EnvelopeFit f = std::move(base);
    f.C = std::exp(lf.coef[0]);
    f.se_logC = se_of(lf, 0);
    f.delta = lf.coef[1];
    f.se_delta = se_of(lf, 1);
    f.alpha = lf.coef[2];
    f.se_alpha = se_of(lf, 2);
    f.se_delta_plus_alpha = std::sqrt(std::max(0.0, lf.cov[1][1] + lf.cov[2][2] + 2.0 * lf.cov[1][2]));
    f.beta = with_beta ? lf.coef[3] : 0.0;
    f.se_beta = with_beta ? se_of(lf, 3) : 0.0;
    f.rms_residual = lf.rms;
    f.restricted = !with_beta;
    f.aic = aic(lf.rss, pts.size(), cols_out);
    return f;
}

void h2_verdict(EnvelopeFit& f) {
    f.checks = {interval_check("alpha", f.alpha, f.se_alpha, "[1/2, 1]")};
    const bool ok = admissible(f.alpha, f.se_alpha, 0.5, false, 1.0, false);
    f.verdict = ok ? Verdict::satisfied : Verdict::violated;
    if (ok) f.classification = f.alpha - 2.0 * f.se_alpha < 1.0 ? "theorem2" : "H2_alpha_1";
}

void h1_verdict(EnvelopeFit& f) {
    f.checks = {interval_check("delta + alpha", f.delta + f.alpha, f.se_delta_plus_alpha, "(-inf, 1)"),
                interval_check("alpha", f.alpha, f.se_alpha, "[1/2, 1)"),
                interval_check("delta", f.delta, f.se_delta, "[0, inf)")};
    const bool ok = admissible(f.delta + f.alpha, f.se_delta_plus_alpha, -1e300, false, 1.0, true) &&
                    admissible(f.alpha, f.se_alpha, 0.5, false, 1.0, true) &&
                    admissible(f.delta, f.se_delta, 0.0, false, 1e300, false);
    f.verdict = ok ? Verdict::satisfied : Verdict::violated;
    if (ok) f.classification = "theorem1";
}

// beta classification shared by the N / log^beta N templates.
void decay_verdict(EnvelopeFit& f, const std::string& part1, const std::string& part2) {
    f.checks = {interval_check("beta", f.beta, f.se_beta, "(1/2, inf)")};
    const bool ok = admissible(f.beta, f.se_beta, 0.5, true, 1e300, false);
    f.verdict = ok ? Verdict::satisfied : Verdict::violated;
    if (f.beta > 1.0) f.classification = part1;
    else if (f.beta > 0.5) f.classification = part2;
    else f.classification = "none";
}

bool enough_h2_data(const std::vector<Point>& all, std::vector<Point>& pts, EnvelopeFit& f) {
    for (const auto& p : all)
        if (p.M == 0) pts.push_back(p);
    if (pts.size() < 6) {
        f.notes.push_back("needs >= 6 samples with M = 0");
        return false;
    }
    const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.logN < b.logN; });
    if (octaves(lo->logN, hi->logN) < 3.0) {
        f.notes.push_back("N range spans fewer than 3 octaves");
        return false;
    }
    return true;
}

} // namespace

EnvelopeFit fit_H2(const std::vector<EnvelopeSample>& samples, const FitOptions& opts) {
    EnvelopeFit base;
    base.tmpl = Template::H2;
    const auto all = ingest(samples, opts, base);
    std::vector<Point> pts;
    if (!enough_h2_data(all, pts, base)) return base;
    base.samples = pts.size();

    std::vector<std::vector<double>> design;
    for (const auto& p : pts) design.push_back({1.0, p.logN, p.loglogN});
    const bool collinear = max_vif(design) > kVifLimit;

    auto full = h2_core(pts, true, base);
    auto restricted = h2_core(pts, false, base);
    h2_verdict(full);
    h2_verdict(restricted);
    EnvelopeFit primary = collinear ? restricted : full;
    primary.collinear = collinear;
    if (collinear) primary.notes.push_back("log N and log log N collinear over the sampled range: beta pinned to 0");
    primary.alternatives.push_back(collinear ? full : restricted);
    return primary;
}

EnvelopeFit fit_H1(const std::vector<EnvelopeSample>& samples, const FitOptions& opts) {
    EnvelopeFit base;
    base.tmpl = Template::H1;
    const auto pts = ingest(samples, opts, base);
    if (pts.size() < 12) {
        base.notes.push_back("needs >= 12 samples");
        return base;
    }
    const auto [nlo, nhi] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.logN < b.logN; });
    const auto [mlo, mhi] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.logNM < b.logNM; });
    if (octaves(nlo->logN, nhi->logN) < 3.0 || octaves(mlo->logNM, mhi->logNM) < 3.0) {
        base.notes.push_back("N or N - M spans fewer than 3 octaves");
        return base;
    }
    std::size_t rank = 0, cols = 0;
    auto restricted = h1_core(pts, false, base, rank, cols);
    if (rank < cols) {
        base.notes.push_back("(log N, log(N - M)) design is rank-deficient");
        return base;
    }
    auto full = h1_core(pts, true, base, rank, cols);
    std::vector<std::vector<double>> design;
    for (const auto& p : pts) design.push_back({1.0, p.logN, p.logNM, p.loglogN});
    const bool collinear = rank < cols || max_vif(design) > kVifLimit;
    h1_verdict(restricted);
    if (rank == cols) h1_verdict(full);

    EnvelopeFit primary = collinear ? restricted : full;
    primary.collinear = collinear;
    if (collinear) primary.notes.push_back("log log N collinear with (log N, log(N - M)): beta pinned to 0");
    primary.alternatives.push_back(collinear ? full : restricted);
    return primary;
}

EnvelopeFit fit_log_decay(const std::vector<EnvelopeSample>& samples, const FitOptions& opts) {
    EnvelopeFit f;
    f.tmpl = Template::log_decay;
    const auto all = ingest(samples, opts, f);
    std::vector<Point> pts;
    if (!enough_h2_data(all, pts, f)) return f;
    f.samples = pts.size();
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (const auto& p : pts) {
        rows.push_back({1.0, p.loglogN});
        y.push_back(p.value - p.logN);
    }
    const auto lf = least_squares(rows, y);
    f.C = std::exp(lf.coef[0]);
    f.se_logC = se_of(lf, 0);
    f.alpha = 1.0;
    f.beta = -lf.coef[1];
    f.se_beta = se_of(lf, 1);
    f.rms_residual = lf.rms;
    f.aic = aic(lf.rss, pts.size(), 2);
    decay_verdict(f, "theorem3_part1", "theorem3_part2");
    return f;
}

EnvelopeFit fit_harmonic(const std::vector<EnvelopeSample>& samples, Template tmpl, const FitOptions& opts) {
    if (tmpl != Template::harmonic_H1 && tmpl != Template::harmonic_H2 && tmpl != Template::harmonic_log_decay) {
        throw ParameterError("fit_harmonic: not a harmonic template");
    }
    EnvelopeFit f;
    f.tmpl = tmpl;
    auto pts = ingest(samples, opts, f);
    if (tmpl == Template::harmonic_log_decay) {
        std::erase_if(pts, [&](const Point& p) { return p.N < 16; });
    }
    if (tmpl == Template::harmonic_H1) {
        std::erase_if(pts, [&](const Point& p) { return p.M < 1; });
    }
    f.samples = pts.size();
    if (pts.size() < 6) {
        f.notes.push_back("needs >= 6 usable samples");
        return f;
    }
    const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.loglogN < b.loglogN; });
    if (hi->loglogN - lo->loglogN < 1.0) {
        f.notes.push_back("log log N varies by less than 1 over the samples");
        return f;
    }
    f.N_min = std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.N < b.N; })->N;
    f.N_max = std::max_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.N < b.N; })->N;

    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (const auto& p : pts) {
        switch (tmpl) {
        case Template::harmonic_H1:
            rows.push_back({1.0, std::log(p.logN - std::log(static_cast<double>(p.M)))});
            y.push_back(p.value);
            break;
        case Template::harmonic_H2:
            rows.push_back({1.0, p.loglogN});
            y.push_back(p.value);
            break;
        default:
            rows.push_back({1.0, std::log(p.loglogN)});
            y.push_back(p.value - p.loglogN);
            break;
        }
    }
    const auto lf = least_squares(rows, y);
    f.C = std::exp(lf.coef[0]);
    f.se_logC = se_of(lf, 0);
    f.rms_residual = lf.rms;
    f.aic = aic(lf.rss, pts.size(), 2);
    if (tmpl == Template::harmonic_log_decay) {
        f.beta = -lf.coef[1];
        f.se_beta = se_of(lf, 1);
        decay_verdict(f, "theorem6_part1", "theorem6_part2");
        return f;
    }
    f.alpha = lf.coef[1];
    f.se_alpha = se_of(lf, 1);
    if (tmpl == Template::harmonic_H1) {
        f.checks = {interval_check("alpha", f.alpha, f.se_alpha, "[1/2, 1)")};
        f.verdict = admissible(f.alpha, f.se_alpha, 0.5, false, 1.0, true) ? Verdict::satisfied : Verdict::violated;
        if (f.verdict == Verdict::satisfied) f.classification = "theorem4";
    } else {
        f.checks = {interval_check("alpha", f.alpha, f.se_alpha, "[0, 1)")};
        f.verdict = admissible(f.alpha, f.se_alpha, 0.0, false, 1.0, true) ? Verdict::satisfied : Verdict::violated;
        if (f.verdict == Verdict::satisfied) f.classification = "theorem5";
    }
    return f;
}

EnvelopeFit fit_template(const std::vector<EnvelopeSample>& samples, Template tmpl, const FitOptions& opts) {
    switch (tmpl) {
    case Template::H1: return fit_H1(samples, opts);
    case Template::H2: return fit_H2(samples, opts);
    case Template::log_decay: return fit_log_decay(samples, opts);
    default: return fit_harmonic(samples, tmpl, opts);
    }
}

ConditionComparison compare_H1_H2(const std::vector<EnvelopeSample>& samples, const FitOptions& opts) {
    ConditionComparison out;
    out.h1 = fit_H1(samples, opts);
    // H2 model evaluated on the same (M, N) data: M is ignored.
    EnvelopeFit base;
    base.tmpl = Template::H2;
    const auto pts = ingest(samples, opts, base);
    if (pts.size() >= 3) {
        out.h2 = h2_core(pts, !out.h1.restricted, base);
        h2_verdict(out.h2);
    } else {
        out.h2 = base;
    }
    out.aic_h1 = out.h1.aic;
    out.aic_h2 = out.h2.aic;
    if (out.h1.verdict == Verdict::inconclusive) out.preferred = "H2";
    else out.preferred = out.aic_h1 + 2.0 < out.aic_h2 ? "H1" : (out.aic_h2 + 2.0 < out.aic_h1 ? "H2" : "tie");
    return out;
}

nlohmann::json to_json(const EnvelopeFit& fit) {
    nlohmann::json j;
    j["template"] = to_string(fit.tmpl);
    j["parameters"] = {{"C", fit.C}, {"delta", fit.delta}, {"alpha", fit.alpha}, {"beta", fit.beta}};
    j["stderr"] = {{"log_C", fit.se_logC}, {"delta", fit.se_delta}, {"alpha", fit.se_alpha}, {"beta", fit.se_beta}};
    if (fit.tmpl == Template::H1) j["stderr"]["delta_plus_alpha"] = fit.se_delta_plus_alpha;
    j["rms_residual"] = fit.rms_residual;
    j["verdict"] = to_string(fit.verdict);
    j["classification"] = fit.classification;
    j["checks"] = fit.checks;
    j["notes"] = fit.notes;
    j["sample_count"] = fit.samples;
    j["N_range"] = {fit.N_min, fit.N_max};
    j["collinear"] = fit.collinear;
    j["restricted"] = fit.restricted;
    j["aic"] = fit.aic;
    if (!fit.alternatives.empty()) {
        j["alternatives"] = nlohmann::json::array();
        for (const auto& a : fit.alternatives) j["alternatives"].push_back(to_json(a));
    }
    return j;
}

} // namespace wea
