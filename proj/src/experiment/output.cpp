#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include <openssl/evp.h>

#include "wea/error.hpp"
#include "wea/experiment.hpp"

namespace wea::experiment {

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("runtime", "sha256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_.push_back(',');
        buf_ += header[i];
    }
    buf_.push_back('\n');
}

CsvWriter& CsvWriter::row() {
    if (!first_ || buf_.back() != '\n') buf_.push_back('\n');
    first_ = true;
    return *this;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
    if (!first_) buf_.push_back(',');
    buf_ += s;
    first_ = false;
    return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(fmt_double(x)); }
CsvWriter& CsvWriter::cell(std::uint64_t x) { return cell(std::to_string(x)); }
CsvWriter& CsvWriter::cell(std::int64_t x) { return cell(std::to_string(x)); }

std::string CsvWriter::str() const {
    std::string s = buf_;
    if (s.back() != '\n') s.push_back('\n');
    return s;
}

namespace {

std::string fixed(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

std::string svg_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series) {
    constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x); x1 = std::max(x1, x);
            y0 = std::min(y0, y); y1 = std::max(y1, y);
        }
    if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
    if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(W) + "\" height=\"" + fixed(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fixed(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) + "</text>\n";
    s += "<path d=\"M" + fixed(L) + " " + fixed(T) + " V" + fixed(H - B) + " H" + fixed(W - R) +
         "\" stroke=\"black\" fill=\"none\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
        s += "<text x=\"" + fixed(px(xv)) + "\" y=\"" + fixed(H - B + 16) + "\" text-anchor=\"middle\" font-size=\"11\">" +
             fixed(xv) + "</text>\n";
        s += "<text x=\"" + fixed(L - 6) + "\" y=\"" + fixed(py(yv) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
             fixed(yv) + "</text>\n";
    }
    s += "<text x=\"" + fixed(W / 2) + "\" y=\"" + fixed(H - 10) + "\" text-anchor=\"middle\" font-size=\"12\">" +
         escape(x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + fixed(H / 2) + "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fixed(H / 2) + ")\">" + escape(y_label) + "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = colors[k % 7];
        std::string d;
        for (const auto& [x, y] : series[k].points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            d += (d.empty() ? "M" : " L") + fixed(px(x)) + " " + fixed(py(y));
        }
        if (!d.empty()) s += "<path d=\"" + d + "\" stroke=\"" + color + "\" fill=\"none\" stroke-width=\"1.5\"/>\n";
        s += "<text x=\"" + fixed(L + 10) + "\" y=\"" + fixed(T + 14 + 14.0 * static_cast<double>(k)) + "\" fill=\"" + color +
             "\" font-size=\"11\">" + escape(series[k].label) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace wea::experiment
