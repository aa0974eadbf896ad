#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/io/csv.hpp"
#include "hystflow/series.hpp"

namespace hystflow::io {

enum class PlotKind { front, loop, profile };

inline const char* to_string(PlotKind k) {
    switch (k) {
    case PlotKind::front: return "front";
    case PlotKind::loop: return "loop";
    case PlotKind::profile: return "profile";
    }
    return "?";
}

namespace detail {

struct Curve {
    std::string label;
    const std::vector<double>* x = nullptr;
    const std::vector<double>* y = nullptr;
    bool dashed = false;
};

inline std::string fmt(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, r.ptr);
}

inline std::string tick(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
    return std::string(buf, r.ptr);
}

inline std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '&': o += "&amp;"; break;
        default: o += c;
        }
    }
    return o;
}

inline bool is_closed(const Curve& c) {
    const auto& x = *c.x;
    const auto& y = *c.y;
    const double sx = std::max(std::abs(x.front()), std::abs(x.back())) + 1.0;
    const double sy = std::max(std::abs(y.front()), std::abs(y.back())) + 1.0;
    return x.size() > 2 && std::abs(x.front() - x.back()) <= 1e-12 * sx && std::abs(y.front() - y.back()) <= 1e-12 * sy;
}

}  // namespace detail

/// Standalone SVG with axes, ticks and a legend. Every non-first column of
/// each series becomes a polyline against the series' first column. For the
/// front kind the measured R_supp and the envelope R_envelope are required;
/// other columns are ignored. Theoretical curves are drawn dashed.
inline std::string render_plot(std::span<const Series> set, PlotKind kind, const std::string& title = {}) {
    std::vector<detail::Curve> curves;
    for (const auto& s : set) {
        if (s.columns.size() < 2) continue;
        for (std::size_t k = 1; k < s.columns.size(); ++k) {
            const auto& name = s.names[k];
            if (kind == PlotKind::front && name != "R_supp" && name != "R_envelope" && name != "R") continue;
            const bool theory = name == "R_envelope" || name == "R" || name.rfind("limit_", 0) == 0
                                || name == "primary_wetting" || name == "exact";
            curves.push_back({name, &s.columns[0], &s.columns[k], theory});
        }
    }
    if (kind == PlotKind::front) {
        const bool measured = std::any_of(curves.begin(), curves.end(), [](auto& c) { return c.label == "R_supp"; });
        const bool theory = std::any_of(curves.begin(), curves.end(), [](auto& c) { return c.dashed; });
        if (!measured || !theory) throw DomainError("front plot needs both R_supp and R_envelope columns");
    }
    if (curves.empty()) throw DomainError("plot: nothing to draw");

    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& c : curves) {
        if (c.x->size() < 2) throw DomainError("plot: series '" + c.label + "' has a degenerate range (fewer than 2 points)");
        for (std::size_t i = 0; i < c.x->size(); ++i) {
            const double x = (*c.x)[i], y = (*c.y)[i];
            if (!std::isfinite(x) || !std::isfinite(y))
                throw DomainError("plot: non-finite value in '" + c.label + "' at index " + std::to_string(i));
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!(x1 > x0)) throw DomainError("plot: degenerate x range");
    if (!(y1 > y0)) {
        const double pad = std::max(std::abs(y0), 1.0) * 0.5;
        y0 -= pad;
        y1 += pad;
    }

    const double W = 720, H = 480, ml = 70, mr = 170, mt = 40, mb = 55;
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto Y = [&](double y) { return mt + (1.0 - (y - y0) / (y1 - y0)) * ph; };
    static constexpr std::array<const char*, 6> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" viewBox=\"0 0 720 480\">\n";
    o += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
    if (!title.empty())
        o += "<text x=\"" + detail::fmt(ml + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"15\">" + detail::escape(title) + "</text>\n";
    o += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    o += "<rect x=\"" + detail::fmt(ml) + "\" y=\"" + detail::fmt(mt) + "\" width=\"" + detail::fmt(pw) + "\" height=\""
         + detail::fmt(ph) + "\"/>\n";
    o += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = x0 + (x1 - x0) * i / 5.0;
        const double fy = y0 + (y1 - y0) * i / 5.0;
        o += "<line x1=\"" + detail::fmt(X(fx)) + "\" y1=\"" + detail::fmt(mt + ph) + "\" x2=\"" + detail::fmt(X(fx))
             + "\" y2=\"" + detail::fmt(mt + ph + 5) + "\" stroke=\"black\"/>";
        o += "<text x=\"" + detail::fmt(X(fx)) + "\" y=\"" + detail::fmt(mt + ph + 18)
             + "\" text-anchor=\"middle\">" + detail::tick(fx) + "</text>\n";
        o += "<line x1=\"" + detail::fmt(ml - 5) + "\" y1=\"" + detail::fmt(Y(fy)) + "\" x2=\"" + detail::fmt(ml)
             + "\" y2=\"" + detail::fmt(Y(fy)) + "\" stroke=\"black\"/>";
        o += "<text x=\"" + detail::fmt(ml - 8) + "\" y=\"" + detail::fmt(Y(fy) + 4) + "\" text-anchor=\"end\">"
             + detail::tick(fy) + "</text>\n";
    }
    const std::string xl = kind == PlotKind::front ? "t" : (kind == PlotKind::loop ? "u" : "z");
    const std::string yl = kind == PlotKind::front ? "radius" : (kind == PlotKind::loop ? "theta" : "U");
    o += "<text x=\"" + detail::fmt(ml + pw / 2) + "\" y=\"" + detail::fmt(H - 12) + "\" text-anchor=\"middle\">" + xl
         + "</text>\n";
    o += "<text x=\"18\" y=\"" + detail::fmt(mt + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
         + detail::fmt(mt + ph / 2) + ")\">" + yl + "</text>\n</g>\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& cv = curves[c];
        const char* color = colors[c % colors.size()];
        std::string d;
        for (std::size_t i = 0; i < cv.x->size(); ++i) {
            d += i == 0 ? "M" : " L";
            d += detail::fmt(X((*cv.x)[i])) + "," + detail::fmt(Y((*cv.y)[i]));
        }
        if (kind == PlotKind::loop && detail::is_closed(cv)) d += " Z";
        o += "<path class=\"curve\" data-label=\"" + detail::escape(cv.label) + "\" d=\"" + d
             + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.6\""
             + (cv.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
        const double ly = mt + 14 + 18.0 * static_cast<double>(c);
        o += "<line x1=\"" + detail::fmt(W - mr + 12) + "\" y1=\"" + detail::fmt(ly) + "\" x2=\"" + detail::fmt(W - mr + 40)
             + "\" y2=\"" + detail::fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"1.6\""
             + (cv.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>";
        o += "<text x=\"" + detail::fmt(W - mr + 46) + "\" y=\"" + detail::fmt(ly + 4)
             + "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape(cv.label) + "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

inline void emit_plot(std::span<const Series> set, PlotKind kind, const std::filesystem::path& path,
                      const std::string& title = {}) {
    write_text(path, render_plot(set, kind, title));
}

}  // namespace hystflow::io
