#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>

namespace germflow::cli {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0, kMargin = 56.0;

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % 10];
}

void append(std::string& out, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    out += buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void take(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool ok() const { return lo < hi; }
    double map(double v, double out_lo, double out_hi) const {
        if (!ok()) return (out_lo + out_hi) / 2.0;
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

std::string document(const std::string& title, const std::string& body) {
    std::string out;
    append(out,
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
           "viewBox=\"0 0 %g %g\">\n",
           kWidth, kHeight, kWidth, kHeight);
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    append(out, "<text x=\"%g\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">%s</text>\n",
           kMargin, title.c_str());
    out += body;
    out += "</svg>\n";
    return out;
}

}  // namespace

std::string render_loglog_svg(const std::string& title, const std::vector<LogLogSeries>& series) {
    Range rx, ry;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points)
            if (x > 0.0 && y > 0.0 && std::isfinite(y)) {
                rx.take(std::log10(x));
                ry.take(std::log10(y));
            }

    std::string body;
    append(body,
           "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#444\"/>\n",
           kMargin, kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin);

    if (rx.ok() && ry.ok()) {
        for (int tick = 0; tick <= 4; ++tick) {
            const double fx = rx.lo + (rx.hi - rx.lo) * tick / 4.0;
            const double fy = ry.lo + (ry.hi - ry.lo) * tick / 4.0;
            const double px = rx.map(fx, kMargin, kWidth - kMargin);
            const double py = ry.map(fy, kHeight - kMargin, kMargin);
            append(body,
                   "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"10\" "
                   "text-anchor=\"middle\">1e%.1f</text>\n",
                   px, kHeight - kMargin + 16.0, fx);
            append(body,
                   "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"10\" "
                   "text-anchor=\"end\">1e%.1f</text>\n",
                   kMargin - 6.0, py + 3.0, fy);
        }
        for (std::size_t i = 0; i < series.size(); ++i) {
            std::string path;
            bool first = true;
            for (const auto& [x, y] : series[i].points) {
                if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(y)) continue;
                const double px = rx.map(std::log10(x), kMargin, kWidth - kMargin);
                const double py = ry.map(std::log10(y), kHeight - kMargin, kMargin);
                char seg[64];
                std::snprintf(seg, sizeof seg, "%c%.2f %.2f ", first ? 'M' : 'L', px, py);
                path += seg;
                first = false;
            }
            if (!path.empty())
                append(body, "<path d=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1\"/>\n",
                       path.c_str(), palette(i));
        }
    } else {
        append(body,
               "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\">no positive "
               "samples</text>\n",
               kWidth / 2 - 60, kHeight / 2);
    }
    append(body,
           "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">log10 s</text>\n",
           kWidth / 2 - 20, kHeight - 12.0);
    return document(title, body);
}

std::string render_scatter_svg(const std::string& title, const std::vector<ScatterGroup>& groups) {
    Range rx, ry;
    for (const auto& g : groups)
        for (const auto& [x, y] : g.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            rx.take(x);
            ry.take(y);
        }
    if (rx.ok()) {
        const double pad = 0.08 * (rx.hi - rx.lo + 1e-12);
        rx.lo -= pad;
        rx.hi += pad;
    }
    if (ry.ok()) {
        const double pad = 0.08 * (ry.hi - ry.lo + 1e-12);
        ry.lo -= pad;
        ry.hi += pad;
    }

    std::string body;
    append(body,
           "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#444\"/>\n",
           kMargin, kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin);
    double legend_y = kMargin + 14.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const ScatterGroup& g = groups[i];
        const char* color = g.color.empty() ? palette(i) : g.color.c_str();
        for (const auto& [x, y] : g.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            append(body, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\" fill-opacity=\"0.7\"/>\n",
                   rx.map(x, kMargin, kWidth - kMargin), ry.map(y, kHeight - kMargin, kMargin),
                   color);
        }
        append(body,
               "<circle cx=\"%g\" cy=\"%g\" r=\"4\" fill=\"%s\"/>"
               "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">%s</text>\n",
               kWidth - kMargin - 130.0, legend_y, color, kWidth - kMargin - 120.0, legend_y + 4.0,
               g.label.c_str());
        legend_y += 16.0;
    }
    return document(title, body);
}

}  // namespace germflow::cli
