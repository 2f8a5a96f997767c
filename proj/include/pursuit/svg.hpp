#pragma once

// Minimal SVG renderers for trajectories and zone maps.

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "episode.hpp"
#include "format.hpp"
#include "zone.hpp"

namespace pursuit {

namespace detail {

// Maps a data-space rectangle onto a square canvas with y pointing up.
struct Viewport {
    double x0, x1, y0, y1;
    double size = 600, margin = 50;

    double px(double x) const { return margin + (x - x0) / (x1 - x0) * (size - 2 * margin); }
    double py(double y) const { return size - margin - (y - y0) / (y1 - y0) * (size - 2 * margin); }
};

inline void svg_open(std::ostream& os, double size) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
       << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline void polyline(std::ostream& os, const Viewport& vp, const std::vector<Vec2>& pts, const char* color) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : pts) os << fmt9(vp.px(p.x)) << ',' << fmt9(vp.py(p.y)) << ' ';
    os << "\"/>\n";
}

inline void axes_frame(std::ostream& os, const Viewport& vp, const char* xlabel, const char* ylabel) {
    const double lo = vp.margin, hi = vp.size - vp.margin;
    os << "<rect x=\"" << lo << "\" y=\"" << lo << "\" width=\"" << hi - lo << "\" height=\"" << hi - lo
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << vp.size / 2 << "\" y=\"" << vp.size - 12 << "\" text-anchor=\"middle\" font-size=\"14\">"
       << xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << vp.size / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 "
       << vp.size / 2 << ")\">" << ylabel << "</text>\n";
    os << "<text x=\"" << lo << "\" y=\"" << hi + 16 << "\" font-size=\"11\">" << fmt9(vp.x0) << "</text>\n"
       << "<text x=\"" << hi << "\" y=\"" << hi + 16 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt9(vp.x1)
       << "</text>\n"
       << "<text x=\"" << lo - 4 << "\" y=\"" << hi << "\" font-size=\"11\" text-anchor=\"end\">" << fmt9(vp.y0)
       << "</text>\n"
       << "<text x=\"" << lo - 4 << "\" y=\"" << lo + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
       << fmt9(vp.y1) << "</text>\n";
}

}  // namespace detail

/// Both agent paths with start markers, plus a cross at the capture point.
inline void write_trajectory_svg(std::ostream& os, const EpisodeResult& result) {
    std::vector<Vec2> pursuer, evader;
    for (const auto& r : result.trajectory) {
        pursuer.push_back(r.x_p);
        evader.push_back(r.x_e);
    }
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool first = true;
    for (const auto* path : {&pursuer, &evader}) {
        for (const auto& p : *path) {
            if (first) {
                x0 = x1 = p.x;
                y0 = y1 = p.y;
                first = false;
            }
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    }
    // Equal aspect ratio, padded by 5 %.
    const double span = std::max({x1 - x0, y1 - y0, 1.0}) * 1.1;
    const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
    detail::Viewport vp{cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2};

    detail::svg_open(os, vp.size);
    detail::axes_frame(os, vp, "x (m)", "y (m)");
    detail::polyline(os, vp, pursuer, "#d62728");
    detail::polyline(os, vp, evader, "#1f77b4");
    if (!pursuer.empty()) {
        os << "<circle cx=\"" << fmt9(vp.px(pursuer.front().x)) << "\" cy=\"" << fmt9(vp.py(pursuer.front().y))
           << "\" r=\"5\" fill=\"#d62728\"/>\n";
        os << "<circle cx=\"" << fmt9(vp.px(evader.front().x)) << "\" cy=\"" << fmt9(vp.py(evader.front().y))
           << "\" r=\"5\" fill=\"#1f77b4\"/>\n";
    }
    if (result.outcome == Outcome::Captured && !evader.empty()) {
        const double x = vp.px(evader.back().x), y = vp.py(evader.back().y);
        os << "<path d=\"M" << fmt9(x - 7) << ' ' << fmt9(y - 7) << " L" << fmt9(x + 7) << ' ' << fmt9(y + 7) << " M"
           << fmt9(x - 7) << ' ' << fmt9(y + 7) << " L" << fmt9(x + 7) << ' ' << fmt9(y - 7)
           << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    os << "<text x=\"60\" y=\"30\" font-size=\"13\" fill=\"#d62728\">pursuer</text>\n"
       << "<text x=\"130\" y=\"30\" font-size=\"13\" fill=\"#1f77b4\">evader</text>\n"
       << "<text x=\"200\" y=\"30\" font-size=\"13\">" << to_string(result.outcome);
    if (result.capture_time) os << " t=" << fmt9(*result.capture_time) << " s";
    os << "</text>\n</svg>\n";
}

/// Two-colour zone map with the a_p = a_e diagonal and, when given, the fitted line.
inline void write_zone_svg(std::ostream& os, const ZoneGrid& grid, const std::optional<LineFit>& fit) {
    if (grid.ae_values.empty() || grid.ap_values.empty()) throw InvalidParameter("cannot plot an empty grid");
    auto half_step = [](const std::vector<double>& v) { return v.size() > 1 ? (v[1] - v[0]) / 2 : 0.5; };
    const double he = half_step(grid.ae_values), hp = half_step(grid.ap_values);
    detail::Viewport vp{grid.ae_values.front() - he, grid.ae_values.back() + he, grid.ap_values.front() - hp,
                        grid.ap_values.back() + hp};
    detail::svg_open(os, vp.size);
    for (std::size_t ie = 0; ie < grid.ae_values.size(); ++ie) {
        for (std::size_t ip = 0; ip < grid.ap_values.size(); ++ip) {
            const double ae = grid.ae_values[ie], ap = grid.ap_values[ip];
            const double x = vp.px(ae - he), y = vp.py(ap + hp);
            const double w = vp.px(ae + he) - x, h = vp.py(ap - hp) - y;
            const char* color = grid.at(ie, ip) == Outcome::Captured ? "#4a90d9" : "#d63ad6";
            os << "<rect x=\"" << fmt9(x) << "\" y=\"" << fmt9(y) << "\" width=\"" << fmt9(w) << "\" height=\""
               << fmt9(h) << "\" fill=\"" << color << "\"/>\n";
        }
    }
    auto segment = [&](double slope, double intercept, const char* style) {
        os << "<line x1=\"" << fmt9(vp.px(vp.x0)) << "\" y1=\"" << fmt9(vp.py(slope * vp.x0 + intercept))
           << "\" x2=\"" << fmt9(vp.px(vp.x1)) << "\" y2=\"" << fmt9(vp.py(slope * vp.x1 + intercept)) << "\" "
           << style << "/>\n";
    };
    os << "<clipPath id=\"plot\"><rect x=\"" << vp.margin << "\" y=\"" << vp.margin << "\" width=\""
       << vp.size - 2 * vp.margin << "\" height=\"" << vp.size - 2 * vp.margin << "\"/></clipPath>\n"
       << "<g clip-path=\"url(#plot)\">\n";
    segment(1.0, 0.0, "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
    if (fit) segment(fit->slope, fit->intercept, "stroke=\"yellow\" stroke-width=\"2.5\"");
    os << "</g>\n";
    detail::axes_frame(os, vp, "a_e (m/s^2)", "a_p (m/s^2)");
    if (fit)
        os << "<text x=\"60\" y=\"30\" font-size=\"13\">a_p = " << fmt9(fit->slope) << " a_e + "
           << fmt9(fit->intercept) << "</text>\n";
    os << "</svg>\n";
}

}  // namespace pursuit
