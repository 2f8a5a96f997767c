#pragma once

// Capture/escape zone mapping over the (a_e, a_p) plane and the
// phase-transition line fitted to its boundary.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "episode.hpp"
#include "errors.hpp"
#include "format.hpp"

namespace pursuit {

struct GridSpec {
    double ae_min = 0.5, ae_max = 5.0, ae_step = 0.25;
    double ap_min = 0.5, ap_max = 7.0, ap_step = 0.25;
    EpisodeConfig base;  ///< policies get their a_max replaced per cell

    static std::vector<double> axis(double lo, double hi, double step) {
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = lo + static_cast<double>(i) * step;
        return v;
    }
    std::vector<double> ae_values() const { return axis(ae_min, ae_max, ae_step); }
    std::vector<double> ap_values() const { return axis(ap_min, ap_max, ap_step); }

    void validate() const {
        for (double v : {ae_min, ae_max, ae_step, ap_min, ap_max, ap_step})
            if (!std::isfinite(v)) throw InvalidParameter("grid bounds must be finite");
        if (!(ae_step > 0 && ap_step > 0)) throw InvalidParameter("grid steps must be > 0");
        if (!(ae_min < ae_max && ap_min < ap_max)) throw InvalidParameter("grid needs min < max on both axes");
        if (ae_min < 0 || ap_min < 0) throw InvalidParameter("accelerations must be >= 0");
        if (ae_values().size() < 2 || ap_values().size() < 2)
            throw InvalidParameter("grid needs at least 2 columns and 2 rows");
        base.world.validate();
    }

    /// The default a_e/a_p grid around the baseline geometry: start 12 m apart, c = 3.
    static GridSpec baseline_default() {
        GridSpec s;
        s.base.pursuer = Policy::baseline_pursuit(1.0);
        s.base.evader = Policy::baseline_evasion(1.0, 3.0);
        s.base.x_p0 = {0, -12};
        s.base.x_e0 = {0, 0};
        return s;
    }
};

/// Outcomes indexed [ae index][ap index], stored row-major by a_e column.
struct ZoneGrid {
    std::vector<double> ae_values;
    std::vector<double> ap_values;
    std::vector<Outcome> outcomes;
    std::vector<std::optional<double>> capture_times;

    std::size_t index(std::size_t ie, std::size_t ip) const { return ie * ap_values.size() + ip; }
    Outcome at(std::size_t ie, std::size_t ip) const { return outcomes[index(ie, ip)]; }
    std::size_t cell_count() const { return ae_values.size() * ap_values.size(); }

    bool operator==(const ZoneGrid&) const = default;
};

/// Episode failure inside a sweep, tagged with the offending cell.
class CellError : public Error {
public:
    CellError(double ae, double ap, const std::string& what)
        : Error("cell (a_e=" + fmt9(ae) + ", a_p=" + fmt9(ap) + "): " + what), ae_(ae), ap_(ap) {}
    double ae() const { return ae_; }
    double ap() const { return ap_; }

private:
    double ae_, ap_;
};

inline EpisodeConfig cell_config(const GridSpec& spec, double ae, double ap) {
    EpisodeConfig cfg = spec.base;
    cfg.pursuer = spec.base.pursuer.with_a_max(ap);
    cfg.evader = spec.base.evader.with_a_max(ae);
    return cfg;
}

/// Runs every cell on `workers` threads. Results are written by cell index, so
/// the grid does not depend on the worker count or completion order.
inline ZoneGrid sweep(const GridSpec& spec, unsigned workers = std::thread::hardware_concurrency()) {
    spec.validate();
    ZoneGrid grid;
    grid.ae_values = spec.ae_values();
    grid.ap_values = spec.ap_values();
    const std::size_t n = grid.cell_count();
    grid.outcomes.assign(n, Outcome::Escaped);
    grid.capture_times.assign(n, std::nullopt);
    std::vector<std::exception_ptr> errors(n);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            const double ae = grid.ae_values[i / grid.ap_values.size()];
            const double ap = grid.ap_values[i % grid.ap_values.size()];
            try {
                const auto r = run_episode(cell_config(spec, ae, ap));
                grid.outcomes[i] = r.outcome;
                grid.capture_times[i] = r.capture_time;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        const double ae = grid.ae_values[i / grid.ap_values.size()];
        const double ap = grid.ap_values[i % grid.ap_values.size()];
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw CellError(ae, ap, e.what());
        }
    }
    return grid;
}

struct BoundaryPoint {
    double ae;
    double ap;
    bool operator==(const BoundaryPoint&) const = default;
};

struct ExcludedColumn {
    double ae;
    std::string reason;
};

struct BoundaryReport {
    std::vector<BoundaryPoint> points;
    std::vector<ExcludedColumn> excluded;
    std::vector<BoundaryPoint> anomalies;  ///< captured cells below the captured suffix
};

/// Per a_e column, the lowest a_p that starts the longest all-captured suffix.
/// Columns with no captured suffix, or captured throughout, are excluded.
inline BoundaryReport extract_boundary(const ZoneGrid& grid) {
    BoundaryReport report;
    const std::size_t rows = grid.ap_values.size();
    for (std::size_t ie = 0; ie < grid.ae_values.size(); ++ie) {
        const double ae = grid.ae_values[ie];
        std::size_t start = rows;
        while (start > 0 && grid.at(ie, start - 1) == Outcome::Captured) --start;
        for (std::size_t ip = 0; ip + 1 < start; ++ip)
            if (grid.at(ie, ip) == Outcome::Captured) report.anomalies.push_back({ae, grid.ap_values[ip]});
        if (start == rows) {
            report.excluded.push_back({ae, "no captured suffix"});
        } else if (start == 0) {
            report.excluded.push_back({ae, "fully captured"});
        } else {
            report.points.push_back({ae, grid.ap_values[start]});
        }
    }
    if (report.points.size() < 2)
        throw NoBoundary("only " + std::to_string(report.points.size()) +
                         " column(s) have a capture/escape transition; need at least 2");
    return report;
}

struct LineFit {
    double slope = 0;
    double intercept = 0;
    std::vector<BoundaryPoint> boundary_points;
    double residual_rms = 0;
};

/// Ordinary least squares a_p* = slope * a_e + intercept.
inline LineFit fit_phase_line(const std::vector<BoundaryPoint>& points) {
    if (points.empty()) throw DegenerateFit("no points to fit");
    const double n = static_cast<double>(points.size());
    double mx = 0, my = 0;
    for (const auto& p : points) {
        mx += p.ae;
        my += p.ap;
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (const auto& p : points) {
        sxx += (p.ae - mx) * (p.ae - mx);
        sxy += (p.ae - mx) * (p.ap - my);
    }
    if (!(sxx > 0)) throw DegenerateFit("all points share the same a_e");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.boundary_points = points;
    double ss = 0;
    for (const auto& p : points) {
        const double r = p.ap - (fit.slope * p.ae + fit.intercept);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

inline constexpr const char* kZoneCsvHeader = "ae,ap,outcome,capture_time";

inline void write_zone_csv(std::ostream& os, const ZoneGrid& grid) {
    os << kZoneCsvHeader << '\n';
    for (std::size_t ie = 0; ie < grid.ae_values.size(); ++ie) {
        for (std::size_t ip = 0; ip < grid.ap_values.size(); ++ip) {
            const auto i = grid.index(ie, ip);
            os << fmt9(grid.ae_values[ie]) << ',' << fmt9(grid.ap_values[ip]) << ',' << to_string(grid.outcomes[i])
               << ',';
            if (grid.capture_times[i]) os << fmt9(*grid.capture_times[i]);
            os << '\n';
        }
    }
}

namespace detail {

inline double parse_real(const std::string& s, std::size_t line, const char* field) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + field + " value '" + s + "'", line);
    }
    if (used != s.size() || !std::isfinite(v)) throw ParseError(std::string("bad ") + field + " value '" + s + "'", line);
    return v;
}

}  // namespace detail

/// Reads a zone CSV back into a grid. An empty input yields an empty grid.
inline ZoneGrid read_zone_csv(std::istream& is) {
    struct Cell {
        Outcome outcome;
        std::optional<double> t;
        std::size_t line;
    };
    std::map<std::pair<double, double>, Cell> cells;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kZoneCsvHeader) throw ParseError("expected header '" + std::string(kZoneCsvHeader) + "'", lineno);
            header_seen = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (line.back() == ',') f.emplace_back();
        if (f.size() != 4) throw ParseError("expected 4 fields, found " + std::to_string(f.size()), lineno);
        const double ae = detail::parse_real(f[0], lineno, "ae");
        const double ap = detail::parse_real(f[1], lineno, "ap");
        Cell c{};
        c.line = lineno;
        if (f[2] == "captured") {
            c.outcome = Outcome::Captured;
            c.t = detail::parse_real(f[3], lineno, "capture_time");
        } else if (f[2] == "escaped") {
            c.outcome = Outcome::Escaped;
            if (!f[3].empty()) throw ParseError("escaped cell must have an empty capture_time", lineno);
        } else {
            throw ParseError("outcome must be 'captured' or 'escaped'", lineno);
        }
        if (!cells.emplace(std::pair{ae, ap}, c).second) throw ParseError("duplicate cell", lineno);
    }

    ZoneGrid grid;
    std::vector<double> aes, aps;
    for (const auto& [key, _] : cells) {
        aes.push_back(key.first);
        aps.push_back(key.second);
    }
    std::sort(aps.begin(), aps.end());
    aes.erase(std::unique(aes.begin(), aes.end()), aes.end());
    aps.erase(std::unique(aps.begin(), aps.end()), aps.end());
    grid.ae_values = aes;
    grid.ap_values = aps;
    grid.outcomes.assign(grid.cell_count(), Outcome::Escaped);
    grid.capture_times.assign(grid.cell_count(), std::nullopt);
    for (std::size_t ie = 0; ie < aes.size(); ++ie) {
        for (std::size_t ip = 0; ip < aps.size(); ++ip) {
            auto it = cells.find({aes[ie], aps[ip]});
            if (it == cells.end())
                throw ParseError("grid is missing cell (" + fmt9(aes[ie]) + ", " + fmt9(aps[ip]) + ")", lineno + 1);
            grid.outcomes[grid.index(ie, ip)] = it->second.outcome;
            grid.capture_times[grid.index(ie, ip)] = it->second.t;
        }
    }
    return grid;
}

inline void write_fit_summary(std::ostream& os, const LineFit& fit, const BoundaryReport& report) {
    os << "slope " << fmt9(fit.slope) << '\n'
       << "intercept " << fmt9(fit.intercept) << '\n'
       << "residual_rms " << fmt9(fit.residual_rms) << '\n'
       << "points " << fit.boundary_points.size() << '\n';
    for (const auto& p : fit.boundary_points) os << "point " << fmt9(p.ae) << ' ' << fmt9(p.ap) << '\n';
    for (const auto& c : report.excluded) os << "excluded " << fmt9(c.ae) << ' ' << c.reason << '\n';
    os << "anomalies " << report.anomalies.size() << '\n';
    for (const auto& a : report.anomalies) os << "anomaly " << fmt9(a.ae) << ' ' << fmt9(a.ap) << '\n';
}

}  // namespace pursuit
