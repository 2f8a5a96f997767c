#include <gtest/gtest.h>

#include <memory>
#include <sstream>
#include <string>

#include "pursuit/golden.hpp"
#include "pursuit/zone.hpp"

using namespace pursuit;

namespace {

// Synthetic grid over a_e = {1, 2, ...}, a_p = {1, 2, 3, 4}; `cols` are
// strings of 'C'/'E' from the lowest a_p upward.
ZoneGrid synthetic(const std::vector<std::string>& cols) {
    ZoneGrid g;
    for (std::size_t i = 0; i < cols.size(); ++i) g.ae_values.push_back(static_cast<double>(i + 1));
    for (std::size_t j = 0; j < cols[0].size(); ++j) g.ap_values.push_back(static_cast<double>(j + 1));
    for (const auto& c : cols) {
        for (char ch : c) {
            g.outcomes.push_back(ch == 'C' ? Outcome::Captured : Outcome::Escaped);
            g.capture_times.push_back(ch == 'C' ? std::optional<double>(5.0) : std::nullopt);
        }
    }
    return g;
}

GridSpec coarse_default() {
    GridSpec s = GridSpec::baseline_default();
    s.ae_min = 0.5;
    s.ae_max = 4.5;
    s.ae_step = 1.0;
    s.ap_min = 0.5;
    s.ap_max = 6.5;
    s.ap_step = 1.0;
    return s;
}

}  // namespace

TEST(GridSpec, Axes) {
    const auto s = GridSpec::baseline_default();
    EXPECT_EQ(s.ae_values().size(), 19u);
    EXPECT_EQ(s.ap_values().size(), 27u);
    EXPECT_EQ(s.ae_values().back(), 5.0);
    EXPECT_EQ(s.ap_values().back(), 7.0);
    EXPECT_NO_THROW(s.validate());
}

TEST(GridSpec, Validation) {
    auto s = GridSpec::baseline_default();
    s.ae_step = 0;
    EXPECT_THROW(s.validate(), InvalidParameter);
    s = GridSpec::baseline_default();
    s.ap_min = 7.0;
    EXPECT_THROW(s.validate(), InvalidParameter);
    s = GridSpec::baseline_default();
    s.ae_step = 10;  // single column
    EXPECT_THROW(s.validate(), InvalidParameter);
}

TEST(Sweep, ThrustlessPursuerEscapesEverywhere) {
    GridSpec s = GridSpec::baseline_default();
    s.ae_min = 1;
    s.ae_max = 2;
    s.ae_step = 1;
    s.ap_min = 0;
    s.ap_max = 0.01;
    s.ap_step = 0.01;
    const auto grid = sweep(s, 2);
    ASSERT_EQ(grid.cell_count(), 4u);
    for (auto o : grid.outcomes) EXPECT_EQ(o, Outcome::Escaped);
}

TEST(Sweep, CellsEitherSideOfPublishedLine) {
    const auto spec = GridSpec::baseline_default();
    // 1.4*2 + 0.6 = 3.4 < 4: capture.
    EXPECT_EQ(run_episode(cell_config(spec, 2, 4)).outcome, Outcome::Captured);
    // 1.4*3 + 0.6 = 4.8 > 4: escape.
    EXPECT_EQ(run_episode(cell_config(spec, 3, 4)).outcome, Outcome::Escaped);
}

TEST(Sweep, WorkerCountIndependent) {
    const auto spec = coarse_default();
    const auto one = sweep(spec, 1);
    for (unsigned w : {2u, 3u, 8u}) EXPECT_EQ(sweep(spec, w), one);
}

TEST(Sweep, MatchesDirectEpisodes) {
    const auto spec = coarse_default();
    const auto grid = sweep(spec, 4);
    for (std::size_t ie = 0; ie < grid.ae_values.size(); ++ie)
        for (std::size_t ip = 0; ip < grid.ap_values.size(); ++ip) {
            const auto r = run_episode(cell_config(spec, grid.ae_values[ie], grid.ap_values[ip]));
            EXPECT_EQ(grid.at(ie, ip), r.outcome);
            EXPECT_EQ(grid.capture_times[grid.index(ie, ip)], r.capture_time);
            if (r.capture_time) {
                EXPECT_LE(*r.capture_time, spec.base.world.t_max);
            }
        }
}

TEST(Sweep, StationaryEvaderIsCaught) {
    GridSpec s = GridSpec::baseline_default();
    s.ae_min = 0;
    s.ae_max = 0.25;
    const auto grid = sweep(s, 4);
    ASSERT_EQ(grid.ae_values[0], 0.0);
    for (std::size_t ip = 0; ip < grid.ap_values.size(); ++ip)
        if (grid.ap_values[ip] >= 0.5) {
            EXPECT_EQ(grid.at(0, ip), Outcome::Captured) << grid.ap_values[ip];
        }
}

TEST(Sweep, ErrorsCarryCellCoordinates) {
    GridSpec s = coarse_default();
    s.base.world.scheme = Scheme::SemiImplicitEuler;
    s.base.world.mu = 200;
    try {
        sweep(s, 3);
        FAIL() << "expected CellError";
    } catch (const CellError& e) {
        EXPECT_EQ(e.ae(), 0.5);
        EXPECT_EQ(e.ap(), 0.5);
        EXPECT_NE(std::string(e.what()).find("a_e=0.5"), std::string::npos);
    }
}

TEST(ExtractBoundary, SuffixRule) {
    const auto report = extract_boundary(synthetic({"EECC", "EEEC", "EEEE", "CCCC", "ECEC"}));
    ASSERT_EQ(report.points.size(), 3u);
    EXPECT_EQ(report.points[0], (BoundaryPoint{1, 3}));
    EXPECT_EQ(report.points[1], (BoundaryPoint{2, 4}));
    EXPECT_EQ(report.points[2], (BoundaryPoint{5, 4}));
    ASSERT_EQ(report.excluded.size(), 2u);
    EXPECT_EQ(report.excluded[0].ae, 3);
    EXPECT_EQ(report.excluded[0].reason, "no captured suffix");
    EXPECT_EQ(report.excluded[1].ae, 4);
    EXPECT_EQ(report.excluded[1].reason, "fully captured");
    ASSERT_EQ(report.anomalies.size(), 1u);
    EXPECT_EQ(report.anomalies[0], (BoundaryPoint{5, 2}));
}

TEST(ExtractBoundary, NoBoundary) {
    EXPECT_THROW(extract_boundary(synthetic({"EEEE", "EECC"})), NoBoundary);
    EXPECT_THROW(extract_boundary(ZoneGrid{}), NoBoundary);
}

TEST(FitPhaseLine, ExactLine) {
    const auto fit = fit_phase_line({{1, 2}, {2, 3}, {3, 4}});
    EXPECT_NEAR(fit.slope, 1, 1e-15);
    EXPECT_NEAR(fit.intercept, 1, 1e-15);
    EXPECT_NEAR(fit.residual_rms, 0, 1e-15);
}

TEST(FitPhaseLine, LeastSquares) {
    // Residuals (+0.5, -1, +0.5) about a_p = 2 a_e: OLS leaves the line unchanged.
    const auto fit = fit_phase_line({{0, 0.5}, {1, 1}, {2, 4.5}});
    EXPECT_NEAR(fit.slope, 2, 1e-12);
    EXPECT_NEAR(fit.intercept, 0, 1e-12);
    EXPECT_NEAR(fit.residual_rms, std::sqrt(0.5), 1e-12);
}

TEST(FitPhaseLine, Degenerate) {
    EXPECT_THROW(fit_phase_line({{2, 3}, {2, 4}}), DegenerateFit);
    EXPECT_THROW(fit_phase_line({}), DegenerateFit);
}

TEST(ZoneCsv, RoundTrip) {
    const auto grid = sweep(coarse_default(), 4);
    std::stringstream ss;
    write_zone_csv(ss, grid);
    const auto back = read_zone_csv(ss);
    EXPECT_EQ(back.ae_values, grid.ae_values);
    EXPECT_EQ(back.ap_values, grid.ap_values);
    EXPECT_EQ(back.outcomes, grid.outcomes);
    for (std::size_t i = 0; i < grid.cell_count(); ++i) {
        ASSERT_EQ(back.capture_times[i].has_value(), grid.capture_times[i].has_value());
        if (grid.capture_times[i]) {
            EXPECT_NEAR(*back.capture_times[i], *grid.capture_times[i], 1e-8);
        }
    }
}

TEST(ZoneCsv, Format) {
    std::stringstream ss;
    write_zone_csv(ss, synthetic({"EC", "CC"}));
    EXPECT_EQ(ss.str(), "ae,ap,outcome,capture_time\n1,1,escaped,\n1,2,captured,5\n2,1,captured,5\n2,2,captured,5\n");
}

TEST(ZoneCsv, ParseErrorsReportLine) {
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream is(text);
        try {
            read_zone_csv(is);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("ae,ap,outcome\n"), 1u);
    EXPECT_EQ(line_of("ae,ap,outcome,capture_time\n1,1,escaped,\n1,x,escaped,\n"), 3u);
    EXPECT_EQ(line_of("ae,ap,outcome,capture_time\n1,1,caught,2\n"), 2u);
    EXPECT_EQ(line_of("ae,ap,outcome,capture_time\n1,1,escaped,3\n"), 2u);
    EXPECT_EQ(line_of("ae,ap,outcome,capture_time\n1,1,captured,\n"), 2u);
    EXPECT_EQ(line_of("ae,ap,outcome,capture_time\n1,1,escaped,\n1,1,escaped,\n"), 3u);
    EXPECT_EQ(line_of("ae,ap,outcome,capture_time\n1,1,escaped\n"), 2u);
    EXPECT_NE(line_of("ae,ap,outcome,capture_time\n1,1,escaped,\n2,2,escaped,\n"), 0u);  // missing cells
}

TEST(ZoneCsv, EmptyInputHasNoBoundary) {
    std::istringstream empty("");
    const auto grid = read_zone_csv(empty);
    EXPECT_EQ(grid.cell_count(), 0u);
    EXPECT_THROW(extract_boundary(grid), NoBoundary);
}

TEST(FitSummary, Format) {
    // Points (1,3), (2,4), (3,4): residuals -1/6, 1/3, -1/6, rms = sqrt(1/18).
    const auto report = extract_boundary(synthetic({"EECC", "EEEC", "ECEC"}));
    const auto fit = fit_phase_line(report.points);
    std::ostringstream os;
    write_fit_summary(os, fit, report);
    EXPECT_EQ(os.str(),
              "slope 0.5\nintercept 2.66666667\nresidual_rms 0.23570226\npoints 3\n"
              "point 1 3\npoint 2 4\npoint 3 4\nanomalies 1\nanomaly 3 2\n");
}

TEST(Sweep, LearnedPoliciesTakeCellBudgets) {
    GridSpec s = coarse_default();
    auto zero = std::make_shared<const MlpNet>(make_actor_net(1.0, nullptr, 0));
    s.base.evader = Policy::mlp(zero);
    const auto cfg = cell_config(s, 2.5, 3.5);
    EXPECT_EQ(cfg.evader.kind(), PolicyKind::Mlp);
    EXPECT_EQ(cfg.evader.a_max(), 2.5);
    EXPECT_EQ(cfg.pursuer.a_max(), 3.5);
    // A zero actor never moves: every cell with real pursuer thrust captures.
    const auto grid = sweep(s, 4);
    for (auto o : grid.outcomes) EXPECT_EQ(o, Outcome::Captured);
}
