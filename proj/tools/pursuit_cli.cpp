// pursuit: command-line front end for single games, zone sweeps, offline
// boundary fits and golden fixtures.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "pursuit/pursuit.hpp"

namespace {

using namespace pursuit;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Vec2 parse_vec(const std::string& flag, const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError(flag + ": expected 'x,y', got '" + text + "'");
    try {
        std::size_t a = 0, b = 0;
        const std::string xs = text.substr(0, comma), ys = text.substr(comma + 1);
        const double x = std::stod(xs, &a);
        const double y = std::stod(ys, &b);
        if (a != xs.size() || b != ys.size() || !std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("");
        return {x, y};
    } catch (const std::logic_error&) {
        throw UsageError(flag + ": expected 'x,y', got '" + text + "'");
    }
}

// "baseline" or "mlp:PATH". The baseline kind follows from the role.
Policy parse_policy(const std::string& flag, const std::string& text, Role role, double a_max, double c) {
    if (text == "baseline")
        return role == Role::Pursuer ? Policy::baseline_pursuit(a_max) : Policy::baseline_evasion(a_max, c);
    if (text.rfind("mlp:", 0) == 0 && text.size() > 4) {
        auto net = std::make_shared<const MlpNet>(load_policy_file(text.substr(4)));
        return Policy::mlp(std::move(net), a_max);
    }
    throw UsageError(flag + ": expected 'baseline' or 'mlp:PATH', got '" + text + "'");
}

Scheme parse_scheme(const std::string& text) {
    try {
        return scheme_from_string(text);
    } catch (const InvalidParameter& e) {
        throw UsageError(std::string("--scheme: ") + e.what());
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open output file " + path);
    return f;
}

nlohmann::json vec_json(const Vec2& v) { return nlohmann::json::array({v.x, v.y}); }

struct WorldFlags {
    double mu = 0.5, eps = 0.5, tmax = 20, dt = 0.01;
    std::string scheme = "exact";
    std::uint64_t seed = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--mu", mu, "velocity damping coefficient (1/s)")->check(CLI::NonNegativeNumber)->capture_default_str();
        cmd->add_option("--eps", eps, "capture radius (m)")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--tmax", tmax, "game horizon (s)")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--dt", dt, "integration step (s)")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--scheme", scheme, "integrator: exact|euler")->check(CLI::IsMember({"exact", "euler"}))->capture_default_str();
        cmd->add_option("--seed", seed, "recorded in the manifest")->capture_default_str();
    }

    WorldParams world() const {
        WorldParams w{mu, eps, dt, tmax, parse_scheme(scheme)};
        try {
            w.validate();
        } catch (const InvalidParameter& e) {
            throw UsageError(e.what());
        }
        return w;
    }

    nlohmann::json to_json() const {
        return {{"mu", mu}, {"eps", eps}, {"tmax", tmax}, {"dt", dt}, {"scheme", scheme}, {"seed", seed}};
    }
};

struct SimulateFlags {
    WorldFlags world;
    double ap = 4, ae = 2, c = 2.4;
    std::string xp0 = "0,-4", xe0 = "0,0", vp0 = "0,0", ve0 = "0,0";
    std::string pursuer = "baseline", evader = "baseline";
    std::string out = "trajectory.csv", svg;
};

struct SweepFlags {
    WorldFlags world;
    double ae_min = 0.5, ae_max = 5.0, ae_step = 0.25;
    double ap_min = 0.5, ap_max = 7.0, ap_step = 0.25;
    double c = 3;
    std::string xp0 = "0,-12", xe0 = "0,0", vp0 = "0,0", ve0 = "0,0";
    std::string pursuer = "baseline", evader = "baseline";
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string out = "zone.csv", svg, fit;
};

struct FitFlags {
    std::string zone_csv;
    std::string out;
};

struct GoldenFlags {
    std::string out = "golden.json";
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int cmd_simulate(const SimulateFlags& f, const std::vector<std::string>& argv) {
    const auto t0 = Clock::now();
    EpisodeConfig cfg;
    cfg.world = f.world.world();
    cfg.x_p0 = parse_vec("--xp0", f.xp0);
    cfg.x_e0 = parse_vec("--xe0", f.xe0);
    cfg.v_p0 = parse_vec("--vp0", f.vp0);
    cfg.v_e0 = parse_vec("--ve0", f.ve0);
    cfg.seed = f.world.seed;
    if (!(distance(cfg.x_p0, cfg.x_e0) > cfg.world.eps))
        throw UsageError("--xp0/--xe0: initial separation must exceed --eps");
    cfg.pursuer = parse_policy("--pursuer", f.pursuer, Role::Pursuer, f.ap, f.c);
    cfg.evader = parse_policy("--evader", f.evader, Role::Evader, f.ae, f.c);

    const EpisodeResult r = run_episode(cfg);

    RunManifest m;
    m.command = "simulate";
    m.argv = argv;
    m.config = f.world.to_json();
    m.config.update({{"ap", f.ap}, {"ae", f.ae}, {"c", f.c}, {"xp0", vec_json(cfg.x_p0)}, {"xe0", vec_json(cfg.x_e0)},
                     {"vp0", vec_json(cfg.v_p0)}, {"ve0", vec_json(cfg.v_e0)}, {"pursuer", f.pursuer},
                     {"evader", f.evader}});
    {
        auto os = open_output(f.out);
        write_trajectory_csv(os, r);
    }
    m.outputs.push_back(f.out);
    if (!f.svg.empty()) {
        auto os = open_output(f.svg);
        write_trajectory_svg(os, r);
        m.outputs.push_back(f.svg);
    }
    m.wall_seconds = seconds_since(t0);
    write_manifests(m);

    if (r.outcome == Outcome::Captured)
        std::cout << "captured t=" << fmt9(*r.capture_time) << '\n';
    else
        std::cout << "escaped\n";
    return 0;
}

int cmd_sweep(const SweepFlags& f, const std::vector<std::string>& argv) {
    const auto t0 = Clock::now();
    GridSpec spec;
    spec.ae_min = f.ae_min;
    spec.ae_max = f.ae_max;
    spec.ae_step = f.ae_step;
    spec.ap_min = f.ap_min;
    spec.ap_max = f.ap_max;
    spec.ap_step = f.ap_step;
    spec.base.world = f.world.world();
    spec.base.x_p0 = parse_vec("--xp0", f.xp0);
    spec.base.x_e0 = parse_vec("--xe0", f.xe0);
    spec.base.v_p0 = parse_vec("--vp0", f.vp0);
    spec.base.v_e0 = parse_vec("--ve0", f.ve0);
    spec.base.seed = f.world.seed;
    spec.base.pursuer = parse_policy("--pursuer", f.pursuer, Role::Pursuer, 1.0, f.c);
    spec.base.evader = parse_policy("--evader", f.evader, Role::Evader, 1.0, f.c);
    try {
        spec.validate();
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }

    const ZoneGrid grid = sweep(spec, f.workers);

    RunManifest m;
    m.command = "sweep";
    m.argv = argv;
    m.config = f.world.to_json();
    m.config.update({{"ae_min", f.ae_min}, {"ae_max", f.ae_max}, {"ae_step", f.ae_step}, {"ap_min", f.ap_min},
                     {"ap_max", f.ap_max}, {"ap_step", f.ap_step}, {"c", f.c},
                     {"xp0", vec_json(spec.base.x_p0)}, {"xe0", vec_json(spec.base.x_e0)},
                     {"vp0", vec_json(spec.base.v_p0)}, {"ve0", vec_json(spec.base.v_e0)},
                     {"pursuer", f.pursuer}, {"evader", f.evader}, {"workers", f.workers}});
    {
        auto os = open_output(f.out);
        write_zone_csv(os, grid);
    }
    m.outputs.push_back(f.out);

    std::optional<LineFit> fit;
    std::optional<BoundaryReport> report;
    std::string fit_error;
    try {
        report = extract_boundary(grid);
        fit = fit_phase_line(report->points);
    } catch (const Error& e) {
        fit_error = e.what();
    }
    if (!f.svg.empty()) {
        auto os = open_output(f.svg);
        write_zone_svg(os, grid, fit);
        m.outputs.push_back(f.svg);
    }
    if (fit) {
        std::ostringstream summary;
        write_fit_summary(summary, *fit, *report);
        std::cout << summary.str();
        if (!f.fit.empty()) {
            auto os = open_output(f.fit);
            os << summary.str();
            m.outputs.push_back(f.fit);
        }
    }
    m.wall_seconds = seconds_since(t0);
    write_manifests(m);
    if (!fit) {
        std::cerr << "pursuit sweep: " << fit_error << '\n';
        return 1;
    }
    return 0;
}

int cmd_fit(const FitFlags& f, const std::vector<std::string>& argv) {
    const auto t0 = Clock::now();
    std::ifstream in(f.zone_csv);
    if (!in) throw Error("cannot open " + f.zone_csv);
    const ZoneGrid grid = read_zone_csv(in);
    const BoundaryReport report = extract_boundary(grid);
    const LineFit fit = fit_phase_line(report.points);
    std::ostringstream summary;
    write_fit_summary(summary, fit, report);
    std::cout << summary.str();
    if (!f.out.empty()) {
        {
            auto os = open_output(f.out);
            os << summary.str();
        }
        RunManifest m;
        m.command = "fit";
        m.argv = argv;
        m.config = {{"zone_csv", f.zone_csv}};
        m.outputs.push_back(f.out);
        m.wall_seconds = seconds_since(t0);
        write_manifests(m);
    }
    return 0;
}

int cmd_golden(const GoldenFlags& f, const std::vector<std::string>& argv) {
    const auto t0 = Clock::now();
    const GoldenFixture fx = make_golden_fixture();
    {
        auto os = open_output(f.out);
        os << write_golden(fx);
    }
    RunManifest m;
    m.command = "golden";
    m.argv = argv;
    m.config = {{"seed", kGoldenSeed},
                {"mu", fx.world.mu},
                {"dt", fx.world.dt},
                {"scheme", std::string(to_string(fx.world.scheme))},
                {"step_cases", fx.steps.size()},
                {"mlp_cases", fx.mlp.size()}};
    m.outputs.push_back(f.out);
    m.wall_seconds = seconds_since(t0);
    write_manifests(m);
    std::cout << "wrote " << f.out << " (" << fx.steps.size() << " step cases, " << fx.mlp.size()
              << " mlp cases)\n";
    return 0;
}

void add_game_flags(CLI::App* cmd, double& c, std::string& xp0, std::string& xe0, std::string& vp0, std::string& ve0,
                    std::string& pursuer, std::string& evader) {
    cmd->add_option("--c", c, "critical distance of the baseline evader (m)")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--xp0", xp0, "pursuer start 'x,y' (m)")->capture_default_str();
    cmd->add_option("--xe0", xe0, "evader start 'x,y' (m)")->capture_default_str();
    cmd->add_option("--vp0", vp0, "pursuer initial velocity 'x,y' (m/s)")->capture_default_str();
    cmd->add_option("--ve0", ve0, "evader initial velocity 'x,y' (m/s)")->capture_default_str();
    cmd->add_option("--pursuer", pursuer, "baseline | mlp:PATH")->capture_default_str();
    cmd->add_option("--evader", evader, "baseline | mlp:PATH")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pursuit-evasion games with damped point-mass dynamics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    SimulateFlags sim;
    auto* simulate = app.add_subcommand("simulate", "run one game and write its trajectory");
    sim.world.add(simulate);
    simulate->add_option("--ap", sim.ap, "pursuer acceleration budget (m/s^2)")->check(CLI::NonNegativeNumber)->capture_default_str();
    simulate->add_option("--ae", sim.ae, "evader acceleration budget (m/s^2)")->check(CLI::NonNegativeNumber)->capture_default_str();
    add_game_flags(simulate, sim.c, sim.xp0, sim.xe0, sim.vp0, sim.ve0, sim.pursuer, sim.evader);
    simulate->add_option("--out", sim.out, "trajectory CSV")->capture_default_str();
    simulate->add_option("--svg", sim.svg, "trajectory plot");

    SweepFlags sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "map capture/escape zones over (a_e, a_p)");
    sw.world.add(sweep_cmd);
    sweep_cmd->add_option("--ae-min", sw.ae_min)->check(CLI::NonNegativeNumber)->capture_default_str();
    sweep_cmd->add_option("--ae-max", sw.ae_max)->check(CLI::NonNegativeNumber)->capture_default_str();
    sweep_cmd->add_option("--ae-step", sw.ae_step)->check(CLI::PositiveNumber)->capture_default_str();
    sweep_cmd->add_option("--ap-min", sw.ap_min)->check(CLI::NonNegativeNumber)->capture_default_str();
    sweep_cmd->add_option("--ap-max", sw.ap_max)->check(CLI::NonNegativeNumber)->capture_default_str();
    sweep_cmd->add_option("--ap-step", sw.ap_step)->check(CLI::PositiveNumber)->capture_default_str();
    add_game_flags(sweep_cmd, sw.c, sw.xp0, sw.xe0, sw.vp0, sw.ve0, sw.pursuer, sw.evader);
    sweep_cmd->add_option("--workers", sw.workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sweep_cmd->add_option("--out", sw.out, "zone CSV")->capture_default_str();
    sweep_cmd->add_option("--svg", sw.svg, "zone map plot");
    sweep_cmd->add_option("--fit", sw.fit, "fit summary file");

    FitFlags ft;
    auto* fit_cmd = app.add_subcommand("fit", "fit the phase-transition line of an existing zone CSV");
    fit_cmd->add_option("zone_csv", ft.zone_csv, "zone CSV written by 'sweep'")->required();
    fit_cmd->add_option("--out", ft.out, "fit summary file");

    GoldenFlags gd;
    auto* golden_cmd = app.add_subcommand("golden", "emit the cross-component parity fixture");
    golden_cmd->add_option("--out", gd.out, "fixture path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::vector<std::string> args(argv, argv + argc);
    try {
        if (*simulate) return cmd_simulate(sim, args);
        if (*sweep_cmd) return cmd_sweep(sw, args);
        if (*fit_cmd) return cmd_fit(ft, args);
        if (*golden_cmd) return cmd_golden(gd, args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "pursuit: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
