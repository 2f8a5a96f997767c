#pragma once

// One pursuit-evasion game: sample both strategies on the same pre-step
// observation, step both agents, log, then test for capture.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "strategies.hpp"

namespace pursuit {

enum class Outcome { Captured, Escaped };

inline std::string_view to_string(Outcome o) { return o == Outcome::Captured ? "captured" : "escaped"; }

struct Rewards {
    double r_e;
    double r_p;
};

/// Zero-sum step reward: the evader earns 0.1 per metre of separation and
/// pays 10 on capture.
inline Rewards reward(const Vec2& x_p, const Vec2& x_e, double eps) {
    const double s = distance(x_p, x_e);
    const double r_e = s > eps ? 0.1 * s : -10.0;
    return {r_e, -r_e};
}

inline bool is_captured(const Vec2& x_p, const Vec2& x_e, double eps) { return distance(x_p, x_e) <= eps; }

struct EpisodeConfig {
    WorldParams world;
    Policy pursuer = Policy::baseline_pursuit(4.0);
    Policy evader = Policy::baseline_evasion(2.0, 2.4);
    Vec2 x_p0{0, -4};
    Vec2 x_e0{0, 0};
    Vec2 v_p0{};
    Vec2 v_e0{};
    std::uint64_t seed = 0;  ///< recorded only; all current policies are deterministic

    void validate() const {
        world.validate();
        if (!(x_p0.finite() && x_e0.finite() && v_p0.finite() && v_e0.finite()))
            throw InvalidParameter("initial state must be finite");
        if (!(distance(x_p0, x_e0) > world.eps))
            throw InvalidParameter("initial separation must exceed the capture radius");
    }
};

/// Row k holds the state at t = k*dt and the commands held during the step
/// that produced it (zero for k = 0). r_e is the reward of that state.
struct TrajectoryPoint {
    double t;
    Vec2 x_p, x_e, v_p, v_e;
    Vec2 a_p_cmd, a_e_cmd;
    double r_e;

    bool operator==(const TrajectoryPoint&) const = default;
};

struct EpisodeResult {
    Outcome outcome = Outcome::Escaped;
    std::optional<double> capture_time;
    std::int64_t steps = 0;
    std::vector<TrajectoryPoint> trajectory;
    double cumulative_r_e = 0;

    bool operator==(const EpisodeResult&) const = default;
};

/// Number of steps needed for k*dt to reach t_max.
inline std::int64_t step_budget(const WorldParams& w) {
    return static_cast<std::int64_t>(std::ceil(w.t_max / w.dt - 1e-9));
}

inline EpisodeResult run_episode(const EpisodeConfig& config) {
    config.validate();
    const WorldParams& w = config.world;
    const std::int64_t budget = step_budget(w);

    AgentState p{config.x_p0, config.v_p0};
    AgentState e{config.x_e0, config.v_e0};

    EpisodeResult result;
    result.trajectory.reserve(static_cast<std::size_t>(budget) + 1);
    auto log = [&](std::int64_t k, Vec2 a_p, Vec2 a_e) {
        const double r_e = reward(p.pos, e.pos, w.eps).r_e;
        result.trajectory.push_back({static_cast<double>(k) * w.dt, p.pos, e.pos, p.vel, e.vel, a_p, a_e, r_e});
        result.cumulative_r_e += r_e;
    };
    log(0, {}, {});

    for (std::int64_t k = 1; k <= budget; ++k) {
        const GameObservation obs{p.pos, e.pos, p.vel, e.vel};
        const Vec2 a_p = policy_action(config.pursuer, obs, Role::Pursuer);
        const Vec2 a_e = policy_action(config.evader, obs, Role::Evader);
        p = step(p, a_p, w);
        e = step(e, a_e, w);
        if (!(p.finite() && e.finite())) throw Error("state became non-finite at step " + std::to_string(k));
        if (std::max(p.vel.norm(), e.vel.norm()) * w.dt >= w.eps / 2)
            throw StepTooCoarse("per-step displacement reaches eps/2 at step " + std::to_string(k) +
                                "; reduce dt");
        log(k, a_p, a_e);
        result.steps = k;
        if (is_captured(p.pos, e.pos, w.eps)) {
            result.outcome = Outcome::Captured;
            result.capture_time = static_cast<double>(k) * w.dt;
            return result;
        }
    }
    result.outcome = Outcome::Escaped;
    return result;
}

inline constexpr const char* kTrajectoryCsvHeader = "t,xp_x,xp_y,xe_x,xe_y,vp_x,vp_y,ve_x,ve_y,ap_x,ap_y,ae_x,ae_y,r_e";

inline void write_trajectory_csv(std::ostream& os, const EpisodeResult& result) {
    os << kTrajectoryCsvHeader << '\n';
    for (const auto& r : result.trajectory) {
        os << fmt9(r.t);
        for (const Vec2* v : {&r.x_p, &r.x_e, &r.v_p, &r.v_e, &r.a_p_cmd, &r.a_e_cmd})
            os << ',' << fmt9(v->x) << ',' << fmt9(v->y);
        os << ',' << fmt9(r.r_e) << '\n';
    }
}

}  // namespace pursuit
