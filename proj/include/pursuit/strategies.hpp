#pragma once

// Baseline pursuit/evasion feedback laws and the uniform policy interface.

#include <cmath>
#include <memory>
#include <string>

#include "dynamics.hpp"
#include "errors.hpp"
#include "mlp.hpp"
#include "observation.hpp"

namespace pursuit {

/// Pure pursuit: full thrust along the line of sight.
inline Vec2 baseline_pursuit(const GameObservation& obs, double a_p) {
    return unit_vector_to_evader(obs.x_p, obs.x_e) * a_p;
}

/// Unit normal of `d`, choosing the side most opposed to the pursuer's velocity.
/// Ties (including a resting pursuer) resolve to the counterclockwise normal.
inline Vec2 perpendicular_turn(const Vec2& d, const Vec2& pursuer_vel) {
    if (!d.finite() || std::abs(d.norm() - 1.0) > 1e-9) throw InvalidDirection("direction must be a unit vector");
    const Vec2 ccw{-d.y, d.x};
    const Vec2 cw{d.y, -d.x};
    if (pursuer_vel.norm() < 1e-9) return ccw;
    const double dot_ccw = ccw.dot(pursuer_vel);
    const double dot_cw = cw.dot(pursuer_vel);
    if (std::abs(dot_ccw - dot_cw) <= 1e-12) return ccw;
    return dot_cw < dot_ccw ? cw : ccw;
}

/// Flee along the line of sight until the pursuer is within `c`, then turn
/// perpendicular to it. Re-evaluated every call; nothing is latched.
inline Vec2 baseline_evasion(const GameObservation& obs, double a_e, double c) {
    const Vec2 d = unit_vector_to_evader(obs.x_p, obs.x_e);
    if (distance(obs.x_p, obs.x_e) > c) return d * a_e;
    return perpendicular_turn(d, obs.v_p) * a_e;
}

enum class PolicyKind { BaselinePursuit, BaselineEvasion, Mlp };

/// Immutable strategy description. Copies share the same network.
class Policy {
public:
    static Policy baseline_pursuit(double a_max) { return Policy(PolicyKind::BaselinePursuit, a_max, 0.0, nullptr); }

    static Policy baseline_evasion(double a_max, double c) {
        if (!(std::isfinite(c) && c >= 0)) throw InvalidParameter("critical distance c must be >= 0");
        return Policy(PolicyKind::BaselineEvasion, a_max, c, nullptr);
    }

    /// Learned actor; its output is scaled to `a_max` (the file's a_max when omitted).
    static Policy mlp(std::shared_ptr<const MlpNet> net, double a_max) {
        if (!net) throw InvalidParameter("mlp policy needs a network");
        net->validate();
        return Policy(PolicyKind::Mlp, a_max, 0.0, std::move(net));
    }
    static Policy mlp(std::shared_ptr<const MlpNet> net) {
        if (!net) throw InvalidParameter("mlp policy needs a network");
        const double a = net->a_max;
        return mlp(std::move(net), a);
    }

    /// Same strategy with a different acceleration budget.
    Policy with_a_max(double a_max) const { return Policy(kind_, a_max, c_, net_); }

    PolicyKind kind() const { return kind_; }
    double a_max() const { return a_max_; }
    double c() const { return c_; }
    const std::shared_ptr<const MlpNet>& net() const { return net_; }

    std::string describe() const {
        switch (kind_) {
            case PolicyKind::BaselinePursuit: return "baseline-pursuit";
            case PolicyKind::BaselineEvasion: return "baseline-evasion";
            case PolicyKind::Mlp: return "mlp";
        }
        return "unknown";
    }

private:
    Policy(PolicyKind kind, double a_max, double c, std::shared_ptr<const MlpNet> net)
        : kind_(kind), a_max_(a_max), c_(c), net_(std::move(net)) {
        if (!(std::isfinite(a_max_) && a_max_ >= 0)) throw InvalidParameter("a_max must be finite and >= 0");
    }

    PolicyKind kind_;
    double a_max_;
    double c_;
    std::shared_ptr<const MlpNet> net_;
};

/// Acceleration command for the agent playing `perspective`; ‖result‖ <= a_max.
inline Vec2 policy_action(const Policy& policy, const GameObservation& obs, Role perspective) {
    Vec2 a;
    switch (policy.kind()) {
        case PolicyKind::BaselinePursuit:
            if (perspective != Role::Pursuer) throw PolicyMismatch("baseline pursuit strategy used for the evader");
            a = baseline_pursuit(obs, policy.a_max());
            break;
        case PolicyKind::BaselineEvasion:
            if (perspective != Role::Evader) throw PolicyMismatch("baseline evasion strategy used for the pursuer");
            a = baseline_evasion(obs, policy.a_max(), policy.c());
            break;
        case PolicyKind::Mlp: {
            const ObsVector v = build_observation(obs, perspective);
            a = forward(*policy.net(), v, policy.a_max());
            break;
        }
    }
    return clamp_acceleration(a, policy.a_max());
}

}  // namespace pursuit
