#pragma once

#include <string_view>

#include "vec2.hpp"

namespace pursuit {

enum class Role { Pursuer, Evader };

inline std::string_view to_string(Role r) { return r == Role::Pursuer ? "pursuer" : "evader"; }

/// Full game state as seen by either agent: both positions and both velocities.
struct GameObservation {
    Vec2 x_p;
    Vec2 x_e;
    Vec2 v_p;
    Vec2 v_e;

    bool finite() const { return x_p.finite() && x_e.finite() && v_p.finite() && v_e.finite(); }

    /// Same observation with every vector rotated by `angle`.
    GameObservation rotated(double angle) const {
        return {rotate(x_p, angle), rotate(x_e, angle), rotate(v_p, angle), rotate(v_e, angle)};
    }
};

}  // namespace pursuit
