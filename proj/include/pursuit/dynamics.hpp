#pragma once

// Damped point-mass dynamics: x'' = -mu x' + a, with the acceleration held
// constant over each step.

#include <cmath>
#include <string_view>

#include "errors.hpp"
#include "vec2.hpp"

namespace pursuit {

enum class Scheme {
    ExactExponential,   ///< closed-form solution under zero-order-hold acceleration
    SemiImplicitEuler,  ///< v' = v(1 - mu dt) + a dt; x' = x + v' dt (training environment)
};

inline std::string_view to_string(Scheme s) {
    return s == Scheme::ExactExponential ? "exact" : "euler";
}

inline Scheme scheme_from_string(std::string_view s) {
    if (s == "exact") return Scheme::ExactExponential;
    if (s == "euler") return Scheme::SemiImplicitEuler;
    throw InvalidParameter("unknown integration scheme '" + std::string(s) + "'");
}

struct WorldParams {
    double mu = 0.5;    ///< velocity damping coefficient (1/s)
    double eps = 0.5;   ///< capture radius (m)
    double dt = 0.01;   ///< integration step (s)
    double t_max = 20;  ///< game horizon (s)
    Scheme scheme = Scheme::ExactExponential;

    void validate() const {
        if (!(std::isfinite(mu) && mu >= 0)) throw InvalidParameter("mu must be finite and >= 0");
        if (!(std::isfinite(eps) && eps > 0)) throw InvalidParameter("eps must be > 0");
        if (!(std::isfinite(dt) && dt > 0)) throw InvalidParameter("dt must be > 0");
        if (!(std::isfinite(t_max) && t_max > 0)) throw InvalidParameter("t_max must be > 0");
        if (dt > t_max) throw InvalidParameter("dt must not exceed t_max");
    }
};

/// Unit line-of-sight vector from the pursuer to the evader.
inline Vec2 unit_vector_to_evader(const Vec2& pursuer, const Vec2& evader) {
    const Vec2 d = evader - pursuer;
    const double n = d.norm();
    if (!(n > 0)) throw CoincidentAgents();
    return d / n;
}

/// Projects `a` onto the closed ball of radius `a_max`.
inline Vec2 clamp_acceleration(const Vec2& a, double a_max) {
    if (a_max < 0) throw InvalidParameter("a_max must be >= 0");
    const double n = a.norm();
    if (n <= a_max) return a;
    return a * (a_max / n);
}

namespace detail {

// Returns g = (1 - e^{-mu dt}) / mu and h = (dt - g) / mu, the velocity and
// position response to a unit constant acceleration over one step.
struct DecayFactors {
    double decay;  // e^{-mu dt}
    double g;
    double h;
};

inline DecayFactors decay_factors(double mu, double dt) {
    if (mu < 1e-9) return {1.0, dt, 0.5 * dt * dt};
    const double z = mu * dt;
    if (z < 1e-3) {
        // Taylor series; the closed form cancels catastrophically here.
        const double g = dt * (1 - z / 2 + z * z / 6 - z * z * z / 24 + z * z * z * z / 120);
        const double h = dt * dt * (0.5 - z / 6 + z * z / 24 - z * z * z / 120 + z * z * z * z / 720);
        return {std::exp(-z), g, h};
    }
    const double g = -std::expm1(-z) / mu;
    return {std::exp(-z), g, (dt - g) / mu};
}

}  // namespace detail

/// Advances one agent by `params.dt` under constant acceleration `accel`.
inline AgentState step(const AgentState& state, const Vec2& accel, const WorldParams& params) {
    if (!accel.finite()) throw InvalidParameter("acceleration must be finite");
    const double dt = params.dt;
    const double mu = params.mu;

    switch (params.scheme) {
        case Scheme::ExactExponential: {
            const auto f = detail::decay_factors(mu, dt);
            return {state.pos + state.vel * f.g + accel * f.h,
                    state.vel * f.decay + accel * f.g};
        }
        case Scheme::SemiImplicitEuler: {
            if (mu * dt >= 1) throw UnstableStep("mu*dt >= 1 makes the Euler damping factor non-positive");
            const Vec2 v = state.vel * (1 - mu * dt) + accel * dt;
            return {state.pos + v * dt, v};
        }
    }
    throw InvalidParameter("unknown integration scheme");
}

}  // namespace pursuit
