#pragma once

// Pinned cross-component fixture: Euler step vectors and MLP forward cases
// that the trainer's environment and exporter must reproduce.

#include <cstdint>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "format.hpp"
#include "json.hpp"  // nlohmann/json, vendored
#include "mlp.hpp"

namespace pursuit {

inline constexpr std::uint64_t kGoldenSeed = 20240611;
inline constexpr std::size_t kGoldenStepCases = 32;
inline constexpr std::size_t kGoldenMlpCases = 8;

namespace detail {

// Platform-independent uniform draws: mt19937_64's output sequence is fixed by
// the standard, the distribution classes are not.
class FixtureRng {
public:
    explicit FixtureRng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return round9(lo + (hi - lo) * u);
    }
    Vec2 vec(double lo, double hi) {
        const double x = uniform(lo, hi);
        return {x, uniform(lo, hi)};
    }

private:
    std::mt19937_64 engine_;
};

inline nlohmann::json to_json(const Vec2& v) { return nlohmann::json::array({v.x, v.y}); }
inline Vec2 round9v(const Vec2& v) { return {pursuit::round9(v.x), pursuit::round9(v.y)}; }

}  // namespace detail

struct GoldenStepCase {
    AgentState state;
    Vec2 accel;
    AgentState next;
};

struct GoldenMlpCase {
    MlpNet net;
    ObsVector obs;
    Vec2 output;
};

struct GoldenFixture {
    WorldParams world;
    std::vector<GoldenStepCase> steps;
    std::vector<GoldenMlpCase> mlp;
};

/// Architecture the exporter pins: 8 -> 64 -> 64 -> 2, relu/relu/tanh.
inline MlpNet make_actor_net(double a_max, detail::FixtureRng* rng, double scale) {
    MlpNet net;
    net.a_max = a_max;
    const std::size_t widths[] = {kObsDim, 64, 64, kActDim};
    for (std::size_t i = 0; i + 1 < std::size(widths); ++i) {
        DenseLayer l;
        l.cols = widths[i];
        l.rows = widths[i + 1];
        l.activation = i + 2 < std::size(widths) ? Activation::Relu : Activation::Tanh;
        l.weights.assign(l.rows * l.cols, 0.0);
        l.bias.assign(l.rows, 0.0);
        if (rng) {
            for (auto& w : l.weights) w = rng->uniform(-scale, scale);
            for (auto& b : l.bias) b = rng->uniform(-scale, scale);
        }
        net.layers.push_back(std::move(l));
    }
    return net;
}

/// Deterministic fixture. Every stored input is already rounded to 9
/// significant digits and every expected output is computed from those
/// rounded inputs, then rounded itself.
inline GoldenFixture make_golden_fixture() {
    GoldenFixture fx;
    fx.world.mu = 0.5;
    fx.world.dt = 0.1;
    fx.world.t_max = 20;
    fx.world.scheme = Scheme::SemiImplicitEuler;
    detail::FixtureRng rng(kGoldenSeed);

    const double a_max = 4.0;
    auto add_step = [&](AgentState s, Vec2 a) {
        a = detail::round9v(clamp_acceleration(a, a_max));
        const AgentState n = step(s, a, fx.world);
        fx.steps.push_back({s, a, {detail::round9v(n.pos), detail::round9v(n.vel)}});
    };
    add_step({{0, 0}, {0, 0}}, {4, 0});
    add_step({{1.5, -2.25}, {0, 0}}, {0, 0});
    while (fx.steps.size() < kGoldenStepCases) {
        const Vec2 pos = rng.vec(-15, 15);
        const Vec2 vel = rng.vec(-8, 8);
        add_step({pos, vel}, rng.vec(-5, 5));
    }

    const double budgets[] = {4.0, 2.4, 2.0, 1.0};
    for (std::size_t i = 0; i < kGoldenMlpCases; ++i) {
        const double a = budgets[i % std::size(budgets)];
        MlpNet net = i == 0 ? make_actor_net(a, nullptr, 0) : make_actor_net(a, &rng, 0.3);
        ObsVector obs{};
        for (auto& o : obs) o = rng.uniform(-12, 12);
        const Vec2 out = detail::round9v(forward(net, obs));
        fx.mlp.push_back({std::move(net), obs, out});
    }
    return fx;
}

inline nlohmann::json golden_to_json(const GoldenFixture& fx) {
    using detail::to_json;
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["scheme"] = std::string(to_string(fx.world.scheme));
    doc["mu"] = fx.world.mu;
    doc["dt"] = fx.world.dt;
    doc["seed"] = kGoldenSeed;
    auto& steps = doc["step_cases"] = nlohmann::json::array();
    for (const auto& c : fx.steps) {
        steps.push_back({{"pos", to_json(c.state.pos)},
                         {"vel", to_json(c.state.vel)},
                         {"accel", to_json(c.accel)},
                         {"next_pos", to_json(c.next.pos)},
                         {"next_vel", to_json(c.next.vel)}});
    }
    auto& mlp = doc["mlp_cases"] = nlohmann::json::array();
    for (const auto& c : fx.mlp)
        mlp.push_back({{"net", policy_to_json(c.net)}, {"obs", c.obs}, {"output", to_json(c.output)}});
    return doc;
}

inline std::string write_golden(const GoldenFixture& fx) { return golden_to_json(fx).dump(1) + "\n"; }

}  // namespace pursuit
