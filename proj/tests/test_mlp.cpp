#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <tuple>
#include <string>

#include "oracles.hpp"
#include "pursuit/golden.hpp"
#include "pursuit/mlp.hpp"

using namespace pursuit;

namespace {

// Smallest legal network: one 2x8 identity layer.
std::string minimal_file(const std::string& weights_row0, const std::string& a_max = "1") {
    return R"({"format_version": 1, "obs_dim": 8, "act_dim": 2, "a_max": )" + a_max +
           R"(, "obs_layout": "vel2_pos2_relpos2_othervel2", "layers": [
             {"rows": 2, "cols": 8, "weights": [)" + weights_row0 +
           R"(, 0,0,0,0,0,0,0,0], "bias": [0, 0], "activation": "identity"}]})";
}

}  // namespace

TEST(BuildObservation, Layout) {
    const GameObservation obs{{0, -4}, {0, 0}, {}, {}};
    EXPECT_EQ(build_observation(obs, Role::Pursuer), (ObsVector{0, 0, 0, -4, 0, 4, 0, 0}));
    EXPECT_EQ(build_observation(obs, Role::Evader), (ObsVector{0, 0, 0, 0, 0, -4, 0, 0}));
    EXPECT_EQ(build_observation(GameObservation{}, Role::Pursuer), ObsVector{});
    const GameObservation moving{{1, 2}, {3, 5}, {-1, -2}, {7, 8}};
    EXPECT_EQ(build_observation(moving, Role::Pursuer), (ObsVector{-1, -2, 1, 2, 2, 3, 7, 8}));
    EXPECT_EQ(build_observation(moving, Role::Evader), (ObsVector{7, 8, 3, 5, -2, -3, -1, -2}));
}

TEST(LoadPolicy, MinimalFile) {
    const MlpNet net = load_policy(minimal_file("0,0,1,0,0,0,0,0"));
    EXPECT_EQ(net.obs_dim, 8u);
    EXPECT_EQ(net.act_dim, 2u);
    ASSERT_EQ(net.layers.size(), 1u);
    EXPECT_EQ(net.layers[0].activation, Activation::Identity);
}

TEST(LoadPolicy, WidthMismatch) {
    MlpNet net = make_actor_net(1, nullptr, 0);
    net.layers[1].cols = 32;
    net.layers[1].weights.resize(64 * 32);
    try {
        load_policy(save_policy(net));
        FAIL() << "expected WeightFileError";
    } catch (const WeightFileError& e) {
        EXPECT_EQ(e.where(), "$.layers[1].cols");
    }
}

TEST(LoadPolicy, NonFiniteWeight) {
    // JSON has no NaN literal; a huge exponent overflows to infinity.
    EXPECT_THROW(load_policy(minimal_file("0,0,1e999,0,0,0,0,0")), WeightFileError);
    EXPECT_THROW(load_policy(minimal_file("0,0,NaN,0,0,0,0,0")), WeightFileError);
}

TEST(LoadPolicy, ErrorLocations) {
    try {
        load_policy("{\"format_version\": 1,");
        FAIL();
    } catch (const WeightFileError& e) {
        EXPECT_EQ(e.where().rfind("byte ", 0), 0u);
    }
    std::string s = minimal_file("0,0,1,0,0,0,0,0");
    s.replace(s.find("vel2_pos2"), 9, "pos2_vel2");
    try {
        load_policy(s);
        FAIL();
    } catch (const WeightFileError& e) {
        EXPECT_EQ(e.where(), "$.obs_layout");
    }
    EXPECT_THROW(load_policy(minimal_file("0,0,1,0,0,0,0")), WeightFileError);  // short weights
    std::string bad_act = minimal_file("0,0,1,0,0,0,0,0");
    bad_act.replace(bad_act.find("identity"), 8, "sigmoid");
    EXPECT_THROW(load_policy(bad_act), WeightFileError);
    EXPECT_THROW(load_policy_file("/nonexistent/policy.json"), WeightFileError);
}

TEST(LoadPolicy, RoundTripPreservesValues) {
    detail::FixtureRng rng(5);
    oracle::Gen g(21);
    for (int i = 0; i < 5; ++i) {
        MlpNet net = make_actor_net(g.real(0.5, 5), &rng, 0.5);
        for (auto& w : net.layers[0].weights) w = g.real(-1, 1);  // full-precision values
        const MlpNet back = load_policy(save_policy(net));
        ASSERT_EQ(back.layers.size(), net.layers.size());
        EXPECT_EQ(back.a_max, net.a_max);
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            EXPECT_EQ(back.layers[l].weights, net.layers[l].weights);
            EXPECT_EQ(back.layers[l].bias, net.layers[l].bias);
            EXPECT_EQ(back.layers[l].activation, net.layers[l].activation);
        }
    }
}

TEST(Forward, ZeroNetGivesZero) {
    const MlpNet net = make_actor_net(4, nullptr, 0);
    oracle::Gen g(22);
    for (int i = 0; i < 100; ++i) {
        ObsVector obs;
        for (auto& o : obs) o = g.real(-10, 10);
        EXPECT_EQ(forward(net, obs), (Vec2{0, 0}));
    }
}

TEST(Forward, HandEvaluatedIdentityLayer) {
    const MlpNet net = load_policy(minimal_file("0,0,1,0,0,0,0,0"));
    const ObsVector obs{0, 0, 3, 0, 0, 0, 0, 0};
    // W*obs = (3, 0); scaled by a_max = 1 then clamped to the unit ball.
    EXPECT_EQ(forward(net, obs), (Vec2{1, 0}));
    const ObsVector small{0, 0, 0.25, 0, 0, 0, 0, 0};
    EXPECT_EQ(forward(net, small), (Vec2{0.25, 0}));
}

TEST(Forward, ShapeError) {
    const MlpNet net = make_actor_net(1, nullptr, 0);
    const std::vector<double> seven(7, 0.0);
    EXPECT_THROW(forward(net, seven), ShapeError);
}

TEST(Forward, OutputBoundProperty) {
    oracle::Gen g(23);
    detail::FixtureRng rng(7);
    for (int i = 0; i < oracle::kPropertyCases; ++i) {
        MlpNet net;
        net.a_max = g.real(0, 8);
        const std::size_t hidden = 1 + static_cast<std::size_t>(g.real(0, 12));
        for (auto [rows, cols, act] : {std::tuple{hidden, kObsDim, Activation::Relu},
                                       std::tuple{kActDim, hidden, i % 2 ? Activation::Tanh : Activation::Identity}}) {
            DenseLayer l{rows, cols, {}, {}, act};
            for (std::size_t k = 0; k < rows * cols; ++k) l.weights.push_back(g.real(-3, 3));
            for (std::size_t k = 0; k < rows; ++k) l.bias.push_back(g.real(-3, 3));
            net.layers.push_back(l);
        }
        ObsVector obs;
        for (auto& o : obs) o = g.real(-15, 15);
        EXPECT_LE(forward(net, obs).norm(), net.a_max + 1e-9);
    }
}

TEST(Forward, Deterministic) {
    detail::FixtureRng rng(8);
    const std::string bytes = save_policy(make_actor_net(2.4, &rng, 0.4));
    const ObsVector obs{1, -2, 3, -4, 5, -6, 7, -8};
    const Vec2 a = forward(load_policy(bytes), obs);
    for (int i = 0; i < 10; ++i) {
        const Vec2 b = forward(load_policy(bytes), obs);
        EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
    }
}

TEST(Forward, MatchesIndependentFloatEvaluation) {
    // Trainer-side networks run in float32; the engine in float64.
    detail::FixtureRng rng(9);
    oracle::Gen g(24);
    for (int i = 0; i < 20; ++i) {
        const MlpNet net = make_actor_net(4, &rng, 0.3);
        ObsVector obs;
        for (auto& o : obs) o = g.real(-12, 12);
        std::vector<float> x(obs.begin(), obs.end());
        for (const auto& l : net.layers) {
            std::vector<float> y(l.rows);
            for (std::size_t r = 0; r < l.rows; ++r) {
                float acc = static_cast<float>(l.bias[r]);
                for (std::size_t c = 0; c < l.cols; ++c) acc += static_cast<float>(l.weight(r, c)) * x[c];
                if (l.activation == Activation::Relu) acc = std::max(acc, 0.0f);
                if (l.activation == Activation::Tanh) acc = std::tanh(acc);
                y[r] = acc;
            }
            x = y;
        }
        float ox = x[0] * 4.0f, oy = x[1] * 4.0f;
        const float n = std::sqrt(ox * ox + oy * oy);
        if (n > 4.0f) {
            ox *= 4.0f / n;
            oy *= 4.0f / n;
        }
        const Vec2 out = forward(net, obs);
        EXPECT_NEAR(out.x, ox, 1e-5);
        EXPECT_NEAR(out.y, oy, 1e-5);
    }
}
