#pragma once

// Feed-forward actor inference and the portable weight-file format shared
// with the trainer.
//
// Weight file (JSON):
//   { "format_version": 1, "obs_dim": 8, "act_dim": 2, "a_max": <real>,
//     "obs_layout": "vel2_pos2_relpos2_othervel2",
//     "layers": [ { "rows": R, "cols": C, "weights": [R*C reals, row-major],
//                   "bias": [R reals], "activation": "relu"|"tanh"|"identity" } ] }

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"  // nlohmann/json, vendored

#include "dynamics.hpp"
#include "errors.hpp"
#include "observation.hpp"

namespace pursuit {

inline constexpr std::size_t kObsDim = 8;
inline constexpr std::size_t kActDim = 2;
inline constexpr int kWeightFormatVersion = 1;
inline constexpr std::string_view kObsLayout = "vel2_pos2_relpos2_othervel2";

enum class Activation { Relu, Tanh, Identity };

inline std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::Relu: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
    }
    return "identity";
}

struct DenseLayer {
    std::size_t rows = 0;        // output width
    std::size_t cols = 0;        // input width
    std::vector<double> weights; // rows*cols, row-major
    std::vector<double> bias;    // rows
    Activation activation = Activation::Identity;

    double weight(std::size_t r, std::size_t c) const { return weights[r * cols + c]; }
};

struct MlpNet {
    std::vector<DenseLayer> layers;
    std::size_t obs_dim = kObsDim;
    std::size_t act_dim = kActDim;
    double a_max = 1.0;

    /// Throws ShapeError on any broken width chain or non-finite value.
    void validate() const {
        if (layers.empty()) throw ShapeError("network has no layers");
        if (act_dim != kActDim) throw ShapeError("act_dim must be 2");
        if (!(std::isfinite(a_max) && a_max >= 0)) throw ShapeError("a_max must be finite and >= 0");
        std::size_t width = obs_dim;
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const auto& l = layers[i];
            const std::string at = "layers[" + std::to_string(i) + "]";
            if (l.cols != width)
                throw ShapeError(at + " expects input width " + std::to_string(l.cols) +
                                 " but previous width is " + std::to_string(width));
            if (l.rows == 0) throw ShapeError(at + " has zero rows");
            if (l.weights.size() != l.rows * l.cols) throw ShapeError(at + " weight count != rows*cols");
            if (l.bias.size() != l.rows) throw ShapeError(at + " bias count != rows");
            for (double w : l.weights)
                if (!std::isfinite(w)) throw ShapeError(at + " has a non-finite weight");
            for (double b : l.bias)
                if (!std::isfinite(b)) throw ShapeError(at + " has a non-finite bias");
            width = l.rows;
        }
        if (width != act_dim) throw ShapeError("last layer width must equal act_dim");
    }
};

/// Fixed 8-slot observation from one agent's point of view:
/// [own_vel, own_pos, other_pos - own_pos, other_vel].
using ObsVector = std::array<double, kObsDim>;

inline ObsVector build_observation(const GameObservation& obs, Role perspective) {
    const bool pursuer = perspective == Role::Pursuer;
    const Vec2& own_pos = pursuer ? obs.x_p : obs.x_e;
    const Vec2& own_vel = pursuer ? obs.v_p : obs.v_e;
    const Vec2& other_pos = pursuer ? obs.x_e : obs.x_p;
    const Vec2& other_vel = pursuer ? obs.v_e : obs.v_p;
    const Vec2 rel = other_pos - own_pos;
    return {own_vel.x, own_vel.y, own_pos.x, own_pos.y, rel.x, rel.y, other_vel.x, other_vel.y};
}

/// Affine + activation chain, scaled by `a_max` and clamped to the a_max ball.
inline Vec2 forward(const MlpNet& net, std::span<const double> obs, double a_max) {
    if (obs.size() != net.obs_dim)
        throw ShapeError("observation has " + std::to_string(obs.size()) + " entries, network expects " +
                         std::to_string(net.obs_dim));
    std::vector<double> in(obs.begin(), obs.end());
    std::vector<double> out;
    for (const auto& layer : net.layers) {
        if (layer.cols != in.size()) throw ShapeError("layer input width mismatch");
        out.assign(layer.rows, 0.0);
        for (std::size_t r = 0; r < layer.rows; ++r) {
            double acc = layer.bias[r];
            for (std::size_t c = 0; c < layer.cols; ++c) acc += layer.weight(r, c) * in[c];
            switch (layer.activation) {
                case Activation::Relu: acc = acc > 0 ? acc : 0.0; break;
                case Activation::Tanh: acc = std::tanh(acc); break;
                case Activation::Identity: break;
            }
            out[r] = acc;
        }
        in.swap(out);
    }
    if (in.size() != kActDim) throw ShapeError("network output width must be 2");
    return clamp_acceleration(Vec2{in[0], in[1]} * a_max, a_max);
}

inline Vec2 forward(const MlpNet& net, std::span<const double> obs) { return forward(net, obs, net.a_max); }

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw WeightFileError("expected an object", path);
    auto it = obj.find(key);
    if (it == obj.end()) throw WeightFileError("missing field", path + "." + key);
    return *it;
}

inline double require_real(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number()) throw WeightFileError("expected a number", path);
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw WeightFileError("non-finite value", path);
    return d;
}

inline std::size_t require_count(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number_unsigned()) throw WeightFileError("expected a non-negative integer", path);
    return v.get<std::size_t>();
}

inline std::vector<double> require_reals(const nlohmann::json& v, std::size_t n, const std::string& path) {
    if (!v.is_array()) throw WeightFileError("expected an array", path);
    if (v.size() != n)
        throw WeightFileError("expected " + std::to_string(n) + " values, found " + std::to_string(v.size()), path);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(require_real(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline Activation parse_activation(const nlohmann::json& v, const std::string& path) {
    if (!v.is_string()) throw WeightFileError("expected a string", path);
    const auto s = v.get<std::string>();
    if (s == "relu") return Activation::Relu;
    if (s == "tanh") return Activation::Tanh;
    if (s == "identity") return Activation::Identity;
    throw WeightFileError("unknown activation '" + s + "'", path);
}

}  // namespace detail

/// Builds a validated network from an already-parsed weight-file object.
inline MlpNet policy_from_json(const nlohmann::json& doc, const std::string& root = "$") {
    using namespace detail;
    const auto& version = require(doc, "format_version", root);
    if (!version.is_number_integer() || version.get<long long>() != kWeightFormatVersion)
        throw WeightFileError("unsupported format_version", root + ".format_version");
    MlpNet net;
    net.obs_dim = require_count(require(doc, "obs_dim", root), root + ".obs_dim");
    if (net.obs_dim != kObsDim) throw WeightFileError("obs_dim must be 8", root + ".obs_dim");
    net.act_dim = require_count(require(doc, "act_dim", root), root + ".act_dim");
    if (net.act_dim != kActDim) throw WeightFileError("act_dim must be 2", root + ".act_dim");
    net.a_max = require_real(require(doc, "a_max", root), root + ".a_max");
    if (net.a_max < 0) throw WeightFileError("a_max must be >= 0", root + ".a_max");
    const auto& layout = require(doc, "obs_layout", root);
    if (!layout.is_string() || layout.get<std::string>() != kObsLayout)
        throw WeightFileError("obs_layout must be \"" + std::string(kObsLayout) + "\"", root + ".obs_layout");

    const auto& layers = require(doc, "layers", root);
    if (!layers.is_array() || layers.empty()) throw WeightFileError("expected a non-empty array", root + ".layers");
    std::size_t width = net.obs_dim;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string path = root + ".layers[" + std::to_string(i) + "]";
        const auto& jl = layers[i];
        DenseLayer l;
        l.rows = require_count(require(jl, "rows", path), path + ".rows");
        l.cols = require_count(require(jl, "cols", path), path + ".cols");
        if (l.rows == 0) throw WeightFileError("rows must be > 0", path + ".rows");
        if (l.cols != width)
            throw WeightFileError("input width " + std::to_string(l.cols) + " does not match previous width " +
                                      std::to_string(width),
                                  path + ".cols");
        l.weights = require_reals(require(jl, "weights", path), l.rows * l.cols, path + ".weights");
        l.bias = require_reals(require(jl, "bias", path), l.rows, path + ".bias");
        l.activation = parse_activation(require(jl, "activation", path), path + ".activation");
        width = l.rows;
        net.layers.push_back(std::move(l));
    }
    if (width != net.act_dim)
        throw WeightFileError("last layer width " + std::to_string(width) + " does not match act_dim",
                              root + ".layers[" + std::to_string(layers.size() - 1) + "].rows");
    return net;
}

/// Parses weight-file text. Syntax errors report the byte offset.
inline MlpNet load_policy(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw WeightFileError(e.what(), "byte " + std::to_string(e.byte));
    } catch (const nlohmann::json::exception& e) {
        throw WeightFileError(e.what(), "$");
    }
    return policy_from_json(doc);
}

inline MlpNet load_policy_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WeightFileError("cannot open weight file", path);
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        return load_policy(bytes);
    } catch (const WeightFileError& e) {
        throw WeightFileError(e.what(), path);
    }
}

inline nlohmann::json policy_to_json(const MlpNet& net) {
    nlohmann::json doc;
    doc["format_version"] = kWeightFormatVersion;
    doc["obs_dim"] = net.obs_dim;
    doc["act_dim"] = net.act_dim;
    doc["a_max"] = net.a_max;
    doc["obs_layout"] = std::string(kObsLayout);
    auto& layers = doc["layers"] = nlohmann::json::array();
    for (const auto& l : net.layers) {
        layers.push_back({{"rows", l.rows},
                          {"cols", l.cols},
                          {"weights", l.weights},
                          {"bias", l.bias},
                          {"activation", std::string(to_string(l.activation))}});
    }
    return doc;
}

/// Serializes with shortest round-trip reals, so load_policy(save_policy(n)) == n.
inline std::string save_policy(const MlpNet& net) { return policy_to_json(net).dump(1); }

}  // namespace pursuit
