#pragma once

// Sibling manifest written next to every output file.

#include <chrono>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "json.hpp"  // nlohmann/json, vendored

namespace pursuit {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunManifest {
    std::string command;               ///< subcommand name
    std::vector<std::string> argv;     ///< invocation, verbatim
    nlohmann::json config;             ///< every parameter after defaulting
    std::vector<std::string> outputs;  ///< files written by the run
    double wall_seconds = 0;

    nlohmann::json to_json() const {
        return {{"tool", "pursuit"},
                {"tool_version", kToolVersion},
                {"command", command},
                {"argv", argv},
                {"config", config},
                {"outputs", outputs},
                {"wall_clock_seconds", wall_seconds}};
    }
};

inline std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

/// Writes `<output>.manifest.json` for each output file.
inline void write_manifests(const RunManifest& m) {
    const std::string text = m.to_json().dump(2) + "\n";
    for (const auto& out : m.outputs) {
        std::ofstream f(manifest_path(out));
        if (!f) throw Error("cannot write manifest for " + out);
        f << text;
    }
}

}  // namespace pursuit
