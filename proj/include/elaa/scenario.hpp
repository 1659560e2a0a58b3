#pragma once

// Scenario configuration and its key-value text format.
//
//   # comment
//   schema_version = 1
//   channel = elaa            # or iid
//   antennas = 256
//   detectors = SSOR:uwsvd:50, SSOR:plain:50
//
// Every key is listed in to_config_text(); unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elaa/channel.hpp"
#include "elaa/detectors.hpp"

namespace elaa {

inline constexpr int kSchemaVersion = 1;

enum class ChannelKind { Elaa, Iid };

std::string_view to_string(ChannelKind kind);
ChannelKind parse_channel_kind(std::string_view name);

struct DetectorEntry {
    Method method = Method::SSOR;
    bool uwsvd = false;
    int max_iters = 50;

    bool operator==(const DetectorEntry&) const = default;
};

/// JI, GS, SSOR and L-BFGS, each with and without UW-SVD, 50 iterations.
std::vector<DetectorEntry> default_detectors();

struct ScenarioConfig {
    GeometryConfig geometry;
    FadingConfig fading;
    ChannelKind channel = ChannelKind::Elaa;
    /// Unset means 22 dB for ELAA and 19 dB for i.i.d. channels.
    std::optional<double> esno_db;
    int modulation = 16;
    std::vector<DetectorEntry> detectors = default_detectors();
    InitPolicy x0 = InitPolicy::Zero;
    int trials = 500;
    std::uint64_t master_seed = 1;
    /// Worker threads for trials; results do not depend on it.
    int threads = 1;

    double effective_esno_db() const;
    void validate() const;
};

/// Parses the text format; `source` names the input in error messages.
ScenarioConfig parse_scenario(std::string_view text, const std::string& source = "<config>");
/// Throws ConfigError naming the path when it cannot be read.
ScenarioConfig load_scenario(const std::string& path);
std::string to_config_text(const ScenarioConfig& config);

}  // namespace elaa
