#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace seren {

struct EpisodeRow {
    int episode = 0;  // 1-based
    double episode_return = 0.0;
    int steps = 0;
    int interventions = 0;
    double mean_uncertainty = 0.0;
    bool success = false;
};

/// Per-episode run log plus run-level metadata. CSV layout is part of the
/// external interface: episode,return,steps,interventions,mean_uncertainty,success
struct MetricsLog {
    std::vector<EpisodeRow> rows;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;

    void validate() const;
    std::string to_csv() const;
};

extern const char* const kMetricsCsvHeader;

/// Deterministic shortest-round-trip formatting shared by every CSV writer.
std::string format_double(double x);

}  // namespace seren
