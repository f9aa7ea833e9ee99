#include "seren/metrics.hpp"

#include <charconv>
#include <stdexcept>

namespace seren {

const char* const kMetricsCsvHeader = "episode,return,steps,interventions,mean_uncertainty,success";

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, end);
}

void MetricsLog::validate() const {
    int last = 0;
    for (const EpisodeRow& r : rows) {
        if (r.episode <= last) throw std::runtime_error("MetricsLog: episodes out of order");
        if (r.interventions > r.steps)
            throw std::runtime_error("MetricsLog: interventions exceed steps");
        last = r.episode;
    }
}

std::string MetricsLog::to_csv() const {
    std::string out = kMetricsCsvHeader;
    out += '\n';
    for (const EpisodeRow& r : rows) {
        out += std::to_string(r.episode);
        out += ',';
        out += format_double(r.episode_return);
        out += ',';
        out += std::to_string(r.steps);
        out += ',';
        out += std::to_string(r.interventions);
        out += ',';
        out += format_double(r.mean_uncertainty);
        out += ',';
        out += r.success ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace seren
