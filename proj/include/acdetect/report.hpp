#pragma once

// Per-image analysis report: six channel summaries (score, minimum NFA,
// kept detections with their statistics), the fused score and the mask
// location, plus an echo of the configuration that produced them. The JSON
// form round-trips losslessly.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acdetect/types.hpp"

namespace acd {

struct ChannelReport {
    Channel channel = Channel::RescaleUp;
    double score = 0.0;
    std::optional<double> min_nfa;
    std::int64_t candidate_count = 0;
    std::int64_t num_meaningful = 0;
    std::vector<std::pair<Region, NfaRecord>> detections;

    bool operator==(const ChannelReport&) const = default;
};

struct AnalysisReport {
    std::string tool;
    std::string version;
    std::string image_id;
    int image_width = 0;
    int image_height = 0;
    nlohmann::ordered_json config;
    std::array<ChannelReport, kNumChannels> channels;
    double final_score = 0.0;
    std::string mask_path;

    bool operator==(const AnalysisReport&) const = default;
};

nlohmann::ordered_json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::ordered_json& j); // FormatError on bad shape

void write_report(const std::string& path, const AnalysisReport& report);
AnalysisReport read_report(const std::string& path);

} // namespace acd
