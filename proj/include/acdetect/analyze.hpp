#pragma once

// Top-level pipeline: heatmaps (computed from the image or loaded from
// ACHM files), region proposals, per-channel a-contrario analysis, fusion,
// and the report/mask outputs.

#include <string>
#include <vector>

#include "acdetect/acontrario.hpp"
#include "acdetect/features.hpp"
#include "acdetect/proposals.hpp"
#include "acdetect/report.hpp"

namespace acd {

struct AnalyzeOptions {
    // "default" maps every resampling channel to the periodicity baseline
    // and jpeg_q85 to blockiness; "periodicity"/"blockiness" force one
    // baseline everywhere; "external" analyzes only supplied heatmaps.
    std::string classifier = "default";
    std::vector<std::string> heatmap_paths;  // ACHM inputs, at most one per channel
    std::string external_proposals_path;     // label map; empty = none
    bool grid_proposals = false;             // add synthetic cell-grid proposals
    ProposalConfig proposals;
    AcontrarioConfig acontrario;
    std::vector<double> angles_deg{kDefaultAngles.begin(), kDefaultAngles.end()};
    int threads = 0;        // heatmap workers; 0 = hardware concurrency
    std::uint64_t seed = 0; // echoed into the report
    std::string report_path; // written when non-empty
    std::string mask_path;   // written when non-empty
};

// image_path may be empty when every analyzed channel comes from ACHM
// files. Channels with neither an image nor a heatmap score zero. Output
// files are written only after the whole analysis succeeded.
AnalysisReport analyze_image(const std::string& image_path, const AnalyzeOptions& options);

} // namespace acd
