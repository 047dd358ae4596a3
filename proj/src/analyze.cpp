#include "acdetect/analyze.hpp"

#include <filesystem>
#include <optional>

#include "acdetect/features.hpp"
#include "acdetect/fusion.hpp"
#include "acdetect/heatmap_io.hpp"
#include "acdetect/image_io.hpp"
#include "acdetect/version.hpp"

namespace acd {

namespace {

nlohmann::ordered_json config_echo(const AnalyzeOptions& opt, const HeatmapGeometry& geom) {
    nlohmann::ordered_json j;
    j["patch_size"] = geom.patch_size;
    j["stride"] = geom.stride;
    j["classifier"] = opt.classifier;
    j["threshold"] = opt.acontrario.threshold_c;
    j["tail_mode"] = std::string(to_string(opt.acontrario.tail_mode));
    j["auto_cutoff_n"] = opt.acontrario.auto_cutoff_n;
    j["score_decades"] = opt.acontrario.score_decades;
    j["angles_deg"] = opt.angles_deg;
    j["proposals"] = {{"n_levels", opt.proposals.n_levels},
                      {"connectivity", static_cast<int>(opt.proposals.connectivity)},
                      {"min_cells", opt.proposals.min_cells},
                      {"max_area_frac", opt.proposals.max_area_frac},
                      {"polarity", std::string(to_string(opt.proposals.polarity))},
                      {"grid", opt.grid_proposals},
                      {"external", opt.external_proposals_path.empty()
                                       ? nlohmann::ordered_json(nullptr)
                                       : nlohmann::ordered_json(opt.external_proposals_path)}};
    j["seed"] = opt.seed;
    return j;
}

} // namespace

AnalysisReport analyze_image(const std::string& image_path, const AnalyzeOptions& options) {
    options.acontrario.validate();
    options.proposals.validate();
    if (options.classifier != "default" && options.classifier != "periodicity" &&
        options.classifier != "blockiness" && options.classifier != "external")
        throw ConfigError("classifier must be default|periodicity|blockiness|external");

    const bool have_image = !image_path.empty();
    ImageGray image;
    if (have_image) image = read_image(image_path);

    // Load supplied heatmaps; they must agree on geometry with each other
    // and with the image.
    std::array<std::optional<Heatmap>, kNumChannels> maps;
    std::optional<HeatmapGeometry> geom;
    if (have_image) geom = geometry_for(image.width, image.height);
    for (const std::string& path : options.heatmap_paths) {
        Heatmap hm = read_achm(path);
        const auto idx = static_cast<size_t>(hm.channel);
        if (maps[idx]) throw ConfigError("duplicate heatmap for channel " +
                                         std::string(to_string(hm.channel)));
        if (geom && hm.geometry != *geom)
            throw ShapeError("heatmap geometry disagrees with the other inputs: " + path);
        if (!geom) geom = hm.geometry;
        maps[idx] = std::move(hm);
    }
    if (!geom)
        throw ConfigError("nothing to analyze: provide an image or at least one heatmap");

    // Compute the remaining channels from the image.
    if (have_image && options.classifier != "external") {
        for (int i = 0; i < kNumChannels; ++i) {
            if (maps[static_cast<size_t>(i)]) continue;
            const Channel channel = kChannelOrder[static_cast<size_t>(i)];
            const auto classifier = options.classifier == "default"
                                        ? default_classifier_for(channel)
                                        : make_classifier(options.classifier);
            maps[static_cast<size_t>(i)] =
                build_heatmap(image, channel, *classifier, options.angles_deg, options.threads);
        }
    }

    // One proposal set shared by every channel.
    RegionProposalSet proposals;
    std::vector<std::vector<std::int64_t>> external;
    if (!options.external_proposals_path.empty())
        external = load_external_proposals(options.external_proposals_path, geom->image_width,
                                           geom->image_height);
    if (have_image) {
        proposals = collect_proposals(image, *geom, options.proposals, external);
    } else if (!external.empty()) {
        ImageGray blank = ImageGray::filled(geom->image_width, geom->image_height, 0.0);
        ProposalConfig external_only = options.proposals;
        external_only.n_levels = 2; // constant image contributes nothing
        proposals = collect_proposals(blank, *geom, external_only, external);
    }
    if (options.grid_proposals)
        proposals = merge_proposal_sets(proposals, grid_proposals(*geom));

    std::array<ChannelResult, kNumChannels> results;
    for (int i = 0; i < kNumChannels; ++i) {
        const auto& map = maps[static_cast<size_t>(i)];
        if (map) {
            results[static_cast<size_t>(i)] = detect_channel(*map, proposals, options.acontrario);
        } else {
            results[static_cast<size_t>(i)].channel = kChannelOrder[static_cast<size_t>(i)];
            results[static_cast<size_t>(i)].geometry = *geom;
        }
    }

    const FusionResult fused = fuse_channels(results, *geom);

    AnalysisReport report;
    report.tool = kToolName;
    report.version = kToolVersion;
    report.image_id = have_image ? std::filesystem::path(image_path).stem().string()
                                 : std::filesystem::path(options.heatmap_paths.front())
                                       .stem()
                                       .string();
    report.image_width = geom->image_width;
    report.image_height = geom->image_height;
    report.config = config_echo(options, *geom);
    for (int i = 0; i < kNumChannels; ++i) {
        const ChannelResult& cr = results[static_cast<size_t>(i)];
        ChannelReport ch;
        ch.channel = cr.channel;
        ch.score = cr.score;
        ch.min_nfa = cr.min_nfa();
        ch.candidate_count = cr.candidate_count;
        for (const NfaRecord& rec : cr.all_records) ch.num_meaningful += rec.meaningful ? 1 : 0;
        ch.detections = cr.detections;
        report.channels[static_cast<size_t>(i)] = std::move(ch);
    }
    report.final_score = fused.final_score;
    report.mask_path = options.mask_path;

    // All channels succeeded; only now touch the filesystem.
    if (!options.mask_path.empty())
        write_mask_pgm(options.mask_path, fused.union_mask, fused.mask_width, fused.mask_height);
    if (!options.report_path.empty()) write_report(options.report_path, report);
    return report;
}

} // namespace acd
