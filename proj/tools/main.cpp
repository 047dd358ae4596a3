// acdetect command-line interface.
//
// Exit codes: 0 success, 1 usage/configuration error, 2 data or I/O error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acdetect/analyze.hpp"
#include "acdetect/eval.hpp"
#include "acdetect/features.hpp"
#include "acdetect/heatmap_io.hpp"
#include "acdetect/image_io.hpp"
#include "acdetect/synth.hpp"
#include "acdetect/version.hpp"

namespace {

struct CommonDefaults {
    acd::AnalyzeOptions analyze;
};

// --config JSON can pre-set any tunable; explicit flags still win because
// the file is applied before CLI parsing assigns values.
void apply_config_file(const std::string& path, CommonDefaults& defaults) {
    std::ifstream in(path);
    if (!in) throw acd::IoError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw acd::ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    auto& opt = defaults.analyze;
    if (j.contains("classifier")) opt.classifier = j["classifier"].get<std::string>();
    if (j.contains("threshold")) opt.acontrario.threshold_c = j["threshold"].get<double>();
    if (j.contains("tail_mode"))
        opt.acontrario.tail_mode = acd::tail_mode_from_string(j["tail_mode"].get<std::string>());
    if (j.contains("auto_cutoff_n")) opt.acontrario.auto_cutoff_n = j["auto_cutoff_n"].get<int>();
    if (j.contains("score_decades"))
        opt.acontrario.score_decades = j["score_decades"].get<double>();
    if (j.contains("n_levels")) opt.proposals.n_levels = j["n_levels"].get<int>();
    if (j.contains("connectivity"))
        opt.proposals.connectivity = j["connectivity"].get<int>() == 4
                                         ? acd::Connectivity::Four
                                         : acd::Connectivity::Eight;
    if (j.contains("min_cells")) opt.proposals.min_cells = j["min_cells"].get<int>();
    if (j.contains("max_area_frac")) opt.proposals.max_area_frac = j["max_area_frac"].get<double>();
    if (j.contains("polarity"))
        opt.proposals.polarity = acd::polarity_mode_from_string(j["polarity"].get<std::string>());
    if (j.contains("angles_deg")) opt.angles_deg = j["angles_deg"].get<std::vector<double>>();
    if (j.contains("threads")) opt.threads = j["threads"].get<int>();
    if (j.contains("grid_proposals")) opt.grid_proposals = j["grid_proposals"].get<bool>();
}

std::string default_output(const std::string& image_path,
                           const std::vector<std::string>& heatmaps, const char* suffix) {
    const std::string base = !image_path.empty()
                                 ? std::filesystem::path(image_path).stem().string()
                                 : std::filesystem::path(heatmaps.front()).stem().string();
    return base + suffix;
}

void add_proposal_flags(CLI::App* cmd, acd::AnalyzeOptions& opt, int& connectivity,
                        std::string& polarity) {
    cmd->add_option("--n-levels", opt.proposals.n_levels, "level-set quantile count");
    cmd->add_option("--connectivity", connectivity, "component connectivity (4 or 8)")
        ->check(CLI::IsMember({4, 8}));
    cmd->add_option("--min-cells", opt.proposals.min_cells, "minimum region size in cells");
    cmd->add_option("--max-area-frac", opt.proposals.max_area_frac,
                    "maximum segment area as a fraction of the image");
    cmd->add_option("--polarity", polarity, "level-set polarity: upper|lower|both");
    cmd->add_option("--external-proposals", opt.external_proposals_path,
                    "label-map PGM with extra segment proposals");
    cmd->add_flag("--grid-proposals", opt.grid_proposals,
                  "add synthetic cell-grid proposals");
}

void finish_proposal_flags(acd::AnalyzeOptions& opt, int connectivity,
                           const std::string& polarity) {
    opt.proposals.connectivity =
        connectivity == 4 ? acd::Connectivity::Four : acd::Connectivity::Eight;
    opt.proposals.polarity = acd::polarity_mode_from_string(polarity);
}

} // namespace

int main(int argc, char** argv) {
    CommonDefaults defaults;

    // Pre-scan for --config so file values become defaults under the flags.
    try {
        for (int i = 1; i + 1 < argc; ++i) {
            if (std::string_view(argv[i]) == "--config") {
                apply_config_file(argv[i + 1], defaults);
                break;
            }
        }
    } catch (const acd::Error& e) {
        std::cerr << "acdetect: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"resampling tamper detection with a-contrario false-alarm control"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    std::string config_path;
    app.add_option("--seed", seed, "seed for synthetic generators");
    app.add_option("--config", config_path, "JSON file with parameter defaults");

    // ---- analyze ----------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "score and localize tampering in an image");
    acd::AnalyzeOptions opt = defaults.analyze;
    std::string image_path;
    std::string report_path, mask_path;
    int connectivity = static_cast<int>(opt.proposals.connectivity);
    std::string polarity{acd::to_string(opt.proposals.polarity)};
    analyze->add_option("image", image_path, "input image (PGM/PPM)");
    analyze->add_option("--heatmap", opt.heatmap_paths,
                        "ACHM heatmap file (repeatable, one per channel)");
    analyze->add_option("--classifier", opt.classifier,
                        "default|periodicity|blockiness|external");
    analyze->add_option("--threshold", opt.acontrario.threshold_c, "heatmap threshold in (0,1)");
    std::string tail_mode{acd::to_string(opt.acontrario.tail_mode)};
    analyze->add_option("--tail-mode", tail_mode, "binomial tail: exact|hoeffding|auto");
    analyze->add_option("--auto-cutoff", opt.acontrario.auto_cutoff_n,
                        "exact-tail size limit in auto mode");
    analyze->add_option("--score-decades", opt.acontrario.score_decades,
                        "NFA decades mapped onto the [0,1] score");
    analyze->add_option("--angles", opt.angles_deg, "projection angles in degrees")
        ->delimiter(',');
    analyze->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    analyze->add_option("--report", report_path, "output report JSON path");
    analyze->add_option("--mask", mask_path, "output mask PGM path");
    add_proposal_flags(analyze, opt, connectivity, polarity);
    analyze->callback([&] {
        if (image_path.empty() && opt.heatmap_paths.empty())
            throw CLI::ValidationError("analyze", "provide an image and/or --heatmap files");
        finish_proposal_flags(opt, connectivity, polarity);
        opt.acontrario.tail_mode = acd::tail_mode_from_string(tail_mode);
        opt.seed = seed;
        opt.report_path = report_path.empty()
                              ? default_output(image_path, opt.heatmap_paths, "_report.json")
                              : report_path;
        opt.mask_path = mask_path.empty()
                            ? default_output(image_path, opt.heatmap_paths, "_mask.pgm")
                            : mask_path;
        const acd::AnalysisReport report = acd::analyze_image(image_path, opt);
        std::cout << "final_score " << report.final_score << "\n"
                  << "report " << opt.report_path << "\n"
                  << "mask " << opt.mask_path << "\n";
    });

    // ---- heatmap ----------------------------------------------------------
    auto* heatmap = app.add_subcommand("heatmap", "compute one channel heatmap to an ACHM file");
    std::string hm_image, hm_channel = "rescale_up", hm_classifier, hm_out;
    std::vector<double> hm_angles = defaults.analyze.angles_deg;
    int hm_threads = defaults.analyze.threads;
    heatmap->add_option("image", hm_image, "input image (PGM/PPM)")->required();
    heatmap->add_option("--channel", hm_channel, "channel id")->required();
    heatmap->add_option("--classifier", hm_classifier,
                        "periodicity|blockiness (default: by channel)");
    heatmap->add_option("--angles", hm_angles, "projection angles in degrees")->delimiter(',');
    heatmap->add_option("--threads", hm_threads, "worker threads (0 = hardware)");
    heatmap->add_option("-o,--out", hm_out, "output ACHM path")->required();
    heatmap->callback([&] {
        const acd::ImageGray image = acd::read_image(hm_image);
        const acd::Channel channel = acd::channel_from_string(hm_channel);
        const auto classifier = hm_classifier.empty() ? acd::default_classifier_for(channel)
                                                      : acd::make_classifier(hm_classifier);
        const acd::Heatmap hm =
            acd::build_heatmap(image, channel, *classifier, hm_angles, hm_threads);
        acd::write_achm(hm_out, hm);
        std::cout << "heatmap " << hm_out << " (" << hm.geometry.hm_width << "x"
                  << hm.geometry.hm_height << ")\n";
    });

    // ---- proposals --------------------------------------------------------
    auto* proposals = app.add_subcommand("proposals", "emit region proposals as JSON");
    acd::AnalyzeOptions prop_opt = defaults.analyze;
    std::string prop_image, prop_out;
    int prop_conn = static_cast<int>(prop_opt.proposals.connectivity);
    std::string prop_pol{acd::to_string(prop_opt.proposals.polarity)};
    proposals->add_option("image", prop_image, "input image (PGM/PPM)")->required();
    add_proposal_flags(proposals, prop_opt, prop_conn, prop_pol);
    proposals->add_option("-o,--out", prop_out, "output JSON path (default: stdout)");
    proposals->callback([&] {
        finish_proposal_flags(prop_opt, prop_conn, prop_pol);
        const acd::ImageGray image = acd::read_image(prop_image);
        const acd::HeatmapGeometry geom = acd::geometry_for(image.width, image.height);
        std::vector<std::vector<std::int64_t>> external;
        if (!prop_opt.external_proposals_path.empty())
            external = acd::load_external_proposals(prop_opt.external_proposals_path,
                                                    image.width, image.height);
        acd::RegionProposalSet set =
            acd::collect_proposals(image, geom, prop_opt.proposals, external);
        if (prop_opt.grid_proposals)
            set = acd::merge_proposal_sets(set, acd::grid_proposals(geom));
        nlohmann::ordered_json j;
        j["candidate_count"] = set.candidate_count;
        j["regions"] = nlohmann::ordered_json::array();
        for (const acd::Region& region : set.regions) {
            nlohmann::ordered_json cells = nlohmann::ordered_json::array();
            for (const acd::Cell& c : region.cells) cells.push_back({c.u, c.v});
            j["regions"].push_back({{"id", region.id},
                                    {"source", acd::to_string(region.source)},
                                    {"pixel_area", region.pixel_area},
                                    {"cells", std::move(cells)}});
        }
        const std::string text = j.dump(2) + "\n";
        if (prop_out.empty())
            std::cout << text;
        else
            acd::write_file_atomic(prop_out, text);
    });

    // ---- synth ------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate synthetic inputs");
    synth->require_subcommand(1);

    auto* synth_hm = synth->add_subcommand("heatmap", "seeded Bernoulli heatmap (ACHM)");
    int shw = 64, shh = 64, sh_patch = acd::kDefaultPatchSize, sh_stride = acd::kDefaultStride;
    double sh_pbg = 0.05, sh_pfg = 1.0;
    std::vector<int> sh_plant;
    std::string sh_channel = "rescale_up", sh_out;
    synth_hm->add_option("--hm-width", shw, "heatmap width in cells");
    synth_hm->add_option("--hm-height", shh, "heatmap height in cells");
    synth_hm->add_option("--p-bg", sh_pbg, "background one-probability");
    synth_hm->add_option("--plant", sh_plant, "planted block u,v,w,h")
        ->delimiter(',')
        ->expected(4);
    synth_hm->add_option("--p-fg", sh_pfg, "one-probability inside the planted block");
    synth_hm->add_option("--channel", sh_channel, "channel id to stamp");
    synth_hm->add_option("--patch-size", sh_patch, "patch size of the backing geometry");
    synth_hm->add_option("--stride", sh_stride, "stride of the backing geometry");
    synth_hm->add_option("-o,--out", sh_out, "output ACHM path")->required();
    synth_hm->callback([&] {
        std::optional<acd::PlantSpec> plant;
        if (!sh_plant.empty())
            plant = acd::PlantSpec{sh_plant[0], sh_plant[1], sh_plant[2], sh_plant[3], sh_pfg};
        const acd::Heatmap hm =
            acd::synth_heatmap(shw, shh, sh_pbg, plant, seed,
                               acd::channel_from_string(sh_channel), sh_patch, sh_stride);
        acd::write_achm(sh_out, hm);
        std::cout << "heatmap " << sh_out << " ones " << [&] {
            std::int64_t ones = 0;
            for (float v : hm.values) ones += v > 0.5f;
            return ones;
        }() << "\n";
    });

    auto* synth_tm = synth->add_subcommand("tamper", "paste a resampled region into an image");
    std::string st_image, st_op = "upsample", st_out, st_mask_out;
    double st_amount = 1.5;
    std::vector<int> st_rect;
    std::vector<int> st_texture;
    synth_tm->add_option("image", st_image, "input image (PGM/PPM)");
    synth_tm->add_option("--texture", st_texture,
                         "generate a seeded WxH texture instead of reading an image")
        ->delimiter(',')
        ->expected(2);
    synth_tm->add_option("--op", st_op, "upsample|rotate|shear");
    synth_tm->add_option("--amount", st_amount,
                         "scale factor (1,2] / degrees [1,10] / shear (0,0.5]");
    synth_tm->add_option("--rect", st_rect, "tampered rectangle x,y,w,h")
        ->delimiter(',')
        ->expected(4)
        ->required();
    synth_tm->add_option("-o,--out", st_out, "output image PGM path")->required();
    synth_tm->add_option("--mask-out", st_mask_out, "ground-truth mask PGM path");
    synth_tm->callback([&] {
        acd::ImageGray image;
        if (!st_texture.empty())
            image = acd::textured_image(st_texture[0], st_texture[1], seed);
        else if (!st_image.empty())
            image = acd::read_image(st_image);
        else
            throw CLI::ValidationError("synth tamper", "provide an image or --texture WxH");
        const acd::TamperSpec spec{acd::tamper_kind_from_string(st_op), st_amount};
        const acd::PatchRect rect{st_rect[0], st_rect[1], st_rect[2], st_rect[3]};
        const acd::TamperResult result = acd::synth_tamper(image, spec, rect);
        acd::write_image_pgm(st_out, result.image);
        if (!st_mask_out.empty())
            acd::write_mask_pgm(st_mask_out, result.ground_truth, image.width, image.height);
        std::cout << "tampered " << st_out << "\n";
    });

    // ---- eval -------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "evaluation utilities");
    eval->require_subcommand(1);
    auto* eval_roc = eval->add_subcommand("roc", "AUC over a (id,label,score) CSV");
    std::string roc_csv;
    eval_roc->add_option("--csv", roc_csv, "scores CSV path")->required();
    eval_roc->callback([&] {
        const auto pairs = acd::read_scores_csv(roc_csv);
        std::cout << "auc " << acd::roc_auc(pairs) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const acd::ConfigError& e) {
        std::cerr << "acdetect: " << e.what() << "\n";
        return 1;
    } catch (const acd::Error& e) {
        std::cerr << "acdetect: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "acdetect: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
