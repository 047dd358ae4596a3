#include "acdetect/report.hpp"

#include <fstream>
#include <sstream>

#include "acdetect/image_io.hpp"

namespace acd {

using nlohmann::ordered_json;

namespace {

ordered_json detection_to_json(const Region& region, const NfaRecord& rec) {
    ordered_json cells = ordered_json::array();
    for (const Cell& c : region.cells) cells.push_back({c.u, c.v});
    return ordered_json{{"region_id", region.id},
                        {"source", to_string(region.source)},
                        {"pixel_area", region.pixel_area},
                        {"cells", std::move(cells)},
                        {"n", rec.n},
                        {"r", rec.r},
                        {"p", rec.p},
                        {"tail", rec.tail},
                        {"nfa", rec.nfa},
                        {"meaningful", rec.meaningful}};
}

std::pair<Region, NfaRecord> detection_from_json(const ordered_json& j) {
    Region region;
    region.id = j.at("region_id").get<int>();
    region.source = region_source_from_string(j.at("source").get<std::string>());
    region.pixel_area = j.at("pixel_area").get<std::int64_t>();
    for (const auto& c : j.at("cells"))
        region.cells.push_back(Cell{c.at(0).get<int>(), c.at(1).get<int>()});
    NfaRecord rec;
    rec.region_id = region.id;
    rec.n = j.at("n").get<int>();
    rec.r = j.at("r").get<int>();
    rec.p = j.at("p").get<double>();
    rec.tail = j.at("tail").get<double>();
    rec.nfa = j.at("nfa").get<double>();
    rec.meaningful = j.at("meaningful").get<bool>();
    return {std::move(region), rec};
}

} // namespace

ordered_json report_to_json(const AnalysisReport& report) {
    ordered_json channels = ordered_json::array();
    for (const ChannelReport& ch : report.channels) {
        ordered_json detections = ordered_json::array();
        for (const auto& [region, rec] : ch.detections)
            detections.push_back(detection_to_json(region, rec));
        ordered_json entry{{"channel", to_string(ch.channel)},
                           {"score", ch.score},
                           {"min_nfa", nullptr},
                           {"candidate_count", ch.candidate_count},
                           {"num_meaningful", ch.num_meaningful},
                           {"detections", std::move(detections)}};
        if (ch.min_nfa) entry["min_nfa"] = *ch.min_nfa;
        channels.push_back(std::move(entry));
    }
    return ordered_json{{"tool", report.tool},
                        {"version", report.version},
                        {"image",
                         {{"id", report.image_id},
                          {"width", report.image_width},
                          {"height", report.image_height}}},
                        {"config", report.config},
                        {"channels", std::move(channels)},
                        {"final_score", report.final_score},
                        {"mask", report.mask_path}};
}

AnalysisReport report_from_json(const ordered_json& j) {
    try {
        AnalysisReport report;
        report.tool = j.at("tool").get<std::string>();
        report.version = j.at("version").get<std::string>();
        report.image_id = j.at("image").at("id").get<std::string>();
        report.image_width = j.at("image").at("width").get<int>();
        report.image_height = j.at("image").at("height").get<int>();
        report.config = j.at("config");
        const auto& channels = j.at("channels");
        if (channels.size() != static_cast<size_t>(kNumChannels))
            throw FormatError("report must contain six channels");
        for (int i = 0; i < kNumChannels; ++i) {
            const auto& cj = channels.at(static_cast<size_t>(i));
            ChannelReport ch;
            ch.channel = channel_from_string(cj.at("channel").get<std::string>());
            ch.score = cj.at("score").get<double>();
            if (!cj.at("min_nfa").is_null()) ch.min_nfa = cj.at("min_nfa").get<double>();
            ch.candidate_count = cj.at("candidate_count").get<std::int64_t>();
            ch.num_meaningful = cj.at("num_meaningful").get<std::int64_t>();
            for (const auto& dj : cj.at("detections"))
                ch.detections.push_back(detection_from_json(dj));
            report.channels[static_cast<size_t>(i)] = std::move(ch);
        }
        report.final_score = j.at("final_score").get<double>();
        report.mask_path = j.at("mask").get<std::string>();
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed report: ") + e.what());
    }
}

void write_report(const std::string& path, const AnalysisReport& report) {
    const std::string text = report_to_json(report).dump(2) + "\n";
    write_file_atomic(path, text);
}

AnalysisReport read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed report JSON: ") + e.what());
    }
    return report_from_json(j);
}

} // namespace acd
