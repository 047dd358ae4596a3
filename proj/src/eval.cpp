#include "acdetect/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "acdetect/image_io.hpp"

namespace acd {

double roc_auc(std::span<const EvalPair> pairs) {
    std::vector<double> pos, neg;
    for (const EvalPair& p : pairs) {
        if (!std::isfinite(p.score)) throw DomainError("scores must be finite");
        (p.tampered ? pos : neg).push_back(p.score);
    }
    if (pos.empty() || neg.empty())
        throw DegenerateEval("ROC evaluation needs both pristine and tampered examples");

    // Rank-sum formulation with midranks for ties.
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    double ordered = 0.0;
    for (double s : pos) {
        const auto below = std::lower_bound(neg.begin(), neg.end(), s) - neg.begin();
        const auto not_above = std::upper_bound(neg.begin(), neg.end(), s) - neg.begin();
        ordered += static_cast<double>(below) + 0.5 * static_cast<double>(not_above - below);
    }
    return ordered / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

double mask_iou(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw ShapeError("IoU masks must have equal size");
    std::int64_t inter = 0, uni = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const bool in_a = a[i] != 0;
        const bool in_b = b[i] != 0;
        inter += in_a && in_b;
        uni += in_a || in_b;
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<EvalPair> read_scores_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<EvalPair> pairs;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string id, label, score;
        if (!std::getline(row, id, ',') || !std::getline(row, label, ',') ||
            !std::getline(row, score, ','))
            throw FormatError(path + ":" + std::to_string(line_no) + ": expected id,label,score");
        if (line_no == 1 && label == "label") continue; // header
        EvalPair pair;
        pair.id = id;
        if (label == "tampered" || label == "1") {
            pair.tampered = true;
        } else if (label == "pristine" || label == "0") {
            pair.tampered = false;
        } else {
            throw FormatError(path + ":" + std::to_string(line_no) + ": bad label '" + label + "'");
        }
        try {
            pair.score = std::stod(score);
        } catch (const std::exception&) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": bad score '" + score + "'");
        }
        std::getline(row, pair.truth_mask_path, ','); // optional mask column
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

void write_scores_csv(const std::string& path, std::span<const EvalPair> pairs) {
    std::ostringstream out;
    out << "id,label,score\n";
    out.precision(17);
    for (const EvalPair& p : pairs) {
        out << p.id << ',' << (p.tampered ? "tampered" : "pristine") << ',' << p.score;
        if (!p.truth_mask_path.empty()) out << ',' << p.truth_mask_path;
        out << '\n';
    }
    const std::string s = out.str();
    write_file_atomic(path, s);
}

} // namespace acd
