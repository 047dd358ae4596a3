#pragma once

// ROC/AUC evaluation over (score, label) pairs, plus the CSV format the CLI
// consumes: one `id,label,score` row per image, label either
// pristine/tampered or 0/1.

#include <span>
#include <string>
#include <vector>

#include "acdetect/types.hpp"

namespace acd {

struct EvalPair {
    std::string id;
    double score = 0.0;
    bool tampered = false;
    std::string truth_mask_path; // optional; empty when no mask is known
};

// AUC by the rank statistic (Mann-Whitney), ties counted one half; equal to
// trapezoidal integration of the ROC curve. Throws DegenerateEval unless
// both labels occur.
double roc_auc(std::span<const EvalPair> pairs);

// Intersection over union of two {0,1} masks of equal size; 0 when both are
// empty. Throws ShapeError on size mismatch.
double mask_iou(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

// Throws FormatError on malformed rows. A leading `id,label,score` header
// row is skipped if present; a fourth column, when present, is a
// ground-truth mask path.
std::vector<EvalPair> read_scores_csv(const std::string& path);

void write_scores_csv(const std::string& path, std::span<const EvalPair> pairs);

} // namespace acd
