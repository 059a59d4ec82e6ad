#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bfdet/geometry.hpp"
#include "bfdet/tensor.hpp"

namespace bfdet {

/// A decoded, clipped anchor box with its confidence score in (0, 1).
struct Proposal {
    Box box;
    double score = 0.5;
    std::size_t source_anchor = 0;
};

enum class AnchorSide : std::uint8_t { kNegative = 0, kPositive = 1, kIgnored = 2 };

struct AnchorLabel {
    AnchorSide label = AnchorSide::kNegative;
    std::optional<std::size_t> matched_gt;
    double max_iou = 0.0;
};

struct SampleBatch {
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    std::size_t size() const { return positives.size() + negatives.size(); }
};

/// Positive when max IoU with some ground truth exceeds iou_pos (strict), plus
/// the highest-IoU anchor of each overlapping gt (ties to the lower anchor
/// index). Everything else is negative; cross-boundary anchors are kept.
std::vector<AnchorLabel> label_anchors(const AnchorGrid& grid, const std::vector<Box>& gts,
                                       double iou_pos = 0.5);

/// Up to size/(neg_per_pos+1) positives drawn uniformly without replacement,
/// topped up with negatives to `size` (or fewer if supply runs out).
/// Throws when there are no anchors at all.
SampleBatch sample_minibatch(const std::vector<AnchorLabel>& labels, std::uint64_t rng_seed,
                             std::size_t size = 120, std::size_t neg_per_pos = 5);

/// Per (cell, scale): score from score_map channel k, box decoded from
/// delta_map channels [4k, 4k+4) as (tx, ty, tw, th) and clipped to the image.
/// Scores are clamped to [eps, 1-eps]. Output order is row-major over cells,
/// then scale. Throws on a shape mismatch with the grid.
std::vector<Proposal> decode_proposals(const FeatureMap& score_map, const FeatureMap& delta_map,
                                       const AnchorGrid& grid, double eps = 1e-6);

/// NMS at nms_iou, then the top_k survivors by score.
std::vector<Proposal> select_proposals(const std::vector<Proposal>& props, double nms_iou,
                                       std::size_t top_k);

/// Recall per IoU threshold with on average k proposals per image: the global
/// top k*M proposals by score are selected across all M images, and a gt
/// counts as recalled at threshold t when a selected proposal from its own
/// image reaches IoU >= t. Throws when there are no ground truths at all.
std::vector<double> recall_at(const std::vector<std::vector<Proposal>>& props_per_image,
                              const std::vector<std::vector<Box>>& gts_per_image,
                              const std::vector<double>& iou_grid, double k);

}  // namespace bfdet
