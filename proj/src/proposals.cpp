#include "bfdet/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bfdet/rng.hpp"

namespace bfdet {

std::vector<AnchorLabel> label_anchors(const AnchorGrid& grid, const std::vector<Box>& gts,
                                       double iou_pos) {
    std::vector<AnchorLabel> labels(grid.size());
    if (gts.empty()) return labels;

    // Best anchor per gt, tracked alongside the per-anchor maxima.
    std::vector<double> best_gt_iou(gts.size(), 0.0);
    std::vector<std::size_t> best_gt_anchor(gts.size(), 0);

    for (std::size_t a = 0; a < grid.size(); ++a) {
        AnchorLabel& lab = labels[a];
        for (std::size_t g = 0; g < gts.size(); ++g) {
            const double v = iou(grid.anchors[a], gts[g]);
            if (v > lab.max_iou) {
                lab.max_iou = v;
                lab.matched_gt = g;
            }
            if (v > best_gt_iou[g]) {
                best_gt_iou[g] = v;
                best_gt_anchor[g] = a;
            }
        }
        if (lab.max_iou > iou_pos) lab.label = AnchorSide::kPositive;
    }
    for (std::size_t g = 0; g < gts.size(); ++g) {
        // A gt with zero overlap everywhere induces no positive.
        if (best_gt_iou[g] > 0.0) labels[best_gt_anchor[g]].label = AnchorSide::kPositive;
    }
    return labels;
}

SampleBatch sample_minibatch(const std::vector<AnchorLabel>& labels, std::uint64_t rng_seed,
                             std::size_t size, std::size_t neg_per_pos) {
    if (labels.empty()) throw std::invalid_argument("sample_minibatch: zero anchors");

    std::vector<std::uint32_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].label == AnchorSide::kPositive) pos.push_back(static_cast<std::uint32_t>(i));
        else if (labels[i].label == AnchorSide::kNegative) neg.push_back(static_cast<std::uint32_t>(i));
    }

    Rng rng(rng_seed);
    SampleBatch batch;
    const std::size_t want_pos = std::min(size / (neg_per_pos + 1), pos.size());
    for (std::uint32_t idx : rng.sample_without_replacement(static_cast<std::uint32_t>(pos.size()),
                                                            static_cast<std::uint32_t>(want_pos))) {
        batch.positives.push_back(pos[idx]);
    }
    const std::size_t want_neg = std::min(size - batch.positives.size(), neg.size());
    for (std::uint32_t idx : rng.sample_without_replacement(static_cast<std::uint32_t>(neg.size()),
                                                            static_cast<std::uint32_t>(want_neg))) {
        batch.negatives.push_back(neg[idx]);
    }
    return batch;
}

std::vector<Proposal> decode_proposals(const FeatureMap& score_map, const FeatureMap& delta_map,
                                       const AnchorGrid& grid, double eps) {
    const int scales = grid.config.num_scales;
    if (score_map.height != grid.rows || score_map.width != grid.cols ||
        score_map.channels != scales) {
        throw std::invalid_argument("decode_proposals: score map shape mismatch");
    }
    if (delta_map.height != grid.rows || delta_map.width != grid.cols ||
        delta_map.channels != 4 * scales) {
        throw std::invalid_argument("decode_proposals: delta map shape mismatch");
    }

    std::vector<Proposal> out;
    out.reserve(grid.size());
    for (int row = 0; row < grid.rows; ++row) {
        for (int col = 0; col < grid.cols; ++col) {
            for (int k = 0; k < scales; ++k) {
                const std::size_t a = grid.index(row, col, k);
                Delta d;
                d.tx = delta_map.at(4 * k + 0, row, col);
                d.ty = delta_map.at(4 * k + 1, row, col);
                d.tw = delta_map.at(4 * k + 2, row, col);
                d.th = delta_map.at(4 * k + 3, row, col);
                Proposal p;
                p.box = clip_box(decode_delta(grid.anchors[a], d), grid.image_width,
                                 grid.image_height);
                p.score = std::clamp(static_cast<double>(score_map.at(k, row, col)), eps,
                                     1.0 - eps);
                p.source_anchor = a;
                out.push_back(p);
            }
        }
    }
    return out;
}

std::vector<Proposal> select_proposals(const std::vector<Proposal>& props, double nms_iou,
                                       std::size_t top_k) {
    if (top_k < 1) throw std::invalid_argument("select_proposals: top_k must be >= 1");

    std::vector<std::size_t> order(props.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return props[a].score > props[b].score;
    });

    std::vector<Proposal> kept;
    std::vector<bool> suppressed(props.size(), false);
    for (std::size_t i = 0; i < order.size() && kept.size() < top_k; ++i) {
        const std::size_t a = order[i];
        if (suppressed[a]) continue;
        kept.push_back(props[a]);
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const std::size_t b = order[j];
            if (!suppressed[b] && iou(props[a].box, props[b].box) > nms_iou) {
                suppressed[b] = true;
            }
        }
    }
    return kept;
}

std::vector<double> recall_at(const std::vector<std::vector<Proposal>>& props_per_image,
                              const std::vector<std::vector<Box>>& gts_per_image,
                              const std::vector<double>& iou_grid, double k) {
    if (props_per_image.size() != gts_per_image.size()) {
        throw std::invalid_argument("recall_at: image count mismatch");
    }
    std::size_t total_gts = 0;
    for (const auto& g : gts_per_image) total_gts += g.size();
    if (total_gts == 0) throw std::invalid_argument("recall_at: no ground truths");

    struct Ref {
        double score;
        std::size_t image;
        std::size_t index;
    };
    std::vector<Ref> pool;
    for (std::size_t im = 0; im < props_per_image.size(); ++im) {
        for (std::size_t i = 0; i < props_per_image[im].size(); ++i) {
            pool.push_back({props_per_image[im][i].score, im, i});
        }
    }
    std::stable_sort(pool.begin(), pool.end(), [](const Ref& a, const Ref& b) {
        return a.score > b.score;
    });
    const std::size_t budget = static_cast<std::size_t>(
        std::llround(k * static_cast<double>(props_per_image.size())));
    if (pool.size() > budget) pool.resize(budget);

    // Per gt, the best IoU achieved by any selected proposal from its image.
    std::vector<std::vector<double>> best(gts_per_image.size());
    for (std::size_t im = 0; im < gts_per_image.size(); ++im) {
        best[im].assign(gts_per_image[im].size(), 0.0);
    }
    for (const Ref& r : pool) {
        const Box& pb = props_per_image[r.image][r.index].box;
        auto& row = best[r.image];
        for (std::size_t g = 0; g < row.size(); ++g) {
            row[g] = std::max(row[g], iou(pb, gts_per_image[r.image][g]));
        }
    }

    std::vector<double> recall(iou_grid.size(), 0.0);
    for (std::size_t t = 0; t < iou_grid.size(); ++t) {
        std::size_t hit = 0;
        for (const auto& row : best) {
            for (double v : row) {
                if (v >= iou_grid[t]) ++hit;
            }
        }
        recall[t] = static_cast<double>(hit) / static_cast<double>(total_gts);
    }
    return recall;
}

}  // namespace bfdet
