#include "bfdet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bfdet {

Box::Box(double x_, double y_, double w_, double h_) : x(x_), y(y_), w(w_), h(h_) {
    if (!(w > 0.0) || !(h > 0.0)) {
        throw std::invalid_argument("Box: width and height must be positive");
    }
}

double iou(const Box& a, const Box& b) {
    const double ix = std::min(a.x2(), b.x2()) - std::max(a.x, b.x);
    const double iy = std::min(a.y2(), b.y2()) - std::max(a.y, b.y);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    return inter / (a.area() + b.area() - inter);
}

AnchorGrid generate_anchors(const AnchorConfig& cfg, int image_width, int image_height) {
    if (image_width < cfg.stride || image_height < cfg.stride) {
        throw std::invalid_argument("generate_anchors: image smaller than one stride cell");
    }
    AnchorGrid grid;
    grid.config = cfg;
    grid.image_width = image_width;
    grid.image_height = image_height;
    grid.cols = image_width / cfg.stride;
    grid.rows = image_height / cfg.stride;

    std::vector<double> heights(cfg.num_scales);
    double h = cfg.base_height;
    for (int k = 0; k < cfg.num_scales; ++k, h *= cfg.scale_step) heights[k] = h;

    grid.anchors.reserve(static_cast<std::size_t>(grid.rows) * grid.cols * cfg.num_scales);
    for (int row = 0; row < grid.rows; ++row) {
        const double cy = (row + 0.5) * cfg.stride;
        for (int col = 0; col < grid.cols; ++col) {
            const double cx = (col + 0.5) * cfg.stride;
            for (int k = 0; k < cfg.num_scales; ++k) {
                const double ah = heights[k];
                const double aw = cfg.aspect_ratio * ah;
                grid.anchors.emplace_back(cx - 0.5 * aw, cy - 0.5 * ah, aw, ah);
            }
        }
    }
    return grid;
}

Delta encode_delta(const Box& anchor, const Box& target) {
    Delta d;
    d.tx = (target.cx() - anchor.cx()) / anchor.w;
    d.ty = (target.cy() - anchor.cy()) / anchor.h;
    d.tw = std::log(target.w / anchor.w);
    d.th = std::log(target.h / anchor.h);
    return d;
}

namespace {
// Largest admissible log size ratio; anything bigger is treated as noise.
const double kMaxLogRatio = std::log(1000.0 / 16.0);
}  // namespace

Box decode_delta(const Box& anchor, const Delta& d) {
    const double tw = std::min(d.tw, kMaxLogRatio);
    const double th = std::min(d.th, kMaxLogRatio);
    const double w = anchor.w * std::exp(tw);
    const double h = anchor.h * std::exp(th);
    const double cx = anchor.cx() + d.tx * anchor.w;
    const double cy = anchor.cy() + d.ty * anchor.h;
    return Box(cx - 0.5 * w, cy - 0.5 * h, w, h);
}

std::vector<std::pair<Box, double>> nms(const std::vector<std::pair<Box, double>>& dets,
                                        double iou_threshold) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dets[a].second > dets[b].second;
    });

    std::vector<std::pair<Box, double>> kept;
    std::vector<bool> suppressed(dets.size(), false);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t a = order[i];
        if (suppressed[a]) continue;
        kept.push_back(dets[a]);
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const std::size_t b = order[j];
            if (!suppressed[b] && iou(dets[a].first, dets[b].first) > iou_threshold) {
                suppressed[b] = true;
            }
        }
    }
    return kept;
}

Box clip_box(const Box& b, int image_width, int image_height) {
    const double x1 = std::clamp(b.x, 0.0, static_cast<double>(image_width));
    const double y1 = std::clamp(b.y, 0.0, static_cast<double>(image_height));
    const double x2 = std::clamp(b.x2(), 0.0, static_cast<double>(image_width));
    const double y2 = std::clamp(b.y2(), 0.0, static_cast<double>(image_height));
    if (!(x2 > x1) || !(y2 > y1)) {
        throw std::invalid_argument("clip_box: box lies outside the image");
    }
    return Box(x1, y1, x2 - x1, y2 - y1);
}

}  // namespace bfdet
