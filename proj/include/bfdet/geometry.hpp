#pragma once

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

namespace bfdet {

/// Axis-aligned rectangle in continuous image pixels. Width and height are
/// strictly positive; the constructor rejects degenerate boxes.
struct Box {
    double x = 0.0;  // left edge
    double y = 0.0;  // top edge
    double w = 1.0;
    double h = 1.0;

    Box() = default;
    Box(double x, double y, double w, double h);

    double x2() const { return x + w; }
    double y2() const { return y + h; }
    double cx() const { return x + 0.5 * w; }
    double cy() const { return y + 0.5 * h; }
    double area() const { return w * h; }
    double aspect() const { return w / h; }

    bool operator==(const Box&) const = default;
};

/// Center/size offsets of a target box relative to an anchor:
/// tx, ty in units of anchor width/height, tw, th as log size ratios.
struct Delta {
    double tx = 0.0;
    double ty = 0.0;
    double tw = 0.0;
    double th = 0.0;
};

struct AnchorConfig {
    double base_height = 40.0;   // smallest anchor height, pixels
    double scale_step = 1.3;     // ratio between consecutive scale heights
    int num_scales = 9;
    double aspect_ratio = 0.41;  // width / height
    int stride = 16;             // pixels per grid cell
};

/// Dense anchor set over a stride grid. Ordering is row-major over cells,
/// then scale index: anchors[(row*cols + col)*num_scales + k].
/// Cross-boundary anchors are kept.
struct AnchorGrid {
    std::vector<Box> anchors;
    int rows = 0;
    int cols = 0;
    AnchorConfig config;
    int image_width = 0;
    int image_height = 0;

    std::size_t size() const { return anchors.size(); }
    std::size_t index(int row, int col, int scale) const {
        return (static_cast<std::size_t>(row) * cols + col) * config.num_scales + scale;
    }
};

/// Intersection over union, in [0, 1]. Symmetric; 1 iff the boxes coincide.
double iou(const Box& a, const Box& b);

/// One anchor per (cell, scale), centered at ((col+0.5)*stride, (row+0.5)*stride),
/// with height base_height*scale_step^k and width aspect_ratio*height.
/// Throws if the image is smaller than one stride cell.
AnchorGrid generate_anchors(const AnchorConfig& cfg, int image_width, int image_height);

Delta encode_delta(const Box& anchor, const Box& target);

/// Exact inverse of encode_delta, except tw/th are clamped to ln(1000/16)
/// before exponentiation to guard against untrained inputs.
Box decode_delta(const Box& anchor, const Delta& d);

/// Greedy non-maximum suppression: keep the highest-scoring remaining box,
/// suppress everything with IoU > iou_threshold against it. Ties in score are
/// broken by lower input index. Output sorted by descending score.
std::vector<std::pair<Box, double>> nms(const std::vector<std::pair<Box, double>>& dets,
                                        double iou_threshold);

/// Clamp a box to [0, W] x [0, H]. Throws if the box does not intersect the image.
Box clip_box(const Box& b, int image_width, int image_height);

}  // namespace bfdet
