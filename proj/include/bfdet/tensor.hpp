#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bfdet/geometry.hpp"

namespace bfdet {

/// Dense C x H x W grid of f32 activations. `stride` is the number of image
/// pixels covered by one cell, so the map spans (width*stride, height*stride)
/// pixels. Data is channel-major, row-major within a channel.
struct FeatureMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    float stride = 1.0f;
    std::vector<float> data;

    FeatureMap() = default;
    FeatureMap(int channels, int height, int width, float stride);

    float& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    const float* channel(int c) const {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }
    std::size_t size() const { return data.size(); }
};

/// Convolution weights: out x in x kh x kw, with an optional dilation and a
/// per-output bias. `relu` marks banks followed by a ReLU.
struct FilterBank {
    int out_channels = 0;
    int in_channels = 0;
    int kh = 0;
    int kw = 0;
    int dilation = 1;
    bool relu = false;
    std::vector<float> weights;  // out*in*kh*kw
    std::vector<float> bias;     // out

    FilterBank() = default;
    FilterBank(int out_ch, int in_ch, int kh, int kw, int dilation = 1, bool relu = false);

    float weight(int o, int i, int y, int x) const {
        return weights[((static_cast<std::size_t>(o) * in_channels + i) * kh + y) * kw + x];
    }
    float& weight(int o, int i, int y, int x) {
        return weights[((static_cast<std::size_t>(o) * in_channels + i) * kh + y) * kw + x];
    }

    FilterBank with_dilation(int d) const;
};

/// Fixed-length RoI descriptor: concatenated channels x 7 x 7 blocks, one per
/// source layer, in declared order and with no normalization.
struct RoiFeature {
    std::vector<float> values;
    std::vector<std::pair<std::string, int>> layout;  // (layer name, channels)
};

/// Zero-padded same convolution at unit spatial stride. The pad is centered on
/// the dilated kernel extent (k-1)*dilation + 1, so tap offsets scale linearly
/// with dilation. Output stride equals input stride.
FeatureMap conv2d(const FeatureMap& input, const FilterBank& filters);

/// Per-channel max over kernel x kernel windows anchored at (i*stride, j*stride);
/// cells past the border count as -inf. Output size is ceil(in/stride) per axis,
/// so windows at a given output cell are identical across pool strides.
FeatureMap max_pool(const FeatureMap& input, int kernel, int pool_stride);

/// Stride-2 pooling followed by the filter chain at native dilation. Output
/// stride doubles.
FeatureMap dense_stage(const FeatureMap& input, int pool_kernel,
                       const std::vector<FilterBank>& filters);

/// Stride-1 pooling followed by the filter chain with every dilation doubled.
/// Output stride equals input stride, and its even-index subsample equals
/// dense_stage output exactly.
FeatureMap atrous_stage(const FeatureMap& input, int pool_kernel,
                        const std::vector<FilterBank>& filters);

/// Adaptive max pooling of an image-space box into out_size x out_size bins.
/// The roi maps to cell coordinates by dividing by stride; bin (i, j) spans
/// cells [floor(y0 + i*h/n), ceil(y0 + (i+1)*h/n)) and likewise for columns,
/// clamped to the map. Bins emptied by clamping yield 0. Returns
/// channels * out_size * out_size values, channel-major.
/// Throws if the roi does not intersect the map extent.
std::vector<float> roi_pool(const FeatureMap& input, const Box& roi, int out_size = 7);

/// Flat concatenation of (name, channels x 7 x 7 block) pairs in declared
/// order. No scaling is applied. Throws on an empty list or a block whose
/// length is not a multiple of 49.
RoiFeature concat_roi_features(
    const std::vector<std::pair<std::string, std::vector<float>>>& blocks);

}  // namespace bfdet
