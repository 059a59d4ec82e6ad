#include "bfdet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bfdet {

FeatureMap::FeatureMap(int channels_, int height_, int width_, float stride_)
    : channels(channels_), height(height_), width(width_), stride(stride_) {
    if (channels <= 0 || height <= 0 || width <= 0 || stride <= 0.0f) {
        throw std::invalid_argument("FeatureMap: non-positive shape or stride");
    }
    data.assign(static_cast<std::size_t>(channels) * height * width, 0.0f);
}

FilterBank::FilterBank(int out_ch, int in_ch, int kh_, int kw_, int dilation_, bool relu_)
    : out_channels(out_ch), in_channels(in_ch), kh(kh_), kw(kw_), dilation(dilation_),
      relu(relu_) {
    if (out_ch <= 0 || in_ch <= 0 || kh <= 0 || kw <= 0 || dilation < 1) {
        throw std::invalid_argument("FilterBank: invalid shape");
    }
    weights.assign(static_cast<std::size_t>(out_ch) * in_ch * kh * kw, 0.0f);
    bias.assign(out_ch, 0.0f);
}

FilterBank FilterBank::with_dilation(int d) const {
    FilterBank out = *this;
    out.dilation = d;
    return out;
}

FeatureMap conv2d(const FeatureMap& input, const FilterBank& f) {
    if (f.in_channels != input.channels) {
        throw std::invalid_argument("conv2d: filter/input channel mismatch");
    }
    FeatureMap out(f.out_channels, input.height, input.width, input.stride);
    const int pad_y = ((f.kh - 1) * f.dilation) / 2;
    const int pad_x = ((f.kw - 1) * f.dilation) / 2;

    for (int o = 0; o < f.out_channels; ++o) {
        for (int y = 0; y < input.height; ++y) {
            for (int x = 0; x < input.width; ++x) {
                float acc = f.bias[o];
                for (int i = 0; i < f.in_channels; ++i) {
                    const float* src = input.channel(i);
                    for (int ky = 0; ky < f.kh; ++ky) {
                        const int sy = y + ky * f.dilation - pad_y;
                        if (sy < 0 || sy >= input.height) continue;
                        for (int kx = 0; kx < f.kw; ++kx) {
                            const int sx = x + kx * f.dilation - pad_x;
                            if (sx < 0 || sx >= input.width) continue;
                            acc += f.weight(o, i, ky, kx) * src[sy * input.width + sx];
                        }
                    }
                }
                if (f.relu && acc < 0.0f) acc = 0.0f;
                out.at(o, y, x) = acc;
            }
        }
    }
    return out;
}

FeatureMap max_pool(const FeatureMap& input, int kernel, int pool_stride) {
    if (kernel < 1 || pool_stride < 1) {
        throw std::invalid_argument("max_pool: kernel and stride must be >= 1");
    }
    const int oh = (input.height + pool_stride - 1) / pool_stride;
    const int ow = (input.width + pool_stride - 1) / pool_stride;
    FeatureMap out(input.channels, oh, ow, input.stride * pool_stride);
    for (int c = 0; c < input.channels; ++c) {
        const float* src = input.channel(c);
        for (int y = 0; y < oh; ++y) {
            const int y0 = y * pool_stride;
            const int y1 = std::min(y0 + kernel, input.height);
            for (int x = 0; x < ow; ++x) {
                const int x0 = x * pool_stride;
                const int x1 = std::min(x0 + kernel, input.width);
                float m = -std::numeric_limits<float>::infinity();
                for (int sy = y0; sy < y1; ++sy) {
                    for (int sx = x0; sx < x1; ++sx) {
                        m = std::max(m, src[sy * input.width + sx]);
                    }
                }
                out.at(c, y, x) = m;
            }
        }
    }
    return out;
}

FeatureMap dense_stage(const FeatureMap& input, int pool_kernel,
                       const std::vector<FilterBank>& filters) {
    FeatureMap cur = max_pool(input, pool_kernel, 2);
    for (const auto& f : filters) cur = conv2d(cur, f);
    return cur;
}

FeatureMap atrous_stage(const FeatureMap& input, int pool_kernel,
                        const std::vector<FilterBank>& filters) {
    FeatureMap cur = max_pool(input, pool_kernel, 1);
    for (const auto& f : filters) cur = conv2d(cur, f.with_dilation(f.dilation * 2));
    return cur;
}

std::vector<float> roi_pool(const FeatureMap& input, const Box& roi, int out_size) {
    if (out_size < 1) throw std::invalid_argument("roi_pool: out_size must be >= 1");
    const double extent_w = static_cast<double>(input.width) * input.stride;
    const double extent_h = static_cast<double>(input.height) * input.stride;
    if (roi.x >= extent_w || roi.y >= extent_h || roi.x2() <= 0.0 || roi.y2() <= 0.0) {
        throw std::invalid_argument("roi_pool: roi outside the map extent");
    }

    const double x0 = roi.x / input.stride;
    const double y0 = roi.y / input.stride;
    const double wc = roi.w / input.stride;
    const double hc = roi.h / input.stride;
    const int n = out_size;

    std::vector<float> out(static_cast<std::size_t>(input.channels) * n * n, 0.0f);
    for (int by = 0; by < n; ++by) {
        int r0 = static_cast<int>(std::floor(y0 + by * hc / n));
        int r1 = static_cast<int>(std::ceil(y0 + (by + 1) * hc / n));
        r0 = std::clamp(r0, 0, input.height);
        r1 = std::clamp(r1, 0, input.height);
        for (int bx = 0; bx < n; ++bx) {
            int c0 = static_cast<int>(std::floor(x0 + bx * wc / n));
            int c1 = static_cast<int>(std::ceil(x0 + (bx + 1) * wc / n));
            c0 = std::clamp(c0, 0, input.width);
            c1 = std::clamp(c1, 0, input.width);
            const bool empty = (r1 <= r0) || (c1 <= c0);
            for (int ch = 0; ch < input.channels; ++ch) {
                float m = 0.0f;
                if (!empty) {
                    const float* src = input.channel(ch);
                    m = -std::numeric_limits<float>::infinity();
                    for (int sy = r0; sy < r1; ++sy) {
                        for (int sx = c0; sx < c1; ++sx) {
                            m = std::max(m, src[sy * input.width + sx]);
                        }
                    }
                }
                out[(static_cast<std::size_t>(ch) * n + by) * n + bx] = m;
            }
        }
    }
    return out;
}

RoiFeature concat_roi_features(
    const std::vector<std::pair<std::string, std::vector<float>>>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("concat_roi_features: empty block list");
    RoiFeature out;
    for (const auto& [name, values] : blocks) {
        if (values.empty() || values.size() % 49 != 0) {
            throw std::invalid_argument("concat_roi_features: block is not channels x 7 x 7");
        }
        out.layout.emplace_back(name, static_cast<int>(values.size() / 49));
        out.values.insert(out.values.end(), values.begin(), values.end());
    }
    return out;
}

}  // namespace bfdet
