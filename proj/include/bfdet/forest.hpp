#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bfdet {

/// Flat decision-tree node. feature < 0 marks a leaf; the left branch takes
/// feature value < threshold.
struct TreeNode {
    std::int32_t feature = -1;
    float threshold = 0.0f;
    float value = 0.0f;
    std::int32_t left = -1;
    std::int32_t right = -1;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // root at index 0

    float eval(std::span<const float> x) const {
        std::int32_t i = 0;
        while (!nodes[i].is_leaf()) {
            i = x[nodes[i].feature] < nodes[i].threshold ? nodes[i].left : nodes[i].right;
        }
        return nodes[i].value;
    }
    int depth() const;
};

struct StageRecord {
    int stage = 0;
    int trees = 0;
    int hard_negatives_added = 0;
};

struct Forest {
    std::vector<DecisionTree> trees;
    bool uses_prior = true;
    float clamp_eps = 1e-6f;
    int feature_dim = 0;
    std::vector<StageRecord> stage_history;
    std::string config_echo;  // resolved run config, carried into the model file
    bool truncated = false;   // boosting stopped on degenerate weights

    // Mean exponential loss after every tree; diagnostic only, not serialized.
    std::vector<double> loss_history;
};

/// Labeled feature rows for boosting. Weights are renormalized to sum 1
/// before every tree.
struct TrainSet {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> features;  // row-major rows x cols
    std::vector<int> labels;      // +1 / -1
    std::vector<double> priors;   // per-row RPN confidence in [0, 1]
    std::vector<double> weights;  // > 0

    const float* row(std::size_t i) const { return features.data() + i * cols; }
    void push_row(std::span<const float> x, int label, double prior);
};

/// Unlabeled feature rows with prior scores (the negative pool).
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> features;
    std::vector<double> priors;

    const float* row(std::size_t i) const { return features.data() + i * cols; }
    void push_row(std::span<const float> x, double prior);
};

/// Per-feature 256-bin linear quantization over a training set. Split search
/// runs on bins; the chosen thresholds are raw feature values, so inference
/// never touches the table.
struct QuantTable {
    std::vector<double> lo;    // per-feature minimum
    std::vector<double> step;  // (max-min)/256; 0 marks a constant feature

    static QuantTable fit(const TrainSet& ts);
    std::uint8_t bin(std::size_t feature, float v) const;
    float threshold_value(std::size_t feature, int boundary) const;  // boundary in [1, 255]
};

struct TreeConfig {
    int depth = 5;
    double feature_fraction = 1.0 / 16.0;  // features tried per node
    double leaf_eps_scale = 1e-6;          // leaf smoothing, times total weight
};

struct BoostConfig {
    int num_trees = 2048;
    TreeConfig tree;
    bool use_prior = true;
    std::uint64_t seed = 1;
};

struct CascadeConfig {
    std::vector<int> stage_trees = {64, 128, 256, 512, 1024, 1536};
    int final_trees = 2048;
    double mine_fraction = 0.1;               // hard negatives per stage, times |pos|
    double seed_negatives_per_positive = 1.0;  // stage-0 random negatives, times |pos|
    TreeConfig tree;
    bool use_prior = true;
    std::uint64_t seed = 1;
};

/// RPN confidence as a boosting margin: 1/2 ln(s/(1-s)) with s clamped to
/// [eps, 1-eps].
double f0_from_score(double s, double eps = 1e-6);

/// Greedy top-down tree on quantized split candidates. At each node a seeded
/// subset of feature_fraction of the features is searched over 255 bin
/// boundaries for the split minimizing sum over children of 2*sqrt(W+ * W-);
/// ties go to the lower feature index, then the lower threshold. Leaves carry
/// 1/2 ln((W+ + eps)/(W- + eps)). A single-class input collapses to one leaf.
DecisionTree train_tree(const TrainSet& ts, const QuantTable& qt, const TreeConfig& cfg,
                        std::uint64_t rng_seed);

/// RealBoost: per round, weights proportional to exp(-y*F) (normalized), one
/// tree trained, tree outputs added to every margin F. Margins start at
/// f0_from_score(prior) when use_prior is set, otherwise 0. Stops early with
/// `truncated` set when the weight mass degenerates onto one example.
Forest boost(const TrainSet& ts, const BoostConfig& cfg);

/// Stage-wise bootstrapping: the stage-0 set is all positives plus seeded
/// random pool negatives; each bootstrap stage trains a fresh forest of the
/// configured size and then adds ceil(mine_fraction*|pos|) hard negatives;
/// after all stages a fresh final forest is trained on the accumulated set
/// and returned with the full stage history.
Forest train_cascade(const FeatureMatrix& positives, const FeatureMatrix& neg_pool,
                     const CascadeConfig& cfg);

/// Indices of the `quota` highest-scoring pool rows outside `exclude`
/// (ties to the lower index) -- the negatives the current model finds most
/// convincing.
std::vector<std::size_t> mine_hard_negatives(const Forest& forest, const FeatureMatrix& pool,
                                             std::size_t quota,
                                             const std::vector<bool>& exclude = {});

/// f0_from_score(prior) plus the sum of all tree outputs. Throws on a feature
/// length mismatch.
double score(const Forest& forest, std::span<const float> x, double prior);

std::vector<std::uint8_t> save_model(const Forest& forest);
Forest load_model(std::span<const std::uint8_t> bytes);
void save_model_file(const Forest& forest, const std::string& path);
Forest load_model_file(const std::string& path);

}  // namespace bfdet
