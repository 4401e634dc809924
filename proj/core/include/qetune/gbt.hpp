#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "qetune/features.hpp"

namespace qetune {

struct GbtConfig {
  int n_trees = 200;
  int max_depth = 6;
  double learning_rate = 0.1;
  int min_leaf = 5;  // minimum records per leaf
  std::uint64_t seed = 0;
};

/// Axis-aligned split node; feature < 0 marks a leaf carrying `value`.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  double predict(std::span<const double> x) const;
};

/// Gradient-boosted regression-tree ensemble:
/// prediction = base_score + learning_rate * sum of tree outputs.
class GbtModel {
 public:
  GbtModel() = default;
  GbtModel(double base_score, double learning_rate, int n_features,
           std::vector<RegressionTree> trees)
      : base_score_(base_score),
        learning_rate_(learning_rate),
        n_features_(n_features),
        trees_(std::move(trees)) {}

  /// Throws ShapeError if x.size() != n_features().
  double predict(std::span<const double> x) const;

  double base_score() const noexcept { return base_score_; }
  double learning_rate() const noexcept { return learning_rate_; }
  int n_features() const noexcept { return n_features_; }
  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }

  /// Free-form note naming the feature layout the model was trained on
  /// (e.g. the solver of the source dataset); "-" when unknown.
  const std::string& layout_tag() const noexcept { return layout_tag_; }
  void set_layout_tag(std::string tag) { layout_tag_ = std::move(tag); }

  /// Structured text dump with 17-significant-digit thresholds; the
  /// round trip predicts bit-identically.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& file) const;
  static GbtModel load(std::istream& in);
  static GbtModel load(const std::filesystem::path& file);

 private:
  double base_score_ = 0.0;
  double learning_rate_ = 0.1;
  int n_features_ = 0;
  std::string layout_tag_ = "-";
  std::vector<RegressionTree> trees_;
};

/// Squared-error gradient boosting with exact greedy splits. Requires at
/// least 20 records of equal length (ShapeError otherwise). Deterministic;
/// training MSE is non-increasing per boosting round.
GbtModel train_gbt(std::span<const TrainingRecord> records,
                   const GbtConfig& config);

struct DatasetSplit {
  std::vector<TrainingRecord> holdout10;
  std::vector<TrainingRecord> train;
  std::vector<TrainingRecord> test20;
};

/// Per-system stratified split: 10% holdout per system, remainder 80/20.
/// Systems with fewer than 10 records go entirely to train (noted in
/// `warnings`). Deterministic under the seed.
DatasetSplit split_dataset(std::span<const TrainingRecord> records,
                           std::uint64_t seed,
                           std::vector<std::string>* warnings = nullptr);

struct Metrics {
  double mae = 0.0;
  double mse = 0.0;
};

Metrics evaluate(const GbtModel& model, std::span<const TrainingRecord> records);

}  // namespace qetune
