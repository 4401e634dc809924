#include "qetune/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "qetune/errors.hpp"
#include "qetune/rng.hpp"

namespace qetune {

double RegressionTree::predict(std::span<const double> x) const {
  int node = 0;
  while (!nodes[node].is_leaf()) {
    const TreeNode& n = nodes[node];
    node = x[n.feature] < n.threshold ? n.left : n.right;
  }
  return nodes[node].value;
}

double GbtModel::predict(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_features_)
    throw ShapeError("feature vector has " + std::to_string(x.size()) +
                     " entries, model expects " + std::to_string(n_features_));
  double acc = 0.0;
  for (const auto& t : trees_) acc += t.predict(x);
  return base_score_ + learning_rate_ * acc;
}

namespace {

// Level-wise exact greedy tree builder over globally presorted feature
// columns: one pass per (level, feature) dispatches records to their current
// node's scan state, so a tree costs O(features * n * depth).

struct ScanState {
  double left_sum = 0.0;
  int left_cnt = 0;
  double prev_val = 0.0;
};

struct Candidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

RegressionTree build_tree(std::span<const TrainingRecord> records,
                          std::span<const double> residual,
                          const std::vector<std::vector<int>>& sorted_idx,
                          const GbtConfig& cfg) {
  const int n = static_cast<int>(records.size());
  const int n_features = static_cast<int>(sorted_idx.size());

  RegressionTree tree;
  std::vector<int> node_of(n, 0);
  std::vector<double> sum_of;  // residual sum per node
  std::vector<int> cnt_of;

  double total = 0.0;
  for (double r : residual) total += r;
  tree.nodes.push_back({-1, 0.0, -1, -1, total / n});
  sum_of.push_back(total);
  cnt_of.push_back(n);

  std::vector<int> level = {0};
  for (int depth = 0; depth < cfg.max_depth && !level.empty(); ++depth) {
    std::vector<int> active;
    std::vector<int> slot_of(tree.nodes.size(), -1);
    for (int nd : level) {
      if (cnt_of[nd] >= 2 * cfg.min_leaf) {
        slot_of[nd] = static_cast<int>(active.size());
        active.push_back(nd);
      }
    }
    if (active.empty()) break;

    std::vector<Candidate> best(active.size());
    std::vector<ScanState> state(active.size());
    for (int f = 0; f < n_features; ++f) {
      std::fill(state.begin(), state.end(), ScanState{});
      for (int r : sorted_idx[f]) {
        int nd = node_of[r];
        int slot = slot_of[nd];
        if (slot < 0) continue;
        double v = records[r].x[f];
        ScanState& st = state[slot];
        if (st.left_cnt > 0 && v != st.prev_val) {
          int right_cnt = cnt_of[nd] - st.left_cnt;
          if (st.left_cnt >= cfg.min_leaf && right_cnt >= cfg.min_leaf) {
            double right_sum = sum_of[nd] - st.left_sum;
            double gain = st.left_sum * st.left_sum / st.left_cnt +
                          right_sum * right_sum / right_cnt -
                          sum_of[nd] * sum_of[nd] / cnt_of[nd];
            if (gain > best[slot].gain + 1e-12) {
              best[slot] = {f, 0.5 * (st.prev_val + v), gain};
            }
          }
        }
        st.left_sum += residual[r];
        st.left_cnt += 1;
        st.prev_val = v;
      }
    }

    std::vector<int> next_level;
    for (std::size_t s = 0; s < active.size(); ++s) {
      if (best[s].feature < 0) continue;
      int nd = active[s];
      int cl = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back({-1, 0.0, -1, -1, 0.0});
      int cr = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back({-1, 0.0, -1, -1, 0.0});
      tree.nodes[nd].feature = best[s].feature;
      tree.nodes[nd].threshold = best[s].threshold;
      tree.nodes[nd].left = cl;
      tree.nodes[nd].right = cr;
      sum_of.resize(tree.nodes.size(), 0.0);
      cnt_of.resize(tree.nodes.size(), 0);
      next_level.push_back(cl);
      next_level.push_back(cr);
    }
    if (next_level.empty()) break;

    for (int r = 0; r < n; ++r) {
      int nd = node_of[r];
      const TreeNode& tn = tree.nodes[nd];
      if (tn.is_leaf()) continue;
      int child = records[r].x[tn.feature] < tn.threshold ? tn.left : tn.right;
      node_of[r] = child;
      sum_of[child] += residual[r];
      cnt_of[child] += 1;
    }
    for (int nd : next_level)
      tree.nodes[nd].value = sum_of[nd] / std::max(1, cnt_of[nd]);
    level = std::move(next_level);
  }
  return tree;
}

}  // namespace

GbtModel train_gbt(std::span<const TrainingRecord> records,
                   const GbtConfig& cfg) {
  if (records.size() < 20)
    throw std::invalid_argument("training needs at least 20 records, got " +
                                std::to_string(records.size()));
  if (cfg.n_trees < 1 || cfg.max_depth < 1 || cfg.min_leaf < 1 ||
      !(cfg.learning_rate > 0.0))
    throw std::invalid_argument("bad gbt config");
  const std::size_t width = records[0].x.size();
  if (width == 0) throw ShapeError("empty feature vectors");
  for (const auto& r : records)
    if (r.x.size() != width)
      throw ShapeError("inconsistent feature lengths in training data");

  double base = 0.0;
  for (const auto& r : records) base += r.y;
  base /= static_cast<double>(records.size());

  std::vector<double> residual(records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    residual[i] = records[i].y - base;

  // Presort every feature column once; records never change across rounds.
  std::vector<std::vector<int>> sorted_idx(width);
  for (std::size_t f = 0; f < width; ++f) {
    auto& idx = sorted_idx[f];
    idx.resize(records.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      double va = records[a].x[f], vb = records[b].x[f];
      if (va != vb) return va < vb;
      return a < b;
    });
  }

  std::vector<RegressionTree> trees;
  trees.reserve(cfg.n_trees);
  for (int round = 0; round < cfg.n_trees; ++round) {
    RegressionTree tree = build_tree(records, residual, sorted_idx, cfg);
    for (std::size_t i = 0; i < records.size(); ++i)
      residual[i] -= cfg.learning_rate * tree.predict(records[i].x);
    trees.push_back(std::move(tree));
  }
  return GbtModel(base, cfg.learning_rate, static_cast<int>(width),
                  std::move(trees));
}

DatasetSplit split_dataset(std::span<const TrainingRecord> records,
                           std::uint64_t seed,
                           std::vector<std::string>* warnings) {
  std::map<std::string, std::vector<int>> by_system;
  for (std::size_t i = 0; i < records.size(); ++i)
    by_system[records[i].system].push_back(static_cast<int>(i));

  DatasetSplit out;
  std::uint64_t stream = 0;
  for (auto& [system, rows] : by_system) {
    ++stream;
    if (rows.size() < 10) {
      for (int r : rows) out.train.push_back(records[r]);
      if (warnings)
        warnings->push_back("system '" + system + "' has only " +
                            std::to_string(rows.size()) +
                            " records; all sent to train");
      continue;
    }
    std::mt19937_64 rng(derive_seed(seed, stream));
    for (std::size_t i = rows.size() - 1; i > 0; --i)
      std::swap(rows[i], rows[uniform_below(rng, i + 1)]);
    const std::size_t n_hold = rows.size() / 10;
    const std::size_t n_rest = rows.size() - n_hold;
    const std::size_t n_train = n_rest * 8 / 10;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const TrainingRecord& r = records[rows[i]];
      if (i < n_hold)
        out.holdout10.push_back(r);
      else if (i < n_hold + n_train)
        out.train.push_back(r);
      else
        out.test20.push_back(r);
    }
  }
  return out;
}

Metrics evaluate(const GbtModel& model,
                 std::span<const TrainingRecord> records) {
  if (records.empty()) throw std::invalid_argument("no records to evaluate");
  Metrics m;
  for (const auto& r : records) {
    double err = model.predict(r.x) - r.y;
    m.mae += std::abs(err);
    m.mse += err * err;
  }
  m.mae /= static_cast<double>(records.size());
  m.mse /= static_cast<double>(records.size());
  return m;
}

namespace {

void write_double(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

void GbtModel::save(std::ostream& out) const {
  out << "gbt 1 " << layout_tag_ << ' ' << n_features_ << ' ';
  write_double(out, base_score_);
  out << ' ';
  write_double(out, learning_rate_);
  out << ' ' << trees_.size() << '\n';
  for (const auto& t : trees_) {
    out << "tree " << t.nodes.size() << '\n';
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        out << "leaf ";
        write_double(out, n.value);
        out << '\n';
      } else {
        out << "split " << n.feature << ' ';
        write_double(out, n.threshold);
        out << ' ' << n.left << ' ' << n.right << '\n';
      }
    }
  }
}

void GbtModel::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  save(out);
}

GbtModel GbtModel::load(std::istream& in) {
  std::string tag, layout;
  int version, n_features;
  double base, lr;
  std::size_t n_trees;
  if (!(in >> tag >> version >> layout >> n_features >> base >> lr >>
        n_trees) ||
      tag != "gbt" || version != 1)
    throw ParseError("bad model header", 1);
  std::vector<RegressionTree> trees(n_trees);
  for (auto& t : trees) {
    std::size_t n_nodes;
    if (!(in >> tag >> n_nodes) || tag != "tree")
      throw ParseError("bad tree header", 0);
    t.nodes.resize(n_nodes);
    for (auto& n : t.nodes) {
      if (!(in >> tag)) throw ParseError("truncated model file", 0);
      if (tag == "leaf") {
        if (!(in >> n.value)) throw ParseError("bad leaf", 0);
        n.feature = -1;
      } else if (tag == "split") {
        if (!(in >> n.feature >> n.threshold >> n.left >> n.right) ||
            n.feature < 0)
          throw ParseError("bad split", 0);
      } else {
        throw ParseError("unknown node tag '" + tag + "'", 0);
      }
    }
  }
  GbtModel model(base, lr, n_features, std::move(trees));
  model.set_layout_tag(layout);
  return model;
}

GbtModel GbtModel::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return load(in);
}

}  // namespace qetune
