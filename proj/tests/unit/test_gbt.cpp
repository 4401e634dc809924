#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "qetune/errors.hpp"
#include "qetune/gbt.hpp"
#include "qetune/rng.hpp"

using namespace qetune;

namespace {

std::vector<TrainingRecord> linear_records(int n, std::uint64_t seed,
                                           double noise = 0.01) {
  std::mt19937_64 rng(seed);
  std::vector<TrainingRecord> recs(n);
  for (auto& r : recs) {
    r.system = "synthetic";
    r.x = {2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0,
           2.0 * uniform01(rng) - 1.0};
    r.y = 3.0 * r.x[0] + noise * (2.0 * uniform01(rng) - 1.0);
  }
  return recs;
}

double r_squared(const GbtModel& m, std::span<const TrainingRecord> recs) {
  double mean = 0.0;
  for (const auto& r : recs) mean += r.y;
  mean /= static_cast<double>(recs.size());
  double sse = 0.0, sst = 0.0;
  for (const auto& r : recs) {
    double p = m.predict(r.x);
    sse += (p - r.y) * (p - r.y);
    sst += (r.y - mean) * (r.y - mean);
  }
  return 1.0 - sse / sst;
}

double train_mse(const GbtModel& m, std::span<const TrainingRecord> recs) {
  return evaluate(m, recs).mse;
}

}  // namespace

TEST_CASE("gbt configuration defaults") {
  GbtConfig cfg;
  CHECK(cfg.n_trees == 200);
  CHECK(cfg.max_depth == 6);
  CHECK(cfg.learning_rate == 0.1);
  CHECK(cfg.min_leaf == 5);
}

TEST_CASE("train_gbt: held-out fit of a noisy linear target") {
  auto recs = linear_records(500, 21);
  std::vector<TrainingRecord> train(recs.begin(), recs.begin() + 400);
  std::vector<TrainingRecord> held(recs.begin() + 400, recs.end());
  GbtModel m = train_gbt(train, {});
  CHECK(r_squared(m, held) >= 0.95);
}

TEST_CASE("train_gbt: constant target is reproduced exactly") {
  std::vector<TrainingRecord> recs(30);
  std::mt19937_64 rng(4);
  for (auto& r : recs) {
    r.system = "c";
    r.x = {uniform01(rng), uniform01(rng)};
    r.y = 2.5;
  }
  GbtModel m = train_gbt(recs, {});
  for (const auto& r : recs)
    CHECK(m.predict(r.x) == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("train_gbt: a single stump equals the leaf means") {
  // 20 records at two distinct points; depth 1, one tree, full shrinkage
  std::vector<TrainingRecord> recs;
  for (int i = 0; i < 10; ++i) recs.push_back({"s", {0.0}, 1.0});
  for (int i = 0; i < 10; ++i) recs.push_back({"s", {1.0}, 3.0});
  GbtConfig cfg;
  cfg.n_trees = 1;
  cfg.max_depth = 1;
  cfg.learning_rate = 1.0;
  cfg.min_leaf = 1;
  GbtModel m = train_gbt(recs, cfg);
  CHECK(m.predict(std::vector<double>{0.0}) == doctest::Approx(1.0));
  CHECK(m.predict(std::vector<double>{1.0}) == doctest::Approx(3.0));
}

TEST_CASE("train_gbt: training MSE is non-increasing per round") {
  auto recs = linear_records(200, 9, 0.3);
  double prev = 1e300;
  for (int rounds : {1, 5, 20, 60}) {
    GbtConfig cfg;
    cfg.n_trees = rounds;
    GbtModel m = train_gbt(recs, cfg);
    double mse = train_mse(m, recs);
    CHECK(mse <= prev + 1e-12);
    prev = mse;
  }
}

TEST_CASE("train_gbt: input validation") {
  auto recs = linear_records(10, 1);
  CHECK_THROWS_AS(train_gbt(recs, {}), std::invalid_argument);
  auto bad = linear_records(30, 2);
  bad[7].x.push_back(1.0);
  CHECK_THROWS_AS(train_gbt(bad, {}), ShapeError);
}

TEST_CASE("predict: shape checking") {
  auto recs = linear_records(50, 3);
  GbtModel m = train_gbt(recs, {});
  CHECK_THROWS_AS(m.predict(std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("split_dataset: single-system ratios") {
  auto recs = linear_records(100, 12);
  DatasetSplit s = split_dataset(recs, 5);
  CHECK(s.holdout10.size() == 10);
  CHECK(s.train.size() == 72);
  CHECK(s.test20.size() == 18);
}

TEST_CASE("split_dataset: stratified over two systems") {
  auto recs = linear_records(50, 13);
  auto more = linear_records(50, 14);
  for (auto& r : more) r.system = "other";
  recs.insert(recs.end(), more.begin(), more.end());
  DatasetSplit s = split_dataset(recs, 5);
  CHECK(s.holdout10.size() == 10);  // 5 + 5
  CHECK(s.train.size() == 72);      // 36 + 36
  CHECK(s.test20.size() == 18);     // 9 + 9
  int hold_a = 0;
  for (const auto& r : s.holdout10)
    if (r.system == "synthetic") ++hold_a;
  CHECK(hold_a == 5);
  CHECK(s.holdout10.size() + s.train.size() + s.test20.size() == 100);
}

TEST_CASE("split_dataset: small system goes entirely to train") {
  auto recs = linear_records(5, 15);
  std::vector<std::string> warnings;
  DatasetSplit s = split_dataset(recs, 5, &warnings);
  CHECK(s.train.size() == 5);
  CHECK(s.holdout10.empty());
  CHECK(warnings.size() == 1);
}

TEST_CASE("split_dataset: deterministic under the seed") {
  auto recs = linear_records(100, 16);
  DatasetSplit a = split_dataset(recs, 77);
  DatasetSplit b = split_dataset(recs, 77);
  REQUIRE(a.train.size() == b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i)
    CHECK(a.train[i].y == b.train[i].y);
}

TEST_CASE("evaluate: metric definitions") {
  GbtModel perfect(1.0, 1.0, 1, {});  // predicts base_score everywhere
  std::vector<TrainingRecord> recs{{"s", {0.0}, 1.0}, {"s", {1.0}, 1.0}};
  Metrics m0 = evaluate(perfect, recs);
  CHECK(m0.mae == doctest::Approx(0.0));
  CHECK(m0.mse == doctest::Approx(0.0));

  std::vector<TrainingRecord> spread{{"s", {0.0}, 0.0}, {"s", {1.0}, 2.0}};
  Metrics m1 = evaluate(perfect, spread);  // constant 1 on ys {0, 2}
  CHECK(m1.mae == doctest::Approx(1.0));
  CHECK(m1.mse == doctest::Approx(1.0));
}

TEST_CASE("evaluate: hand-computed values on five points") {
  GbtModel c2(2.0, 1.0, 1, {});
  std::vector<TrainingRecord> recs;
  double ys[5] = {0.0, 1.0, 2.0, 3.0, 4.0};
  for (double y : ys) recs.push_back({"s", {0.0}, y});
  Metrics m = evaluate(c2, recs);
  CHECK(m.mae == doctest::Approx((2 + 1 + 0 + 1 + 2) / 5.0));
  CHECK(m.mse == doctest::Approx((4 + 1 + 0 + 1 + 4) / 5.0));
}

TEST_CASE("model save/load round trip predicts identically") {
  auto recs = linear_records(120, 33, 0.2);
  GbtModel m = train_gbt(recs, {});
  m.set_layout_tag("qcels");
  std::stringstream buf;
  m.save(buf);
  GbtModel back = GbtModel::load(buf);
  CHECK(back.layout_tag() == "qcels");
  CHECK(back.n_features() == m.n_features());
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x{2.0 * uniform01(rng) - 1.0,
                          2.0 * uniform01(rng) - 1.0,
                          2.0 * uniform01(rng) - 1.0};
    CHECK(m.predict(x) == back.predict(x));
  }
}

TEST_CASE("training determinism") {
  auto recs = linear_records(200, 44, 0.1);
  GbtModel a = train_gbt(recs, {});
  GbtModel b = train_gbt(recs, {});
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x{uniform01(rng), uniform01(rng), uniform01(rng)};
    CHECK(a.predict(x) == b.predict(x));
  }
}
