#include <gtest/gtest.h>

#include <cmath>

#include "onestreet/dataset.hpp"
#include "onestreet/eval.hpp"
#include "onestreet/knn.hpp"
#include "onestreet/metrics.hpp"
#include "onestreet/tree.hpp"
#include "test_support.hpp"

using namespace onestreet;
namespace ts = test_support;

namespace {

const GameConfig kCfg;

// Shared small solved dataset; built once for the suite.
const Dataset& small_dataset() {
  static const Dataset ds = build_dataset(100, 424242, 1e-3, kCfg, 2);
  return ds;
}

LabeledExample scalar_example(long game_id, double card_cdf, double bet) {
  const auto base = marginals(JointDeal::uniform(10));
  LabeledExample e;
  e.game_id = game_id;
  e.card = 1;
  e.x = base.cdf1;
  e.x.insert(e.x.end(), base.cdf2.begin(), base.cdf2.end());
  e.x.push_back(card_cdf);
  e.y.assign(1, bet);
  return e;
}

}  // namespace

TEST(Knn, StoredQueryReturnsItsOwnOutput) {
  const auto examples = extract_all(small_dataset(), RepresentationId::kR1);
  const auto m = knn_fit(examples, RepresentationId::kR1, 1, kCfg);
  for (int i = 0; i < 5; ++i) {
    const auto& e = examples[static_cast<std::size_t>(i * 7)];
    EXPECT_EQ(knn_predict(m, e.x), e.y);
  }
}

TEST(Knn, SingleUniformGameModelAlwaysAnswersThePaperVector) {
  GameRecord r;
  r.id = 0;
  r.deal = JointDeal::uniform(10);
  r.features = marginals(r.deal);
  r.strategy = ts::paper_uniform_strategy();
  const auto m = knn_fit(extract(r, RepresentationId::kR1, 1, kCfg), RepresentationId::kR1, 1, kCfg);
  const auto query = marginals(ts::p1_polar_deal());
  std::vector<double> x = query.cdf1;
  x.insert(x.end(), query.cdf2.begin(), query.cdf2.end());
  const auto y = knn_predict(m, x);
  ASSERT_EQ(y.size(), 310u);
  EXPECT_DOUBLE_EQ(y[1], 0.091);
  EXPECT_DOUBLE_EQ(y[18], 0.643);
}

TEST(Knn, TwoScalarNeighborsAverage) {
  std::vector<LabeledExample> train{scalar_example(0, 0.2, 0.0), scalar_example(1, 0.8, 3.0)};
  const auto m = knn_fit(train, RepresentationId::kR9, 2, kCfg);
  const auto y = knn_predict(m, scalar_example(2, 0.5, 0.0).x);
  ASSERT_EQ(y.size(), 1u);
  EXPECT_DOUBLE_EQ(y[0], 1.5);
}

TEST(Knn, TieBreaksOnLowerGameId) {
  auto a = scalar_example(3, 0.5, 2.0);
  auto b = scalar_example(1, 0.5, 1.0);
  const auto m = knn_fit({a, b}, RepresentationId::kR9, 1, kCfg);
  EXPECT_DOUBLE_EQ(knn_predict(m, scalar_example(9, 0.5, 0.0).x)[0], 1.0);
}

TEST(Knn, VectorAveragesStayBlockStochastic) {
  const auto examples = extract_all(small_dataset(), RepresentationId::kR3);
  const auto m = knn_fit(examples, RepresentationId::kR3, 5, kCfg);
  const auto y = knn_predict(m, examples[37].x);
  double sum = 0.0;
  for (const double v : y) {
    EXPECT_GE(v, 0.0);
    sum += v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-6);
}

TEST(Knn, EmptyModelRejected) {
  EXPECT_THROW(knn_fit({}, RepresentationId::kR1, 1, kCfg), EmptyModel);
  KnnModel empty;
  EXPECT_THROW(knn_predict(empty, {}), EmptyModel);
}

TEST(Knn, SaveLoadRoundTrip) {
  const auto examples = extract_all(small_dataset(), RepresentationId::kR9);
  const auto m = knn_fit(examples, RepresentationId::kR9, 3, kCfg);
  const std::string path = ::testing::TempDir() + "model.knn";
  save_knn(m, path);
  const auto back = load_knn(path);
  EXPECT_EQ(back.k, 3);
  EXPECT_EQ(back.rep, RepresentationId::kR9);
  ASSERT_EQ(back.examples.size(), m.examples.size());
  EXPECT_EQ(knn_predict(back, examples[11].x), knn_predict(m, examples[11].x));
  std::remove(path.c_str());
}

TEST(Tree, IdenticalOutputsMakeASingleLeaf) {
  std::vector<LabeledExample> train;
  for (int i = 0; i < 20; ++i) train.push_back(scalar_example(i, 0.1 * (i % 10), 1.5));
  const auto t = tree_fit(train, RepresentationId::kR9, 8, 1, kCfg);
  EXPECT_EQ(t.node_count(), 1);
  EXPECT_DOUBLE_EQ(t.nodes[0].training_error, 0.0);
  EXPECT_DOUBLE_EQ(tree_predict(t, train[0].x)[0], 1.5);
}

TEST(Tree, DepthOneSeparatesTwoClusters) {
  std::vector<LabeledExample> train;
  for (int i = 0; i < 10; ++i) train.push_back(scalar_example(i, 0.1, 0.0));
  for (int i = 10; i < 20; ++i) train.push_back(scalar_example(i, 0.9, 3.0));
  const auto t = tree_fit(train, RepresentationId::kR9, 1, 1, kCfg);
  ASSERT_EQ(t.node_count(), 3);
  EXPECT_EQ(t.nodes[0].feature, 20);
  EXPECT_NEAR(t.nodes[0].threshold, 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(tree_predict(t, scalar_example(99, 0.0, 0).x)[0], 0.0);
  EXPECT_DOUBLE_EQ(tree_predict(t, scalar_example(99, 1.0, 0).x)[0], 3.0);
}

TEST(Tree, BoundaryQueryTakesTheTrueBranch) {
  std::vector<LabeledExample> train{scalar_example(0, 0.2, 0.0), scalar_example(1, 0.8, 3.0)};
  const auto t = tree_fit(train, RepresentationId::kR9, 1, 1, kCfg);
  ASSERT_EQ(t.node_count(), 3);
  // Exactly at the threshold: the <= condition routes left.
  EXPECT_DOUBLE_EQ(tree_predict(t, scalar_example(9, t.nodes[0].threshold, 0).x)[0], 0.0);
}

TEST(Tree, MemorizesTrainingPointsWithUniqueLeaves) {
  std::vector<LabeledExample> train;
  for (int i = 0; i < 8; ++i) train.push_back(scalar_example(i, 0.1 + 0.1 * i, 0.3 * i));
  const auto t = tree_fit(train, RepresentationId::kR9, 10, 1, kCfg);
  for (const auto& e : train) EXPECT_DOUBLE_EQ(tree_predict(t, e.x)[0], e.y[0]);
}

TEST(Tree, VectorOutputsFitAndPredictValidBlocks) {
  const auto examples = extract_all(small_dataset(), RepresentationId::kR5);
  const auto t = tree_fit(examples, RepresentationId::kR5, 6, 5, kCfg);
  for (int i = 0; i < 40; ++i) {
    const auto& y = tree_predict(t, examples[static_cast<std::size_t>(i * 11)].x);
    double sum = 0.0;
    for (const double v : y) {
      EXPECT_GE(v, -1e-12);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(Tree, FullStrategyOutputsFitAndPredict) {
  const auto examples = extract_all(small_dataset(), RepresentationId::kR2);
  const auto t = tree_fit(examples, RepresentationId::kR2, 4, 5, kCfg);
  const auto& y = tree_predict(t, examples[3].x);
  ASSERT_EQ(y.size(), 310u);
  for (int h = 0; h < 10; ++h) {
    double sum = 0.0;
    for (int b = 0; b < 31; ++b) sum += y[static_cast<std::size_t>(h) * 31 + b];
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(Tree, TruncationMatchesDirectFit) {
  const auto examples = extract_all(small_dataset(), RepresentationId::kR9);
  const auto deep = tree_fit(examples, RepresentationId::kR9, 7, 5, kCfg);
  const auto direct = tree_fit(examples, RepresentationId::kR9, 3, 5, kCfg);
  const auto cut = truncate_tree(deep, 3);
  ASSERT_EQ(cut.node_count(), direct.node_count());
  for (std::size_t i = 0; i < cut.nodes.size(); ++i) {
    EXPECT_EQ(cut.nodes[i].feature, direct.nodes[i].feature);
    EXPECT_EQ(cut.nodes[i].threshold, direct.nodes[i].threshold);
    EXPECT_EQ(cut.nodes[i].prediction, direct.nodes[i].prediction);
  }
}

TEST(Tree, TextRoundTripPreservesPredictions) {
  const auto examples = extract_all(small_dataset(), RepresentationId::kR6);
  const auto t = tree_fit(examples, RepresentationId::kR6, 4, 5, kCfg);
  const auto back = tree_from_text(tree_to_text(t));
  EXPECT_EQ(back.node_count(), t.node_count());
  EXPECT_EQ(back.rep, t.rep);
  for (int i = 0; i < 50; ++i) {
    const auto& e = examples[static_cast<std::size_t>(i * 13)];
    EXPECT_EQ(tree_predict(back, e.x), tree_predict(t, e.x));
  }
}

TEST(Evaluate, PerfectPredictorScoresZero) {
  const auto examples = extract_all(small_dataset(), RepresentationId::kR1);
  const auto m = knn_fit(examples, RepresentationId::kR1, 1, kCfg);
  EXPECT_DOUBLE_EQ(evaluate(m, examples, kCfg), 0.0);
}

TEST(Evaluate, ScalarErrorIsStackNormalized) {
  DecisionTree t;
  t.rep = RepresentationId::kR9;
  t.nodes.emplace_back();
  t.nodes[0].prediction.assign(1, 0.3);
  std::vector<LabeledExample> test{scalar_example(0, 0.4, 0.0), scalar_example(1, 0.7, 0.6)};
  // Always off by 0.3 dollars on a 3-dollar stack.
  EXPECT_NEAR(evaluate(t, test, kCfg), 0.1, 1e-12);
}

TEST(Evaluate, MeanPredictorBeatsTheWorstSingleOutput) {
  const auto examples = extract_all(small_dataset(), RepresentationId::kR3);
  std::vector<LabeledExample> fixture(examples.begin(), examples.begin() + 10);
  std::vector<double> mean(31, 0.0);
  for (const auto& e : fixture)
    for (int b = 0; b < 31; ++b)
      mean[static_cast<std::size_t>(b)] += e.y[static_cast<std::size_t>(b)] / 10.0;
  const double mean_err = evaluate_with([&](const std::vector<double>&) { return mean; }, fixture,
                                        RepresentationId::kR3, kCfg);
  double worst = 0.0;
  for (const auto& cand : fixture) {
    const double err = evaluate_with([&](const std::vector<double>&) { return cand.y; }, fixture,
                                     RepresentationId::kR3, kCfg);
    worst = std::max(worst, err);
  }
  EXPECT_LE(mean_err, worst + 1e-12);
}

TEST(Evaluate, EmptyTestSetRejected) {
  DecisionTree t;
  t.rep = RepresentationId::kR9;
  t.nodes.emplace_back();
  t.nodes[0].prediction.assign(1, 0.0);
  EXPECT_THROW(evaluate(t, {}, kCfg), EvalError);
}

TEST(DepthSweep, EmitsOneRowPerDepth) {
  const auto all = extract_all(small_dataset(), RepresentationId::kR9);
  const auto s = split(small_dataset(), 0.8, 5);
  const auto train = filter_examples(all, s, true);
  const auto test = filter_examples(all, s, false);
  const auto report = depth_sweep(train, test, RepresentationId::kR9, 3, 20, 5, kCfg);
  EXPECT_EQ(report.rows.size(), 18u);
}

TEST(DepthSweep, TrainingErrorMonotoneAndNodesGrow) {
  for (const auto rep : {RepresentationId::kR9, RepresentationId::kR4, RepresentationId::kR1}) {
    const auto all = extract_all(small_dataset(), rep);
    const auto s = split(small_dataset(), 0.8, 5);
    const auto report = depth_sweep(filter_examples(all, s, true), filter_examples(all, s, false),
                                    rep, 3, 9, 5, kCfg);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      EXPECT_LE(report.rows[i].train_error, report.rows[i - 1].train_error + 1e-12);
      EXPECT_GE(report.rows[i].node_count, report.rows[i - 1].node_count);
      EXPECT_EQ(report.rows[i].node_count % 2, 1);
    }
  }
}
