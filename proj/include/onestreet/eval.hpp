#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "onestreet/dataset.hpp"
#include "onestreet/errors.hpp"
#include "onestreet/knn.hpp"
#include "onestreet/metrics.hpp"
#include "onestreet/tree.hpp"

namespace onestreet {

// Mean prediction error over a test set, in [0,1]: output_distance for full
// strategies, per-hand EMD for single-hand strategies, |dy| / stack for
// scalar bets.
inline double evaluate_with(const std::function<std::vector<double>(const std::vector<double>&)>& predict,
                            const std::vector<LabeledExample>& test, RepresentationId rep,
                            const GameConfig& cfg) {
  if (test.empty()) throw EvalError("empty evaluation set");
  double total = 0.0;
  for (const auto& e : test) {
    const std::vector<double> yhat = predict(e.x);
    switch (output_kind(rep)) {
      case OutputKind::kFullStrategy:
        total += output_distance(e.y, yhat, cfg.deck_size, cfg.bet_steps);
        break;
      case OutputKind::kHandStrategy:
        total += emd_1d(e.y, yhat);
        break;
      case OutputKind::kScalarBet:
        total += std::abs(e.y[0] - yhat[0]) / cfg.stack;
        break;
    }
  }
  return total / static_cast<double>(test.size());
}

inline double evaluate(const DecisionTree& t, const std::vector<LabeledExample>& test,
                       const GameConfig& cfg) {
  return evaluate_with([&](const std::vector<double>& x) { return tree_predict(t, x); }, test,
                       t.rep, cfg);
}

inline double evaluate(const KnnModel& m, const std::vector<LabeledExample>& test,
                       const GameConfig& cfg) {
  return evaluate_with([&](const std::vector<double>& x) { return knn_predict(m, x); }, test,
                       m.rep, cfg);
}

struct EvalRow {
  RepresentationId rep = RepresentationId::kR1;
  std::string model_kind;  // "tree" or "knn"
  int depth_or_k = 0;
  long node_count = 0;
  double train_error = 0.0;
  double test_error = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
};

// One tree per depth. The greedy construction is depth-agnostic, so the
// deepest tree is fitted once and truncated, which is identical to fitting
// each depth separately.
inline EvalReport depth_sweep(const std::vector<LabeledExample>& train,
                              const std::vector<LabeledExample>& test, RepresentationId rep,
                              int min_depth, int max_depth, int min_leaf, const GameConfig& cfg) {
  if (min_depth < 0 || max_depth < min_depth) throw Error("bad depth range");
  const DecisionTree full = tree_fit(train, rep, max_depth, min_leaf, cfg);
  EvalReport report;
  for (int d = min_depth; d <= max_depth; ++d) {
    const DecisionTree t = truncate_tree(full, d);
    EvalRow row;
    row.rep = rep;
    row.model_kind = "tree";
    row.depth_or_k = d;
    row.node_count = t.node_count();
    row.train_error = evaluate(t, train, cfg);
    row.test_error = evaluate(t, test, cfg);
    report.rows.push_back(row);
  }
  return report;
}

inline void write_eval_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write report file: " + path);
  out << "rep,model,depth_or_k,nodes,train_error,test_error\n";
  char buf[64];
  for (const auto& r : report.rows) {
    out << to_string(r.rep) << ',' << r.model_kind << ',' << r.depth_or_k << ',' << r.node_count;
    std::snprintf(buf, sizeof(buf), "%.10g", r.train_error);
    out << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.10g", r.test_error);
    out << ',' << buf << "\n";
  }
}

}  // namespace onestreet
