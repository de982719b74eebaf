#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "onestreet/dataset.hpp"
#include "onestreet/errors.hpp"
#include "onestreet/metrics.hpp"
#include "onestreet/representation.hpp"

namespace onestreet {

// Memorized training set queried by exhaustive feature_distance scan; the
// dataset sizes here make indexing pointless.
struct KnnModel {
  RepresentationId rep = RepresentationId::kR1;
  int k = 1;
  int deck_size = 10;
  int bet_steps = 31;
  double distribution_weight = 2.0;
  std::vector<LabeledExample> examples;
};

inline KnnModel knn_fit(std::vector<LabeledExample> train, RepresentationId rep, int k,
                        const GameConfig& cfg) {
  if (train.empty()) throw EmptyModel("k-nn needs at least one stored example");
  if (k < 1) throw Error("k must be >= 1");
  KnnModel m;
  m.rep = rep;
  m.k = k;
  m.deck_size = cfg.deck_size;
  m.bet_steps = cfg.bet_steps;
  m.examples = std::move(train);
  return m;
}

// Nearest neighbors by feature_distance; ties break on lower game id, then
// lower card. k=1 returns the neighbor's output; larger k averages
// componentwise, renormalizing vector outputs per bet block.
inline std::vector<double> knn_predict(const KnnModel& m, const std::vector<double>& x) {
  if (m.examples.empty()) throw EmptyModel("k-nn model has no stored examples");
  struct Hit {
    double dist;
    long game_id;
    int card;
    std::size_t index;
    bool operator<(const Hit& o) const {
      if (dist != o.dist) return dist < o.dist;
      if (game_id != o.game_id) return game_id < o.game_id;
      return card < o.card;
    }
  };
  if (m.k == 1) {
    Hit best{feature_distance(m.examples[0].x, x, m.rep, m.deck_size, m.distribution_weight),
             m.examples[0].game_id, m.examples[0].card, 0};
    for (std::size_t i = 1; i < m.examples.size(); ++i) {
      const Hit h{feature_distance(m.examples[i].x, x, m.rep, m.deck_size, m.distribution_weight),
                  m.examples[i].game_id, m.examples[i].card, i};
      if (h < best) best = h;
    }
    return m.examples[best.index].y;
  }
  std::vector<Hit> hits;
  hits.reserve(m.examples.size());
  for (std::size_t i = 0; i < m.examples.size(); ++i)
    hits.push_back({feature_distance(m.examples[i].x, x, m.rep, m.deck_size, m.distribution_weight),
                    m.examples[i].game_id, m.examples[i].card, i});
  const std::size_t k = std::min(static_cast<std::size_t>(m.k), hits.size());
  std::nth_element(hits.begin(), hits.begin() + (k - 1), hits.end());
  std::vector<double> out(m.examples[hits[0].index].y.size(), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& y = m.examples[hits[i].index].y;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += y[j];
  }
  for (double& v : out) v /= static_cast<double>(k);
  if (output_kind(m.rep) != OutputKind::kScalarBet) {
    const std::size_t block = static_cast<std::size_t>(m.bet_steps);
    for (std::size_t start = 0; start + block <= out.size(); start += block) {
      double s = 0.0;
      for (std::size_t j = 0; j < block; ++j) s += out[start + j];
      if (s > 1e-12)
        for (std::size_t j = 0; j < block; ++j) out[start + j] /= s;
    }
  }
  return out;
}

inline void save_knn(const KnnModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path);
  nlohmann::json header{{"type", "onestreet.knn"},
                        {"rep", to_string(m.rep)},
                        {"k", m.k},
                        {"deck_size", m.deck_size},
                        {"bet_steps", m.bet_steps},
                        {"distribution_weight", m.distribution_weight},
                        {"examples", m.examples.size()}};
  out << header.dump() << "\n";
  for (const auto& e : m.examples) {
    nlohmann::json j{{"game_id", e.game_id}, {"card", e.card}, {"x", e.x}, {"y", e.y}};
    out << j.dump() << "\n";
  }
}

inline KnnModel load_knn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("model file is empty: " + path);
  const auto h = nlohmann::json::parse(line);
  if (h.value("type", "") != "onestreet.knn") throw Error("not a k-nn model file: " + path);
  KnnModel m;
  m.rep = parse_representation(h.at("rep").get<std::string>());
  m.k = h.at("k").get<int>();
  m.deck_size = h.at("deck_size").get<int>();
  m.bet_steps = h.at("bet_steps").get<int>();
  m.distribution_weight = h.at("distribution_weight").get<double>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    LabeledExample e;
    e.game_id = j.at("game_id").get<long>();
    e.card = j.at("card").get<int>();
    e.x = j.at("x").get<std::vector<double>>();
    e.y = j.at("y").get<std::vector<double>>();
    m.examples.push_back(std::move(e));
  }
  if (m.examples.empty()) throw EmptyModel("k-nn model has no stored examples");
  return m;
}

}  // namespace onestreet
