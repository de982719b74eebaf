#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "onestreet/deal_gen.hpp"
#include "onestreet/equilibrium.hpp"
#include "onestreet/errors.hpp"
#include "onestreet/game.hpp"
#include "onestreet/representation.hpp"
#include "onestreet/rng.hpp"

namespace onestreet {

// One solved game: the deal, its marginal features, player 1's equilibrium
// strategy and the solver's certificate.
struct GameRecord {
  long id = 0;
  std::uint64_t seed = 0;
  JointDeal deal;
  MarginalFeatures features;
  StrategyP1 strategy;
  double value = 0.0;
  double nash_conv = 0.0;
};

struct DatasetManifest {
  int version = 1;
  long count = 0;
  std::uint64_t master_seed = 0;
  double epsilon = 1e-4;
  long discarded_degenerate = 0;
  GameConfig config;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<GameRecord> records;
};

// Builds `count` solved games. Each game draws its own generator from
// (master_seed, id), so records are independent of worker count and
// byte-identical across runs. Degenerate deals are discarded and redrawn;
// a game that fails to converge is retried once with 10x the iteration
// budget before the build aborts with its seed.
inline Dataset build_dataset(long count, std::uint64_t master_seed, double epsilon,
                             const GameConfig& cfg, int jobs = 1, long max_iterations = 100000) {
  if (count < 1) throw Error("dataset count must be >= 1");
  cfg.validate();
  Dataset ds;
  ds.manifest.count = count;
  ds.manifest.master_seed = master_seed;
  ds.manifest.epsilon = epsilon;
  ds.manifest.config = cfg;
  ds.records.resize(static_cast<std::size_t>(count));

  std::atomic<long> next{0};
  std::atomic<long> discarded{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const long id = next.fetch_add(1);
      if (id >= count || failed.load()) return;
      const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(id));
      Rng rng(seed);
      try {
        JointDeal deal;
        for (;;) {
          const auto x1 = sample_simplex(cfg.deck_size, rng);
          const auto x2 = sample_simplex(cfg.deck_size, rng);
          try {
            deal = make_joint(x1, x2);
            break;
          } catch (const DegenerateDeal&) {
            discarded.fetch_add(1);
          }
        }
        EquilibriumResult eq;
        try {
          eq = solve(deal, cfg, epsilon, max_iterations);
        } catch (const ConvergenceFailure&) {
          eq = solve(deal, cfg, epsilon, 10 * max_iterations);
        }
        GameRecord& rec = ds.records[static_cast<std::size_t>(id)];
        rec.id = id;
        rec.seed = seed;
        rec.deal = std::move(deal);
        rec.features = marginals(rec.deal);
        rec.strategy = std::move(eq.s1);
        rec.value = eq.value;
        rec.nash_conv = eq.nash_conv;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        failure = "game " + std::to_string(id) + " (seed " + std::to_string(seed) +
                  ") failed: " + e.what();
      }
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw Error(failure);
  ds.manifest.discarded_degenerate = discarded.load();
  return ds;
}

namespace detail {

inline nlohmann::json record_to_json(const GameRecord& r) {
  return nlohmann::json{{"id", r.id},
                        {"seed", r.seed},
                        {"deal", r.deal.p},
                        {"cdf1", r.features.cdf1},
                        {"cdf2", r.features.cdf2},
                        {"pdf1", r.features.pdf1},
                        {"pdf2", r.features.pdf2},
                        {"strategy", r.strategy.sigma},
                        {"value", r.value},
                        {"nash_conv", r.nash_conv}};
}

inline GameRecord record_from_json(const nlohmann::json& j, const GameConfig& cfg) {
  GameRecord r;
  r.id = j.at("id").get<long>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.deal.deck_size = cfg.deck_size;
  r.deal.p = j.at("deal").get<std::vector<double>>();
  r.features.cdf1 = j.at("cdf1").get<std::vector<double>>();
  r.features.cdf2 = j.at("cdf2").get<std::vector<double>>();
  r.features.pdf1 = j.at("pdf1").get<std::vector<double>>();
  r.features.pdf2 = j.at("pdf2").get<std::vector<double>>();
  r.strategy.deck_size = cfg.deck_size;
  r.strategy.bet_steps = cfg.bet_steps;
  r.strategy.sigma = j.at("strategy").get<std::vector<double>>();
  r.value = j.at("value").get<double>();
  r.nash_conv = j.at("nash_conv").get<double>();
  return r;
}

}  // namespace detail

// Line-delimited storage: a manifest object on the first line, one record
// object per following line. nlohmann's shortest-round-trip number printing
// reproduces every double exactly on reload.
inline void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset file: " + path);
  const GameConfig& c = ds.manifest.config;
  nlohmann::json manifest{{"type", "onestreet.dataset"},
                          {"version", ds.manifest.version},
                          {"count", ds.manifest.count},
                          {"master_seed", ds.manifest.master_seed},
                          {"epsilon", ds.manifest.epsilon},
                          {"discarded_degenerate", ds.manifest.discarded_degenerate},
                          {"config", {{"deck_size", c.deck_size},
                                      {"bet_steps", c.bet_steps},
                                      {"bet_increment", c.bet_increment},
                                      {"ante", c.ante},
                                      {"stack", c.stack}}}};
  out << manifest.dump() << "\n";
  for (const auto& r : ds.records) out << detail::record_to_json(r).dump() << "\n";
  if (!out) throw Error("failed writing dataset file: " + path);
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("dataset file is empty: " + path);
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad dataset manifest: ") + e.what());
  }
  if (m.value("type", "") != "onestreet.dataset")
    throw Error("not a dataset file: " + path);
  Dataset ds;
  ds.manifest.version = m.at("version").get<int>();
  ds.manifest.count = m.at("count").get<long>();
  ds.manifest.master_seed = m.at("master_seed").get<std::uint64_t>();
  ds.manifest.epsilon = m.at("epsilon").get<double>();
  ds.manifest.discarded_degenerate = m.at("discarded_degenerate").get<long>();
  const auto& c = m.at("config");
  ds.manifest.config.deck_size = c.at("deck_size").get<int>();
  ds.manifest.config.bet_steps = c.at("bet_steps").get<int>();
  ds.manifest.config.bet_increment = c.at("bet_increment").get<double>();
  ds.manifest.config.ante = c.at("ante").get<double>();
  ds.manifest.config.stack = c.at("stack").get<double>();
  ds.manifest.config.validate();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("bad dataset record: ") + e.what());
    }
    GameRecord r = detail::record_from_json(j, ds.manifest.config);
    r.deal.validate();
    r.strategy.validate();
    r.features.validate();
    if (r.nash_conv > ds.manifest.epsilon + 1e-12)
      throw Error("record " + std::to_string(r.id) + " violates the dataset epsilon");
    ds.records.push_back(std::move(r));
  }
  if (ds.records.size() != static_cast<std::size_t>(ds.manifest.count))
    throw Error("dataset record count does not match its manifest");
  return ds;
}

// Re-checks a stored record against the exact oracle: the gap between the
// recorded profile value and what the stored strategy guarantees against a
// fresh best response. At most the solver's certified exploitability.
inline double verify_record(const GameRecord& r, const GameConfig& cfg) {
  const double guaranteed = best_response_p2(r.deal, r.strategy, cfg).second;
  return r.value - guaranteed;
}

// One learning example. `card` is the 1-based hand for per-card
// representations, 0 for whole-game ones. `y` holds the full strategy, one
// 31-block, or a single sampled bet amount depending on the representation.
struct LabeledExample {
  long game_id = 0;
  int card = 0;
  std::vector<double> x;
  std::vector<double> y;
};

// Feature vector of one record under a representation; `card` is 1-based
// and required exactly for the per-card representations.
inline std::vector<double> make_features(const GameRecord& r, RepresentationId rep, int card,
                                         const GameConfig& cfg) {
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(feature_count(rep, cfg.deck_size)));
  const auto& f = r.features;
  if (uses_pdf_features(rep)) {
    x.insert(x.end(), f.pdf1.begin(), f.pdf1.end());
    x.insert(x.end(), f.pdf2.begin(), f.pdf2.end());
  } else {
    x.insert(x.end(), f.cdf1.begin(), f.cdf1.end());
    x.insert(x.end(), f.cdf2.begin(), f.cdf2.end());
  }
  switch (feature21_kind(rep)) {
    case Feature21::kNone:
      break;
    case Feature21::kCardNumber:
      x.push_back(static_cast<double>(card));
      break;
    case Feature21::kCdfValue:
      x.push_back(f.cdf1[card - 1]);
      break;
  }
  return x;
}

namespace detail {

inline int sample_bet_index(const double* block, int bet_steps, double u) {
  double acc = 0.0;
  int last_positive = 0;
  for (int b = 0; b < bet_steps; ++b) {
    if (block[b] <= 0.0) continue;
    last_positive = b;
    acc += block[b];
    if (u < acc) return b;
  }
  return last_positive;
}

}  // namespace detail

// Materializes the learning examples of one record. Scalar representations
// draw each card's bet from a generator seeded by (sampling_seed, game id,
// card), so extraction is reproducible example by example.
inline std::vector<LabeledExample> extract(const GameRecord& r, RepresentationId rep,
                                           std::uint64_t sampling_seed, const GameConfig& cfg) {
  std::vector<LabeledExample> out;
  if (output_kind(rep) == OutputKind::kFullStrategy) {
    LabeledExample e;
    e.game_id = r.id;
    e.x = make_features(r, rep, 0, cfg);
    e.y = r.strategy.sigma;
    out.push_back(std::move(e));
    return out;
  }
  out.reserve(static_cast<std::size_t>(cfg.deck_size));
  for (int card = 1; card <= cfg.deck_size; ++card) {
    LabeledExample e;
    e.game_id = r.id;
    e.card = card;
    e.x = make_features(r, rep, card, cfg);
    const double* block = &r.strategy.sigma[static_cast<std::size_t>(card - 1) * cfg.bet_steps];
    if (output_kind(rep) == OutputKind::kHandStrategy) {
      e.y.assign(block, block + cfg.bet_steps);
    } else {
      Rng rng(derive_seed(sampling_seed, static_cast<std::uint64_t>(r.id),
                          static_cast<std::uint64_t>(card)));
      const int b = detail::sample_bet_index(block, cfg.bet_steps, rng.next_double());
      e.y.assign(1, cfg.bet_amount(b));
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<LabeledExample> extract_all(const Dataset& ds, RepresentationId rep) {
  std::vector<LabeledExample> out;
  out.reserve(ds.records.size() *
              static_cast<std::size_t>(examples_per_record(rep, ds.manifest.config.deck_size)));
  for (const auto& r : ds.records) {
    auto part = extract(r, rep, ds.manifest.master_seed, ds.manifest.config);
    for (auto& e : part) out.push_back(std::move(e));
  }
  return out;
}

// Game-level train/test split: all examples of one game land on one side.
struct SplitIndices {
  std::vector<long> train_ids, test_ids;
  std::vector<char> is_train;  // indexed by game id
};

inline SplitIndices split(long game_count, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw SplitError("train fraction must be strictly between 0 and 1");
  std::vector<long> ids(static_cast<std::size_t>(game_count));
  for (long i = 0; i < game_count; ++i) ids[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  shuffle(ids, rng);
  const long train_count = std::llround(train_fraction * static_cast<double>(game_count));
  if (train_count < 1 || train_count >= game_count)
    throw SplitError("split leaves one side empty");
  SplitIndices s;
  s.train_ids.assign(ids.begin(), ids.begin() + train_count);
  s.test_ids.assign(ids.begin() + train_count, ids.end());
  s.is_train.assign(static_cast<std::size_t>(game_count), 0);
  for (const long id : s.train_ids) s.is_train[static_cast<std::size_t>(id)] = 1;
  return s;
}

inline SplitIndices split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  return split(static_cast<long>(ds.records.size()), train_fraction, seed);
}

inline std::vector<LabeledExample> filter_examples(const std::vector<LabeledExample>& all,
                                                   const SplitIndices& s, bool train_side) {
  std::vector<LabeledExample> out;
  for (const auto& e : all)
    if ((s.is_train[static_cast<std::size_t>(e.game_id)] != 0) == train_side) out.push_back(e);
  return out;
}

// Flat CSV of one representation's examples for external tools.
inline void export_csv(const Dataset& ds, RepresentationId rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write csv file: " + path);
  const int nx = feature_count(rep, ds.manifest.config.deck_size);
  out << "game_id,card";
  for (int i = 0; i < nx; ++i) out << ",x" << i;
  const auto examples = extract_all(ds, rep);
  const std::size_t ny = examples.empty() ? 0 : examples.front().y.size();
  if (ny == 1) {
    out << ",bet";
  } else {
    for (std::size_t i = 0; i < ny; ++i) out << ",y" << i;
  }
  out << "\n";
  char buf[64];
  for (const auto& e : examples) {
    out << e.game_id << ',' << e.card;
    for (const double v : e.x) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    for (const double v : e.y) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << "\n";
  }
}

}  // namespace onestreet
