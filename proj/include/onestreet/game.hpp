#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "onestreet/errors.hpp"

namespace onestreet {

inline constexpr double kProbTolerance = 1e-9;

// One-street game: both players ante, player 1 is dealt a card and bets any
// of `bet_steps` sizes on a 0..stack grid, player 2 is dealt a card and
// calls or folds. Defaults are the 10-card, $0.1-increment, $3-stack game.
struct GameConfig {
  int deck_size = 10;
  int bet_steps = 31;
  double bet_increment = 0.1;
  double ante = 0.5;
  double stack = 3.0;

  double bet_amount(int bet_index) const { return bet_index * bet_increment; }
  int all_in_index() const { return bet_steps - 1; }
  // Largest possible net win/loss for player 1.
  double max_swing() const { return stack + ante; }

  void validate() const {
    if (deck_size < 2) throw ConfigMismatch("deck_size must be >= 2");
    if (bet_steps < 2) throw ConfigMismatch("bet_steps must be >= 2");
    if (bet_increment <= 0 || ante <= 0 || stack <= 0)
      throw ConfigMismatch("bet_increment, ante and stack must be positive");
    if (std::abs(bet_increment * (bet_steps - 1) - stack) > kProbTolerance)
      throw ConfigMismatch("bet grid must span 0 to the full stack");
  }
};

// Plain key=value file, '#' comments. Unset keys keep their defaults.
inline GameConfig load_game_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  GameConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ConfigMismatch("config line " + std::to_string(lineno) + ": expected key=value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "deck_size") cfg.deck_size = std::stoi(value);
      else if (key == "bet_steps") cfg.bet_steps = std::stoi(value);
      else if (key == "bet_increment") cfg.bet_increment = std::stod(value);
      else if (key == "ante") cfg.ante = std::stod(value);
      else if (key == "stack") cfg.stack = std::stod(value);
      else throw ConfigMismatch("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ConfigMismatch("config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

enum class P2Action { kCall, kFold };

// Joint probability over (P1 card, P2 card), row-major, zero diagonal.
// The zero diagonal encodes dealing without replacement.
struct JointDeal {
  int deck_size = 0;
  std::vector<double> p;

  JointDeal() = default;
  explicit JointDeal(int deck) : deck_size(deck), p(static_cast<std::size_t>(deck) * deck, 0.0) {}

  double& at(int i, int j) { return p[static_cast<std::size_t>(i) * deck_size + j]; }
  double at(int i, int j) const { return p[static_cast<std::size_t>(i) * deck_size + j]; }

  static JointDeal uniform(int deck) {
    JointDeal d(deck);
    const double v = 1.0 / (static_cast<double>(deck) * (deck - 1));
    for (int i = 0; i < deck; ++i)
      for (int j = 0; j < deck; ++j)
        if (i != j) d.at(i, j) = v;
    return d;
  }

  // Pr(P1 card = i+1).
  std::vector<double> p1_marginal() const {
    std::vector<double> m(deck_size, 0.0);
    for (int i = 0; i < deck_size; ++i)
      for (int j = 0; j < deck_size; ++j) m[i] += at(i, j);
    return m;
  }

  std::vector<double> p2_marginal() const {
    std::vector<double> m(deck_size, 0.0);
    for (int i = 0; i < deck_size; ++i)
      for (int j = 0; j < deck_size; ++j) m[j] += at(i, j);
    return m;
  }

  void validate() const {
    if (deck_size < 2 || p.size() != static_cast<std::size_t>(deck_size) * deck_size)
      throw DimensionError("joint deal has wrong shape");
    double sum = 0.0;
    for (int i = 0; i < deck_size; ++i) {
      for (int j = 0; j < deck_size; ++j) {
        const double v = at(i, j);
        if (v < 0.0) throw InvalidDistribution("joint deal entry is negative");
        if (i == j && v != 0.0) throw InvalidDistribution("joint deal diagonal must be zero");
        sum += v;
      }
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
      throw InvalidDistribution("joint deal does not sum to 1");
  }
};

// Per-hand distribution over bet sizes; rows are hands, columns bet indices.
// Flattened row-major this is the 310-vector of the default game.
struct StrategyP1 {
  int deck_size = 0;
  int bet_steps = 0;
  std::vector<double> sigma;

  StrategyP1() = default;
  StrategyP1(int deck, int steps)
      : deck_size(deck), bet_steps(steps), sigma(static_cast<std::size_t>(deck) * steps, 0.0) {}

  double& at(int hand, int bet) { return sigma[static_cast<std::size_t>(hand) * bet_steps + bet]; }
  double at(int hand, int bet) const { return sigma[static_cast<std::size_t>(hand) * bet_steps + bet]; }

  static StrategyP1 always_bet(int deck, int steps, int bet_index) {
    StrategyP1 s(deck, steps);
    for (int h = 0; h < deck; ++h) s.at(h, bet_index) = 1.0;
    return s;
  }

  void validate() const {
    if (deck_size < 1 || bet_steps < 1 || sigma.size() != static_cast<std::size_t>(deck_size) * bet_steps)
      throw DimensionError("strategy has wrong shape");
    for (int h = 0; h < deck_size; ++h) {
      double row = 0.0;
      for (int b = 0; b < bet_steps; ++b) {
        const double v = at(h, b);
        if (v < 0.0 || v > 1.0 + kProbTolerance)
          throw InvalidStrategy("bet probability outside [0,1]");
        row += v;
      }
      if (std::abs(row - 1.0) > kProbTolerance)
        throw InvalidStrategy("bet distribution for a hand does not sum to 1");
    }
  }
};

// Call probability per (P2 card, bet index).
struct StrategyP2 {
  int deck_size = 0;
  int bet_steps = 0;
  std::vector<double> tau;

  StrategyP2() = default;
  StrategyP2(int deck, int steps)
      : deck_size(deck), bet_steps(steps), tau(static_cast<std::size_t>(deck) * steps, 0.0) {}

  double& at(int card, int bet) { return tau[static_cast<std::size_t>(card) * bet_steps + bet]; }
  double at(int card, int bet) const { return tau[static_cast<std::size_t>(card) * bet_steps + bet]; }

  static StrategyP2 always_call(int deck, int steps) {
    StrategyP2 s(deck, steps);
    for (auto& v : s.tau) v = 1.0;
    return s;
  }

  static StrategyP2 always_fold(int deck, int steps) { return StrategyP2(deck, steps); }

  void validate() const {
    if (deck_size < 1 || bet_steps < 1 || tau.size() != static_cast<std::size_t>(deck_size) * bet_steps)
      throw DimensionError("strategy has wrong shape");
    for (const double v : tau)
      if (v < 0.0 || v > 1.0 + kProbTolerance)
        throw InvalidStrategy("call probability outside [0,1]");
  }
};

// Player 1 net for one completed hand. Ranks are 1-based.
inline double payoff(int h1_rank, int h2_rank, int bet_index, P2Action action, const GameConfig& cfg) {
  if (h1_rank < 1 || h1_rank > cfg.deck_size || h2_rank < 1 || h2_rank > cfg.deck_size)
    throw ConfigMismatch("card rank out of range");
  if (bet_index < 0 || bet_index >= cfg.bet_steps)
    throw ConfigMismatch("bet index out of range");
  if (h1_rank == h2_rank)
    throw IllegalShowdown("players cannot show down equal ranks");
  if (action == P2Action::kFold) return cfg.ante;
  const double swing = cfg.bet_amount(bet_index) + cfg.ante;
  return h1_rank > h2_rank ? swing : -swing;
}

// Exact expected player 1 net under a strategy profile. No sampling.
inline double expected_value(const JointDeal& deal, const StrategyP1& s1, const StrategyP2& s2,
                             const GameConfig& cfg) {
  if (deal.deck_size != cfg.deck_size || s1.deck_size != cfg.deck_size ||
      s1.bet_steps != cfg.bet_steps || s2.deck_size != cfg.deck_size ||
      s2.bet_steps != cfg.bet_steps)
    throw ConfigMismatch("deal/strategy dimensions do not match the config");
  std::vector<double> swing(cfg.bet_steps);
  for (int b = 0; b < cfg.bet_steps; ++b) swing[b] = cfg.bet_amount(b) + cfg.ante;
  double ev = 0.0;
  for (int i = 0; i < cfg.deck_size; ++i) {
    for (int j = 0; j < cfg.deck_size; ++j) {
      if (i == j) continue;
      const double pij = deal.at(i, j);
      if (pij == 0.0) continue;
      const double sign = i > j ? 1.0 : -1.0;
      double hand = 0.0;
      for (int b = 0; b < cfg.bet_steps; ++b) {
        const double call = s2.at(j, b);
        hand += s1.at(i, b) * (call * sign * swing[b] + (1.0 - call) * cfg.ante);
      }
      ev += pij * hand;
    }
  }
  return ev;
}

}  // namespace onestreet
