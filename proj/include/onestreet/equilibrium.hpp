#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "onestreet/errors.hpp"
#include "onestreet/game.hpp"

namespace onestreet {

struct EquilibriumResult {
  StrategyP1 s1;
  StrategyP2 s2;
  double value = 0.0;      // player 1 expected net at the profile
  double nash_conv = 0.0;  // certified exploitability of the profile
  long iterations = 0;
};

struct ConvergenceFailure : Error {
  EquilibriumResult best;
  ConvergenceFailure(const std::string& msg, EquilibriumResult best_profile)
      : Error(msg), best(std::move(best_profile)) {}
};

namespace detail {

inline void check_game_dims(const JointDeal& deal, const GameConfig& cfg) {
  if (deal.deck_size != cfg.deck_size)
    throw ConfigMismatch("deal dimensions do not match the config");
}

}  // namespace detail

// Exact pure best response for player 2 against s1. For every (card, bet)
// P2 compares the conditional call value with folding the ante; ties go to
// call, as do unreached pairs. Returns the response and player 1's expected
// value against it (the minimum over all P2 strategies).
inline std::pair<StrategyP2, double> best_response_p2(const JointDeal& deal, const StrategyP1& s1,
                                                      const GameConfig& cfg) {
  detail::check_game_dims(deal, cfg);
  if (s1.deck_size != cfg.deck_size || s1.bet_steps != cfg.bet_steps)
    throw ConfigMismatch("strategy dimensions do not match the config");
  const int d = cfg.deck_size;
  const int nb = cfg.bet_steps;
  StrategyP2 br(d, nb);
  double p1_value = 0.0;
  for (int c = 0; c < d; ++c) {
    for (int b = 0; b < nb; ++b) {
      const double swing = cfg.bet_amount(b) + cfg.ante;
      double reach = 0.0;
      double call_p2 = 0.0;  // P2's unnormalized value of calling
      for (int i = 0; i < d; ++i) {
        if (i == c) continue;
        const double w = deal.at(i, c) * s1.at(i, b);
        reach += w;
        call_p2 += w * (c > i ? swing : -swing);
      }
      const double fold_p2 = -cfg.ante * reach;
      const bool call = reach == 0.0 || call_p2 >= fold_p2;
      br.at(c, b) = call ? 1.0 : 0.0;
      p1_value -= call ? call_p2 : fold_p2;
    }
  }
  return {std::move(br), p1_value};
}

// Exact pure best response for player 1 against s2; per hand the best bet
// index, ties toward the smaller one. Zero-marginal hands bet 0. Returns the
// response and its expected value (the maximum over all P1 strategies).
inline std::pair<StrategyP1, double> best_response_p1(const JointDeal& deal, const StrategyP2& s2,
                                                      const GameConfig& cfg) {
  detail::check_game_dims(deal, cfg);
  if (s2.deck_size != cfg.deck_size || s2.bet_steps != cfg.bet_steps)
    throw ConfigMismatch("strategy dimensions do not match the config");
  const int d = cfg.deck_size;
  const int nb = cfg.bet_steps;
  StrategyP1 br(d, nb);
  double value = 0.0;
  for (int h = 0; h < d; ++h) {
    double marg = 0.0;
    for (int c = 0; c < d; ++c) marg += deal.at(h, c);
    if (marg == 0.0) {
      br.at(h, 0) = 1.0;
      continue;
    }
    double best = 0.0;
    int best_b = 0;
    for (int b = 0; b < nb; ++b) {
      const double swing = cfg.bet_amount(b) + cfg.ante;
      double ev = 0.0;
      for (int c = 0; c < d; ++c) {
        if (c == h) continue;
        const double call = s2.at(c, b);
        ev += deal.at(h, c) * (call * (h > c ? swing : -swing) + (1.0 - call) * cfg.ante);
      }
      if (b == 0 || ev > best) {
        best = ev;
        best_b = b;
      }
    }
    br.at(h, best_b) = 1.0;
    value += best;
  }
  return {std::move(br), value};
}

// Total gain available to best-responding opponents against (s1, s2);
// zero exactly at equilibrium.
inline double nash_conv(const JointDeal& deal, const StrategyP1& s1, const StrategyP2& s2,
                        const GameConfig& cfg) {
  const double br1 = best_response_p1(deal, s2, cfg).second;
  const double br2 = best_response_p2(deal, s1, cfg).second;
  return std::max(0.0, br1 - br2);
}

// Regret-matching self-play (CFR+ style: clamped cumulative regrets,
// alternating updates, linearly weighted average strategies) with the exact
// best-response pair as the convergence certificate. Deterministic.
inline EquilibriumResult solve(const JointDeal& deal, const GameConfig& cfg, double epsilon = 1e-4,
                               long max_iterations = 100000) {
  if (epsilon <= 0.0) throw ConfigMismatch("epsilon must be positive");
  detail::check_game_dims(deal, cfg);
  deal.validate();
  const int d = cfg.deck_size;
  const int nb = cfg.bet_steps;
  const std::size_t n1 = static_cast<std::size_t>(d) * nb;

  std::vector<double> swing(nb);
  for (int b = 0; b < nb; ++b) swing[b] = cfg.bet_amount(b) + cfg.ante;
  const std::vector<double> marg1 = deal.p1_marginal();
  const std::vector<double> marg2 = deal.p2_marginal();

  std::vector<double> q1(n1, 0.0);                 // clamped cumulative regrets, P1
  std::vector<double> q2_call(n1, 0.0), q2_fold(n1, 0.0);
  std::vector<double> sig(n1, 1.0 / nb);           // current strategies
  std::vector<double> tau(n1, 0.5);
  std::vector<double> avg1(n1, 0.0), avg2(n1, 0.0);
  double weight_sum = 0.0;
  std::vector<double> v1(nb);

  const long check_every = 50;
  double best_conv = std::numeric_limits<double>::infinity();
  EquilibriumResult best;

  auto averaged = [&]() {
    EquilibriumResult r;
    r.s1 = StrategyP1(d, nb);
    r.s2 = StrategyP2(d, nb);
    for (int h = 0; h < d; ++h) {
      if (marg1[h] == 0.0) {
        r.s1.at(h, 0) = 1.0;  // canonical row for unreachable hands
        continue;
      }
      for (int b = 0; b < nb; ++b) r.s1.at(h, b) = avg1[h * nb + b] / weight_sum;
    }
    for (int c = 0; c < d; ++c) {
      for (int b = 0; b < nb; ++b)
        r.s2.at(c, b) = marg2[c] == 0.0 ? 1.0 : avg2[c * nb + b] / weight_sum;
    }
    return r;
  };

  for (long t = 1; t <= max_iterations; ++t) {
    // Player 1 regrets against the current tau.
    for (int h = 0; h < d; ++h) {
      if (marg1[h] == 0.0) continue;
      double u = 0.0;
      for (int b = 0; b < nb; ++b) {
        double v = 0.0;
        for (int c = 0; c < d; ++c) {
          if (c == h) continue;
          const double p = deal.at(h, c);
          if (p == 0.0) continue;
          const double call = tau[c * nb + b];
          v += p * (call * (h > c ? swing[b] : -swing[b]) + (1.0 - call) * cfg.ante);
        }
        v1[b] = v;
        u += sig[h * nb + b] * v;
      }
      double qsum = 0.0;
      for (int b = 0; b < nb; ++b) {
        double& q = q1[h * nb + b];
        q = std::max(0.0, q + v1[b] - u);
        qsum += q;
      }
      for (int b = 0; b < nb; ++b) {
        const double s = qsum > 0.0 ? q1[h * nb + b] / qsum : 1.0 / nb;
        sig[h * nb + b] = s;
        avg1[h * nb + b] += static_cast<double>(t) * s;
      }
    }

    // Player 2 regrets against the updated sig.
    for (int c = 0; c < d; ++c) {
      if (marg2[c] == 0.0) continue;
      for (int b = 0; b < nb; ++b) {
        double reach = 0.0;
        double v_call = 0.0;
        for (int i = 0; i < d; ++i) {
          if (i == c) continue;
          const double w = deal.at(i, c) * sig[i * nb + b];
          reach += w;
          v_call += w * (c > i ? swing[b] : -swing[b]);
        }
        const double v_fold = -cfg.ante * reach;
        const std::size_t cb = static_cast<std::size_t>(c) * nb + b;
        const double u = tau[cb] * v_call + (1.0 - tau[cb]) * v_fold;
        double& qc = q2_call[cb];
        double& qf = q2_fold[cb];
        qc = std::max(0.0, qc + v_call - u);
        qf = std::max(0.0, qf + v_fold - u);
        const double qsum = qc + qf;
        tau[cb] = qsum > 0.0 ? qc / qsum : 0.5;
        avg2[cb] += static_cast<double>(t) * tau[cb];
      }
    }

    weight_sum += static_cast<double>(t);

    if (t % check_every == 0 || t == max_iterations) {
      EquilibriumResult r = averaged();
      r.iterations = t;
      r.value = expected_value(deal, r.s1, r.s2, cfg);
      r.nash_conv = nash_conv(deal, r.s1, r.s2, cfg);
      if (r.nash_conv < best_conv) {
        best_conv = r.nash_conv;
        best = r;
      }
      if (r.nash_conv <= epsilon) return r;
    }
  }
  throw ConvergenceFailure("solver did not reach epsilon=" + std::to_string(epsilon) + " within " +
                               std::to_string(max_iterations) + " iterations (best " +
                               std::to_string(best_conv) + ")",
                           std::move(best));
}

}  // namespace onestreet
