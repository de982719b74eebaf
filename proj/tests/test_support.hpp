#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here deliberately avoids the library's own computation paths where it is
// used to cross-check them.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "onestreet/deal_gen.hpp"
#include "onestreet/game.hpp"
#include "onestreet/rng.hpp"

namespace test_support {

inline std::vector<double> point_mass(int n, int index) {
  std::vector<double> v(n, 0.0);
  v[index] = 1.0;
  return v;
}

inline std::vector<double> uniform_pdf(int n) {
  return std::vector<double>(n, 1.0 / n);
}

// P1 dealt 1 or 10 with probability 0.5, P2 always dealt 5.
inline onestreet::JointDeal p1_polar_deal() {
  std::vector<double> x1(10, 0.0), x2(10, 0.0);
  x1[0] = 0.5;
  x1[9] = 0.5;
  x2[4] = 1.0;
  return onestreet::make_joint(x1, x2);
}

// P1 always dealt 5, P2 dealt 1 or 10 with probability 0.5.
inline onestreet::JointDeal p2_polar_deal() {
  std::vector<double> x1(10, 0.0), x2(10, 0.0);
  x1[4] = 1.0;
  x2[0] = 0.5;
  x2[9] = 0.5;
  return onestreet::make_joint(x1, x2);
}

// The published equilibrium for the uniform deal, transcribed: bet indices
// are multiples of 0.1 dollars.
inline onestreet::StrategyP1 paper_uniform_strategy() {
  onestreet::StrategyP1 s(10, 31);
  s.at(0, 1) = 0.091;
  s.at(0, 6) = 0.266;
  s.at(0, 18) = 0.643;
  s.at(1, 0) = 0.660;
  s.at(1, 3) = 0.231;
  s.at(1, 6) = 0.109;
  for (int h = 2; h <= 5; ++h) s.at(h, 0) = 1.0;
  s.at(6, 1) = 1.0;
  s.at(7, 3) = 1.0;
  s.at(8, 6) = 1.0;
  s.at(9, 18) = 1.0;
  return s;
}

// The paper's P1-polar equilibrium profile (card 1 mixes check/all-in
// 0.25/0.75, card 10 always all-in) together with a P2 strategy that keeps
// both P1 cards indifferent: call probability min(1, 0.75/amount) for
// positive bets, always call a check.
inline std::pair<onestreet::StrategyP1, onestreet::StrategyP2> paper_p1_polar_profile(
    const onestreet::GameConfig& cfg) {
  onestreet::StrategyP1 s1(cfg.deck_size, cfg.bet_steps);
  for (int h = 0; h < cfg.deck_size; ++h) s1.at(h, 0) = 1.0;
  s1.at(0, 0) = 0.25;
  s1.at(0, cfg.all_in_index()) = 0.75;
  s1.at(9, 0) = 0.0;
  s1.at(9, cfg.all_in_index()) = 1.0;
  onestreet::StrategyP2 s2(cfg.deck_size, cfg.bet_steps);
  for (int c = 0; c < cfg.deck_size; ++c) {
    s2.at(c, 0) = 1.0;
    for (int b = 1; b < cfg.bet_steps; ++b)
      s2.at(c, b) = std::min(1.0, 0.75 / cfg.bet_amount(b));
  }
  return {std::move(s1), std::move(s2)};
}

// --- Oracle 1: greedy transport plan ------------------------------------
//
// Computes the optimal-transport cost between two 1-D histograms by
// building an explicit plan with the northwest-corner (greedy mover) rule,
// which is optimal for the |i-j| ground cost. Independent of the library's
// running-sum computation. Returns the cost normalized by m-1.
inline double transport_emd_oracle(std::vector<double> p, std::vector<double> q) {
  if (p.size() != q.size() || p.size() < 2) throw std::invalid_argument("bad histograms");
  const std::size_t m = p.size();
  std::size_t i = 0, j = 0;
  double cost = 0.0;
  double moved = 0.0;
  while (i < m && j < m) {
    const double f = std::min(p[i], q[j]);
    if (f > 0.0) {
      cost += f * std::abs(static_cast<double>(i) - static_cast<double>(j));
      moved += f;
      p[i] -= f;
      q[j] -= f;
    }
    if (p[i] <= 1e-15) {
      ++i;
    } else if (q[j] <= 1e-15) {
      ++j;
    }
  }
  assert(moved > 0.99);  // both inputs are unit-mass histograms
  return cost / static_cast<double>(m - 1);
}

// --- Oracle 2: matrix-game value by linear programming -------------------
//
// Exact value of the zero-sum matrix game max_x min_y x^T A y via the
// classic reduction to a linear program, solved with a dense primal simplex
// (Bland's rule). Suitable for the small matrices of the shrunken-game
// tests.
inline double matrix_game_value(const std::vector<std::vector<double>>& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = a[0].size();
  double lo = a[0][0];
  for (const auto& r : a)
    for (double v : r) lo = std::min(lo, v);
  const double shift = 1.0 - lo;  // make every entry >= 1

  // maximize sum(q) subject to (A + shift) q <= 1, q >= 0
  const std::size_t n = cols + rows;  // variables + slacks
  std::vector<std::vector<double>> t(rows + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = a[i][j] + shift;
    t[i][cols + i] = 1.0;
    t[i][n] = 1.0;
  }
  for (std::size_t j = 0; j < cols; ++j) t[rows][j] = 1.0;

  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = cols + i;

  const double tol = 1e-11;
  for (int iter = 0; iter < 100000; ++iter) {
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (t[rows][j] > tol) {  // Bland: first improving column
        enter = j;
        break;
      }
    }
    if (enter == n) break;
    std::size_t leave = rows;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] > tol) {
        const double ratio = t[i][n] / t[i][enter];
        if (leave == rows || ratio < best_ratio - tol ||
            (ratio < best_ratio + tol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave == rows) throw std::runtime_error("unbounded matrix-game LP");
    const double piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == leave) continue;
      const double f = t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  const double objective = -t[rows][n];
  if (objective <= 0.0) throw std::runtime_error("matrix-game LP failed");

  // Recover the column player's strategy and sanity-check strong duality:
  // the best row payoff against it must equal 1/objective.
  std::vector<double> q(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] < cols) q[basis[i]] = t[i][n];
  double best_row = -1e300;
  for (std::size_t i = 0; i < rows; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < cols; ++j) v += (a[i][j] + shift) * q[j] / objective;
    best_row = std::max(best_row, v);
  }
  const double value_shifted = 1.0 / objective;
  if (std::abs(best_row - value_shifted) > 1e-7)
    throw std::runtime_error("matrix-game LP inconsistent");
  return value_shifted - shift;
}

// Payoff matrix of the one-street game over pure strategies: rows map each
// P1 hand to a bet index (bet_steps^deck_size rows), columns are call/fold
// bitmasks over (card, bet) pairs.
inline std::vector<std::vector<double>> small_game_matrix(const onestreet::JointDeal& deal,
                                                          const onestreet::GameConfig& cfg) {
  const int d = cfg.deck_size;
  const int nb = cfg.bet_steps;
  std::size_t rows = 1;
  for (int h = 0; h < d; ++h) rows *= static_cast<std::size_t>(nb);
  const std::size_t cols = std::size_t{1} << (d * nb);
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
  std::vector<int> bet_of(d);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t rr = r;
    for (int h = 0; h < d; ++h) {
      bet_of[h] = static_cast<int>(rr % nb);
      rr /= nb;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double ev = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (i == j || deal.at(i, j) == 0.0) continue;
          const int b = bet_of[i];
          const bool call = (c >> (j * nb + b)) & 1;
          const double pay = call ? (i > j ? 1.0 : -1.0) * (cfg.bet_amount(b) + cfg.ante)
                                  : cfg.ante;
          ev += deal.at(i, j) * pay;
        }
      }
      a[r][c] = ev;
    }
  }
  return a;
}

// --- Oracle 3: Monte-Carlo play ------------------------------------------
//
// Samples full hands of play and returns (mean, standard error) of P1's
// net. Used to cross-check the exact expectation.
inline std::pair<double, double> simulate_play(const onestreet::JointDeal& deal,
                                               const onestreet::StrategyP1& s1,
                                               const onestreet::StrategyP2& s2,
                                               const onestreet::GameConfig& cfg, long samples,
                                               std::uint64_t seed) {
  onestreet::Rng rng(seed);
  auto sample_index = [&](const double* w, int n) {
    const double u = rng.next_double();
    double acc = 0.0;
    int last_positive = 0;
    for (int k = 0; k < n; ++k) {
      if (w[k] <= 0.0) continue;
      last_positive = k;
      acc += w[k];
      if (u < acc) return k;
    }
    return last_positive;
  };
  double sum = 0.0, sum_sq = 0.0;
  const int d = cfg.deck_size;
  for (long s = 0; s < samples; ++s) {
    const int cell = sample_index(deal.p.data(), d * d);
    const int i = cell / d;
    const int j = cell % d;
    const int b = sample_index(&s1.sigma[static_cast<std::size_t>(i) * cfg.bet_steps], cfg.bet_steps);
    const bool call = rng.next_double() < s2.at(j, b);
    const double pay = onestreet::payoff(i + 1, j + 1, b,
                                         call ? onestreet::P2Action::kCall : onestreet::P2Action::kFold,
                                         cfg);
    sum += pay;
    sum_sq += pay * pay;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = std::max(0.0, sum_sq / static_cast<double>(samples) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace test_support
