#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "onestreet/dataset.hpp"
#include "onestreet/errors.hpp"
#include "onestreet/knn.hpp"
#include "onestreet/representation.hpp"
#include "onestreet/tree.hpp"

namespace onestreet {

struct RuleCondition {
  int feature = 0;
  bool is_leq = true;  // x[feature] <= threshold, else >
  double threshold = 0.0;
};

// One root-to-leaf path rendered as an ordered condition list.
struct StrategyRule {
  std::vector<RuleCondition> conditions;
  std::vector<double> prediction;
  long support = 0;
  double error = 0.0;
};

inline std::string feature_description(int feature, RepresentationId rep, int deck_size) {
  const bool pdf = uses_pdf_features(rep);
  if (feature < deck_size) {
    return pdf ? "probability you hold card " + std::to_string(feature + 1)
               : "probability you hold <= card " + std::to_string(feature + 1);
  }
  if (feature < 2 * deck_size) {
    const int card = feature - deck_size + 1;
    return pdf ? "probability opponent holds card " + std::to_string(card)
               : "probability opponent holds <= card " + std::to_string(card);
  }
  return feature21_kind(rep) == Feature21::kCardNumber ? "your card"
                                                       : "your hand's strength percentile";
}

// One rule per leaf, depth-first with the true branch first, so the rule
// order mirrors the tree's own serialization.
inline std::vector<StrategyRule> extract_rules(const DecisionTree& t) {
  if (t.nodes.empty()) throw EmptyModel("tree has no nodes");
  std::vector<StrategyRule> rules;
  std::vector<RuleCondition> path;
  struct Rec {
    const DecisionTree& t;
    std::vector<StrategyRule>& rules;
    std::vector<RuleCondition>& path;
    void walk(int i) {
      const auto& n = t.nodes[static_cast<std::size_t>(i)];
      if (n.feature < 0) {
        rules.push_back({path, n.prediction, n.sample_count, n.training_error});
        return;
      }
      path.push_back({n.feature, true, n.threshold});
      walk(n.left);
      path.back().is_leq = false;
      walk(n.right);
      path.pop_back();
    }
  } rec{t, rules, path};
  rec.walk(0);
  return rules;
}

// First-matching-rule evaluation; on the full rule list of a tree this
// reproduces tree_predict exactly.
inline const std::vector<double>& rules_predict(const std::vector<StrategyRule>& rules,
                                                const std::vector<double>& x) {
  for (const auto& r : rules) {
    bool match = true;
    for (const auto& c : r.conditions) {
      const double v = x[static_cast<std::size_t>(c.feature)];
      if (c.is_leq ? !(v <= c.threshold) : !(v > c.threshold)) {
        match = false;
        break;
      }
    }
    if (match) return r.prediction;
  }
  throw Error("no rule matched (rule list does not partition the feature space)");
}

inline double expected_bet(const double* block, const GameConfig& cfg) {
  double bet = 0.0;
  for (int b = 0; b < cfg.bet_steps; ++b) bet += block[b] * cfg.bet_amount(b);
  return bet;
}

namespace detail {

inline std::string action_text(const std::vector<double>& prediction, const GameConfig& cfg) {
  char buf[64];
  if (prediction.size() == 1) {
    std::snprintf(buf, sizeof(buf), "bet %.4f", prediction[0]);
    return buf;
  }
  std::ostringstream out;
  if (prediction.size() == static_cast<std::size_t>(cfg.bet_steps)) {
    std::snprintf(buf, sizeof(buf), "bet %.4f on average (", expected_bet(prediction.data(), cfg));
    out << buf;
    int printed = 0;
    for (int b = 0; b < cfg.bet_steps; ++b) {
      if (prediction[static_cast<std::size_t>(b)] < 0.05) continue;
      std::snprintf(buf, sizeof(buf), "%s%.1f pr %.3f", printed ? ", " : "", cfg.bet_amount(b),
                    prediction[static_cast<std::size_t>(b)]);
      out << buf;
      ++printed;
    }
    out << ")";
    return out.str();
  }
  out << "full strategy (expected bet by card:";
  for (int h = 0; h < cfg.deck_size; ++h) {
    std::snprintf(buf, sizeof(buf), " %.2f",
                  expected_bet(&prediction[static_cast<std::size_t>(h) * cfg.bet_steps], cfg));
    out << buf;
  }
  out << ")";
  return out.str();
}

}  // namespace detail

// Plain-text rendering, thresholds to four decimals.
inline std::string render_rules(const std::vector<StrategyRule>& rules, RepresentationId rep,
                                const GameConfig& cfg) {
  std::ostringstream out;
  char buf[64];
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    out << "rule " << i + 1 << ": ";
    if (r.conditions.empty()) {
      out << "always";
    } else {
      out << "if ";
      for (std::size_t c = 0; c < r.conditions.size(); ++c) {
        const auto& cond = r.conditions[c];
        std::snprintf(buf, sizeof(buf), " %s %.4f", cond.is_leq ? "<=" : ">", cond.threshold);
        out << (c ? " and " : "") << feature_description(cond.feature, rep, cfg.deck_size) << buf;
      }
    }
    out << " then " << detail::action_text(r.prediction, cfg);
    std::snprintf(buf, sizeof(buf), "  [support %ld, error %.4f]\n", r.support, r.error);
    out << buf;
  }
  return out.str();
}

// --- fundamental-rule measurements ----------------------------------------

// Thresholds for the two measured rules. The small-bet cap is two bet
// increments (brackets the near-check leaves seen in fitted trees); the
// all-in floor is 90% of the stack. "Strong" opponent hands beat at least
// `strong_cut` of player 1's distribution.
struct RuleCheckConfig {
  double low = 0.2;
  double high = 0.8;
  double small_bet_increments = 2.0;
  double beats_min = 0.95;
  double strong_cut = 0.80;
  double strong_mass_min = 0.10;
  double all_in_stack_fraction = 0.9;
};

// A model probed per (game, card): returns the predicted bet in dollars.
using BetPredictor = std::function<double(const GameRecord&, int card)>;

// The solved game's own equilibrium bet (expected bet of the card's block).
inline BetPredictor equilibrium_bettor(const GameConfig& cfg) {
  return [cfg](const GameRecord& r, int card) {
    return expected_bet(&r.strategy.sigma[static_cast<std::size_t>(card - 1) * cfg.bet_steps], cfg);
  };
}

inline double predicted_bet_from_output(const std::vector<double>& y, RepresentationId rep,
                                        int card, const GameConfig& cfg) {
  switch (output_kind(rep)) {
    case OutputKind::kScalarBet:
      return y[0];
    case OutputKind::kHandStrategy:
      return expected_bet(y.data(), cfg);
    case OutputKind::kFullStrategy:
      return expected_bet(&y[static_cast<std::size_t>(card - 1) * cfg.bet_steps], cfg);
  }
  return 0.0;
}

inline BetPredictor tree_bettor(const DecisionTree& t, const GameConfig& cfg) {
  return [&t, cfg](const GameRecord& r, int card) {
    const auto x = make_features(r, t.rep, card, cfg);
    return predicted_bet_from_output(tree_predict(t, x), t.rep, card, cfg);
  };
}

inline BetPredictor knn_bettor(const KnnModel& m, const GameConfig& cfg) {
  return [&m, cfg](const GameRecord& r, int card) {
    const auto x = make_features(r, m.rep, card, cfg);
    return predicted_bet_from_output(knn_predict(m, x), m.rep, card, cfg);
  };
}

namespace detail {

// Fraction of the opponent's conditional hand distribution that `card`
// beats: sum of Pr(P2 = j | P1 = card) over j < card.
inline double beat_fraction(const GameRecord& r, int card, double& p1_marg) {
  const int d = r.deal.deck_size;
  double total = 0.0, below = 0.0;
  for (int j = 0; j < d; ++j) {
    const double p = r.deal.at(card - 1, j);
    total += p;
    if (j < card - 1) below += p;
  }
  p1_marg = total;
  return total > 0.0 ? below / total : 0.0;
}

}  // namespace detail

struct ComplianceReport {
  long probes = 0;
  long compliant = 0;
  double compliance = 0.0;
};

// Measures how often a model checks (or min-bets) when its hand beats a
// middling fraction of the opponent's range. Pure measurement, no verdict.
inline ComplianceReport check_80_20(const BetPredictor& bettor,
                                    const std::vector<GameRecord>& probe_games,
                                    const GameConfig& cfg, const RuleCheckConfig& rc = {}) {
  ComplianceReport rep;
  const double small_bet = rc.small_bet_increments * cfg.bet_increment;
  for (const auto& r : probe_games) {
    for (int card = 1; card <= cfg.deck_size; ++card) {
      double marg = 0.0;
      const double w = detail::beat_fraction(r, card, marg);
      if (marg <= 0.0 || w < rc.low || w > rc.high) continue;
      ++rep.probes;
      if (bettor(r, card) <= small_bet + 1e-12) ++rep.compliant;
    }
  }
  if (rep.probes == 0) throw NoProbes("no (game, card) probe qualified for the 80-20 rule");
  rep.compliance = static_cast<double>(rep.compliant) / static_cast<double>(rep.probes);
  return rep;
}

// The all-in measurement is reported under both readings of the opponent
// distribution: conditional on player 1's card, and the plain marginal.
struct AllInReport {
  ComplianceReport conditional;
  ComplianceReport unconditional;
};

inline AllInReport check_all_in(const BetPredictor& bettor,
                                const std::vector<GameRecord>& probe_games, const GameConfig& cfg,
                                const RuleCheckConfig& rc = {}) {
  AllInReport rep;
  const double all_in = rc.all_in_stack_fraction * cfg.stack;
  const int d = cfg.deck_size;
  for (const auto& r : probe_games) {
    // Unconditional opponent-hand strengths: what each P2 card beats of
    // P1's marginal.
    std::vector<double> p2_strength_u(static_cast<std::size_t>(d), 0.0);
    {
      double below = 0.0;
      for (int j = 0; j < d; ++j) {
        p2_strength_u[static_cast<std::size_t>(j)] = below;
        below += r.features.pdf1[static_cast<std::size_t>(j)];
      }
    }
    for (int card = 1; card <= cfg.deck_size; ++card) {
      double marg = 0.0;
      const double w_cond = detail::beat_fraction(r, card, marg);
      if (marg <= 0.0) continue;
      const double bet = bettor(r, card);

      // Conditional reading.
      {
        double strong_mass = 0.0;
        for (int j = 0; j < d; ++j) {
          const double q = r.deal.at(card - 1, j) / marg;
          if (q <= 0.0) continue;
          double col = 0.0, col_below = 0.0;
          for (int i = 0; i < d; ++i) {
            col += r.deal.at(i, j);
            if (i < j) col_below += r.deal.at(i, j);
          }
          const double strength = col > 0.0 ? col_below / col : 0.0;
          if (strength >= rc.strong_cut) strong_mass += q;
        }
        if (w_cond >= rc.beats_min && strong_mass >= rc.strong_mass_min) {
          ++rep.conditional.probes;
          if (bet >= all_in - 1e-12) ++rep.conditional.compliant;
        }
      }

      // Unconditional reading.
      {
        double w_u = 0.0, strong_mass = 0.0;
        for (int j = 0; j < d; ++j) {
          const double q = r.features.pdf2[static_cast<std::size_t>(j)];
          if (j < card - 1) w_u += q;
          if (p2_strength_u[static_cast<std::size_t>(j)] >= rc.strong_cut) strong_mass += q;
        }
        if (w_u >= rc.beats_min && strong_mass >= rc.strong_mass_min) {
          ++rep.unconditional.probes;
          if (bet >= all_in - 1e-12) ++rep.unconditional.compliant;
        }
      }
    }
  }
  if (rep.conditional.probes == 0 && rep.unconditional.probes == 0)
    throw NoProbes("no (game, card) probe qualified for the all-in rule");
  if (rep.conditional.probes > 0)
    rep.conditional.compliance =
        static_cast<double>(rep.conditional.compliant) / static_cast<double>(rep.conditional.probes);
  if (rep.unconditional.probes > 0)
    rep.unconditional.compliance = static_cast<double>(rep.unconditional.compliant) /
                                   static_cast<double>(rep.unconditional.probes);
  return rep;
}

}  // namespace onestreet
