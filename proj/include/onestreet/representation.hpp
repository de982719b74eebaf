#pragma once

#include <string>

#include "onestreet/errors.hpp"

namespace onestreet {

// The ten ways a solved game turns into learning examples. Odd ids use cdf
// distribution features, even ids pdf. r1/r2 emit one example per game with
// the full strategy vector as output; r3..r6 emit one example per card with
// that card's bet distribution; r7..r10 emit one example per card with a
// single bet size sampled from that distribution. The 21st feature is the
// card number for r3/r4/r7/r8 and the card's own-marginal cdf value for
// r5/r6/r9/r10.
enum class RepresentationId : int {
  kR1 = 1, kR2, kR3, kR4, kR5, kR6, kR7, kR8, kR9, kR10,
};

enum class Feature21 { kNone, kCardNumber, kCdfValue };

enum class OutputKind { kFullStrategy, kHandStrategy, kScalarBet };

constexpr bool uses_pdf_features(RepresentationId rep) {
  return static_cast<int>(rep) % 2 == 0;
}

constexpr Feature21 feature21_kind(RepresentationId rep) {
  const int r = static_cast<int>(rep);
  if (r <= 2) return Feature21::kNone;
  return (r == 3 || r == 4 || r == 7 || r == 8) ? Feature21::kCardNumber : Feature21::kCdfValue;
}

constexpr OutputKind output_kind(RepresentationId rep) {
  const int r = static_cast<int>(rep);
  if (r <= 2) return OutputKind::kFullStrategy;
  return r <= 6 ? OutputKind::kHandStrategy : OutputKind::kScalarBet;
}

constexpr int feature_count(RepresentationId rep, int deck_size) {
  return 2 * deck_size + (feature21_kind(rep) == Feature21::kNone ? 0 : 1);
}

constexpr int examples_per_record(RepresentationId rep, int deck_size) {
  return feature21_kind(rep) == Feature21::kNone ? 1 : deck_size;
}

inline std::string to_string(RepresentationId rep) {
  return "r" + std::to_string(static_cast<int>(rep));
}

inline RepresentationId parse_representation(const std::string& name) {
  if (name.size() >= 2 && (name[0] == 'r' || name[0] == 'R')) {
    const int r = std::atoi(name.c_str() + 1);
    if (r >= 1 && r <= 10 && name == (name[0] + std::to_string(r)))
      return static_cast<RepresentationId>(r);
  }
  throw RepresentationError("unknown representation '" + name + "' (expected r1..r10)");
}

// One-line definition, printed by experiment reports so that result tables
// are unambiguous about what each id means.
inline std::string describe(RepresentationId rep) {
  std::string s = to_string(rep) + ": " + (uses_pdf_features(rep) ? "pdf" : "cdf") +
                  " distribution features";
  switch (feature21_kind(rep)) {
    case Feature21::kNone: break;
    case Feature21::kCardNumber: s += " + card number"; break;
    case Feature21::kCdfValue: s += " + own-card cdf value"; break;
  }
  switch (output_kind(rep)) {
    case OutputKind::kFullStrategy: s += "; output = full strategy vector"; break;
    case OutputKind::kHandStrategy: s += "; output = bet distribution of the card"; break;
    case OutputKind::kScalarBet: s += "; output = sampled bet size"; break;
  }
  return s;
}

}  // namespace onestreet
