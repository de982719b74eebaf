#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "onestreet/deal_gen.hpp"
#include "onestreet/errors.hpp"
#include "onestreet/representation.hpp"

namespace onestreet {

// Normalized 1-D earth mover's distance between two pdfs of equal length:
// the running-sum cost divided by its maximum (point masses at the two
// ends, cost m-1). Result is in [0,1] and a metric on pdfs.
inline double emd_1d(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DimensionError("pdfs have different lengths");
  if (p.size() < 2) throw DimensionError("pdfs must have length >= 2");
  double delta = 0.0;
  double result = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    delta += p[j] - q[j];
    result += std::abs(delta);
  }
  return result / static_cast<double>(p.size() - 1);
}

namespace detail {

inline void validate_cdf_segment(const std::vector<double>& x, std::size_t start, std::size_t len) {
  if (x[start] < -1e-6) throw InvalidDistribution("cdf starts below 0");
  for (std::size_t k = 1; k < len; ++k)
    if (x[start + k] < x[start + k - 1] - 1e-6) throw InvalidDistribution("cdf is decreasing");
  if (std::abs(x[start + len - 1] - 1.0) > 1e-6)
    throw InvalidDistribution("cdf does not end at 1");
}

// Running-sum EMD of one segment of two equally shaped flat vectors,
// normalized by len-1. Entries are pdf values.
inline double segment_emd(const std::vector<double>& y, const std::vector<double>& yhat,
                          std::size_t start, std::size_t len) {
  double delta = 0.0;
  double result = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    delta += y[start + j] - yhat[start + j];
    result += std::abs(delta);
  }
  return result / static_cast<double>(len - 1);
}

}  // namespace detail

// Distance between two game inputs given as concatenated per-player cdf
// vectors (2 x deck_size values). Per-player normalized EMD after
// cdf-to-pdf conversion, averaged over the players.
inline double input_distance(const std::vector<double>& x, const std::vector<double>& xhat,
                             int deck_size = 10) {
  if (x.size() != xhat.size()) throw DimensionError("input vectors have different lengths");
  if (deck_size < 2 || x.size() % static_cast<std::size_t>(deck_size) != 0 || x.empty())
    throw DimensionError("input length is not a multiple of the deck size");
  const std::size_t d = static_cast<std::size_t>(deck_size);
  const std::size_t players = x.size() / d;
  double total = 0.0;
  for (std::size_t i = 0; i < players; ++i) {
    const std::size_t start = i * d;
    detail::validate_cdf_segment(x, start, d);
    detail::validate_cdf_segment(xhat, start, d);
    std::vector<double> p(d), q(d);
    p[0] = x[start];
    q[0] = xhat[start];
    for (std::size_t k = 1; k < d; ++k) {
      p[k] = x[start + k] - x[start + k - 1];
      q[k] = xhat[start + k] - xhat[start + k - 1];
    }
    total += detail::segment_emd(p, q, 0, d);
  }
  return total / static_cast<double>(players);
}

// Distance between two flattened player 1 strategies: per-hand normalized
// EMD over the bet-size blocks, averaged over hands.
inline double output_distance(const std::vector<double>& y, const std::vector<double>& yhat,
                              int deck_size = 10, int bet_steps = 31) {
  if (y.size() != yhat.size()) throw DimensionError("output vectors have different lengths");
  if (y.size() != static_cast<std::size_t>(deck_size) * bet_steps || bet_steps < 2)
    throw DimensionError("output length does not match deck_size x bet_steps");
  const std::size_t b = static_cast<std::size_t>(bet_steps);
  double total = 0.0;
  for (int h = 0; h < deck_size; ++h) {
    const std::size_t start = static_cast<std::size_t>(h) * b;
    double sy = 0.0, syh = 0.0;
    for (std::size_t j = 0; j < b; ++j) {
      sy += y[start + j];
      syh += yhat[start + j];
    }
    if (std::abs(sy - 1.0) > 1e-6 || std::abs(syh - 1.0) > 1e-6)
      throw InvalidStrategy("bet-size block does not sum to 1");
    total += detail::segment_emd(y, yhat, start, b);
  }
  return total / static_cast<double>(deck_size);
}

// Distance between two feature vectors of one representation. 20-feature
// representations reduce to input_distance (pdf features converted to cdf
// first). 21-feature representations mix in the normalized card term with
// weight 1 against `distribution_weight` for the distribution term.
inline double feature_distance(const std::vector<double>& f, const std::vector<double>& fhat,
                               RepresentationId rep, int deck_size = 10,
                               double distribution_weight = 2.0) {
  const std::size_t expect = static_cast<std::size_t>(feature_count(rep, deck_size));
  if (f.size() != expect || fhat.size() != expect)
    throw RepresentationError("feature vector does not conform to " + to_string(rep));
  const std::size_t d2 = static_cast<std::size_t>(2 * deck_size);
  std::vector<double> a(f.begin(), f.begin() + d2);
  std::vector<double> b(fhat.begin(), fhat.begin() + d2);
  if (uses_pdf_features(rep)) {
    for (std::size_t start : {std::size_t{0}, static_cast<std::size_t>(deck_size)}) {
      double ra = 0.0, rb = 0.0;
      for (std::size_t k = 0; k < static_cast<std::size_t>(deck_size); ++k) {
        ra += a[start + k];
        rb += b[start + k];
        a[start + k] = ra;
        b[start + k] = rb;
      }
    }
  }
  const double dist = input_distance(a, b, deck_size);
  if (feature21_kind(rep) == Feature21::kNone) return dist;
  double card_term = std::abs(f[d2] - fhat[d2]);
  if (feature21_kind(rep) == Feature21::kCardNumber) card_term /= deck_size - 1;
  return (distribution_weight * dist + card_term) / (distribution_weight + 1.0);
}

}  // namespace onestreet
