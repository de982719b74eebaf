#pragma once

#include <cmath>
#include <vector>

#include "onestreet/errors.hpp"
#include "onestreet/game.hpp"
#include "onestreet/rng.hpp"

namespace onestreet {

// Normalized negative logs of uniforms in (0,1); the pure transform behind
// sample_simplex.
inline std::vector<double> simplex_from_uniforms(std::vector<double> u) {
  if (u.empty()) throw DimensionError("simplex dimension must be >= 1");
  double s = 0.0;
  for (double& v : u) {
    if (v <= 0.0 || v >= 1.0) throw InvalidDistribution("uniform draw outside (0,1)");
    v = -std::log(v);
    s += v;
  }
  for (double& v : u) v /= s;
  return u;
}

// Uniform draw from the n-dimensional probability simplex (flat Dirichlet).
// Zero uniforms are resampled by the generator.
inline std::vector<double> sample_simplex(int n, Rng& rng) {
  if (n < 1) throw DimensionError("simplex dimension must be >= 1");
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = rng.next_open();
  return simplex_from_uniforms(std::move(u));
}

inline void validate_pdf(const std::vector<double>& pdf, double tolerance = kProbTolerance) {
  double sum = 0.0;
  for (const double v : pdf) {
    if (v < -tolerance) throw InvalidDistribution("pdf entry is negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tolerance) throw InvalidDistribution("pdf does not sum to 1");
}

// Joint deal from two independent per-player distributions: products kept
// only off the diagonal, then renormalized.
inline JointDeal make_joint(const std::vector<double>& x1, const std::vector<double>& x2) {
  if (x1.size() != x2.size() || x1.empty())
    throw DimensionError("per-player distributions must have equal nonzero length");
  validate_pdf(x1);
  validate_pdf(x2);
  const int n = static_cast<int>(x1.size());
  JointDeal deal(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = x1[i] * x2[j];
      deal.at(i, j) = v;
      s += v;
    }
  }
  if (s <= 0.0) throw DegenerateDeal("all probability mass falls on the diagonal");
  for (double& v : deal.p) v /= s;
  return deal;
}

// Per-player marginal pdfs and their running sums, the learning inputs.
struct MarginalFeatures {
  std::vector<double> cdf1, cdf2;
  std::vector<double> pdf1, pdf2;

  void validate() const {
    validate_pdf(pdf1);
    validate_pdf(pdf2);
    for (const auto* cdf : {&cdf1, &cdf2}) {
      if (cdf->empty()) throw DimensionError("empty cdf");
      for (std::size_t k = 1; k < cdf->size(); ++k)
        if ((*cdf)[k] < (*cdf)[k - 1] - kProbTolerance)
          throw InvalidDistribution("cdf is decreasing");
      if (std::abs(cdf->back() - 1.0) > kProbTolerance)
        throw InvalidDistribution("cdf does not end at 1");
    }
  }
};

inline std::vector<double> pdf_to_cdf(const std::vector<double>& pdf) {
  if (pdf.empty()) throw DimensionError("empty pdf");
  std::vector<double> cdf(pdf.size());
  double run = 0.0;
  for (std::size_t k = 0; k < pdf.size(); ++k) {
    if (pdf[k] < -kProbTolerance) throw InvalidDistribution("pdf entry is negative");
    run += pdf[k];
    cdf[k] = run;
  }
  return cdf;
}

inline std::vector<double> cdf_to_pdf(const std::vector<double>& cdf) {
  if (cdf.empty()) throw DimensionError("empty cdf");
  std::vector<double> pdf(cdf.size());
  pdf[0] = cdf[0];
  if (cdf[0] < -kProbTolerance) throw InvalidDistribution("cdf starts below 0");
  for (std::size_t k = 1; k < cdf.size(); ++k) {
    pdf[k] = cdf[k] - cdf[k - 1];
    if (pdf[k] < -kProbTolerance) throw InvalidDistribution("cdf is decreasing");
  }
  return pdf;
}

inline MarginalFeatures marginals(const JointDeal& deal) {
  MarginalFeatures f;
  f.pdf1 = deal.p1_marginal();
  f.pdf2 = deal.p2_marginal();
  f.cdf1 = pdf_to_cdf(f.pdf1);
  f.cdf2 = pdf_to_cdf(f.pdf2);
  return f;
}

}  // namespace onestreet
