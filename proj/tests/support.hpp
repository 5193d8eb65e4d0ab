// Shared test helpers: an independent optimality checker for projections and
// small closed-form oracles computed without the solver under test.

#ifndef DOXA_TESTS_SUPPORT_HPP
#define DOXA_TESTS_SUPPORT_HPP

#include <cmath>
#include <string>
#include <vector>

#include "doxa/solver.hpp"

namespace doxa_tests {

struct KktIssues {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  std::string text() const {
    std::string s;
    for (const auto& p : problems) s += p + "; ";
    return s;
  }
};

/// Re-derives every optimality condition from the returned point and
/// multipliers, independently of the solver's own bookkeeping.
inline KktIssues kkt_verify(const doxa::FiniteDistribution& prior,
                            const doxa::LinearConstraintSet& rows, const doxa::Projection& proj,
                            double primal_tol = 1e-9, double kkt_tol = 1e-8) {
  KktIssues out;
  const auto& x = proj.distribution;
  const auto& lambda = proj.certificate.multipliers;
  if (x.size() != rows.dimension) {
    out.problems.push_back("dimension mismatch");
    return out;
  }
  double sum = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < 0) out.problems.push_back("negative probability");
    sum += x[i];
  }
  if (std::abs(sum - 1.0) > 1e-11) out.problems.push_back("sum " + std::to_string(sum));

  for (std::size_t r = 0; r < rows.rows.size(); ++r) {
    const auto& row = rows.rows[r];
    double e = 0.0;
    for (int i = 0; i < x.size(); ++i) e += row.coeffs[static_cast<std::size_t>(i)] * x[i];
    const double resid = e - row.bound;
    if (row.rel == doxa::LinearRow::Rel::Eq) {
      if (std::abs(resid) > primal_tol)
        out.problems.push_back("eq row " + std::to_string(r) + " residual " +
                               std::to_string(resid));
    } else {
      if (resid > primal_tol)
        out.problems.push_back("le row " + std::to_string(r) + " violated by " +
                               std::to_string(resid));
      if (lambda[r] < -1e-12)
        out.problems.push_back("negative multiplier on le row " + std::to_string(r));
      if (lambda[r] * std::abs(resid) > kkt_tol)
        out.problems.push_back("complementarity on row " + std::to_string(r));
    }
  }

  // Stationarity: ln(x/mu) + lambda.a constant wherever x > 0.
  double lo = 0, hi = 0;
  bool first = true;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] <= 0) continue;
    if (prior[i] <= 0) {
      out.problems.push_back("mass on a zero-prior coordinate");
      continue;
    }
    double v = std::log(x[i] / prior[i]);
    for (std::size_t r = 0; r < rows.rows.size(); ++r)
      v += lambda[r] * rows.rows[r].coeffs[static_cast<std::size_t>(i)];
    if (first) {
      lo = hi = v;
      first = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!first && hi - lo > kkt_tol)
    out.problems.push_back("stationarity spread " + std::to_string(hi - lo));
  return out;
}

inline double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0) h -= p * std::log(p);
  if (p < 1) h -= (1 - p) * std::log(1 - p);
  return h;
}

/// Stationary point of H(r) + r H(p1) + (1-r) H(p0) by bisection on the
/// derivative; the closed-form check value for the two-constraint bird base.
inline double bisect_mixture_weight(double p1, double p0) {
  const double delta = binary_entropy(p1) - binary_entropy(p0);
  double lo = 1e-12, hi = 1.0 - 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double deriv = std::log((1.0 - mid) / mid) + delta;
    if (deriv > 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Entropy-maximizing success probability under p <= cap, by grid search
/// plus local refinement (independent of the projection solver).
inline double grid_max_entropy_bernoulli(double cap) {
  double best = 0.0, best_h = -1.0;
  for (int i = 0; i <= 100000; ++i) {
    const double p = cap * i / 100000.0;
    const double h = binary_entropy(p);
    if (h > best_h) {
      best_h = h;
      best = p;
    }
  }
  return best;
}

}  // namespace doxa_tests

#endif  // DOXA_TESTS_SUPPORT_HPP
