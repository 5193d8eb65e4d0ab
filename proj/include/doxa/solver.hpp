// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_SOLVER_HPP
#define DOXA_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doxa/distribution.hpp"
#include "doxa/linear.hpp"
#include "doxa/logsum.hpp"

namespace doxa {

enum class SolveStatus : std::uint8_t {
  Ok,
  Infeasible,            // no distribution satisfies the rows
  InfiniteCrossEntropy,  // feasible only with mass outside the prior support
  NonConverged,
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Ok:
      return "ok";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::InfiniteCrossEntropy:
      return "infinite-cross-entropy";
    case SolveStatus::NonConverged:
      return "non-converged";
  }
  return "?";
}

/// Everything needed to re-verify an optimum without rerunning the solver:
/// multipliers, residuals, and which coordinates were forced to zero.
struct KktCertificate {
  double constraint_residual = 0.0;     // max primal violation over rows
  double sum_residual = 0.0;            // |sum x - 1|
  double stationarity_residual = 0.0;   // max |ln(x/mu) + lambda.a - const| on support
  double complementarity_residual = 0.0;
  std::vector<double> multipliers;      // one per row, <=-rows nonnegative
  std::vector<std::uint8_t> forced_zero;
  int iterations = 0;
};

struct Projection {
  SolveStatus status = SolveStatus::NonConverged;
  FiniteDistribution distribution;
  KktCertificate certificate;
};

struct SolverOptions {
  double primal_tolerance = 1e-10;
  double complementarity_tolerance = 1e-11;
  int max_iterations = 100000;
};

namespace detail {

/// Phase-1 simplex feasibility test for {x >= 0, sum x = 1, rows}. Bland's
/// rule, dense tableau; deterministic. Only feasibility is asked of it, so
/// it stays deliberately simple.
class SimplexFeasibility {
 public:
  static bool feasible(const std::vector<const LinearRow*>& rows, const std::vector<int>& support,
                       int dimension) {
    (void)dimension;
    const int n = static_cast<int>(support.size());
    const int m = static_cast<int>(rows.size()) + 1;  // + the sum-to-one row
    // Columns: n structural, slacks for <= rows, artificials for all rows.
    int slack_count = 0;
    for (const auto* r : rows)
      if (r->rel == LinearRow::Rel::Le) ++slack_count;
    const int cols = n + slack_count + m;
    std::vector<std::vector<double>> t(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(cols) + 1, 0.0));
    std::vector<int> basis(static_cast<std::size_t>(m));

    int si = 0;
    for (int r = 0; r < m - 1; ++r) {
      const LinearRow& row = *rows[static_cast<std::size_t>(r)];
      double b = row.bound;
      for (int j = 0; j < n; ++j)
        t[r][static_cast<std::size_t>(j)] = row.coeffs[static_cast<std::size_t>(support[j])];
      if (row.rel == LinearRow::Rel::Le) {
        t[r][static_cast<std::size_t>(n + si)] = 1.0;
        ++si;
      }
      if (b < 0) {
        for (int j = 0; j <= cols; ++j) t[r][static_cast<std::size_t>(j)] *= -1.0;
        b = -b;
        // (sign of the slack flipped too; it becomes a surplus column)
      }
      t[r][static_cast<std::size_t>(cols)] = b;
    }
    for (int j = 0; j < n; ++j) t[m - 1][static_cast<std::size_t>(j)] = 1.0;
    t[m - 1][static_cast<std::size_t>(cols)] = 1.0;

    for (int r = 0; r < m; ++r) {
      t[r][static_cast<std::size_t>(n + slack_count + r)] = 1.0;
      basis[static_cast<std::size_t>(r)] = n + slack_count + r;
    }

    // Objective: minimize the artificial sum == maximize -(sum of artificial rows).
    std::vector<double> obj(static_cast<std::size_t>(cols) + 1, 0.0);
    for (int r = 0; r < m; ++r)
      for (int j = 0; j <= cols; ++j) obj[static_cast<std::size_t>(j)] += t[r][static_cast<std::size_t>(j)];
    for (int r = 0; r < m; ++r) obj[static_cast<std::size_t>(n + slack_count + r)] = 0.0;

    const double eps = 1e-11;
    const int max_pivots = 200 * (m + cols);
    for (int pivots = 0; pivots < max_pivots; ++pivots) {
      int enter = -1;
      for (int j = 0; j < n + slack_count; ++j)
        if (obj[static_cast<std::size_t>(j)] > eps) {
          enter = j;
          break;  // Bland: first improving column
        }
      if (enter < 0) break;
      int leave = -1;
      double best = 0.0;
      for (int r = 0; r < m; ++r) {
        const double a = t[r][static_cast<std::size_t>(enter)];
        if (a > eps) {
          const double ratio = t[r][static_cast<std::size_t>(cols)] / a;
          if (leave < 0 || ratio < best - 1e-15 ||
              (std::abs(ratio - best) <= 1e-15 &&
               basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
            leave = r;
            best = ratio;
          }
        }
      }
      if (leave < 0) break;  // unbounded direction; cannot happen on the simplex
      pivot(t, obj, basis, leave, enter, cols);
    }
    return obj[static_cast<std::size_t>(cols)] <= 1e-8;
  }

 private:
  static void pivot(std::vector<std::vector<double>>& t, std::vector<double>& obj,
                    std::vector<int>& basis, int leave, int enter, int cols) {
    auto& prow = t[static_cast<std::size_t>(leave)];
    const double p = prow[static_cast<std::size_t>(enter)];
    for (int j = 0; j <= cols; ++j) prow[static_cast<std::size_t>(j)] /= p;
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (static_cast<int>(r) == leave) continue;
      const double f = t[r][static_cast<std::size_t>(enter)];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) t[r][static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
    }
    const double f = obj[static_cast<std::size_t>(enter)];
    if (f != 0.0)
      for (int j = 0; j <= cols; ++j) obj[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
    basis[static_cast<std::size_t>(leave)] = enter;
  }
};

inline bool solve_spd(std::vector<std::vector<double>> a, std::vector<double>& b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) >
          std::abs(a[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)]))
        p = i;
    if (std::abs(a[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)]) < 1e-300) return false;
    std::swap(a[static_cast<std::size_t>(p)], a[static_cast<std::size_t>(k)]);
    std::swap(b[static_cast<std::size_t>(p)], b[static_cast<std::size_t>(k)]);
    for (int i = k + 1; i < n; ++i) {
      const double f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] /
                       a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            f * a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j)
      s -= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  }
  return true;
}

}  // namespace detail

/// Minimum-cross-entropy projection of the prior onto the constraint rows.
///
/// The optimum over a simplex slice has Gibbs form x_i ~ mu_i exp(-lambda.a_i),
/// so the solve runs on the dual: damped Newton ascent on lambda with the
/// multipliers of <=-rows clipped at zero. Zero-prior coordinates are excised
/// up front; a phase-1 simplex distinguishes genuinely infeasible rows from
/// rows feasible only outside the prior support (infinite cross-entropy).
/// Rows whose bound equals the extreme achievable value force coordinates to
/// zero before the Newton stage so that hard conditioning never needs an
/// unbounded multiplier.
inline Projection minimize_cross_entropy(const FiniteDistribution& prior,
                                         const LinearConstraintSet& constraints,
                                         const SolverOptions& opts = {}) {
  const int n = prior.size();
  if (constraints.dimension != n)
    throw DimensionMismatch("constraint set does not match the distribution dimension");
  const int nrows = static_cast<int>(constraints.rows.size());

  Projection out;
  out.certificate.forced_zero.assign(static_cast<std::size_t>(n), 0);
  out.certificate.multipliers.assign(static_cast<std::size_t>(nrows), 0.0);

  auto& forced = out.certificate.forced_zero;
  for (int i = 0; i < n; ++i)
    if (prior[i] <= 0.0) forced[static_cast<std::size_t>(i)] = 1;

  std::vector<const LinearRow*> row_ptrs;
  row_ptrs.reserve(static_cast<std::size_t>(nrows));
  for (const auto& r : constraints.rows) row_ptrs.push_back(&r);

  auto support_vector = [&] {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (!forced[static_cast<std::size_t>(i)]) s.push_back(i);
    return s;
  };

  {
    std::vector<int> full(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) full[static_cast<std::size_t>(i)] = i;
    const bool on_support = detail::SimplexFeasibility::feasible(row_ptrs, support_vector(), n);
    if (!on_support) {
      const bool on_full = detail::SimplexFeasibility::feasible(row_ptrs, full, n);
      out.status = on_full ? SolveStatus::InfiniteCrossEntropy : SolveStatus::Infeasible;
      return out;
    }
  }

  // Forcing pass: a row whose bound coincides with the smallest (or largest)
  // achievable value of a.x concentrates all mass on the attaining
  // coordinates; everything else is pinned to zero. Iterate to a fixpoint.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : constraints.rows) {
      double lo = 0, hi = 0;
      bool first = true;
      for (int i = 0; i < n; ++i) {
        if (forced[static_cast<std::size_t>(i)]) continue;
        const double c = r.coeffs[static_cast<std::size_t>(i)];
        lo = first ? c : std::min(lo, c);
        hi = first ? c : std::max(hi, c);
        first = false;
      }
      if (first) continue;
      const double tol = 1e-13 * std::max(1.0, std::abs(r.bound));
      const bool pin_low = std::abs(r.bound - lo) <= tol;
      const bool pin_high = r.rel == LinearRow::Rel::Eq && std::abs(r.bound - hi) <= tol && hi > lo;
      if (pin_low && hi > lo) {
        for (int i = 0; i < n; ++i)
          if (!forced[static_cast<std::size_t>(i)] &&
              r.coeffs[static_cast<std::size_t>(i)] > lo + tol) {
            forced[static_cast<std::size_t>(i)] = 1;
            changed = true;
          }
      } else if (pin_high) {
        for (int i = 0; i < n; ++i)
          if (!forced[static_cast<std::size_t>(i)] &&
              r.coeffs[static_cast<std::size_t>(i)] < hi - tol) {
            forced[static_cast<std::size_t>(i)] = 1;
            changed = true;
          }
      }
    }
  }

  std::vector<int> support = support_vector();
  if (support.empty()) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  if (!detail::SimplexFeasibility::feasible(row_ptrs, support, n)) {
    // Forcing only ever removes coordinates every feasible point already
    // avoids, so an infeasibility here means the support was too small.
    out.status = SolveStatus::InfiniteCrossEntropy;
    return out;
  }

  // Dual Newton over the surviving rows.
  const int ns = static_cast<int>(support.size());
  std::vector<double> log_mu(static_cast<std::size_t>(ns));
  for (int s = 0; s < ns; ++s)
    log_mu[static_cast<std::size_t>(s)] = std::log(prior[support[static_cast<std::size_t>(s)]]);
  std::vector<std::vector<double>> a(static_cast<std::size_t>(nrows),
                                     std::vector<double>(static_cast<std::size_t>(ns)));
  for (int r = 0; r < nrows; ++r)
    for (int s = 0; s < ns; ++s)
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] =
          constraints.rows[static_cast<std::size_t>(r)].coeffs[static_cast<std::size_t>(
              support[static_cast<std::size_t>(s)])];

  std::vector<double> lambda(static_cast<std::size_t>(nrows), 0.0);
  std::vector<double> x(static_cast<std::size_t>(ns));

  auto gibbs = [&](const std::vector<double>& lam, std::vector<double>& xs) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < ns; ++s) {
      double t = log_mu[static_cast<std::size_t>(s)];
      for (int r = 0; r < nrows; ++r)
        t -= lam[static_cast<std::size_t>(r)] * a[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
      xs[static_cast<std::size_t>(s)] = t;
      mx = std::max(mx, t);
    }
    double z = 0.0;
    for (int s = 0; s < ns; ++s) {
      xs[static_cast<std::size_t>(s)] = std::exp(xs[static_cast<std::size_t>(s)] - mx);
      z += xs[static_cast<std::size_t>(s)];
    }
    for (int s = 0; s < ns; ++s) xs[static_cast<std::size_t>(s)] /= z;
    return mx + std::log(z);  // log partition value
  };

  auto dual_value = [&](const std::vector<double>& lam) {
    std::vector<double> tmp(static_cast<std::size_t>(ns));
    double lz = gibbs(lam, tmp);
    double v = -lz;
    for (int r = 0; r < nrows; ++r)
      v -= lam[static_cast<std::size_t>(r)] * constraints.rows[static_cast<std::size_t>(r)].bound;
    return v;
  };

  int iter = 0;
  bool converged = false;
  for (; iter < opts.max_iterations; ++iter) {
    gibbs(lambda, x);
    std::vector<double> g(static_cast<std::size_t>(nrows), 0.0);
    for (int r = 0; r < nrows; ++r) {
      double e = 0.0;
      for (int s = 0; s < ns; ++s)
        e += a[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] * x[static_cast<std::size_t>(s)];
      g[static_cast<std::size_t>(r)] = e - constraints.rows[static_cast<std::size_t>(r)].bound;
    }

    bool ok = true;
    for (int r = 0; r < nrows; ++r) {
      const auto& row = constraints.rows[static_cast<std::size_t>(r)];
      const double gr = g[static_cast<std::size_t>(r)];
      if (row.rel == LinearRow::Rel::Eq) {
        if (std::abs(gr) > opts.primal_tolerance) ok = false;
      } else {
        if (gr > opts.primal_tolerance) ok = false;
        if (lambda[static_cast<std::size_t>(r)] * std::abs(gr) > opts.complementarity_tolerance)
          ok = false;
      }
    }
    if (ok) {
      converged = true;
      break;
    }

    // Active set: equalities plus <=-rows that are violated or carry a
    // positive multiplier.
    std::vector<int> active;
    for (int r = 0; r < nrows; ++r) {
      const auto& row = constraints.rows[static_cast<std::size_t>(r)];
      if (row.rel == LinearRow::Rel::Eq || lambda[static_cast<std::size_t>(r)] > 0.0 ||
          g[static_cast<std::size_t>(r)] > 0.0)
        active.push_back(r);
    }
    if (active.empty()) {
      converged = true;
      break;
    }

    const int na = static_cast<int>(active.size());
    std::vector<double> mean(static_cast<std::size_t>(na), 0.0);
    for (int u = 0; u < na; ++u) {
      const auto& ar = a[static_cast<std::size_t>(active[static_cast<std::size_t>(u)])];
      double e = 0.0;
      for (int s = 0; s < ns; ++s) e += ar[static_cast<std::size_t>(s)] * x[static_cast<std::size_t>(s)];
      mean[static_cast<std::size_t>(u)] = e;
    }
    std::vector<std::vector<double>> h(static_cast<std::size_t>(na),
                                       std::vector<double>(static_cast<std::size_t>(na), 0.0));
    for (int s = 0; s < ns; ++s) {
      const double w = x[static_cast<std::size_t>(s)];
      if (w <= 0.0) continue;
      for (int u = 0; u < na; ++u) {
        const double du =
            a[static_cast<std::size_t>(active[static_cast<std::size_t>(u)])][static_cast<std::size_t>(s)] -
            mean[static_cast<std::size_t>(u)];
        for (int v = u; v < na; ++v) {
          const double dv =
              a[static_cast<std::size_t>(active[static_cast<std::size_t>(v)])][static_cast<std::size_t>(s)] -
              mean[static_cast<std::size_t>(v)];
          h[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] += w * du * dv;
        }
      }
    }
    double trace = 0.0;
    for (int u = 0; u < na; ++u) {
      for (int v = 0; v < u; ++v)
        h[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] =
            h[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
      trace += h[static_cast<std::size_t>(u)][static_cast<std::size_t>(u)];
    }
    const double ridge = std::max(1e-14, 1e-12 * trace);
    for (int u = 0; u < na; ++u) h[static_cast<std::size_t>(u)][static_cast<std::size_t>(u)] += ridge;

    std::vector<double> step(static_cast<std::size_t>(na));
    for (int u = 0; u < na; ++u)
      step[static_cast<std::size_t>(u)] = g[static_cast<std::size_t>(active[static_cast<std::size_t>(u)])];
    if (!detail::solve_spd(h, step)) {
      out.status = SolveStatus::NonConverged;
      out.certificate.iterations = iter;
      return out;
    }

    // Newton decrement; inside the quadratic region the full step is taken
    // as is, since the dual is flat to double resolution there and a value
    // comparison would spuriously reject it.
    double decrement = 0.0;
    for (int u = 0; u < na; ++u)
      decrement += step[static_cast<std::size_t>(u)] *
                   g[static_cast<std::size_t>(active[static_cast<std::size_t>(u)])];
    std::vector<double> cand(static_cast<std::size_t>(nrows));
    if (decrement <= 1e-12) {
      cand = lambda;
      for (int u = 0; u < na; ++u) {
        const int r = active[static_cast<std::size_t>(u)];
        cand[static_cast<std::size_t>(r)] += step[static_cast<std::size_t>(u)];
        if (constraints.rows[static_cast<std::size_t>(r)].rel == LinearRow::Rel::Le)
          cand[static_cast<std::size_t>(r)] = std::max(0.0, cand[static_cast<std::size_t>(r)]);
      }
    } else {
      const double base = dual_value(lambda);
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls) {
        cand = lambda;
        for (int u = 0; u < na; ++u) {
          const int r = active[static_cast<std::size_t>(u)];
          cand[static_cast<std::size_t>(r)] += alpha * step[static_cast<std::size_t>(u)];
          if (constraints.rows[static_cast<std::size_t>(r)].rel == LinearRow::Rel::Le)
            cand[static_cast<std::size_t>(r)] = std::max(0.0, cand[static_cast<std::size_t>(r)]);
        }
        if (dual_value(cand) >= base - 1e-12 * (1.0 + std::abs(base))) break;
        alpha *= 0.5;
      }
    }
    lambda.swap(cand);
  }

  gibbs(lambda, x);
  std::vector<double> full(static_cast<std::size_t>(n), 0.0);
  for (int s = 0; s < ns; ++s) full[static_cast<std::size_t>(support[static_cast<std::size_t>(s)])] =
      x[static_cast<std::size_t>(s)];
  out.distribution = FiniteDistribution::normalized(std::move(full), prior.labels());
  out.certificate.multipliers = lambda;
  out.certificate.iterations = iter;

  // Certificate residuals, recomputed from the returned point.
  double cres = 0.0, comp = 0.0;
  for (int r = 0; r < nrows; ++r) {
    const auto& row = constraints.rows[static_cast<std::size_t>(r)];
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      e += row.coeffs[static_cast<std::size_t>(i)] * out.distribution[i];
    const double viol =
        row.rel == LinearRow::Rel::Eq ? std::abs(e - row.bound) : std::max(0.0, e - row.bound);
    cres = std::max(cres, viol);
    if (row.rel == LinearRow::Rel::Le)
      comp = std::max(comp, lambda[static_cast<std::size_t>(r)] * std::abs(e - row.bound));
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += out.distribution[i];
  out.certificate.sum_residual = std::abs(sum - 1.0);
  out.certificate.constraint_residual = cres;
  out.certificate.complementarity_residual = comp;

  // Stationarity: ln(x/mu) + lambda.a must be constant across the support.
  double wmean = 0.0;
  std::vector<double> v(static_cast<std::size_t>(ns));
  for (int s = 0; s < ns; ++s) {
    const int i = support[static_cast<std::size_t>(s)];
    double t = std::log(out.distribution[i]) - std::log(prior[i]);
    for (int r = 0; r < nrows; ++r)
      t += lambda[static_cast<std::size_t>(r)] *
           constraints.rows[static_cast<std::size_t>(r)].coeffs[static_cast<std::size_t>(i)];
    v[static_cast<std::size_t>(s)] = t;
    wmean += out.distribution[i] * t;
  }
  double sres = 0.0;
  for (int s = 0; s < ns; ++s) sres = std::max(sres, std::abs(v[static_cast<std::size_t>(s)] - wmean));
  out.certificate.stationarity_residual = sres;

  out.status = converged ? SolveStatus::Ok : SolveStatus::NonConverged;
  return out;
}

/// The entropy-maximizing distribution under the rows: identical to the
/// minimum-cross-entropy projection of the uniform prior.
inline Projection maximize_entropy(int dimension, const LinearConstraintSet& constraints,
                                   const SolverOptions& opts = {}) {
  return minimize_cross_entropy(FiniteDistribution::uniform(dimension), constraints, opts);
}

}  // namespace doxa

#endif  // DOXA_SOLVER_HPP
