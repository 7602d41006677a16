#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fgopt/objective.hpp"
#include "fgopt/sets.hpp"
#include "fgopt/trace.hpp"
#include "fgopt/types.hpp"

namespace fgopt {

struct BoundaryFwResult {
  Vec x_bar;
  Trace trace;
  double min_avg_grad_norm = 0.0;  // min_t |Theta_t|, drives the rate certificate
};

/// Projection-free method for (possibly non-smooth) objectives over a
/// strongly convex set: after the first round every iterate is the LMO of the
/// running average of subgradients, and the output is the uniform average.
/// Iterates live on the boundary as long as the averaged subgradient stays
/// away from zero; when it collapses below 1e-12 a warning is recorded and
/// the run continues.
inline BoundaryFwResult boundary_fw(const Objective& f, const FeasibleSet& set, int T, Vec x1 = Vec()) {
  if (!(set.set_strong_convexity() > 0.0))
    throw std::invalid_argument("boundary_fw: set must be strongly convex");
  if (x1.size() == 0) x1 = set.canonical_point();
  if (!set.contains(x1, 1e-7)) throw std::invalid_argument("boundary_fw: start point infeasible");

  std::vector<std::string> cols{"f_value", "f_avg", "theta_norm", "theta_min"};
  if (set.has_gauge()) cols.push_back("gauge_x");
  Trace trace(cols);
  Vec grad_sum = Vec::Zero(f.dim());
  Vec x_sum = Vec::Zero(f.dim());
  Vec x = x1;
  double theta_min = std::numeric_limits<double>::infinity();
  bool warned = false;

  for (int t = 1; t <= T; ++t) {
    if (t > 1) x = set.lmo(grad_sum);
    x_sum += x;
    grad_sum += f.gradient(x);
    const double theta_norm = grad_sum.norm() / t;
    theta_min = std::min(theta_min, theta_norm);
    if (!warned && theta_norm < 1e-12) {
      trace.warnings.push_back("averaged subgradient vanished at round " + std::to_string(t));
      warned = true;
    }
    Vec xbar = x_sum / t;
    std::vector<double> row{f.value(x), f.value(xbar), theta_norm, theta_min};
    if (set.has_gauge()) row.push_back(set.gauge(x));
    trace.add_row(t, row);
  }

  BoundaryFwResult out;
  out.x_bar = x_sum / T;
  out.min_avg_grad_norm = theta_min;
  out.trace = std::move(trace);
  return out;
}

/// Exact solve of min_{x in K} eta <L, x> + gauge_K(x)^2 for a centrally
/// symmetric K containing the origin: reparameterize x = rho * z with z on
/// the boundary, so the solution is rho* lmo(L) with
/// rho* = clamp(-(eta/2) <L, lmo(L)>, 0, 1).
inline Vec gauge_ftrl_plus_solve(const Vec& L_t, double eta, const FeasibleSet& set) {
  if (!set.has_gauge()) throw std::invalid_argument("gauge solve: set must expose a gauge");
  Vec z_star = set.lmo(L_t);
  const double rho = std::clamp(-(eta / 2.0) * L_t.dot(z_star), 0.0, 1.0);
  return rho * z_star;
}

struct GaugeFwResult {
  Vec x_bar;
  Trace trace;
};

/// LMO-only method with a t^2 rate on gauge sets: the y-player plays the
/// look-ahead gradient grad f(xtilde_t), the x-player answers with the
/// closed-form gauge-regularized leader, weights alpha_t = t.
/// Default eta = lambda / (4L) where lambda is the strong convexity of the
/// squared gauge.
inline GaugeFwResult gauge_fw(const Objective& f, const FeasibleSet& set, int T, double eta = 0.0,
                              Vec x0 = Vec()) {
  if (!set.has_gauge()) throw std::invalid_argument("gauge_fw: set must expose a gauge");
  const double L = f.smoothness();
  if (!(L > 0.0)) throw std::invalid_argument("gauge_fw: objective needs a smoothness constant");
  const double lambda = set.gauge_sq_strong_convexity();
  if (eta <= 0.0) eta = lambda / (4.0 * L);
  if (x0.size() == 0) x0 = Vec::Zero(f.dim());

  Trace trace({"f_value", "rho", "gauge_xbar"});
  Vec sum_ax = Vec::Zero(f.dim()), L_sum = Vec::Zero(f.dim());
  double A = 0.0;
  Vec x_prev = x0, xbar = x0;

  for (int t = 1; t <= T; ++t) {
    const double alpha = t;
    Vec xtilde = (A + alpha > 0.0) ? Vec((alpha * x_prev + sum_ax) / (A + alpha)) : x_prev;
    Vec y = f.gradient(xtilde);
    L_sum += alpha * y;
    Vec z_star = set.lmo(L_sum);
    const double rho = std::clamp(-(eta / 2.0) * L_sum.dot(z_star), 0.0, 1.0);
    Vec x = rho * z_star;

    A += alpha;
    sum_ax += alpha * x;
    xbar = sum_ax / A;
    x_prev = x;
    trace.add_row(t, {f.value(xbar), rho, set.gauge(xbar)});
  }

  GaugeFwResult out;
  out.x_bar = xbar;
  out.trace = std::move(trace);
  return out;
}

}  // namespace fgopt
