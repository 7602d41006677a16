#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "fgopt/objective.hpp"
#include "fgopt/trace.hpp"
#include "fgopt/types.hpp"

namespace fgopt {

/// Step size and momentum parameter for the heavy-ball update
/// w_{t+1} = w_t - eta grad(w_t) + beta (w_t - w_{t-1}), with w_{-1} = w_0.
struct MomentumConfig {
  double eta = 0.0;
  double beta = 0.0;
  Vec w0;
};

/// Heavy-ball loop (two-point form). Trace records f(w_t), the gradient norm
/// and, when the optimum is supplied, the stacked residual
/// |(w_t - w*, w_{t-1} - w*)|.
inline Trace heavy_ball_run(const MomentumConfig& cfg, const Objective& f, int T,
                            std::optional<Vec> w_star = std::nullopt) {
  std::vector<std::string> cols{"f_value", "grad_norm"};
  if (w_star) cols.push_back("stacked_residual");
  Trace trace(cols);

  Vec w = cfg.w0, w_prev = cfg.w0;
  for (int t = 1; t <= T; ++t) {
    Vec g = f.gradient(w);
    Vec w_next = w - cfg.eta * g + cfg.beta * (w - w_prev);
    if (!w_next.allFinite()) throw std::runtime_error("heavy ball: non-finite iterate at t=" + std::to_string(t));
    w_prev = w;
    w = w_next;
    std::vector<double> row{f.value(w), f.gradient(w).norm()};
    if (w_star) {
      const double r = std::sqrt((w - *w_star).squaredNorm() + (w_prev - *w_star).squaredNorm());
      row.push_back(r);
    }
    trace.add_row(t, row);
  }
  return trace;
}

/// Buffer form of the same method: M_t = beta M_{t-1} + grad(w_t);
/// w_{t+1} = w_t - eta M_t. Produces identical iterates from identical starts.
inline Trace heavy_ball_run_buffer(const MomentumConfig& cfg, const Objective& f, int T,
                                   std::optional<Vec> w_star = std::nullopt) {
  std::vector<std::string> cols{"f_value", "grad_norm"};
  if (w_star) cols.push_back("stacked_residual");
  Trace trace(cols);

  Vec w = cfg.w0, w_prev = cfg.w0;
  Vec m = Vec::Zero(f.dim());
  for (int t = 1; t <= T; ++t) {
    m = cfg.beta * m + f.gradient(w);
    Vec w_next = w - cfg.eta * m;
    if (!w_next.allFinite()) throw std::runtime_error("heavy ball: non-finite iterate at t=" + std::to_string(t));
    w_prev = w;
    w = w_next;
    std::vector<double> row{f.value(w), f.gradient(w).norm()};
    if (w_star) {
      const double r = std::sqrt((w - *w_star).squaredNorm() + (w_prev - *w_star).squaredNorm());
      row.push_back(r);
    }
    trace.add_row(t, row);
  }
  return trace;
}

inline double momentum_admissibility_threshold(double eta_lambda_min, double eta_lambda_max) {
  const double a = 1.0 - std::sqrt(eta_lambda_min);
  const double b = 1.0 - std::sqrt(eta_lambda_max);
  return std::max(a * a, b * b);
}

/// h(beta, z) = -(beta - (1 - sqrt z)^2)(beta - (1 + sqrt z)^2); positive on
/// the admissible band.
inline double momentum_h(double beta, double z) {
  const double lo = (1.0 - std::sqrt(z)) * (1.0 - std::sqrt(z));
  const double hi = (1.0 + std::sqrt(z)) * (1.0 + std::sqrt(z));
  return -(beta - lo) * (beta - hi);
}

/// C0 = sqrt(2) (beta + 1) / sqrt(min(h(beta, eta*lmin), h(beta, eta*lmax))),
/// the constant of the matrix-power bound |A^k v| <= beta^{k/2} C0 |v|.
/// Requires the admissible band beta > max{(1 - sqrt(eta l))^2} on both ends.
inline double c0_constant(double beta, double eta_lambda_min, double eta_lambda_max) {
  const double thr = momentum_admissibility_threshold(eta_lambda_min, eta_lambda_max);
  if (!(beta > thr) || beta > 1.0) {
    const double a = 1.0 - std::sqrt(eta_lambda_min), b = 1.0 - std::sqrt(eta_lambda_max);
    throw std::invalid_argument("inadmissible beta=" + std::to_string(beta) +
                                "; need beta > max{" + std::to_string(a * a) + ", " + std::to_string(b * b) +
                                "} and beta <= 1");
  }
  const double hmin = std::min(momentum_h(beta, eta_lambda_min), momentum_h(beta, eta_lambda_max));
  return std::sqrt(2.0) * (beta + 1.0) / std::sqrt(hmin);
}

/// Provable constant of the matrix-power bound: 2(beta+1)/sqrt(min h).
/// This is sqrt(2) times the reported C0. The per-block Gram matrix has
/// eigenvalue sum 2(beta+1) and product h, so its least eigenvalue is
/// h / theta_max >= h / (2(beta+1)); bounding it by h/(beta+1) instead, as
/// the reported constant does, overstates the floor by a factor of two and
/// the transient can exceed C0 by up to sqrt(2). The certified constant is
/// what A^k actually satisfies for every v0.
inline double akv_certified_constant(double beta, double eta_lambda_min, double eta_lambda_max) {
  return std::sqrt(2.0) * c0_constant(beta, eta_lambda_min, eta_lambda_max);
}

struct AkvCheckResult {
  bool holds = false;
  double worst_ratio = 0.0;  // max_k |A^k v0| / (beta^{k/2} C |v0|)
  double constant = 0.0;     // the certified constant used
};

/// Builds A = [[(1+beta)I - eta H, -beta I], [I, 0]] explicitly and verifies
/// |A^k v0| <= beta^{k/2} C |v0| for all k <= K by repeated multiplication,
/// with C the certified constant above.
inline AkvCheckResult akv_bound_check(const Mat& H, const Vec& v0, double eta, double beta, int K) {
  const int n = static_cast<int>(H.rows());
  if (H.cols() != n || v0.size() != 2 * n) throw std::invalid_argument("akv_bound_check: shape mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  const double c0 = akv_certified_constant(beta, eta * lmin, eta * lmax);

  Mat A = Mat::Zero(2 * n, 2 * n);
  A.topLeftCorner(n, n) = (1.0 + beta) * Mat::Identity(n, n) - eta * H;
  A.topRightCorner(n, n) = -beta * Mat::Identity(n, n);
  A.bottomLeftCorner(n, n) = Mat::Identity(n, n);

  AkvCheckResult out;
  out.holds = true;
  out.constant = c0;
  const double v0n = v0.norm();
  Vec v = v0;
  double rate_pow = 1.0;
  const double sb = std::sqrt(beta);
  for (int k = 0; k <= K; ++k) {
    const double bound = rate_pow * c0 * v0n;
    const double ratio = bound > 0.0 ? v.norm() / bound : std::numeric_limits<double>::infinity();
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (ratio > 1.0 + 1e-12) out.holds = false;
    v = A * v;
    rate_pow *= sb;
  }
  return out;
}

enum class MomentumProblem { quadratic, relu, deep_linear };

/// Parameter pairs from the acceleration results: eta from the largest
/// curvature, beta = (1 - 1/(2 sqrt(kappa)))^2.
inline MomentumConfig tuned_params(MomentumProblem kind, double lambda_min, double lambda_max,
                                   double d_y = 0.0, double depth = 0.0) {
  if (!(lambda_min > 0.0) || lambda_max < lambda_min)
    throw std::invalid_argument("tuned_params: need 0 < lambda_min <= lambda_max");
  const double kappa = lambda_max / lambda_min;
  MomentumConfig cfg;
  switch (kind) {
    case MomentumProblem::quadratic:
    case MomentumProblem::relu:
      cfg.eta = 1.0 / lambda_max;
      break;
    case MomentumProblem::deep_linear:
      // lambda_max here is sigma_max^2(X); eta = d_y / (depth * sigma_max^2)
      if (!(d_y > 0.0) || !(depth > 0.0)) throw std::invalid_argument("tuned_params: deep_linear needs d_y and depth");
      cfg.eta = d_y / (depth * lambda_max);
      break;
  }
  cfg.beta = (1.0 - 0.5 / std::sqrt(kappa)) * (1.0 - 0.5 / std::sqrt(kappa));
  return cfg;
}

// --- cubic-regularized problem ------------------------------------------------

/// f(w) = 1/2 w'Aw + b'w + (rho/3)|w|^3 with gradient Aw + b + rho |w| w.
class CubicRegularizedObjective final : public Objective {
 public:
  CubicRegularizedObjective(Mat A, Vec b, double rho) : A_(std::move(A)), b_(std::move(b)), rho_(rho) {}

  int dim() const override { return static_cast<int>(b_.size()); }
  double value(const Vec& w) const override {
    return 0.5 * w.dot(A_ * w) + b_.dot(w) + (rho_ / 3.0) * std::pow(w.norm(), 3);
  }
  Vec gradient(const Vec& w) const override { return A_ * w + b_ + rho_ * w.norm() * w; }
  bool has_hessian() const override { return true; }
  Mat hessian(const Vec& w) const override {
    const double n = w.norm();
    Mat H = A_ + rho_ * n * Mat::Identity(dim(), dim());
    if (n > 0.0) H += (rho_ / n) * (w * w.transpose());
    return H;
  }

 private:
  Mat A_;
  Vec b_;
  double rho_;
};

struct CubicInstance {
  std::shared_ptr<CubicRegularizedObjective> f;
  Vec w_star;
  double f_star = 0.0;
};

/// Seeded instance with a known stationary point: diagonal A with
/// lambda_min = -0.2, |A|_2 = 1, rho = |w*| = 1 and b = -(A + rho |w*| I) w*.
inline CubicInstance make_cubic_instance(std::uint64_t seed, int d = 4, double lambda_min = -0.2,
                                         double spec_norm = 1.0, double gap = 5e-3, double rho = 1.0) {
  Rng rng(Rng::derive(seed, "cubic"));
  Vec diag(d);
  diag[0] = lambda_min;
  diag[1] = lambda_min + gap;
  for (int i = 2; i < d; ++i) diag[i] = lambda_min + gap + (spec_norm - lambda_min - gap) * rng.next_double();
  Mat A = diag.asDiagonal();

  // w~ = (A + rho |w*| I)^(-xi) theta with log2(xi) uniform on [-1, 1]
  const double xi = std::pow(2.0, -1.0 + 2.0 * rng.next_double());
  Vec theta = rng.gaussian_vector(d);
  Vec wt(d);
  for (int i = 0; i < d; ++i) wt[i] = std::pow(diag[i] + rho, -xi) * theta[i];
  Vec w_star = wt / wt.norm();  // |w*| = 1
  Vec b = -(A + rho * Mat::Identity(d, d)) * w_star;

  CubicInstance inst;
  inst.f = std::make_shared<CubicRegularizedObjective>(A, b, rho);
  inst.w_star = w_star;
  inst.f_star = inst.f->value(w_star);
  return inst;
}

/// Heavy-ball trace of the optimality gap f(w_t) - f(w*) on a cubic instance.
inline Trace cubic_regularized_experiment(const CubicInstance& inst, const MomentumConfig& cfg, int T) {
  Trace gap({"gap", "grad_norm"});
  Vec w = cfg.w0, w_prev = cfg.w0;
  for (int t = 1; t <= T; ++t) {
    Vec g = inst.f->gradient(w);
    Vec w_next = w - cfg.eta * g + cfg.beta * (w - w_prev);
    if (!w_next.allFinite()) throw std::runtime_error("cubic run: non-finite iterate at t=" + std::to_string(t));
    w_prev = w;
    w = w_next;
    gap.add_row(t, {inst.f->value(w) - inst.f_star, inst.f->gradient(w).norm()});
  }
  return gap;
}

}  // namespace fgopt
