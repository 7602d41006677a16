#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fgopt/objective.hpp"
#include "fgopt/rng.hpp"
#include "fgopt/trace.hpp"
#include "fgopt/types.hpp"

namespace fgopt {

/// SGD with stochastic heavy-ball momentum and a periodic step-size boost:
/// the step is eta except every T_thred-th iteration, where it is r >= eta.
struct SaddleConfig {
  double eta = 5e-5;
  double r = 5e-4;  // boost step
  double beta = 0.9;
  int T_thred = 1000;
  int T = 100000;
  std::uint64_t seed = 0;
};

struct SaddleRunResult {
  Trace trace;  // rows t = 0..T: f(w_t), grad_norm, boost flag of step t
  Vec w_final;
  std::vector<Vec> iterates;  // optional dense storage (kept when record_iterates)
};

/// m_t = beta m_{t-1} + g_t; w_{t+1} = w_t - eta_hat m_t, boost at
/// t mod T_thred == 0 (t = 0..T inclusive, so floor(T/T_thred)+1 boosts).
/// Trace values are full-batch; gradients are drawn from the seeded oracle.
inline SaddleRunResult cnc_sgd_run(const Objective& f, const SaddleConfig& cfg, Vec w0 = Vec(),
                                   bool record_iterates = false,
                                   const std::function<double(const Vec&)>& extra_metric = nullptr) {
  if (!f.has_stochastic_gradient()) throw std::invalid_argument("cnc_sgd_run: stochastic oracle required");
  if (cfg.r < cfg.eta) throw std::invalid_argument("cnc_sgd_run: boost step r must satisfy r >= eta");
  if (cfg.T_thred <= 0) throw std::invalid_argument("cnc_sgd_run: T_thred must be positive");
  if (w0.size() == 0) w0 = Vec::Zero(f.dim());

  std::vector<std::string> cols{"f_value", "grad_norm", "boost"};
  if (extra_metric) cols.push_back("metric");
  Trace trace(cols);
  trace.seed = cfg.seed;

  Vec w = w0;
  Vec m = Vec::Zero(f.dim());
  SaddleRunResult out;
  for (int t = 0; t <= cfg.T; ++t) {
    const bool boost = (t % cfg.T_thred) == 0;
    std::vector<double> row{f.value(w), f.gradient(w).norm(), boost ? 1.0 : 0.0};
    if (extra_metric) row.push_back(extra_metric(w));
    trace.add_row(t, row);
    if (record_iterates) out.iterates.push_back(w);

    Vec g = f.stochastic_gradient(w, Rng::derive(cfg.seed, "sgd", static_cast<std::uint64_t>(t)));
    m = cfg.beta * m + g;
    w -= (boost ? cfg.r : cfg.eta) * m;
    if (!w.allFinite()) throw std::runtime_error("cnc_sgd_run: non-finite iterate at t=" + std::to_string(t));
  }
  out.w_final = w;
  out.trace = std::move(trace);
  return out;
}

// --- benchmark objectives ------------------------------------------------------

/// Two-dimensional finite-sum saddle benchmark:
/// f(w) = (1/n) sum_i [ 1/2 w'Hw + b_i'w + |w|_10^10 ],
/// H = diag(1, -0.1), b_i ~ N(0, diag(0.1, 0.001)). The origin sits next to
/// the saddle with objective value zero.
inline std::shared_ptr<FiniteSumObjective> toy_saddle_objective(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("toy_saddle_objective: n >= 1 required");
  const int d = 2;
  Mat H = Mat::Zero(d, d);
  H(0, 0) = 1.0;
  H(1, 1) = -0.1;
  auto bs = std::make_shared<std::vector<Vec>>();
  Rng rng(Rng::derive(seed, "toy-b"));
  Vec bbar = Vec::Zero(d);
  for (int i = 0; i < n; ++i) {
    Vec b(d);
    b[0] = std::sqrt(0.1) * rng.next_gaussian();
    b[1] = std::sqrt(0.001) * rng.next_gaussian();
    bs->push_back(b);
    bbar += b;
  }
  bbar /= n;

  auto l10_term = [](const Vec& w) {
    double s = 0.0;
    for (int j = 0; j < w.size(); ++j) s += std::pow(std::abs(w[j]), 10);
    return s;
  };
  auto l10_grad = [](const Vec& w) {
    Vec g(w.size());
    for (int j = 0; j < w.size(); ++j) g[j] = 10.0 * w[j] * std::pow(std::abs(w[j]), 8);
    return g;
  };

  auto obj = std::make_shared<FiniteSumObjective>(
      d, n,
      [H, bbar, l10_term](const Vec& w) { return 0.5 * w.dot(H * w) + bbar.dot(w) + l10_term(w); },
      [H, bbar, l10_grad](const Vec& w) { return Vec(H * w + bbar + l10_grad(w)); },
      [H, bs, l10_grad](const Vec& w, int i) { return Vec(H * w + (*bs)[i] + l10_grad(w)); });
  obj->set_hessian([H](const Vec& w) {
    Mat hess = H;
    for (int j = 0; j < w.size(); ++j) hess(j, j) += 90.0 * std::pow(std::abs(w[j]), 8);
    return hess;
  });
  return obj;
}

struct PhaseRetrievalProblem {
  std::shared_ptr<FiniteSumObjective> objective;
  Vec w_star;
  /// min(|w - w*|, |w + w*|) / |w*| -- sign-invariant progress measure.
  double relative_distance(const Vec& w) const {
    return std::min((w - w_star).norm(), (w + w_star).norm()) / w_star.norm();
  }
};

/// f(w) = (1/n) sum_i ((a_i'w)^2 - y_i)^2 with y_i = (a_i'w*)^2,
/// w* ~ N(0, I/d), a_i ~ N(0, I).
inline PhaseRetrievalProblem phase_retrieval_objective(int n, int d, std::uint64_t seed) {
  Rng rng(Rng::derive(seed, "phase"));
  Vec w_star = rng.gaussian_vector(d) / std::sqrt(static_cast<double>(d));
  auto A = std::make_shared<Mat>(rng.gaussian_matrix(d, n));
  auto y = std::make_shared<Vec>(n);
  for (int i = 0; i < n; ++i) {
    const double s = A->col(i).dot(w_star);
    (*y)[i] = s * s;
  }

  auto obj = std::make_shared<FiniteSumObjective>(
      d, n,
      [A, y, n](const Vec& w) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
          const double e = A->col(i).dot(w);
          const double r = e * e - (*y)[i];
          s += r * r;
        }
        return s / n;
      },
      [A, y, n, d](const Vec& w) {
        Vec g = Vec::Zero(d);
        for (int i = 0; i < n; ++i) {
          const double e = A->col(i).dot(w);
          g += 4.0 * (e * e - (*y)[i]) * e * A->col(i);
        }
        return Vec(g / n);
      },
      // Per-step draw is the gradient of the literal i-th summand,
      // (1/n)((a_i'w)^2 - y_i)^2, so the sampled step size matches the
      // full-batch scale used in the escape experiments.
      [A, y, n](const Vec& w, int i) {
        const double e = A->col(i).dot(w);
        return Vec(4.0 / n * (e * e - (*y)[i]) * e * A->col(i));
      });
  obj->set_hessian([A, y, n, d](const Vec& w) {
    Mat hess = Mat::Zero(d, d);
    for (int i = 0; i < n; ++i) {
      const double e = A->col(i).dot(w);
      hess += (12.0 * e * e - 4.0 * (*y)[i]) * (A->col(i) * A->col(i).transpose());
    }
    return Mat(hess / n);
  });

  PhaseRetrievalProblem p;
  p.objective = std::move(obj);
  p.w_star = std::move(w_star);
  return p;
}

struct OverparamPhaseProblem {
  std::shared_ptr<FiniteSumObjective> objective;  // over vec(W), W is d x K
  Vec w_star;
  int d = 0, K = 0;

  /// Distance to the solution manifold {w* q' : |q| = 1}. The minimizing q is
  /// W'w*/|W'w*|; when W'w* = 0 the objective is constant over the sphere and
  /// the value is sqrt(|W|^2 + |w*|^2).
  double distance(const Vec& w_flat) const {
    Eigen::Map<const Mat> W(w_flat.data(), d, K);
    Vec q = W.transpose() * w_star;
    const double qn = q.norm();
    if (qn < 1e-15) return std::sqrt(W.squaredNorm() + w_star.squaredNorm());
    q /= qn;
    return (W - w_star * q.transpose()).norm();
  }
};

/// Over-parametrized phase retrieval over W in R^{d x K}:
/// f(W) = (1/n) sum_i ( sum_k (x_i'w^(k))^2 - y_i )^2; K = 1 coincides with
/// phase_retrieval_objective on matched seeds.
inline OverparamPhaseProblem overparam_phase_objective(int K, int d, int n, std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("overparam_phase_objective: K >= 1 required");
  Rng rng(Rng::derive(seed, "phase"));  // same data stream as phase_retrieval_objective
  Vec w_star = rng.gaussian_vector(d) / std::sqrt(static_cast<double>(d));
  auto A = std::make_shared<Mat>(rng.gaussian_matrix(d, n));
  auto y = std::make_shared<Vec>(n);
  for (int i = 0; i < n; ++i) {
    const double s = A->col(i).dot(w_star);
    (*y)[i] = s * s;
  }

  const int dim = d * K;
  auto resid = [A, y, d, K](const Vec& w_flat, int i) {
    Eigen::Map<const Mat> W(w_flat.data(), d, K);
    const Vec e = W.transpose() * A->col(i);  // K inner products
    return e.squaredNorm() - (*y)[i];
  };
  auto obj = std::make_shared<FiniteSumObjective>(
      dim, n,
      [resid, n](const Vec& w) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
          const double r = resid(w, i);
          s += r * r;
        }
        return s / n;
      },
      [A, resid, d, K, dim, n](const Vec& w) {
        Vec g = Vec::Zero(dim);
        for (int i = 0; i < n; ++i) {
          Eigen::Map<const Mat> W(w.data(), d, K);
          Mat Gi = 4.0 * resid(w, i) * (A->col(i) * (A->col(i).transpose() * W));
          g += Eigen::Map<Vec>(Gi.data(), dim);
        }
        return Vec(g / n);
      },
      [A, resid, d, K, dim, n](const Vec& w, int i) {
        Eigen::Map<const Mat> W(w.data(), d, K);
        Mat Gi = 4.0 / n * resid(w, i) * (A->col(i) * (A->col(i).transpose() * W));
        return Vec(Eigen::Map<Vec>(Gi.data(), dim));
      });

  OverparamPhaseProblem p;
  p.objective = std::move(obj);
  p.w_star = std::move(w_star);
  p.d = d;
  p.K = K;
  return p;
}

// --- momentum-alignment diagnostics ---------------------------------------------

/// Measured alignment quantities of the momentum vector at one iterate.
/// Regime gating follows the analysis: the gradient-alignment ratio is
/// reported in the large-gradient regime (|grad| >= eps), the curvature
/// ratio inside a strict saddle region (|grad| <= eps and lambda_min <= -eps).
struct DiagnosticsRow {
  int t = 0;
  double apag_ratio = std::numeric_limits<double>::quiet_NaN();
  double apcg_ratio = std::numeric_limits<double>::quiet_NaN();
  double grace_value = std::numeric_limits<double>::quiet_NaN();
  double cnc_proxy = std::numeric_limits<double>::quiet_NaN();
  bool apag_regime = false;
  bool apcg_regime = false;
  bool suppressed = false;  // a curvature factor was not PSD at this step
};

class SaddleDiagnostics {
 public:
  /// tau is the horizon of the curvature product M_t; k its second start
  /// index (defaults to 1, matching the squared product).
  SaddleDiagnostics(double eta, double beta, int tau, double eps, int k = 1)
      : eta_(eta), beta_(beta), tau_(tau), eps_(eps), k_(k) {
    if (tau_ < 2) throw std::invalid_argument("diagnostics: tau >= 2 required");
    if (k_ < 1 || k_ > tau_ - 1) throw std::invalid_argument("diagnostics: need 1 <= k <= tau-1");
  }

  /// Eigenvalue of M_t for a curvature eigenvalue lam: the product of
  /// (1 - c_s lam) over s = 1..tau-1 times the product over s = k..tau-1,
  /// with c_s = eta (1 - beta^s) / (1 - beta). Computed in log space; the
  /// geometric tail beta^s < 1e-18 is folded into a closed form.
  bool product_factor(double lam, double* out) const {
    const double cinf = eta_ / (1.0 - beta_);
    auto log_partial = [&](int s_from) -> std::optional<double> {
      double acc = 0.0;
      double bpow = std::pow(beta_, s_from);
      int s = s_from;
      for (; s <= tau_ - 1; ++s) {
        if (bpow < 1e-18) break;
        const double term = 1.0 - cinf * (1.0 - bpow) * lam;
        if (term < 0.0) return std::nullopt;  // not PSD
        if (term == 0.0) return -std::numeric_limits<double>::infinity();
        acc += std::log(term);
        bpow *= beta_;
      }
      if (s <= tau_ - 1) {
        const double term = 1.0 - cinf * lam;
        if (term < 0.0) return std::nullopt;
        if (term == 0.0) return -std::numeric_limits<double>::infinity();
        acc += (tau_ - s) * std::log(term);
      }
      return acc;
    };
    auto a = log_partial(1);
    auto b = log_partial(k_);
    if (!a || !b) return false;
    const double lg = *a + *b;
    *out = lg < -700.0 ? 0.0 : std::exp(lg);
    return true;
  }

  DiagnosticsRow evaluate(const Objective& f, int t, const Vec& w, const Vec& g, const Vec& m) const {
    DiagnosticsRow row;
    row.t = t;
    const Vec grad = f.gradient(w);
    const double gn2 = grad.squaredNorm();
    const Mat hess = f.hessian(w);
    Eigen::SelfAdjointEigenSolver<Mat> es(hess);
    const Vec& lam = es.eigenvalues();
    const Mat& V = es.eigenvectors();

    // CNC proxy: squared projection on the bottom eigenvector, sign-fixed.
    Vec v_min = V.col(0);
    for (int i = 0; i < v_min.size(); ++i) {
      if (v_min[i] != 0.0) {
        if (v_min[i] < 0.0) v_min = -v_min;
        break;
      }
    }
    const double proj = m.dot(v_min);
    row.cnc_proxy = proj * proj;

    row.grace_value = (eta_ * grad.dot(g - m) + 0.5 * eta_ * eta_ * m.dot(hess * m)) / (eta_ * eta_);

    row.apag_regime = std::sqrt(gn2) >= eps_;
    if (row.apag_regime && gn2 > 0.0) row.apag_ratio = grad.dot(m - g) / gn2;

    row.apcg_regime = std::sqrt(gn2) <= eps_ && lam.minCoeff() <= -eps_;
    if (row.apcg_regime) {
      Vec factors(lam.size());
      bool psd = true;
      for (int i = 0; i < lam.size(); ++i) {
        double fac;
        if (!product_factor(lam[i], &fac)) {
          psd = false;
          break;
        }
        factors[i] = fac;
      }
      if (!psd) {
        row.suppressed = true;
      } else if (gn2 > 0.0) {
        const Vec Mm = V * (factors.asDiagonal() * (V.transpose() * m));
        const double sigma_max = factors.maxCoeff();
        if (sigma_max > 0.0) row.apcg_ratio = grad.dot(Mm) / (eta_ * sigma_max * gn2);
      }
    }
    return row;
  }

  /// Explicit dense M_t (for small dimensions / validation).
  Mat explicit_product(const Mat& hess) const {
    const int d = static_cast<int>(hess.rows());
    Mat first = Mat::Identity(d, d), second = Mat::Identity(d, d);
    for (int s = 1; s <= tau_ - 1; ++s) {
      const double c = eta_ * (1.0 - std::pow(beta_, s)) / (1.0 - beta_);
      Mat G = Mat::Identity(d, d) - c * hess;
      first = first * G;
      if (s >= k_) second = second * G;
    }
    return first * second;
  }

 private:
  double eta_, beta_;
  int tau_;
  double eps_;
  int k_;
};

}  // namespace fgopt
