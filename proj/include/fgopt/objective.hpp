#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fgopt/rng.hpp"
#include "fgopt/types.hpp"

namespace fgopt {

/// First-order oracle for an objective on R^d with declared constants.
///
/// Smoothness L and strong convexity mu are declared by the construction site
/// (they are inputs to step-size rules, never re-derived at run time).
/// Stochastic gradients take an explicit seed so every run is replayable.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual double value(const Vec& w) const = 0;
  virtual Vec gradient(const Vec& w) const = 0;

  virtual double smoothness() const { return 0.0; }         // L, 0 when undeclared
  virtual double strong_convexity() const { return 0.0; }   // mu
  virtual double hessian_lipschitz() const { return 0.0; }  // rho_H

  virtual bool has_stochastic_gradient() const { return false; }
  virtual Vec stochastic_gradient(const Vec& /*w*/, std::uint64_t /*seed*/) const {
    throw std::runtime_error("objective has no stochastic gradient oracle");
  }

  virtual bool has_hessian() const { return false; }
  virtual Mat hessian(const Vec& /*w*/) const { throw std::runtime_error("objective has no Hessian oracle"); }

  /// Fenchel conjugate f*(y) = sup_x <x,y> - f(x). The default solves the
  /// concave maximization numerically by gradient ascent with step 1/L; the
  /// quadratic oracle overrides with the closed form.
  virtual double conjugate(const Vec& y) const {
    const double L = smoothness();
    if (!(L > 0.0)) throw std::runtime_error("numeric conjugate needs a declared smoothness constant");
    Vec x = Vec::Zero(dim());
    const double step = 1.0 / L;
    for (int it = 0; it < 200000; ++it) {
      Vec g = y - gradient(x);  // gradient of the concave inner problem
      x += step * g;
      if (g.norm() <= 1e-13 * (1.0 + y.norm())) break;
    }
    return x.dot(y) - value(x);
  }
};

/// f(w) = 1/2 w' Gamma w + b' w.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Mat gamma, Vec b) : gamma_(std::move(gamma)), b_(std::move(b)) {
    if (gamma_.rows() != gamma_.cols()) throw std::invalid_argument("quadratic: matrix must be square");
    if (b_.size() != gamma_.rows()) throw std::invalid_argument("quadratic: dimension mismatch");
    const double asym = (gamma_ - gamma_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) throw std::invalid_argument("quadratic: matrix must be symmetric (tol 1e-10)");
    Eigen::SelfAdjointEigenSolver<Mat> es(gamma_);
    lambda_min_ = es.eigenvalues().minCoeff();
    lambda_max_ = es.eigenvalues().maxCoeff();
  }

  int dim() const override { return static_cast<int>(b_.size()); }
  double value(const Vec& w) const override { return 0.5 * w.dot(gamma_ * w) + b_.dot(w); }
  Vec gradient(const Vec& w) const override { return gamma_ * w + b_; }

  double smoothness() const override { return std::max(std::abs(lambda_min_), std::abs(lambda_max_)); }
  double strong_convexity() const override { return lambda_min_ > 0.0 ? lambda_min_ : 0.0; }

  bool has_hessian() const override { return true; }
  Mat hessian(const Vec&) const override { return gamma_; }

  double conjugate(const Vec& y) const override {
    if (lambda_min_ <= 0.0) return Objective::conjugate(y);
    Vec x = gamma_.ldlt().solve(y - b_);
    return x.dot(y) - value(x);
  }

  /// Unique minimizer when Gamma is positive definite.
  Vec minimizer() const {
    if (lambda_min_ <= 0.0) throw std::runtime_error("quadratic: minimizer undefined (not positive definite)");
    return gamma_.ldlt().solve(-b_);
  }

  const Mat& matrix() const { return gamma_; }
  const Vec& linear() const { return b_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

 private:
  Mat gamma_;
  Vec b_;
  double lambda_min_ = 0.0, lambda_max_ = 0.0;
};

inline std::shared_ptr<QuadraticObjective> make_quadratic(const Mat& gamma, const Vec& b) {
  return std::make_shared<QuadraticObjective>(gamma, b);
}

/// Objective defined by callbacks, with declared constants.
class FunctionObjective final : public Objective {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using HessFn = std::function<Mat(const Vec&)>;

  FunctionObjective(int dim, ValueFn value, GradFn grad, double L = 0.0, double mu = 0.0)
      : dim_(dim), value_(std::move(value)), grad_(std::move(grad)), L_(L), mu_(mu) {}

  int dim() const override { return dim_; }
  double value(const Vec& w) const override { return value_(w); }
  Vec gradient(const Vec& w) const override { return grad_(w); }
  double smoothness() const override { return L_; }
  double strong_convexity() const override { return mu_; }

  void set_hessian(HessFn h, double rho = 0.0) {
    hess_ = std::move(h);
    rho_ = rho;
  }
  bool has_hessian() const override { return static_cast<bool>(hess_); }
  Mat hessian(const Vec& w) const override {
    if (!hess_) throw std::runtime_error("objective has no Hessian oracle");
    return hess_(w);
  }
  double hessian_lipschitz() const override { return rho_; }

 private:
  int dim_;
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
  double L_, mu_, rho_ = 0.0;
};

/// Finite-sum objective f(w) = (1/n) sum_i f_i(w) with a seeded per-sample
/// stochastic gradient (uniform with-replacement sampling).
class FiniteSumObjective final : public Objective {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using ComponentGradFn = std::function<Vec(const Vec&, int)>;
  using HessFn = std::function<Mat(const Vec&)>;

  FiniteSumObjective(int dim, int n, ValueFn value, GradFn grad, ComponentGradFn comp_grad, double L = 0.0)
      : dim_(dim), n_(n), value_(std::move(value)), grad_(std::move(grad)), comp_grad_(std::move(comp_grad)), L_(L) {}

  int dim() const override { return dim_; }
  int num_components() const { return n_; }
  double value(const Vec& w) const override { return value_(w); }
  Vec gradient(const Vec& w) const override { return grad_(w); }
  double smoothness() const override { return L_; }

  Vec component_gradient(const Vec& w, int i) const { return comp_grad_(w, i); }

  bool has_stochastic_gradient() const override { return true; }
  Vec stochastic_gradient(const Vec& w, std::uint64_t seed) const override {
    Rng rng(seed);
    return comp_grad_(w, rng.next_int(n_));
  }

  void set_hessian(HessFn h) { hess_ = std::move(h); }
  bool has_hessian() const override { return static_cast<bool>(hess_); }
  Mat hessian(const Vec& w) const override {
    if (!hess_) throw std::runtime_error("objective has no Hessian oracle");
    return hess_(w);
  }

 private:
  int dim_, n_;
  ValueFn value_;
  GradFn grad_;
  ComponentGradFn comp_grad_;
  HessFn hess_;
  double L_;
};

/// Subgradient oracle for possibly non-smooth objectives. Convention:
/// sign(0) = 0 wherever a sign choice is needed.
class SubgradientObjective final : public Objective {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;

  SubgradientObjective(int dim, ValueFn value, GradFn subgrad, double subgrad_bound_M = 0.0)
      : dim_(dim), value_(std::move(value)), subgrad_(std::move(subgrad)), M_(subgrad_bound_M) {}

  int dim() const override { return dim_; }
  double value(const Vec& w) const override { return value_(w); }
  Vec gradient(const Vec& w) const override { return subgrad_(w); }

  /// Bound on the subgradient norm over the feasible set, when declared.
  double subgradient_bound() const { return M_; }

 private:
  int dim_;
  ValueFn value_;
  GradFn subgrad_;
  double M_;
};

}  // namespace fgopt
